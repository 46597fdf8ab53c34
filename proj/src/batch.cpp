#include "xclass/batch.hpp"

#include <omp.h>

#include <algorithm>
#include <cstddef>
#include <exception>

namespace xclass {

namespace {

double max_confidence(const Scorer& s, const Vec& x) {
    check_dim(s.frame.dim(), x.size(), "confidence");
    const Vec xn = s.frame.map_clamped(x);
    double best = 0.0;
    for (const auto& v : s.views) best = std::max(best, class_confidence(v, restrict(xn, v.features)));
    return best;
}

// Exceptions must not escape an OpenMP region; keep the first and rethrow.
template <class F>
void parallel_rows(std::size_t n, int threads, F&& body) {
    std::exception_ptr err;
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<Prediction> predict_batch_serial(const Scorer& s, const std::vector<Vec>& rows) {
    std::vector<Prediction> out;
    out.reserve(rows.size());
    for (const auto& x : rows) out.push_back(score(s, x));
    return out;
}

std::vector<Prediction> predict_batch_parallel(const Scorer& s, const std::vector<Vec>& rows, int threads) {
    std::vector<Prediction> out(rows.size());
    parallel_rows(rows.size(), threads, [&](std::size_t i) { out[i] = score(s, rows[i]); });
    return out;
}

std::vector<double> confidence_batch_serial(const Scorer& s, const std::vector<Vec>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& x : rows) out.push_back(max_confidence(s, x));
    return out;
}

std::vector<double> confidence_batch_parallel(const Scorer& s, const std::vector<Vec>& rows, int threads) {
    std::vector<double> out(rows.size());
    parallel_rows(rows.size(), threads, [&](std::size_t i) { out[i] = max_confidence(s, rows[i]); });
    return out;
}

}  // namespace xclass
