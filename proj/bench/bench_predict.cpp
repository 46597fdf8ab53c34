#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "xclass/batch.hpp"
#include "xclass/synth.hpp"

using namespace xclass;

namespace {

template <class F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t rows = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200000;
    const std::size_t dim = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 16;
    const int reps = 5;

    SynthSpec spec;
    spec.blobs = 8;
    spec.dim = dim;
    spec.separation = 10.0;
    spec.per_class = 400;
    spec.seed = 11;
    const Dataset train = gen_synth(spec);
    XClassModel model({}, train.names);
    model.prime(train.rows, train.labels);

    spec.per_class = rows / spec.blobs;
    spec.seed = 12;
    const Dataset test = gen_synth(spec);
    const Scorer s = model.scorer();

    std::size_t clouds = 0;
    for (const auto& c : model.classes()) clouds += c.clouds.size();
    std::printf("rows=%zu dim=%zu classes=%zu clouds=%zu threads=%d\n", test.size(), dim, model.classes().size(),
                clouds, max_threads());

    std::vector<Prediction> a, b;
    const double ps = best_ms(reps, [&] { a = predict_batch_serial(s, test.rows); });
    const double pp = best_ms(reps, [&] { b = predict_batch_parallel(s, test.rows); });
    std::vector<double> ca, cb;
    const double cs = best_ms(reps, [&] { ca = confidence_batch_serial(s, test.rows); });
    const double cp = best_ms(reps, [&] { cb = confidence_batch_parallel(s, test.rows); });

    bool same = a.size() == b.size() && ca == cb;
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].label == b[i].label && a[i].lambdas == b[i].lambdas;

    std::printf("%-12s %10s %10s %8s\n", "kernel", "serial_ms", "omp_ms", "speedup");
    std::printf("%-12s %10.2f %10.2f %8.2f\n", "predict", ps, pp, ps / pp);
    std::printf("%-12s %10.2f %10.2f %8.2f\n", "confidence", cs, cp, cs / cp);
    std::printf("outputs identical: %s\n", same ? "yes" : "no");
    return same ? 0 : 1;
}
