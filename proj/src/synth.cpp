#include "xclass/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace xclass {

void SynthSpec::validate() const {
    if (blobs < 1) throw std::invalid_argument("gen_synth: need at least one blob");
    if (dim < 1) throw std::invalid_argument("gen_synth: dim must be positive");
    if (per_class < 1) throw std::invalid_argument("gen_synth: per_class must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("gen_synth: sigma must be positive");
    if (!(separation >= 0.0)) throw std::invalid_argument("gen_synth: separation must be nonnegative");
}

std::vector<Vec> blob_centers(std::size_t k, std::size_t dim, double sep) {
    std::vector<Vec> c(k, Vec(dim, 0.0));
    if (k <= dim) {
        for (std::size_t i = 0; i < k; ++i) c[i][i] = sep / std::sqrt(2.0);
    } else if (dim == 1) {
        for (std::size_t i = 0; i < k; ++i) c[i][0] = sep * static_cast<double>(i);
    } else {
        const double r = sep / (2.0 * std::sin(std::numbers::pi / static_cast<double>(k)));
        for (std::size_t i = 0; i < k; ++i) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
            c[i][0] = r * std::cos(a);
            c[i][1] = r * std::sin(a);
        }
    }
    return c;
}

Dataset gen_synth(const SynthSpec& s) {
    s.validate();
    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto centers = blob_centers(s.blobs, s.dim, s.separation * s.sigma);

    Dataset d;
    for (std::size_t f = 0; f < s.dim; ++f) d.names.push_back("f" + std::to_string(f));
    for (std::size_t f = 0; f < s.noise_features; ++f) d.names.push_back("n" + std::to_string(f));
    d.has_label_column = true;
    for (std::size_t k = 0; k < s.blobs; ++k) {
        for (std::size_t i = 0; i < s.per_class; ++i) {
            Vec x(s.dim + s.noise_features);
            for (std::size_t f = 0; f < s.dim; ++f) x[f] = centers[k][f] + s.sigma * normal(rng);
            for (std::size_t f = 0; f < s.noise_features; ++f) x[s.dim + f] = s.sigma * normal(rng);
            d.rows.push_back(std::move(x));
            d.labels.push_back("c" + std::to_string(k));
        }
    }
    if (s.shuffle) {
        std::vector<std::size_t> order(d.rows.size());
        std::iota(order.begin(), order.end(), 0);
        // Fisher-Yates with an explicit draw so the permutation does not depend on the library
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
        Dataset out;
        out.names = d.names;
        out.has_label_column = true;
        for (std::size_t i : order) {
            out.rows.push_back(d.rows[i]);
            out.labels.push_back(d.labels[i]);
        }
        return out;
    }
    return d;
}

}  // namespace xclass
