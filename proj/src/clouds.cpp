#include "xclass/clouds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace xclass {

namespace {

double sq_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) {
        const double d = a[f] - b[f];
        s += d * d;
    }
    return s;
}

// Densities this close are one value computed along different rounding paths.
constexpr double kTieTol = 1e-12;

void density_branches(double dx, double dmax, double dmin, bool& hi, bool& lo) {
    hi = dx >= dmax * (1.0 - kTieTol);
    lo = dx <= dmin * (1.0 + kTieTol);
}

Vec square(const Vec& x) {
    Vec q(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) q[f] = x[f] * x[f];
    return q;
}

}  // namespace

std::size_t ClassModel::support_total() const {
    std::size_t s = 0;
    for (const auto& c : clouds) s += c.support;
    return s;
}

ClassModel init_class(const Vec& x, int class_id, std::string label) {
    if (x.empty()) throw DimensionError("init_class: empty sample");
    ClassModel m;
    m.class_id = class_id;
    m.label = label.empty() ? "class " + std::to_string(class_id) : std::move(label);
    m.class_mean = x;
    m.class_mean_sq = square(x);
    m.sample_count = 1;
    m.feature_ranking.class_id = class_id;
    m.feature_mask.assign(x.size(), true);
    DataCloud c;
    c.prototype = x;
    c.mean_sq = m.class_mean_sq;
    c.cloud_id = 0;
    m.clouds.push_back(std::move(c));
    return m;
}

void update_class_stats(ClassModel& m, const Vec& x) {
    check_dim(m.dim(), x.size(), "update_class_stats");
    ++m.sample_count;
    const double n = static_cast<double>(m.sample_count);
    for (std::size_t f = 0; f < x.size(); ++f) {
        m.class_mean[f] += (x[f] - m.class_mean[f]) / n;
        m.class_mean_sq[f] += (x[f] * x[f] - m.class_mean_sq[f]) / n;
    }
}

void class_moments(const ClassModel& m, const Frame& fr, Vec& mean, double& mean_sq_norm) {
    // E[((v - lo) a)^2] = a^2 (E[v^2] - 2 lo E[v] + lo^2)
    mean.resize(m.dim());
    mean_sq_norm = 0.0;
    for (std::size_t f = 0; f < m.dim(); ++f) {
        const double a = fr.scale(f), lo = fr.lo[f];
        mean[f] = (m.class_mean[f] - lo) * a;
        mean_sq_norm += a * a * (m.class_mean_sq[f] - 2.0 * lo * m.class_mean[f] + lo * lo);
    }
}

std::size_t nearest_cloud(const ClassModel& m, const Vec& xn, const Frame& fr) {
    if (m.clouds.empty()) throw std::logic_error("nearest_cloud: class has no clouds");
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m.clouds.size(); ++j) {
        const double d = sq_dist(xn, fr.map(m.clouds[j].prototype));
        if (d < bd) {
            bd = d;
            best = j;
        }
    }
    return best;
}

std::size_t nearest_cloud(const ClassModel& m, const Vec& xn) {
    return nearest_cloud(m, xn, Frame::identity(m.dim()));
}

bool should_create_cloud(const ClassModel& m, const Vec& xn, const Frame& fr) {
    if (m.clouds.empty()) throw std::logic_error("should_create_cloud: class has no clouds");
    Vec mu;
    double X = 0.0;
    class_moments(m, fr, mu, X);
    const double dx = global_density(xn, mu, X);
    double dmax = -1.0, dmin = 2.0;
    for (const auto& c : m.clouds) {
        const double d = global_density(fr.map(c.prototype), mu, X);
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    bool hi = false, lo = false;
    density_branches(dx, dmax, dmin, hi, lo);
    return (hi || lo) && !(hi && lo);
}

bool should_create_cloud(const ClassModel& m, const Vec& xn) {
    return should_create_cloud(m, xn, Frame::identity(m.dim()));
}

void add_cloud(ClassModel& m, const Vec& x) {
    check_dim(m.dim(), x.size(), "add_cloud");
    DataCloud c;
    c.prototype = x;
    c.mean_sq = square(x);
    c.cloud_id = static_cast<int>(m.clouds.size());
    m.clouds.push_back(std::move(c));
}

void update_cloud(ClassModel& m, std::size_t n, const Vec& x, const Frame& fr) {
    if (n >= m.clouds.size()) throw std::out_of_range("update_cloud: bad cloud index");
    check_dim(m.dim(), x.size(), "update_cloud");
    DataCloud& c = m.clouds[n];
    const double s = static_cast<double>(c.support);
    const double wo = s / (s + 1.0), wn = 1.0 / (s + 1.0);
    for (std::size_t f = 0; f < x.size(); ++f) {
        c.prototype[f] = wo * c.prototype[f] + wn * x[f];
        c.mean_sq[f] = wo * c.mean_sq[f] + wn * x[f] * x[f];
    }
    ++c.support;
    const Vec pn = fr.map(c.prototype);
    double p2 = 0.0;
    for (double v : pn) p2 += v * v;
    c.radius_sq = std::max((c.radius_sq + 1.0 - p2) / 2.0, kRadiusFloor);
}

void update_cloud(ClassModel& m, std::size_t n, const Vec& x) {
    update_cloud(m, n, x, Frame::identity(m.dim()));
}

AbsorbResult absorb(ClassModel& m, const Vec& x, const Frame& fr, AbsorbMode mode) {
    update_class_stats(m, x);
    const Vec xn = fr.map_clamped(x);
    Vec mu;
    double X = 0.0;
    class_moments(m, fr, mu, X);
    const double dx = global_density(xn, mu, X);
    double dmax = -1.0, dmin = 2.0, bd = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < m.clouds.size(); ++j) {
        const Vec pn = fr.map(m.clouds[j].prototype);
        const double d = global_density(pn, mu, X);
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
        const double d2 = sq_dist(xn, pn);
        if (d2 < bd) {
            bd = d2;
            nearest = j;
        }
    }
    bool hi = false, lo = false;
    density_branches(dx, dmax, dmin, hi, lo);
    if (hi && lo) hi = lo = false;
    if (mode == AbsorbMode::Stream && lo && !hi) lo = false;
    if ((hi || lo) && bd > kRStarSq) {
        add_cloud(m, x);
        return {m.clouds.size() - 1, true};
    }
    update_cloud(m, nearest, x, fr);
    return {nearest, false};
}

Vec pooled_scatter(const ClassModel& m, const Frame& fr) {
    // per-feature within-cloud scatter, shrunk toward an r* ball spread evenly over features
    const double prior = kRStarSq / static_cast<double>(m.dim());
    Vec w(m.dim(), 0.0);
    double s = 0.0;
    for (const auto& c : m.clouds) {
        const double n = static_cast<double>(c.support);
        for (std::size_t f = 0; f < m.dim(); ++f) {
            const double a = fr.scale(f);
            w[f] += n * a * a * std::max(c.mean_sq[f] - c.prototype[f] * c.prototype[f], 0.0);
        }
        s += n;
    }
    for (double& v : w) v = (v + prior) / (s + 1.0);
    return w;
}

}  // namespace xclass
