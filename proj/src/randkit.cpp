#include "betalpp/randkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "betalpp/errors.hpp"

namespace betalpp {

double RngStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

ChiLaw::ChiLaw(double dof) : r(dof) {
    if (!(dof > 0.0)) throw DomainError("chi law requires r > 0");
}

double sample_exponential(RngStream& rng) noexcept { return -std::log(rng.uniform()); }

namespace {

// Marsaglia-Tsang squeeze for shape >= 1, unit rate.
double gamma_mt(double shape, RngStream& rng) noexcept {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

double sample_gamma(double shape, double rate, RngStream& rng) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
        throw DomainError("gamma requires shape > 0 and rate > 0");
    }
    if (shape >= 1.0) return gamma_mt(shape, rng) / rate;
    // Boost: Gam(a) = Gam(a+1) * U^(1/a), done in log space.
    const double g = gamma_mt(shape + 1.0, rng);
    const double logv = std::log(g) + std::log(rng.uniform()) / shape;
    const double v = std::exp(logv) / rate;
    return v > 0.0 ? v : std::numeric_limits<double>::denorm_min();
}

double sample_chi_sq(const ChiLaw& law, RngStream& rng) {
    return sample_gamma(0.5 * law.r, 0.5, rng);
}

double sample_chi(const ChiLaw& law, RngStream& rng) { return std::sqrt(sample_chi_sq(law, rng)); }

double chi_mean(double r) {
    if (!(r > 0.0)) throw DomainError("chi_mean requires r > 0");
    return std::numbers::sqrt2 * std::exp(log_gamma(0.5 * r + 0.5) - log_gamma(0.5 * r));
}

double WeightField::weight(std::int64_t x, std::int64_t y) const {
    if (x < 1 || y < 1) throw DomainError("weight field coordinates must be >= 1");
    return weight_unchecked(x, y);
}

double log_gamma(double x) {
    // Lanczos, g = 7, n = 9.
    static constexpr std::array<double, 9> coef = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return std::log(std::numbers::pi / std::abs(std::sin(std::numbers::pi * x))) -
               log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double sum = coef[0];
    for (std::size_t i = 1; i < coef.size(); ++i) sum += coef[i] / (z + static_cast<double>(i));
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

// log of the series part: P(a,x) = x^a e^-x / Gamma(a+1) * sum.
double log_series(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    double ap = a;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return a * std::log(x) - x - log_gamma(a + 1.0) + std::log(sum);
}

// log of Q(a,x) via the Lentz continued fraction.
double log_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return a * std::log(x) - x - log_gamma(a) + std::log(h);
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma requires x >= 0");
}

} // namespace

double regularized_lower_gamma(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return std::min(1.0, std::exp(log_series(a, x)));
    return std::max(0.0, 1.0 - std::exp(log_continued_fraction(a, x)));
}

double log_regularized_lower_gamma(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return std::min(0.0, log_series(a, x));
    return std::log1p(-std::exp(log_continued_fraction(a, x)));
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw UsageError("ks_two_sample requires nonempty samples");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_one_sample(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw UsageError("ks_one_sample requires a nonempty sample");
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical_001(std::size_t na, std::size_t nb) {
    const double a = static_cast<double>(na);
    const double b = static_cast<double>(nb);
    return 1.95 * std::sqrt((a + b) / (a * b));
}

} // namespace betalpp
