/**
 * Reproducible random variates and the special functions the simulations need.
 *
 * Every random quantity in the project is drawn from an RngStream, a
 * counter-based generator keyed by (master_seed, stream_id). Trials are
 * assigned distinct stream ids, so results never depend on scheduling.
 * The lattice weight field is a pure hash of (seed, x, y) and can be
 * consulted in any order.
 */
#ifndef BETALPP_RANDKIT_HPP
#define BETALPP_RANDKIT_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>

namespace betalpp {

/// SplitMix64 avalanche finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Map a 64-bit word to a double strictly inside (0,1).
/// Above 2^52 the half offset rounds; only the top word would reach 1.0.
constexpr double to_open_unit(std::uint64_t k) noexcept {
    const double u = (static_cast<double>(k >> 11) + 0.5) * 0x1.0p-53;
    return u < 1.0 ? u : 1.0 - 0x1.0p-53;
}

/// Derive an independent 64-bit seed for sub-experiment `index` of `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
        : master_seed_(master_seed), stream_id_(stream_id),
          key_(derive_seed(master_seed, stream_id)) {}

    std::uint64_t next_u64() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on the open interval (0,1).
    double uniform() noexcept { return to_open_unit(next_u64()); }

    /// Standard normal (Marsaglia polar method; the spare is cached).
    double normal() noexcept;

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t counter() const noexcept { return counter_; }

    // UniformRandomBitGenerator surface.
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next_u64(); }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Degrees-of-freedom parameter of the chi / chi-square laws.
struct ChiLaw {
    double r;
    explicit ChiLaw(double dof);
};

double sample_exponential(RngStream& rng) noexcept;

/// Gam(shape, rate): density proportional to x^(shape-1) e^(-rate x).
double sample_gamma(double shape, double rate, RngStream& rng);

double sample_chi_sq(const ChiLaw& law, RngStream& rng);
double sample_chi(const ChiLaw& law, RngStream& rng);

/// E[chi_r] = sqrt(2) Gamma(r/2 + 1/2) / Gamma(r/2).
double chi_mean(double r);

/// The i.i.d. Exp(1) environment of exponential last passage percolation.
class WeightField {
public:
    explicit WeightField(std::uint64_t seed) noexcept : seed_(seed) {}

    /// Throws DomainError for coordinates below 1.
    double weight(std::int64_t x, std::int64_t y) const;

    /// Unchecked hot-path variant for the DP sweeps.
    double weight_unchecked(std::int64_t x, std::int64_t y) const noexcept {
        const auto ux = static_cast<std::uint64_t>(x);
        const auto uy = static_cast<std::uint64_t>(y);
        const std::uint64_t key = ux * 0x9E3779B97F4A7C15ULL ^ ((uy << 32) | (uy >> 32));
        return -std::log(to_open_unit(mix64(seed_ ^ key)));
    }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

/// Natural log of |Gamma(x)|; Lanczos for x >= 0.5, reflection below.
double log_gamma(double x);

/// P(Gam(a,1) <= x).
double regularized_lower_gamma(double a, double x);

/// log P(Gam(a,1) <= x), accurate where the probability underflows.
double log_regularized_lower_gamma(double a, double x);

/// Two-sample Kolmogorov-Smirnov statistic. Both inputs must be sorted.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample KS statistic of sorted data against a continuous CDF.
double ks_one_sample(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Asymptotic 0.001-level KS critical value for sample sizes na, nb.
double ks_critical_001(std::size_t na, std::size_t nb);

} // namespace betalpp

#endif // BETALPP_RANDKIT_HPP
