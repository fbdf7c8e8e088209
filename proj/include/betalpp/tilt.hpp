/**
 * Exponential tilting of the Laguerre entry chain for lower-tail estimation.
 *
 * Under the tilted law the first K odd entries satisfy
 *   Y_{2k-1}^2 = (1-eps) X_{2k-1}^2 ~ Gam(beta (m+1-k)/2, beta / (2 (1-eps))),
 * and every other entry keeps its original law. The density ratio of the
 * original law to the tilted one at the realized Y^2 is
 *   log w = beta eps / (2 (1-eps)) * sum_{k<=K} Y_{2k-1}^2
 *         + (beta/2) log(1-eps) * sum_{k<=K} (m+1-k),
 * so E_Y[w 1{event}] = P_X(event) for any event of the chain.
 */
#ifndef BETALPP_TILT_HPP
#define BETALPP_TILT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betalpp/laguerre.hpp"
#include "betalpp/parallel.hpp"

namespace betalpp {

enum class TiltCase { narrow, wide };
enum class Method { naive, importance, conditional };

std::string to_string(TiltCase c);
std::string to_string(Method m);
/// Throws UsageError for names other than "naive", "importance", "conditional".
Method parse_method(const std::string& name);

struct TiltConfig {
    LaguerreParams params;
    double eps;
    double b;
    long K;
    TiltCase case_tag;
};

/// narrow iff eps <= 2 b sqrt(n)/sqrt(m); K = min(ceil(eps sqrt(mn)/(4b)), n)
/// for narrow and K = n for wide.
TiltConfig choose_K(const LaguerreParams& p, double eps, double b);

struct TiltedSample {
    EntryChain chain; ///< the Y values
    double log_weight = 0.0;
};

TiltedSample sample_tilted(const TiltConfig& cfg, RngStream& rng);

/// Closed-form log weight for a chain of Y values under `cfg`.
double tilt_log_weight(const TiltConfig& cfg, std::span<const double> y);

struct TailEstimate {
    double p_hat = 0.0;
    double log_p_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    Method method = Method::naive;
    /// Mean and standard error of the bare importance weight (1 and 0 for naive).
    double weight_mean = 1.0;
    double weight_se = 0.0;
};

/// Whether every eigenvalue of the linearized chain lies below s_threshold.
bool below_threshold(const EntryChain& chain, double s_threshold);

/**
 * The tilted law changes only the distribution of S = sum_{k<=K} X_{2k-1}^2;
 * the proportions X_{2k-1}^2 / S are Dirichlet under both laws and s_n is
 * nondecreasing in S. Conditioning the importance estimator on everything
 * but S therefore gives
 *   P(s_n <= s_threshold | rest) = P(Gam(A, beta/2) <= S*),
 * A = (beta/2) sum_{k<=K} (m+1-k), where S* is the largest S keeping the
 * event. Returns that probability for an untilted chain.
 */
double conditional_tail_probability(const TiltConfig& cfg, const EntryChain& chain,
                                    double s_threshold);

/**
 * Estimates P(lambda_n <= lambda_threshold). Naive when `cfg` is empty;
 * otherwise `cfg` (which must carry the same params) drives the importance
 * or conditional estimator. Trial i uses RngStream(seed, i).
 */
TailEstimate estimate_lower_tail(const LaguerreParams& p, double lambda_threshold,
                                 const std::optional<TiltConfig>& cfg, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads = default_threads(),
                                 Method method = Method::importance);

/// P(lambda_n <= (sqrt m + sqrt n)^2 (1-eps)), tilting with choose_K(p, eps, b).
TailEstimate tail_probability(const LaguerreParams& p, double eps, double b, std::uint64_t trials,
                              std::uint64_t seed, Method method,
                              unsigned threads = default_threads());

struct LowerBound {
    TiltCase branch;
    double value;        ///< branch-correct log bound
    double narrow_value; ///< beta log C0 - c beta eps^3 m^{3/2} n^{1/2}
    double wide_value;   ///< -c beta (eps sqrt(mn))^2
};

/// Log of the two-branch lower bound; branch boundary eps = c2 sqrt(n)/sqrt(m).
LowerBound theoretical_lower_bound(const LaguerreParams& p, double eps, double c, double C0,
                                   double c2);

struct AbDiagnostics {
    double freq_A = 0.0;
    double freq_B = 0.0;
    double se_A = 0.0;
    double se_B = 0.0;
    std::size_t samples = 0;
};

/// Event A: top eigenvalue of the Y-based Q_b matrix (entries Y_k - E[X_k])
/// is below -eps sqrt(m)/8. Event B: sum_{k<=K} Y_{2k-1}^2 > (1-eps) sum (m+1-k).
bool event_A(const TiltConfig& cfg, const EntryChain& y);
bool event_B(const TiltConfig& cfg, const EntryChain& y);

AbDiagnostics diagnostics_AB(const TiltConfig& cfg, std::span<const TiltedSample> samples);

} // namespace betalpp

#endif // BETALPP_TILT_HPP
