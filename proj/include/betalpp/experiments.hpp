/**
 * Studies built on the lpp, laguerre and tilt modules: distributional
 * identity checks, lower-tail exponent fits, coupled LIL traces and the
 * dyadic region scan.
 *
 * Every study is a pure function of its arguments. Independent samples are
 * keyed by (master seed, purpose tag, index), so results do not depend on the
 * thread count.
 */
#ifndef BETALPP_EXPERIMENTS_HPP
#define BETALPP_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "betalpp/laguerre.hpp"
#include "betalpp/lpp.hpp"
#include "betalpp/parallel.hpp"
#include "betalpp/quadform.hpp"
#include "betalpp/tilt.hpp"

namespace betalpp {

// Reference constants drawn as overlay lines in reports.
inline const double kLilLowerConjecture = -std::cbrt(192.0);
inline const double kLilLowerKnown = -std::cbrt(96.0);
inline const double kLilUpper = std::cbrt(9.0); // 3^{2/3}

/// c0^{-1/3} for the pilot point-to-line fit at n = 216 (x in {6, 8, 10},
/// 1e5 conditional trials), which gave -log p ~ 0.013 x^3. The predicted
/// asymptotic value would be 96^{1/3}.
inline constexpr double kPilotC0 = 0.013;
inline const double kDefaultThresholdConst = std::cbrt(1.0 / kPilotC0);

struct KsReport {
    double ks_stat = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double critical_001 = 0.0;
    bool pass = false;
};

KsReport make_ks_report(std::vector<double> a, std::vector<double> b);

/// Control runs deliberately break the identity so the test must fail.
enum class IdentityControl { none, mismatched };

/**
 * T*_n on independent fields against lambda/2 of LE(1; 2n, 2n-1).
 * The mismatched control leaves lambda unhalved.
 */
KsReport verify_loe_identity(long n, std::size_t trials, std::uint64_t seed,
                             unsigned threads = default_threads(),
                             IdentityControl control = IdentityControl::none);

/// T_n on independent fields against lambda of LE(2; n, n). The mismatched
/// control samples beta = 1 instead.
KsReport verify_lue_identity(long n, std::size_t trials, std::uint64_t seed,
                             unsigned threads = default_threads(),
                             IdentityControl control = IdentityControl::none);

struct FitPoint {
    double x;        ///< grid coordinate (x or eps)
    double predictor; ///< x^3, or m^{3/2} n^{1/2} eps^3
    double p_hat;
    double log_p_hat; ///< -inf when p_hat = 0
    double std_err;
    double reference; ///< predicted -log p at this point
    double ratio;     ///< (-log p_hat) / reference
    bool included;    ///< false when flagged as SE-dominated or empty
};

struct ExponentFit {
    std::vector<FitPoint> grid;
    /// Least-squares slope and intercept of -log p_hat on the predictor over
    /// included points; empty when fewer than two points remain.
    std::optional<double> slope;
    std::optional<double> intercept;
    /// Slope of log(-log p_hat) on log x (point-to-line fits only).
    std::optional<double> loglog_exponent;
    /// Laguerre fits: c_hat = slope / beta, and the log C0_hat that puts
    /// every included point on or above beta log C0 - c_hat beta predictor.
    std::optional<double> c_hat;
    std::optional<double> log_c0_hat;
    std::vector<double> per_point_ratio;
};

/// A point is flagged when p_hat = 0 or SE/p_hat exceeds this fraction of -log p_hat.
inline constexpr double kFitRelTolerance = 0.1;

/**
 * P(T*_n <= 4n - x n^{1/3}) through the LOE route: LE(1; 2n, 2n-1) with
 * lambda <= 8n - 2x n^{1/3}, tilted at eps = x n^{-2/3}/4. Reference value
 * x^3/96. Throws UsageError for x outside (1, n^{2/3}).
 */
ExponentFit fit_point_to_line_tail(long n, const std::vector<double>& x_grid, std::uint64_t trials,
                                   Method method, std::uint64_t seed, double b = kDefaultB,
                                   unsigned threads = default_threads());

/**
 * -log P(lambda_n <= edge^2 (1-eps)) against m^{3/2} n^{1/2} eps^3
 * (n^2 eps^3 when m = n). Reference value beta n^2 eps^3 / 6.
 */
ExponentFit fit_laguerre_lower_tail(const LaguerreParams& p, const std::vector<double>& eps_grid,
                                    std::uint64_t trials, Method method, std::uint64_t seed,
                                    double b = kDefaultB, unsigned threads = default_threads());

struct LilTrace {
    std::vector<PassageRecord> records;
    long start_n = 16;
    /// Running extremes from start_n: min of z_n/(log log n)^{1/3} and
    /// max of z_n/(log log n)^{2/3}, one entry per n >= start_n.
    std::vector<double> running_min;
    std::vector<double> running_max;
    double scaled_min = 0.0; ///< value at n = N
    double scaled_max = 0.0;
};

/// Coupled trace T_1..T_N on WeightField(seed). Throws unless N >= start_n >= 16.
LilTrace run_lil(std::uint64_t seed, long N, long start_n = 16);

struct DyadicScan {
    long k = 0;
    double eta = 1.0;
    double threshold_const = 0.0;
    std::vector<std::int64_t> scales; ///< n_0..n_k
    long j_first = 0;                 ///< ceil(k/2)
    std::vector<bool> A;              ///< A_j for j = j_first..k
    std::vector<double> line_to_point_values;
    std::optional<long> tau;
    std::optional<bool> B_tau;
    bool success = false; ///< tau found and B_tau
    /// Path-splitting inequality T_{n_j - 1} <= T~*_{n_{j-1}} + T*_(j),
    /// checked at every j in range.
    std::size_t inequality_checks = 0;
    std::size_t inequality_violations = 0;
    double worst_slack = 0.0; ///< min over j of rhs - lhs
};

/// Relative rounding allowance for the path-splitting check: the two sides
/// sum the same weights in different orders.
inline constexpr double kSplitRoundoff = 1e-12;

/// One scan on WeightField(seed). Throws UsageError unless k >= 4, eta > 0,
/// threshold_const > 0 and the scales used are strictly increasing.
DyadicScan dyadic_scan(std::uint64_t seed, long k, double eta, double threshold_const);

std::vector<std::int64_t> dyadic_scales(long k, double eta);

struct GershgorinReport {
    std::size_t samples = 0;
    std::size_t violations = 0; ///< samples with bound < s_n
    double min_gap = 0.0;       ///< min over samples of bound - s_n
    double eps = 0.0;
    double log_product_bound = 0.0;
    TailEstimate naive; ///< P(s_n <= 2 sqrt(n) (1-eps))
    /// log(p_hat + 3 SE) with SE floored at 1/trials when p_hat = 0.
    double log_naive_upper = 0.0;
    bool product_ok = false;
};

GershgorinReport gershgorin_study(const LaguerreParams& p, std::size_t samples, double eps,
                                  std::uint64_t trials, std::uint64_t seed,
                                  unsigned threads = default_threads());

} // namespace betalpp

#endif // BETALPP_EXPERIMENTS_HPP
