/**
 * Quadratic-form comparison machinery.
 *
 * Q(w)  = 2 sum_k X_k w_k w_{k+1} - (sqrt m + sqrt n) |w|^2 is the form of
 *         T - (sqrt m + sqrt n) I, so max_{|w|=1} Q = s_n - (sqrt m + sqrt n).
 * Q_b(w) replaces X_k by centered entries Z_k and the edge shift by the
 *         penalty -b sqrt(n) sum (w_{2k} - w_{2k+1})^2
 *                 -b sqrt(m) sum (w_{2k-1} - w_{2k})^2 - (b/sqrt n) sum k w_k^2
 *         with the padding w_0 = w_{2n+1} = 0.
 *
 * Every index sits in exactly one sqrt(m)-pair and one sqrt(n)-pair, so Q_b
 * is the form of a tridiagonal matrix with
 *   diag_k = -b (sqrt m + sqrt n) - b k / sqrt n,
 *   off_k  = Z_k + b sqrt m (k odd),  Z_k + b sqrt n (k even)   (1-based k).
 * Both the direct formula and the matrix are provided and cross-checked.
 */
#ifndef BETALPP_QUADFORM_HPP
#define BETALPP_QUADFORM_HPP

#include <optional>
#include <span>
#include <vector>

#include "betalpp/laguerre.hpp"
#include "betalpp/tridiag.hpp"

namespace betalpp {

inline constexpr double kDefaultB = 0.2;

struct QbSpec {
    LaguerreParams params;
    double b;
    std::vector<double> centered; ///< Z_1..Z_{2n-1}

    /// Throws DomainError unless 0 < b < 1/4, UsageError on length mismatch.
    QbSpec(LaguerreParams p, double b, std::vector<double> z);

    /// Z = X - E[X] using exact chi means.
    static QbSpec centered_from(const EntryChain& chain, const LaguerreParams& p, double b);
};

/// A vector normalized to unit Euclidean length at construction.
class UnitVector {
public:
    /// Normalizes `w`; throws UsageError for the zero vector.
    explicit UnitVector(std::vector<double> w);
    static UnitVector basis(std::size_t dim, std::size_t index);

    std::span<const double> values() const noexcept { return w_; }
    std::size_t size() const noexcept { return w_.size(); }

private:
    std::vector<double> w_;
};

UnitVector random_unit_vector(std::size_t dim, RngStream& rng);

double evaluate_Q(const EntryChain& chain, const LaguerreParams& p, const UnitVector& w);
TridiagonalSym build_Q_matrix(const EntryChain& chain, const LaguerreParams& p);

double evaluate_Qb(const QbSpec& spec, const UnitVector& w);
TridiagonalSym build_Qb_matrix(const QbSpec& spec);

/// V = A_b - A_Q, which depends only on (params, b).
TridiagonalSym domination_matrix(const LaguerreParams& p, double b);

struct DominationResult {
    bool dominant = true;
    /// 0-based row index of the first violating row, when not dominant.
    std::optional<std::size_t> violating_row;
};

/// Row-wise diagonal dominance of V; implies Q <= Q_b for every w.
DominationResult check_domination(const EntryChain& chain, const LaguerreParams& p, double b);

} // namespace betalpp

#endif // BETALPP_QUADFORM_HPP
