/**
 * The beta-Laguerre bidiagonal model and its linearization.
 *
 * With B the n x n lower-bidiagonal matrix of independent scaled chi
 * variables (diagonal a_k, subdiagonal b_k), the eigenvalues of B B^T follow
 * the Laguerre beta-ensemble LE(beta; m, n). Interleaving the entries as
 * X = (a_1, b_1, a_2, ..., b_{n-1}, a_n) and placing them on the off-diagonal
 * of a 2n x 2n zero-diagonal tridiagonal T gives spectrum {+-s_i} with
 * s_i^2 the eigenvalues of B B^T, so the top eigenvalue is lambda_n = s_n^2.
 *
 * Indexing: entry k (1-based, as in the chain X_1..X_{2n-1}) is stored at
 * index k-1. Odd 1-based positions hold a's, even ones hold b's.
 */
#ifndef BETALPP_LAGUERRE_HPP
#define BETALPP_LAGUERRE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "betalpp/randkit.hpp"
#include "betalpp/tridiag.hpp"

namespace betalpp {

struct LaguerreParams {
    long m;
    long n;
    double beta;

    /// Throws DomainError unless m >= n >= 1 and beta >= 1.
    LaguerreParams(long m, long n, double beta);

    /// sqrt(m) + sqrt(n), the edge of the s-spectrum.
    double edge() const noexcept;

    /// chi degrees of freedom of chain entry k (0-based).
    double entry_dof(std::size_t k) const noexcept;
    /// E[X_k] for chain entry k (0-based), from the exact chi mean.
    double entry_mean(std::size_t k) const;
    /// Length 2n-1 of the entry chain.
    std::size_t chain_length() const noexcept { return static_cast<std::size_t>(2 * n - 1); }
};

struct BidiagonalModel {
    std::vector<double> a; ///< n diagonal entries
    std::vector<double> b; ///< n-1 subdiagonal entries
};

/// X_1..X_{2n-1} with X_{2k-1} = a_k and X_{2k} = b_k.
struct EntryChain {
    std::vector<double> x;

    static EntryChain from_bidiagonal(const BidiagonalModel& bm);
    std::size_t n() const noexcept { return (x.size() + 1) / 2; }
};

BidiagonalModel sample_bidiagonal(const LaguerreParams& p, RngStream& rng);

/// Draws the chain directly (same law and draw order as sample_bidiagonal).
EntryChain sample_chain(const LaguerreParams& p, RngStream& rng);

/// The 2n x 2n zero-diagonal tridiagonal linearization.
TridiagonalSym linearize(const BidiagonalModel& bm);
TridiagonalSym linearize(const EntryChain& chain);

/// One draw of the largest LE(beta; m, n) point, lambda_n = s_n^2.
double sample_lambda_max(const LaguerreParams& p, RngStream& rng, double tol);
double sample_lambda_max(const LaguerreParams& p, RngStream& rng);

/// Dense B B^T (row-major), for the oracle check of the linearization.
std::vector<double> bbt_dense(const BidiagonalModel& bm);

/// max over adjacent pairs (X_i + X_{i+1}) with X_0 = X_{2n} = 0.
double gershgorin_bound(const EntryChain& chain);

/// sum_i log P(X_i <= (1-eps) sqrt(n)): a certified lower bound on
/// log P(s_n <= 2 sqrt(n) (1-eps)) when m = n.
double ld_lower_bound_product(const LaguerreParams& p, double eps);

} // namespace betalpp

#endif // BETALPP_LAGUERRE_HPP
