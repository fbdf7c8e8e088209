#ifndef BETALPP_TRIDIAG_HPP
#define BETALPP_TRIDIAG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace betalpp {

/**
 * Symmetric tridiagonal matrix stored as its diagonal (N entries) and
 * off-diagonal (N-1 entries). The spectrum is real by construction.
 */
class TridiagonalSym {
public:
    TridiagonalSym(std::vector<double> diag, std::vector<double> off);

    /// N x N with zero diagonal and the given off-diagonal.
    static TridiagonalSym zero_diagonal(std::vector<double> off);

    std::size_t dim() const noexcept { return diag_.size(); }
    std::span<const double> diag() const noexcept { return diag_; }
    std::span<const double> off() const noexcept { return off_; }

    /// w^T A w.
    double quadratic_form(std::span<const double> w) const;

    /// max_k (|d_k| + |e_{k-1}| + |e_k|).
    double gershgorin_radius() const noexcept;
    /// [min_k (d_k - r_k), max_k (d_k + r_k)] with r_k the off-diagonal row sum.
    std::pair<double, double> gershgorin_interval() const noexcept;

private:
    std::vector<double> diag_;
    std::vector<double> off_;
};

struct EigenResult {
    double value = 0.0;
    int iterations = 0;
    double bracket_width = 0.0;
};

/// Pivots smaller than this in magnitude are clamped (sign preserved).
inline constexpr double kSturmPivotFloor = 1e-300;
inline constexpr double kDefaultRelTol = 1e-12;
inline constexpr int kBisectionCap = 200;

/// Number of eigenvalues strictly below x.
std::size_t sturm_count(const TridiagonalSym& m, double x) noexcept;

/// Top eigenvalue by Sturm bisection to absolute tolerance `tol`.
/// Throws NumericFailure if the iteration cap is hit first.
EigenResult largest_eigenvalue(const TridiagonalSym& m, double tol);

/// Same, with tolerance kDefaultRelTol times the Gershgorin radius.
EigenResult largest_eigenvalue(const TridiagonalSym& m);

/// Dense cyclic Jacobi oracle; ascending eigenvalues. dim must be <= 64.
std::vector<double> dense_spectrum(const TridiagonalSym& m);

/// Dense symmetric Jacobi on a row-major n x n matrix (oracle use only).
std::vector<double> dense_symmetric_spectrum(std::vector<double> a, std::size_t n);

inline constexpr std::size_t kDenseOracleCap = 64;

} // namespace betalpp

#endif // BETALPP_TRIDIAG_HPP
