#include "betalpp/tridiag.hpp"

#include <algorithm>
#include <cmath>

#include "betalpp/errors.hpp"

namespace betalpp {

TridiagonalSym::TridiagonalSym(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag)), off_(std::move(off)) {
    if (diag_.empty()) throw UsageError("tridiagonal matrix needs dim >= 1");
    if (off_.size() + 1 != diag_.size()) {
        throw UsageError("tridiagonal matrix needs exactly dim-1 off-diagonal entries");
    }
}

TridiagonalSym TridiagonalSym::zero_diagonal(std::vector<double> off) {
    std::vector<double> diag(off.size() + 1, 0.0);
    return TridiagonalSym(std::move(diag), std::move(off));
}

double TridiagonalSym::quadratic_form(std::span<const double> w) const {
    if (w.size() != dim()) throw UsageError("quadratic_form: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < diag_.size(); ++k) s += diag_[k] * w[k] * w[k];
    for (std::size_t k = 0; k < off_.size(); ++k) s += 2.0 * off_[k] * w[k] * w[k + 1];
    return s;
}

double TridiagonalSym::gershgorin_radius() const noexcept {
    double r = 0.0;
    const std::size_t n = dim();
    for (std::size_t k = 0; k < n; ++k) {
        double row = std::abs(diag_[k]);
        if (k > 0) row += std::abs(off_[k - 1]);
        if (k + 1 < n) row += std::abs(off_[k]);
        r = std::max(r, row);
    }
    return r;
}

std::pair<double, double> TridiagonalSym::gershgorin_interval() const noexcept {
    double lo = diag_[0], hi = diag_[0];
    const std::size_t n = dim();
    for (std::size_t k = 0; k < n; ++k) {
        double r = 0.0;
        if (k > 0) r += std::abs(off_[k - 1]);
        if (k + 1 < n) r += std::abs(off_[k]);
        lo = std::min(lo, diag_[k] - r);
        hi = std::max(hi, diag_[k] + r);
    }
    return {lo, hi};
}

std::size_t sturm_count(const TridiagonalSym& m, double x) noexcept {
    const auto d = m.diag();
    const auto e = m.off();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        q = d[k] - x - (k > 0 ? e[k - 1] * e[k - 1] / q : 0.0);
        if (std::abs(q) < kSturmPivotFloor) q = std::signbit(q) ? -kSturmPivotFloor : kSturmPivotFloor;
        if (q < 0.0) ++count;
    }
    return count;
}

EigenResult largest_eigenvalue(const TridiagonalSym& m, double tol) {
    if (!(tol > 0.0)) throw UsageError("largest_eigenvalue requires tol > 0");
    auto [lo, hi] = m.gershgorin_interval();
    const std::size_t n = m.dim();
    int it = 0;
    while (hi - lo > tol) {
        if (it == kBisectionCap) {
            throw NumericFailure("bisection did not reach tolerance", lo, hi);
        }
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(m, mid) == n) {
            hi = mid;
        } else {
            lo = mid;
        }
        ++it;
    }
    return {0.5 * (lo + hi), it, hi - lo};
}

EigenResult largest_eigenvalue(const TridiagonalSym& m) {
    const double r = m.gershgorin_radius();
    if (r == 0.0) return {0.0, 0, 0.0};
    return largest_eigenvalue(m, kDefaultRelTol * r);
}

std::vector<double> dense_symmetric_spectrum(std::vector<double> a, std::size_t n) {
    if (n > kDenseOracleCap) throw UsageError("dense oracle is capped at dimension 64");
    if (a.size() != n * n) throw UsageError("dense matrix size mismatch");
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    double scale = 0.0;
    for (double v : a) scale += v * v;
    scale = std::sqrt(scale);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> dense_spectrum(const TridiagonalSym& m) {
    const std::size_t n = m.dim();
    if (n > kDenseOracleCap) throw UsageError("dense oracle is capped at dimension 64");
    std::vector<double> a(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) a[k * n + k] = m.diag()[k];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        a[k * n + k + 1] = m.off()[k];
        a[(k + 1) * n + k] = m.off()[k];
    }
    return dense_symmetric_spectrum(std::move(a), n);
}

} // namespace betalpp
