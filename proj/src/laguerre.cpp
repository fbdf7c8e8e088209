#include "betalpp/laguerre.hpp"

#include <algorithm>
#include <cmath>

#include "betalpp/errors.hpp"

namespace betalpp {

LaguerreParams::LaguerreParams(long m_, long n_, double beta_) : m(m_), n(n_), beta(beta_) {
    if (n < 1) throw DomainError("Laguerre parameters need n >= 1");
    if (m < n) throw DomainError("Laguerre parameters need m >= n");
    if (!(beta >= 1.0) || !std::isfinite(beta)) throw DomainError("Laguerre parameters need beta >= 1");
}

double LaguerreParams::edge() const noexcept {
    return std::sqrt(static_cast<double>(m)) + std::sqrt(static_cast<double>(n));
}

double LaguerreParams::entry_dof(std::size_t k) const noexcept {
    const long j = static_cast<long>(k / 2) + 1;
    return (k % 2 == 0) ? beta * static_cast<double>(m + 1 - j)
                        : beta * static_cast<double>(n - j);
}

double LaguerreParams::entry_mean(std::size_t k) const {
    return chi_mean(entry_dof(k)) / std::sqrt(beta);
}

EntryChain EntryChain::from_bidiagonal(const BidiagonalModel& bm) {
    EntryChain c;
    c.x.reserve(bm.a.size() + bm.b.size());
    for (std::size_t k = 0; k < bm.a.size(); ++k) {
        c.x.push_back(bm.a[k]);
        if (k < bm.b.size()) c.x.push_back(bm.b[k]);
    }
    return c;
}

EntryChain sample_chain(const LaguerreParams& p, RngStream& rng) {
    EntryChain c;
    const std::size_t len = p.chain_length();
    c.x.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        c.x[k] = std::sqrt(sample_chi_sq(ChiLaw(p.entry_dof(k)), rng) / p.beta);
    }
    return c;
}

BidiagonalModel sample_bidiagonal(const LaguerreParams& p, RngStream& rng) {
    const EntryChain c = sample_chain(p, rng);
    BidiagonalModel bm;
    for (std::size_t k = 0; k < c.x.size(); ++k) (k % 2 == 0 ? bm.a : bm.b).push_back(c.x[k]);
    return bm;
}

TridiagonalSym linearize(const EntryChain& chain) { return TridiagonalSym::zero_diagonal(chain.x); }

TridiagonalSym linearize(const BidiagonalModel& bm) {
    if (bm.a.empty() || bm.b.size() + 1 != bm.a.size()) {
        throw UsageError("bidiagonal model needs n diagonal and n-1 subdiagonal entries");
    }
    return linearize(EntryChain::from_bidiagonal(bm));
}

double sample_lambda_max(const LaguerreParams& p, RngStream& rng, double tol) {
    const TridiagonalSym t = linearize(sample_chain(p, rng));
    const double s = largest_eigenvalue(t, tol).value;
    return s * s;
}

double sample_lambda_max(const LaguerreParams& p, RngStream& rng) {
    const TridiagonalSym t = linearize(sample_chain(p, rng));
    const double s = largest_eigenvalue(t).value;
    return s * s;
}

std::vector<double> bbt_dense(const BidiagonalModel& bm) {
    const std::size_t n = bm.a.size();
    // B(k,k) = a_k, B(k+1,k) = b_k.
    std::vector<double> b(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) b[k * n + k] = bm.a[k];
    for (std::size_t k = 0; k + 1 < n; ++k) b[(k + 1) * n + k] = bm.b[k];
    std::vector<double> l(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += b[i * n + k] * b[j * n + k];
            l[i * n + j] = s;
        }
    return l;
}

double gershgorin_bound(const EntryChain& chain) {
    const auto& x = chain.x;
    if (x.empty()) return 0.0;
    double best = std::max(x.front(), x.back());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) best = std::max(best, x[i] + x[i + 1]);
    return best;
}

double ld_lower_bound_product(const LaguerreParams& p, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    const double c = (1.0 - eps) * std::sqrt(static_cast<double>(p.n));
    // X^2 = chi^2_r / beta, so P(X <= c) = P(Gam(r/2, 1) <= beta c^2 / 2).
    const double z = 0.5 * p.beta * c * c;
    double total = 0.0;
    for (std::size_t k = 0; k < p.chain_length(); ++k) {
        total += log_regularized_lower_gamma(0.5 * p.entry_dof(k), z);
    }
    return total;
}

} // namespace betalpp
