#include "betalpp/quadform.hpp"

#include <cmath>

#include "betalpp/errors.hpp"

namespace betalpp {

QbSpec::QbSpec(LaguerreParams p, double b_, std::vector<double> z)
    : params(p), b(b_), centered(std::move(z)) {
    if (!(b > 0.0 && b < 0.25)) throw DomainError("Q_b requires 0 < b < 1/4");
    if (centered.size() != params.chain_length()) {
        throw UsageError("Q_b entries must have length 2n-1");
    }
}

QbSpec QbSpec::centered_from(const EntryChain& chain, const LaguerreParams& p, double b) {
    if (chain.x.size() != p.chain_length()) throw UsageError("chain length must be 2n-1");
    std::vector<double> z(chain.x.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = chain.x[k] - p.entry_mean(k);
    return QbSpec(p, b, std::move(z));
}

UnitVector::UnitVector(std::vector<double> w) : w_(std::move(w)) {
    double s = 0.0;
    for (double v : w_) s += v * v;
    if (!(s > 0.0)) throw UsageError("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(s);
    for (double& v : w_) v *= inv;
}

UnitVector UnitVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw UsageError("basis index out of range");
    std::vector<double> w(dim, 0.0);
    w[index] = 1.0;
    return UnitVector(std::move(w));
}

UnitVector random_unit_vector(std::size_t dim, RngStream& rng) {
    std::vector<double> w(dim);
    for (double& v : w) v = rng.normal();
    return UnitVector(std::move(w));
}

namespace {

void check_dims(std::size_t chain_len, const UnitVector& w) {
    if (w.size() != chain_len + 1) throw UsageError("unit vector must have length 2n");
}

} // namespace

double evaluate_Q(const EntryChain& chain, const LaguerreParams& p, const UnitVector& w) {
    if (chain.x.size() != p.chain_length()) throw UsageError("chain length must be 2n-1");
    check_dims(chain.x.size(), w);
    const auto v = w.values();
    double cross = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < chain.x.size(); ++k) cross += chain.x[k] * v[k] * v[k + 1];
    for (double x : v) norm += x * x;
    return 2.0 * cross - p.edge() * norm;
}

TridiagonalSym build_Q_matrix(const EntryChain& chain, const LaguerreParams& p) {
    if (chain.x.size() != p.chain_length()) throw UsageError("chain length must be 2n-1");
    return TridiagonalSym(std::vector<double>(chain.x.size() + 1, -p.edge()), chain.x);
}

double evaluate_Qb(const QbSpec& spec, const UnitVector& w) {
    const auto& z = spec.centered;
    check_dims(z.size(), w);
    const std::size_t dim = w.size();
    const long n = spec.params.n;
    const double sm = std::sqrt(static_cast<double>(spec.params.m));
    const double sn = std::sqrt(static_cast<double>(n));
    // Padded 1-based access: w_0 = w_{2n+1} = 0.
    auto wp = [&](long i) -> double {
        return (i >= 1 && i <= static_cast<long>(dim)) ? w.values()[static_cast<std::size_t>(i - 1)] : 0.0;
    };

    double cross = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) cross += z[k] * wp(long(k) + 1) * wp(long(k) + 2);

    double npairs = 0.0;
    for (long k = 0; k <= n; ++k) {
        const double d = wp(2 * k) - wp(2 * k + 1);
        npairs += d * d;
    }
    double mpairs = 0.0;
    for (long k = 1; k <= n; ++k) {
        const double d = wp(2 * k - 1) - wp(2 * k);
        mpairs += d * d;
    }
    double ramp = 0.0;
    for (long k = 1; k <= static_cast<long>(dim); ++k) ramp += static_cast<double>(k) * wp(k) * wp(k);

    return 2.0 * cross - spec.b * sn * npairs - spec.b * sm * mpairs - spec.b / sn * ramp;
}

TridiagonalSym build_Qb_matrix(const QbSpec& spec) {
    const std::size_t len = spec.centered.size();
    const double sm = std::sqrt(static_cast<double>(spec.params.m));
    const double sn = std::sqrt(static_cast<double>(spec.params.n));
    std::vector<double> diag(len + 1), off(len);
    for (std::size_t i = 0; i <= len; ++i) {
        const double k = static_cast<double>(i + 1);
        diag[i] = -spec.b * (sm + sn) - spec.b * k / sn;
    }
    // 1-based k = i+1 odd <=> i even.
    for (std::size_t i = 0; i < len; ++i) {
        off[i] = spec.centered[i] + spec.b * (i % 2 == 0 ? sm : sn);
    }
    return TridiagonalSym(std::move(diag), std::move(off));
}

TridiagonalSym domination_matrix(const LaguerreParams& p, double b) {
    if (!(b > 0.0 && b < 0.25)) throw DomainError("domination check requires 0 < b < 1/4");
    const std::size_t len = p.chain_length();
    const double sm = std::sqrt(static_cast<double>(p.m));
    const double sn = std::sqrt(static_cast<double>(p.n));
    std::vector<double> diag(len + 1), off(len);
    for (std::size_t i = 0; i <= len; ++i) {
        const double k = static_cast<double>(i + 1);
        diag[i] = sm + sn - b * sm - b * sn - b * k / sn;
    }
    for (std::size_t i = 0; i < len; ++i) off[i] = -p.entry_mean(i) + b * (i % 2 == 0 ? sm : sn);
    return TridiagonalSym(std::move(diag), std::move(off));
}

DominationResult check_domination(const EntryChain& chain, const LaguerreParams& p, double b) {
    if (chain.x.size() != p.chain_length()) throw UsageError("chain length must be 2n-1");
    const TridiagonalSym v = domination_matrix(p, b);
    const auto d = v.diag();
    const auto e = v.off();
    for (std::size_t k = 0; k < d.size(); ++k) {
        double r = 0.0;
        if (k > 0) r += std::abs(e[k - 1]);
        if (k + 1 < d.size()) r += std::abs(e[k]);
        if (d[k] < r) return {false, k};
    }
    return {};
}

} // namespace betalpp
