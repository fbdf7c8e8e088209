#include "betalpp/tilt.hpp"

#include <cmath>
#include <limits>
#include <tuple>

#include "betalpp/errors.hpp"
#include "betalpp/quadform.hpp"

namespace betalpp {

std::string to_string(TiltCase c) { return c == TiltCase::narrow ? "narrow" : "wide"; }
std::string to_string(Method m) {
    switch (m) {
    case Method::naive: return "naive";
    case Method::importance: return "importance";
    case Method::conditional: return "conditional";
    }
    return "naive";
}

Method parse_method(const std::string& name) {
    if (name == "naive") return Method::naive;
    if (name == "importance") return Method::importance;
    if (name == "conditional") return Method::conditional;
    throw UsageError("unknown method '" + name + "' (expected naive, importance or conditional)");
}

TiltConfig choose_K(const LaguerreParams& p, double eps, double b) {
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("eps must lie in (0,1)");
    if (!(b > 0.0 && b < 0.25)) throw UsageError("b must lie in (0,1/4)");
    const double sm = std::sqrt(static_cast<double>(p.m));
    const double sn = std::sqrt(static_cast<double>(p.n));
    if (eps <= 2.0 * b * sn / sm) {
        const double raw = std::ceil(eps * sm * sn / (4.0 * b));
        const long K = raw >= static_cast<double>(p.n) ? p.n : std::max(1L, static_cast<long>(raw));
        return {p, eps, b, K, TiltCase::narrow};
    }
    return {p, eps, b, p.n, TiltCase::wide};
}

namespace {

// sum_{k=1}^{K} (m+1-k)
double dof_sum(const TiltConfig& cfg) {
    const double K = static_cast<double>(cfg.K);
    return K * static_cast<double>(cfg.params.m + 1) - 0.5 * K * (K + 1.0);
}

} // namespace

double tilt_log_weight(const TiltConfig& cfg, std::span<const double> y) {
    const double beta = cfg.params.beta;
    const double eps = cfg.eps;
    double s = 0.0;
    for (long k = 0; k < cfg.K; ++k) {
        const double v = y[static_cast<std::size_t>(2 * k)];
        s += v * v;
    }
    return beta * eps / (2.0 * (1.0 - eps)) * s + 0.5 * beta * std::log1p(-eps) * dof_sum(cfg);
}

TiltedSample sample_tilted(const TiltConfig& cfg, RngStream& rng) {
    TiltedSample out{sample_chain(cfg.params, rng), 0.0};
    const double shrink = std::sqrt(1.0 - cfg.eps);
    for (long k = 0; k < cfg.K; ++k) out.chain.x[static_cast<std::size_t>(2 * k)] *= shrink;
    out.log_weight = tilt_log_weight(cfg, out.chain.x);
    return out;
}

bool below_threshold(const EntryChain& chain, double s_threshold) {
    const TridiagonalSym t = linearize(chain);
    return sturm_count(t, s_threshold) == t.dim();
}

double conditional_tail_probability(const TiltConfig& cfg, const EntryChain& chain,
                                    double s_threshold) {
    const std::vector<double>& x0 = chain.x;
    EntryChain work = chain;
    // Scale the first K odd entries by f; S scales by f^2.
    auto holds = [&](double f) {
        for (long k = 0; k < cfg.K; ++k) {
            const auto i = static_cast<std::size_t>(2 * k);
            work.x[i] = x0[i] * f;
        }
        return below_threshold(work, s_threshold);
    };
    if (!holds(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (holds(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e150) return 1.0;
    }
    for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? lo : hi) = mid;
    }
    double s = 0.0;
    for (long k = 0; k < cfg.K; ++k) {
        const double v = x0[static_cast<std::size_t>(2 * k)];
        s += v * v;
    }
    const double beta = cfg.params.beta;
    const double shape = 0.5 * beta * dof_sum(cfg);
    return std::exp(log_regularized_lower_gamma(shape, 0.5 * beta * lo * lo * s));
}

namespace {

TailEstimate summarize(std::span<const double> values, std::span<const double> weights,
                       std::uint64_t seed, Method method) {
    TailEstimate est;
    est.trials = values.size();
    est.seed = seed;
    est.method = method;
    const double n = static_cast<double>(values.size());

    auto mean_se = [n](std::span<const double> v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double se = n > 1.0 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        return std::pair{mean, se};
    };

    std::tie(est.p_hat, est.std_err) = mean_se(values);
    est.log_p_hat = est.p_hat > 0.0 ? std::log(est.p_hat) : -std::numeric_limits<double>::infinity();
    if (method == Method::importance) std::tie(est.weight_mean, est.weight_se) = mean_se(weights);
    return est;
}

} // namespace

TailEstimate estimate_lower_tail(const LaguerreParams& p, double lambda_threshold,
                                 const std::optional<TiltConfig>& cfg, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads, Method method) {
    if (trials == 0) throw UsageError("trials must be >= 1");
    if (!(lambda_threshold >= 0.0)) throw DomainError("lambda threshold must be >= 0");
    const double s_thr = std::sqrt(lambda_threshold);

    struct Trial {
        double value;
        double weight;
    };
    std::vector<Trial> runs;
    if (!cfg) method = Method::naive;
    if (method == Method::naive) {
        runs = parallel_map(trials, threads, [&](std::size_t i) {
            RngStream rng(seed, i);
            return Trial{below_threshold(sample_chain(p, rng), s_thr) ? 1.0 : 0.0, 1.0};
        });
    } else {
        if (cfg->params.m != p.m || cfg->params.n != p.n || cfg->params.beta != p.beta) {
            throw UsageError("tilt configuration parameters differ from the estimated law");
        }
    }
    if (method == Method::conditional) {
        runs = parallel_map(trials, threads, [&](std::size_t i) {
            RngStream rng(seed, i);
            return Trial{conditional_tail_probability(*cfg, sample_chain(p, rng), s_thr), 1.0};
        });
    } else if (method == Method::importance) {
        runs = parallel_map(trials, threads, [&](std::size_t i) {
            RngStream rng(seed, i);
            const TiltedSample ts = sample_tilted(*cfg, rng);
            const double w = std::exp(ts.log_weight);
            return Trial{below_threshold(ts.chain, s_thr) ? w : 0.0, w};
        });
    }
    std::vector<double> values(runs.size()), weights(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        values[i] = runs[i].value;
        weights[i] = runs[i].weight;
    }
    return summarize(values, weights, seed, method);
}

TailEstimate tail_probability(const LaguerreParams& p, double eps, double b, std::uint64_t trials,
                              std::uint64_t seed, Method method, unsigned threads) {
    if (trials == 0) throw UsageError("trials must be >= 1");
    if (method != Method::naive && !(eps > 0.0 && eps < 1.0)) {
        throw DomainError("tilted estimators require eps in (0,1)");
    }
    if (!(eps < 1.0)) throw DomainError("eps must be < 1");
    const double edge = p.edge();
    const double thr = edge * edge * (1.0 - eps);
    std::optional<TiltConfig> cfg;
    if (method != Method::naive) cfg = choose_K(p, eps, b);
    return estimate_lower_tail(p, thr, cfg, trials, seed, threads, method);
}

LowerBound theoretical_lower_bound(const LaguerreParams& p, double eps, double c, double C0,
                                   double c2) {
    const double m = static_cast<double>(p.m);
    const double n = static_cast<double>(p.n);
    const double beta = p.beta;
    LowerBound lb;
    const double root = eps * std::sqrt(m * n);
    lb.wide_value = -c * beta * root * root;
    lb.narrow_value = beta * std::log(C0) - c * beta * eps * eps * eps * std::pow(m, 1.5) * std::sqrt(n);
    lb.branch = eps >= c2 * std::sqrt(n) / std::sqrt(m) ? TiltCase::wide : TiltCase::narrow;
    lb.value = lb.branch == TiltCase::wide ? lb.wide_value : lb.narrow_value;
    return lb;
}

bool event_A(const TiltConfig& cfg, const EntryChain& y) {
    const LaguerreParams& p = cfg.params;
    std::vector<double> z(y.x.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = y.x[k] - p.entry_mean(k);
    const TridiagonalSym a = build_Qb_matrix(QbSpec(p, cfg.b, std::move(z)));
    // Strict: every eigenvalue below the level.
    const double level = -cfg.eps * std::sqrt(static_cast<double>(p.m)) / 8.0;
    return sturm_count(a, level) == a.dim();
}

bool event_B(const TiltConfig& cfg, const EntryChain& y) {
    double s = 0.0;
    for (long k = 0; k < cfg.K; ++k) {
        const double v = y.x[static_cast<std::size_t>(2 * k)];
        s += v * v;
    }
    return s > (1.0 - cfg.eps) * dof_sum(cfg);
}

AbDiagnostics diagnostics_AB(const TiltConfig& cfg, std::span<const TiltedSample> samples) {
    if (samples.empty()) throw UsageError("diagnostics_AB requires samples");
    AbDiagnostics d;
    d.samples = samples.size();
    std::size_t a = 0, b = 0;
    for (const auto& s : samples) {
        if (event_A(cfg, s.chain)) ++a;
        if (event_B(cfg, s.chain)) ++b;
    }
    const double n = static_cast<double>(samples.size());
    d.freq_A = static_cast<double>(a) / n;
    d.freq_B = static_cast<double>(b) / n;
    d.se_A = std::sqrt(d.freq_A * (1.0 - d.freq_A) / n);
    d.se_B = std::sqrt(d.freq_B * (1.0 - d.freq_B) / n);
    return d;
}

} // namespace betalpp
