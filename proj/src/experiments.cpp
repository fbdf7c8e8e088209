#include "betalpp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "betalpp/errors.hpp"

namespace betalpp {

namespace {

// Purpose tags mixed into the master seed so that the two sides of a
// comparison never share streams.
constexpr std::uint64_t kTagField = 0x4649454c44ULL;
constexpr std::uint64_t kTagMatrix = 0x4d41545249ULL;
constexpr std::uint64_t kTagGershgorin = 0x4745525348ULL;
constexpr std::uint64_t kTagNaive = 0x4e41495645ULL;

WeightField trial_field(std::uint64_t seed, std::size_t i) {
    return WeightField(derive_seed(derive_seed(seed, kTagField), i));
}

RngStream trial_rng(std::uint64_t seed, std::size_t i) {
    return RngStream(derive_seed(seed, kTagMatrix), i);
}

struct Line {
    double slope;
    double intercept;
};

std::optional<Line> least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) return std::nullopt;
    const double slope = sxy / sxx;
    return Line{slope, my - slope * mx};
}

FitPoint make_point(double x, double predictor, double reference, const TailEstimate& est) {
    FitPoint pt;
    pt.x = x;
    pt.predictor = predictor;
    pt.p_hat = est.p_hat;
    pt.log_p_hat = est.log_p_hat;
    pt.std_err = est.std_err;
    pt.reference = reference;
    pt.ratio = -est.log_p_hat / reference;
    const double rate = -est.log_p_hat;
    pt.included = est.p_hat > 0.0 && rate > 0.0 && est.std_err / est.p_hat <= kFitRelTolerance * rate;
    return pt;
}

void finish_fit(ExponentFit& fit) {
    std::vector<double> px, py;
    for (const auto& pt : fit.grid) {
        fit.per_point_ratio.push_back(pt.ratio);
        if (!pt.included) continue;
        px.push_back(pt.predictor);
        py.push_back(-pt.log_p_hat);
    }
    if (auto line = least_squares(px, py)) {
        fit.slope = line->slope;
        fit.intercept = line->intercept;
    }
}

} // namespace

KsReport make_ks_report(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    KsReport r;
    r.n_a = a.size();
    r.n_b = b.size();
    r.ks_stat = ks_two_sample(a, b);
    r.critical_001 = ks_critical_001(r.n_a, r.n_b);
    r.pass = r.ks_stat < r.critical_001;
    return r;
}

KsReport verify_loe_identity(long n, std::size_t trials, std::uint64_t seed, unsigned threads,
                             IdentityControl control) {
    if (n < 2) throw UsageError("verify_loe_identity needs n >= 2");
    if (trials < 1000) throw UsageError("identity checks need at least 1000 trials");
    const LaguerreParams p(2 * n, 2 * n - 1, 1.0);
    const double scale = control == IdentityControl::mismatched ? 1.0 : 0.5;
    auto lpp = parallel_map(trials, threads, [&](std::size_t i) {
        return point_to_line(trial_field(seed, i), n);
    });
    auto mat = parallel_map(trials, threads, [&](std::size_t i) {
        RngStream rng = trial_rng(seed, i);
        return scale * sample_lambda_max(p, rng);
    });
    return make_ks_report(std::move(lpp), std::move(mat));
}

KsReport verify_lue_identity(long n, std::size_t trials, std::uint64_t seed, unsigned threads,
                             IdentityControl control) {
    if (n < 2) throw UsageError("verify_lue_identity needs n >= 2");
    if (trials < 1000) throw UsageError("identity checks need at least 1000 trials");
    const LaguerreParams p(n, n, control == IdentityControl::mismatched ? 1.0 : 2.0);
    auto lpp = parallel_map(trials, threads, [&](std::size_t i) {
        return passage_point(trial_field(seed, i), {1, 1}, {n, n});
    });
    auto mat = parallel_map(trials, threads, [&](std::size_t i) {
        RngStream rng = trial_rng(seed, i);
        return sample_lambda_max(p, rng);
    });
    return make_ks_report(std::move(lpp), std::move(mat));
}

ExponentFit fit_point_to_line_tail(long n, const std::vector<double>& x_grid, std::uint64_t trials,
                                   Method method, std::uint64_t seed, double b, unsigned threads) {
    if (n < 2) throw UsageError("fit_point_to_line_tail needs n >= 2");
    const double nd = static_cast<double>(n);
    const double n13 = std::cbrt(nd);
    const double n23 = n13 * n13;
    for (double x : x_grid) {
        // x < n^{2/3} as x^3 < n^2, which is exact at integer boundaries
        if (!(x > 1.0 && x * x * x < nd * nd)) throw UsageError("x must lie in (1, n^{2/3})");
    }
    const LaguerreParams p(2 * n, 2 * n - 1, 1.0);
    ExponentFit fit;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const double x = x_grid[i];
        const double thr = 8.0 * nd - 2.0 * x * n13;
        std::optional<TiltConfig> cfg;
        if (method != Method::naive) cfg = choose_K(p, x / n23 / 4.0, b);
        const TailEstimate est =
            estimate_lower_tail(p, thr, cfg, trials, derive_seed(seed, i), threads, method);
        fit.grid.push_back(make_point(x, x * x * x, x * x * x / 96.0, est));
    }
    finish_fit(fit);
    std::vector<double> lx, ly;
    for (const auto& pt : fit.grid) {
        if (!pt.included) continue;
        lx.push_back(std::log(pt.x));
        ly.push_back(std::log(-pt.log_p_hat));
    }
    if (auto line = least_squares(lx, ly)) fit.loglog_exponent = line->slope;
    return fit;
}

ExponentFit fit_laguerre_lower_tail(const LaguerreParams& p, const std::vector<double>& eps_grid,
                                    std::uint64_t trials, Method method, std::uint64_t seed,
                                    double b, unsigned threads) {
    const double m = static_cast<double>(p.m);
    const double n = static_cast<double>(p.n);
    ExponentFit fit;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double eps = eps_grid[i];
        const TailEstimate est =
            tail_probability(p, eps, b, trials, derive_seed(seed, i), method, threads);
        const double pred = std::pow(m, 1.5) * std::sqrt(n) * eps * eps * eps;
        fit.grid.push_back(make_point(eps, pred, p.beta * pred / 6.0, est));
    }
    finish_fit(fit);
    if (fit.slope) {
        fit.c_hat = *fit.slope / p.beta;
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& pt : fit.grid) {
            if (pt.included) lo = std::min(lo, (pt.log_p_hat + *fit.c_hat * p.beta * pt.predictor) / p.beta);
        }
        fit.log_c0_hat = lo;
    }
    return fit;
}

LilTrace run_lil(std::uint64_t seed, long N, long start_n) {
    if (start_n < 16) throw UsageError("start_n must be >= 16");
    if (N < start_n) throw UsageError("N must be >= start_n");
    LilTrace tr;
    tr.start_n = start_n;
    tr.records = passage_sequence(WeightField(seed), N);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& r : tr.records) {
        if (r.n < start_n) continue;
        const double ll = std::log(std::log(static_cast<double>(r.n)));
        lo = std::min(lo, r.z_n / std::cbrt(ll));
        hi = std::max(hi, r.z_n / std::pow(ll, 2.0 / 3.0));
        tr.running_min.push_back(lo);
        tr.running_max.push_back(hi);
    }
    tr.scaled_min = lo;
    tr.scaled_max = hi;
    return tr;
}

std::vector<std::int64_t> dyadic_scales(long k, double eta) {
    if (!(eta > 0.0)) throw UsageError("eta must be > 0");
    std::vector<std::int64_t> s(static_cast<std::size_t>(k + 1));
    for (long j = 0; j <= k; ++j) {
        s[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::ceil(std::pow(1.0 + eta, static_cast<double>(j))));
    }
    return s;
}

DyadicScan dyadic_scan(std::uint64_t seed, long k, double eta, double threshold_const) {
    if (k < 4) throw UsageError("dyadic_scan needs k >= 4");
    if (!(threshold_const > 0.0)) throw UsageError("threshold_const must be > 0");
    DyadicScan scan;
    scan.k = k;
    scan.eta = eta;
    scan.threshold_const = threshold_const;
    scan.scales = dyadic_scales(k, eta);
    scan.j_first = (k + 1) / 2;
    for (long j = scan.j_first; j <= k; ++j) {
        if (scan.scales[static_cast<std::size_t>(j)] <= scan.scales[static_cast<std::size_t>(j - 1)]) {
            throw UsageError("dyadic scales must be strictly increasing; raise eta");
        }
    }

    const WeightField field(seed);
    std::vector<double> excluded;
    scan.worst_slack = std::numeric_limits<double>::infinity();
    for (long j = scan.j_first; j <= k; ++j) {
        const std::int64_t lo = scan.scales[static_cast<std::size_t>(j - 1)];
        const std::int64_t hi = scan.scales[static_cast<std::size_t>(j)];
        const double lod = static_cast<double>(lo);
        const double l2p = line_to_point(field, lo, hi);
        const double level = 4.0 * lod - threshold_const * std::cbrt(lod) * std::cbrt(std::log(std::log(lod)));
        scan.line_to_point_values.push_back(l2p);
        scan.A.push_back(l2p <= level);

        const double tex = point_to_line_excluded(field, lo);
        excluded.push_back(tex);
        const double lhs = passage_point(field, {1, 1}, {hi - 1, hi - 1});
        const double rhs = tex + l2p;
        ++scan.inequality_checks;
        if (lhs > rhs + kSplitRoundoff * rhs) ++scan.inequality_violations;
        scan.worst_slack = std::min(scan.worst_slack, rhs - lhs);
    }
    for (long j = k; j >= scan.j_first; --j) {
        const auto idx = static_cast<std::size_t>(j - scan.j_first);
        if (scan.A[idx]) {
            scan.tau = j;
            const double lo = static_cast<double>(scan.scales[static_cast<std::size_t>(j - 1)]);
            scan.B_tau = excluded[idx] < 4.0 * lo;
            break;
        }
    }
    scan.success = scan.tau.has_value() && scan.B_tau.value_or(false);
    return scan;
}

GershgorinReport gershgorin_study(const LaguerreParams& p, std::size_t samples, double eps,
                                  std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    if (samples == 0) throw UsageError("gershgorin_study needs samples >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("eps must lie in (0,1)");
    GershgorinReport r;
    r.samples = samples;
    r.eps = eps;
    const auto gaps = parallel_map(samples, threads, [&](std::size_t i) {
        RngStream rng(derive_seed(seed, kTagGershgorin), i);
        const EntryChain c = sample_chain(p, rng);
        const EigenResult top = largest_eigenvalue(linearize(c));
        // The bisection value can sit up to one bracket width above s_n.
        return gershgorin_bound(c) - (top.value - top.bracket_width);
    });
    r.min_gap = *std::min_element(gaps.begin(), gaps.end());
    r.violations = static_cast<std::size_t>(std::count_if(gaps.begin(), gaps.end(), [](double g) { return g < 0.0; }));

    r.log_product_bound = ld_lower_bound_product(p, eps);
    const double s_thr = 2.0 * std::sqrt(static_cast<double>(p.n)) * (1.0 - eps);
    r.naive = estimate_lower_tail(p, s_thr * s_thr, std::nullopt, trials,
                                  derive_seed(seed, kTagNaive), threads, Method::naive);
    const double se = r.naive.p_hat > 0.0 ? r.naive.std_err : 1.0 / static_cast<double>(trials);
    r.log_naive_upper = std::log(r.naive.p_hat + 3.0 * se);
    r.product_ok = r.log_product_bound <= r.log_naive_upper;
    return r;
}

} // namespace betalpp
