#include <doctest.h>

#include <cmath>
#include <vector>

#include "betalpp/errors.hpp"
#include "betalpp/tilt.hpp"

using namespace betalpp;

namespace {

bool intervals_overlap(const TailEstimate& a, const TailEstimate& b) {
    return std::abs(a.p_hat - b.p_hat) <= 1.96 * (a.std_err + b.std_err);
}

double combined_se(const TailEstimate& a, const TailEstimate& b) {
    return std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
}

} // namespace

TEST_CASE("method names") {
    CHECK(parse_method("naive") == Method::naive);
    CHECK(parse_method("importance") == Method::importance);
    CHECK(parse_method("conditional") == Method::conditional);
    CHECK(to_string(Method::conditional) == "conditional");
    CHECK(to_string(TiltCase::wide) == "wide");
    CHECK_THROWS_AS(parse_method("exact"), UsageError);
}

TEST_CASE("choose_K") {
    const auto a = choose_K(LaguerreParams(10000, 10000, 1), 0.01, 0.2);
    CHECK(a.case_tag == TiltCase::narrow);
    CHECK(a.K == 125);
    const auto b = choose_K(LaguerreParams(10000, 100, 1), 0.1, 0.2);
    CHECK(b.case_tag == TiltCase::wide);
    CHECK(b.K == 100);
    const auto c = choose_K(LaguerreParams(4, 4, 1), 0.9, 0.2);
    CHECK(c.K == 4);
    CHECK_THROWS_AS(choose_K(LaguerreParams(4, 4, 1), 0.0, 0.2), UsageError);
    CHECK_THROWS_AS(choose_K(LaguerreParams(4, 4, 1), 1.0, 0.2), UsageError);
    CHECK_THROWS_AS(choose_K(LaguerreParams(4, 4, 1), 0.5, 0.25), UsageError);
}

TEST_CASE("log weight closed forms") {
    const LaguerreParams p11(1, 1, 2);
    const TiltConfig cfg{p11, 0.5, 0.2, 1, TiltCase::narrow};
    const std::vector<double> y{1.0};
    CHECK(tilt_log_weight(cfg, y) == doctest::Approx(0.30685281944005469).epsilon(1e-15));
    CHECK(std::exp(tilt_log_weight(cfg, y)) == doctest::Approx(1.3591409142295226).epsilon(1e-15));

    // independent density-ratio evaluation at Y^2 = (3.7, 2.2)
    const TiltConfig c2{LaguerreParams(5, 2, 2.5), 0.3, 0.2, 2, TiltCase::narrow};
    const std::vector<double> y2{std::sqrt(3.7), 0.9, std::sqrt(2.2)};
    CHECK(tilt_log_weight(c2, y2) == doctest::Approx(-0.85187883359645294).epsilon(1e-13));
}

TEST_CASE("log weight equals the ratio of gamma densities") {
    const LaguerreParams p(12, 6, 1.5);
    const auto cfg = choose_K(p, 0.35, 0.2);
    REQUIRE(cfg.K >= 2);
    RngStream rng(4, 0);
    for (int t = 0; t < 50; ++t) {
        const auto s = sample_tilted(cfg, rng);
        double expect = 0.0;
        for (long k = 1; k <= cfg.K; ++k) {
            const double y = s.chain.x[static_cast<std::size_t>(2 * k - 2)];
            const double t2 = y * y;
            const double shape = p.beta * static_cast<double>(p.m + 1 - k) / 2;
            auto log_gamma_pdf = [&](double rate) {
                return shape * std::log(rate) - std::lgamma(shape) + (shape - 1) * std::log(t2) - rate * t2;
            };
            expect += log_gamma_pdf(p.beta / 2) - log_gamma_pdf(p.beta / (2 * (1 - cfg.eps)));
        }
        CHECK(s.log_weight == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("tilted sample shrinks only the first K odd entries") {
    const LaguerreParams p(6, 5, 1);
    const TiltConfig cfg{p, 0.36, 0.2, 2, TiltCase::narrow};
    RngStream r1(6, 0), r2(6, 0);
    const auto base = sample_chain(p, r1);
    const auto tilted = sample_tilted(cfg, r2);
    for (std::size_t i = 0; i < base.x.size(); ++i) {
        const double f = (i % 2 == 0 && i < 4) ? 0.8 : 1.0;
        CHECK(tilted.chain.x[i] == doctest::Approx(base.x[i] * f).epsilon(1e-15));
    }
}

TEST_CASE("weights go to one as eps goes to zero") {
    const LaguerreParams p(10, 10, 1);
    RngStream rng(7, 0);
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        const auto cfg = choose_K(p, eps, 0.2);
        const auto s = sample_tilted(cfg, rng);
        CHECK(std::abs(s.log_weight) < 50 * eps);
    }
}

TEST_CASE("importance weights average to one") {
    const auto est = tail_probability(LaguerreParams(20, 20, 1), 0.2, 0.2, 100000, 8, Method::importance);
    CHECK(std::abs(est.weight_mean - 1.0) <= 4 * est.weight_se);
    CHECK(est.weight_se > 0.0);
}

TEST_CASE("n = 1 closed form") {
    // beta a^2 ~ chi^2_2 gives a^2 ~ Exp(1), so P(lambda <= 4(1-eps)) = 1 - exp(-4(1-eps))
    const double eps = 0.3;
    const double exact = -std::expm1(-4 * (1 - eps));
    CHECK(exact == doctest::Approx(0.93918993737478207).epsilon(1e-15));
    const LaguerreParams p(1, 1, 2);
    for (Method m : {Method::naive, Method::importance}) {
        const auto est = tail_probability(p, eps, 0.2, 100000, 9, m);
        CAPTURE(to_string(m));
        CHECK(std::abs(est.p_hat - exact) <= 4 * est.std_err);
    }
    const auto c = tail_probability(p, eps, 0.2, 1000, 9, Method::conditional);
    CHECK(c.p_hat == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("conditional probability edge cases") {
    const LaguerreParams p(3, 2, 1);
    const auto cfg = choose_K(p, 0.3, 0.2);
    // the event fails even with the tilted block at zero
    CHECK(conditional_tail_probability(cfg, EntryChain{{1, 50, 1}}, 1.0) == 0.0);
    // holds at zero block size, fails for a large one
    const double v = conditional_tail_probability(cfg, EntryChain{{1, 0.1, 0.5}}, 1.0);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

TEST_CASE("estimators agree where naive sampling reaches") {
    const LaguerreParams p(50, 50, 1);
    const auto naive = tail_probability(p, 0.2, 0.2, 100000, 10, Method::naive);
    CHECK(naive.p_hat >= 1e-3);
    CHECK(naive.p_hat <= 1e-2);
    const auto is = tail_probability(p, 0.2, 0.2, 100000, 11, Method::importance);
    const auto rb = tail_probability(p, 0.2, 0.2, 20000, 12, Method::conditional);
    CHECK(intervals_overlap(naive, is));
    CHECK(intervals_overlap(naive, rb));
    CHECK(rb.std_err / rb.p_hat < naive.std_err / naive.p_hat);
}

TEST_CASE("unbiasedness across ten seeds") {
    const LaguerreParams p(8, 8, 2);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto naive = tail_probability(p, 0.25, 0.2, 20000, 100 + s, Method::naive);
        const auto is = tail_probability(p, 0.25, 0.2, 20000, 200 + s, Method::importance);
        CAPTURE(s);
        CHECK(naive.p_hat >= 1e-3);
        CHECK(std::abs(is.p_hat - naive.p_hat) <= 4 * combined_se(is, naive));
    }
}

TEST_CASE("cubic band at m = n = 100") {
    const double eps = 0.116;
    const auto est = tail_probability(LaguerreParams(100, 100, 2), eps, 0.2, 20000, 13, Method::importance);
    const double scale = 100.0 * 100.0 * eps * eps * eps;
    REQUIRE(est.p_hat > 0.0);
    CHECK(-est.log_p_hat >= scale / 6);
    CHECK(-est.log_p_hat <= 2 * scale / 3);
}

TEST_CASE("results are independent of the thread count") {
    const LaguerreParams p(12, 9, 1);
    for (Method m : {Method::naive, Method::importance, Method::conditional}) {
        const auto a = tail_probability(p, 0.2, 0.2, 3000, 14, m, 1);
        const auto b = tail_probability(p, 0.2, 0.2, 3000, 14, m, 5);
        CHECK(a.p_hat == b.p_hat);
        CHECK(a.std_err == b.std_err);
    }
}

TEST_CASE("naive estimates are monotone in eps under a shared seed") {
    const LaguerreParams p(10, 10, 1);
    double prev = 1.0;
    for (double eps = 0.05; eps < 0.5; eps += 0.05) {
        const auto est = tail_probability(p, eps, 0.2, 5000, 15, Method::naive);
        CHECK(est.p_hat <= prev);
        prev = est.p_hat;
    }
}

TEST_CASE("estimator errors") {
    const LaguerreParams p(4, 4, 1);
    CHECK_THROWS_AS(tail_probability(p, 0.2, 0.2, 0, 1, Method::naive), UsageError);
    CHECK_THROWS_AS(tail_probability(p, 1.0, 0.2, 10, 1, Method::importance), DomainError);
    CHECK_THROWS_AS(tail_probability(p, 1.2, 0.2, 10, 1, Method::conditional), DomainError);
    const auto other = choose_K(LaguerreParams(5, 4, 1), 0.2, 0.2);
    CHECK_THROWS_AS(estimate_lower_tail(p, 10.0, other, 10, 1), UsageError);
    CHECK_THROWS_AS(estimate_lower_tail(p, -1.0, std::nullopt, 10, 1), DomainError);
    const std::vector<TiltedSample> none;
    CHECK_THROWS_AS(diagnostics_AB(choose_K(p, 0.2, 0.2), none), UsageError);
}

TEST_CASE("theoretical lower bound") {
    const auto lb = theoretical_lower_bound(LaguerreParams(100, 100, 1), 0.1, 1.0 / 3, 1.0, 1.0);
    CHECK(lb.branch == TiltCase::narrow);
    CHECK(lb.value == doctest::Approx(-10.0 / 3));
    // square case: beta log C0 - c beta n^2 eps^3
    const auto sq = theoretical_lower_bound(LaguerreParams(30, 30, 2), 0.2, 0.5, 0.5, 2.0);
    CHECK(sq.value == doctest::Approx(2 * std::log(0.5) - 0.5 * 2 * 900 * 0.008));
    // on the boundary both values are emitted
    const auto edge = theoretical_lower_bound(LaguerreParams(400, 100, 1), 0.25, 1.0, 1.0, 0.5);
    CHECK(edge.branch == TiltCase::wide);
    CHECK(edge.value == edge.wide_value);
    CHECK(edge.wide_value == doctest::Approx(-(0.25 * 200) * (0.25 * 200)));
    CHECK(edge.narrow_value == doctest::Approx(-0.015625 * 8000 * 10));
}

TEST_CASE("A/B diagnostics") {
    SUBCASE("B is a coin flip as eps vanishes with K = n") {
        const LaguerreParams p(50, 50, 1);
        const TiltConfig cfg{p, 1e-9, 0.2, p.n, TiltCase::narrow};
        RngStream rng(16, 0);
        std::vector<TiltedSample> s;
        for (int i = 0; i < 10000; ++i) s.push_back(sample_tilted(cfg, rng));
        const auto d = diagnostics_AB(cfg, s);
        CHECK(d.samples == 10000);
        CHECK(d.freq_B == doctest::Approx(0.5).epsilon(0.06));
    }
    SUBCASE("m = n = 200, eps = 0.1") {
        const LaguerreParams p(200, 200, 1);
        const auto cfg = choose_K(p, 0.1, 0.2);
        RngStream rng(17, 0);
        std::vector<TiltedSample> s;
        for (int i = 0; i < 10000; ++i) s.push_back(sample_tilted(cfg, rng));
        const auto d = diagnostics_AB(cfg, s);
        CHECK(d.freq_B >= 0.4);
        MESSAGE("freq_A = " << d.freq_A << " +- " << d.se_A << ", freq_B = " << d.freq_B);
    }
}
