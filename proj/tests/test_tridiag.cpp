#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "betalpp/errors.hpp"
#include "betalpp/randkit.hpp"
#include "betalpp/tridiag.hpp"

using namespace betalpp;

namespace {

TridiagonalSym random_tridiag(RngStream& rng, std::size_t dim) {
    std::vector<double> d(dim), e(dim - 1);
    for (auto& x : d) x = 4.0 * rng.normal();
    for (auto& x : e) x = 2.0 * rng.normal();
    return TridiagonalSym(std::move(d), std::move(e));
}

} // namespace

TEST_CASE("construction checks sizes") {
    CHECK_THROWS_AS(TridiagonalSym({}, {}), UsageError);
    CHECK_THROWS_AS(TridiagonalSym({1, 2}, {}), UsageError);
    CHECK_THROWS_AS(TridiagonalSym({1, 2}, {1, 2}), UsageError);
    const auto z = TridiagonalSym::zero_diagonal({1, 2});
    CHECK(z.dim() == 3);
    CHECK(z.diag()[1] == 0.0);
}

TEST_CASE("sturm counts on the 2x2 path matrix") {
    const auto m = TridiagonalSym::zero_diagonal({1});
    CHECK(sturm_count(m, 0) == 1);
    CHECK(sturm_count(m, 1.5) == 2);
    CHECK(sturm_count(m, -1.5) == 0);
}

TEST_CASE("sturm counts right at an eigenvalue") {
    // spectrum {-sqrt2, 0, sqrt2}; the query at 0 hits an exact zero pivot
    const auto m = TridiagonalSym::zero_diagonal({1, 1});
    CHECK(sturm_count(m, 0.0) == 1);
    CHECK(sturm_count(m, -1e-14) == 1);
    CHECK(sturm_count(m, 1e-14) == 2);
    const auto p = TridiagonalSym::zero_diagonal({1});
    CHECK(sturm_count(p, 1.0 - 1e-14) == 1);
    CHECK(sturm_count(p, 1.0 + 1e-14) == 2);
    CHECK(sturm_count(p, -1.0 - 1e-14) == 0);
    CHECK(sturm_count(p, -1.0 + 1e-14) == 1);
    // zero off-diagonal couplings split the matrix into blocks
    const TridiagonalSym blocks({1, 1, 3}, {0, 0});
    CHECK(sturm_count(blocks, 1.0) == 0);
    CHECK(sturm_count(blocks, 2.0) == 2);
}

TEST_CASE("sturm counts are monotone and respect the Gershgorin interval") {
    RngStream rng(17, 0);
    for (int t = 0; t < 200; ++t) {
        const auto m = random_tridiag(rng, 1 + static_cast<std::size_t>(t % 12));
        const auto [lo, hi] = m.gershgorin_interval();
        CHECK(sturm_count(m, lo - 1e-9) == 0);
        CHECK(sturm_count(m, hi + 1e-9) == m.dim());
        std::size_t prev = 0;
        for (double x = lo - 1; x <= hi + 1; x += (hi - lo + 2) / 97) {
            const auto c = sturm_count(m, x);
            CHECK(c >= prev);
            prev = c;
        }
    }
}

TEST_CASE("largest eigenvalue on small exact cases") {
    CHECK(largest_eigenvalue(TridiagonalSym::zero_diagonal({1})).value == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(largest_eigenvalue(TridiagonalSym::zero_diagonal({1, 1})).value ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    const auto r = largest_eigenvalue(TridiagonalSym({5}, {}), 1e-10);
    CHECK(r.value == doctest::Approx(5.0));
    CHECK(r.bracket_width <= 1e-10);
}

TEST_CASE("bisection agrees with the dense oracle") {
    RngStream rng(23, 0);
    for (int t = 0; t < 1000; ++t) {
        const auto m = random_tridiag(rng, 1 + static_cast<std::size_t>(t % 12));
        const auto r = largest_eigenvalue(m);
        const auto spec = dense_spectrum(m);
        CHECK(std::abs(r.value - spec.back()) <= 1e-9 * m.gershgorin_radius());
    }
}

TEST_CASE("bisection failure carries the bracket") {
    const auto m = TridiagonalSym::zero_diagonal({1, 2, 3});
    try {
        (void)largest_eigenvalue(m, 1e-300);
        FAIL("expected NumericFailure");
    } catch (const NumericFailure& e) {
        CHECK(e.bracket_lo() <= e.bracket_hi());
        CHECK(e.bracket_hi() - e.bracket_lo() > 1e-300);
    }
    CHECK_THROWS_AS((void)largest_eigenvalue(m, 0.0), UsageError);
}

TEST_CASE("dense oracle on exact spectra") {
    CHECK(dense_spectrum(TridiagonalSym({5}, {})) == std::vector<double>{5});
    const auto s2 = dense_spectrum(TridiagonalSym::zero_diagonal({1}));
    CHECK(s2[0] == doctest::Approx(-1.0));
    CHECK(s2[1] == doctest::Approx(1.0));
    const auto s3 = dense_spectrum(TridiagonalSym::zero_diagonal({1, 1}));
    CHECK(s3[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(s3[1]) < 1e-12);
    CHECK(s3[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(dense_spectrum(TridiagonalSym::zero_diagonal(std::vector<double>(64, 1.0))), UsageError);
}

TEST_CASE("dense oracle matches the Sturm count everywhere") {
    RngStream rng(29, 0);
    for (int t = 0; t < 100; ++t) {
        const auto m = random_tridiag(rng, 2 + static_cast<std::size_t>(t % 20));
        const auto spec = dense_spectrum(m);
        CHECK(std::is_sorted(spec.begin(), spec.end()));
        const double tol = 1e-10 * m.gershgorin_radius();
        for (std::size_t i = 0; i < spec.size(); ++i) {
            // strictly between neighbours the count is exactly i+1
            if (i + 1 < spec.size() && spec[i + 1] - spec[i] < 4 * tol) continue;
            CHECK(sturm_count(m, spec[i] + 2 * tol) == i + 1);
        }
    }
}

TEST_CASE("quadratic form") {
    const TridiagonalSym m({1, 2}, {3});
    const std::vector<double> w{1, 1};
    CHECK(m.quadratic_form(w) == doctest::Approx(9.0));
    const std::vector<double> bad{1};
    CHECK_THROWS_AS((void)m.quadratic_form(bad), UsageError);
}
