#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "betalpp/errors.hpp"
#include "betalpp/lpp.hpp"
#include "betalpp/randkit.hpp"

using namespace betalpp;

namespace {

using Grid = std::vector<std::vector<double>>;

// Exhaustive search over up/right paths.
template <typename F>
double brute_point(const F& f, LatticePoint u, LatticePoint v) {
    const double w = f.weight(u.x, u.y);
    if (u.x == v.x && u.y == v.y) return w;
    double best = -1.0;
    if (u.x < v.x) best = std::max(best, brute_point(f, {u.x + 1, u.y}, v));
    if (u.y < v.y) best = std::max(best, brute_point(f, {u.x, u.y + 1}, v));
    return w + best;
}

template <typename F>
double brute_line(const F& f, std::int64_t n, bool exclude_end) {
    double best = -1.0;
    for (std::int64_t x = 1; x <= 2 * n - 1; ++x) {
        const LatticePoint v{x, 2 * n - x};
        best = std::max(best, brute_point(f, {1, 1}, v) - (exclude_end ? f.weight(v.x, v.y) : 0.0));
    }
    return best;
}

template <typename F>
double brute_line_to_point(const F& f, std::int64_t j_lo, std::int64_t j_hi) {
    const LatticePoint target{j_hi - 1, j_hi - 1};
    double best = -1.0;
    for (std::int64_t x = 1; x <= 2 * j_lo - 1; ++x) {
        const LatticePoint v{x, 2 * j_lo - x};
        if (precedes(v, target)) best = std::max(best, brute_point(f, v, target));
    }
    return best;
}

// The recursion above sums from the far end, the DP from the near one.
doctest::Approx same(double v) { return doctest::Approx(v).epsilon(1e-14); }

Grid random_grid(RngStream& rng, std::size_t size) {
    Grid g(size, std::vector<double>(size));
    for (auto& row : g)
        for (auto& w : row) w = sample_exponential(rng);
    return g;
}

} // namespace

TEST_CASE("records") {
    const auto r = make_record(8, 30.0);
    CHECK(r.n == 8);
    CHECK(r.z_n == (30.0 - 32.0) / 2.0);
    CHECK(precedes({1, 2}, {1, 3}));
    CHECK_FALSE(precedes({2, 2}, {1, 3}));
}

TEST_CASE("table field bounds") {
    const TableField f(Grid{{1, 2}, {3, 4}});
    CHECK(f.weight(1, 2) == 2.0);
    CHECK(f.weight(2, 1) == 3.0);
    CHECK_THROWS_AS(f.weight(3, 1), DomainError);
    CHECK_THROWS_AS(f.weight(0, 1), DomainError);
}

TEST_CASE("point to point on a 2x2 table") {
    const TableField f(Grid{{0.5, 2.0}, {1.0, 0.25}});
    CHECK(passage_point(f, {1, 1}, {2, 2}) == 2.75);
    CHECK(passage_point(f, {2, 1}, {2, 1}) == 1.0);
    CHECK_THROWS_AS(passage_point(f, {2, 1}, {1, 2}), UsageError);
    CHECK_THROWS_AS(passage_point(f, {0, 1}, {1, 2}), UsageError);
}

TEST_CASE("point to line with and without the endpoint") {
    // xi(1,1)=1, xi(1,2)=0, xi(2,1)=3, xi(1,3)=0, xi(2,2)=0, xi(3,1)=2
    const TableField f(Grid{{1, 0, 0}, {3, 0, 0}, {2, 0, 0}});
    CHECK(point_to_line(f, 2) == 6.0);
    CHECK(point_to_line_excluded(f, 2) == 4.0);
    CHECK(point_to_line(f, 1) == 1.0);
    CHECK(point_to_line_excluded(f, 1) == 0.0);
}

TEST_CASE("single vertex cases on the hash field") {
    const WeightField f(3);
    CHECK(passage_point(f, {4, 9}, {4, 9}) == f.weight(4, 9));
    CHECK(passage_sequence(f, 1).front().t_n == f.weight(1, 1));
}

TEST_CASE("dynamic programs match exhaustive enumeration") {
    RngStream rng(1, 0);
    for (int t = 0; t < 40; ++t) {
        const TableField f(random_grid(rng, 6));
        for (std::int64_t ux = 1; ux <= 6; ++ux)
            for (std::int64_t uy = 1; uy <= 6; ++uy)
                for (std::int64_t vx = ux; vx <= 6; ++vx)
                    for (std::int64_t vy = uy; vy <= 6; ++vy)
                        CHECK(passage_point(f, {ux, uy}, {vx, vy}) == same(brute_point(f, {ux, uy}, {vx, vy})));
        for (std::int64_t n = 1; n <= 3; ++n) {
            CHECK(point_to_line(f, n) == same(brute_line(f, n, false)));
            CHECK(point_to_line_excluded(f, n) == same(brute_line(f, n, true)));
        }
        const auto seq = passage_sequence(f, 6);
        for (std::int64_t n = 1; n <= 6; ++n) CHECK(seq[n - 1].t_n == same(brute_point(f, {1, 1}, {n, n})));
        for (std::int64_t lo = 1; lo <= 6; ++lo)
            for (std::int64_t hi = lo + 1; hi <= 7; ++hi) CHECK(line_to_point(f, lo, hi) == same(brute_line_to_point(f, lo, hi)));
    }
}

TEST_CASE("sequence agrees with point queries and is monotone") {
    const WeightField f(11);
    const auto seq = passage_sequence(f, 60);
    REQUIRE(seq.size() == 60);
    for (std::int64_t n = 1; n <= 60; ++n) {
        CHECK(seq[n - 1].n == n);
        CHECK(seq[n - 1].t_n == passage_point(f, {1, 1}, {n, n}));
        CHECK(seq[n - 1].z_n == (seq[n - 1].t_n - 4.0 * n) / std::cbrt(double(n)));
        if (n > 1) CHECK(seq[n - 1].t_n >= seq[n - 2].t_n);
    }
}

TEST_CASE("coupled sequences share prefixes and replay exactly") {
    const WeightField f(12);
    const auto a = passage_sequence(f, 80);
    const auto b = passage_sequence(f, 50);
    const auto c = passage_sequence(WeightField(12), 80);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(a[i].t_n == b[i].t_n);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].t_n == c[i].t_n);
}

TEST_CASE("growth band at n = 500") {
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) sum += passage_sequence(WeightField(derive_seed(21, s)), 500).back().t_n;
    const double ratio = sum / 200 / 2000;
    CHECK(ratio >= 0.90);
    CHECK(ratio <= 1.00);
}

TEST_CASE("line values bracket the diagonal") {
    RngStream rng(2, 0);
    for (int t = 0; t < 1000; ++t) {
        const WeightField f(rng.next_u64());
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng.next_u64() % 64);
        const double star = point_to_line(f, n);
        CHECK(star >= passage_point(f, {1, 1}, {n, n}));
        CHECK(point_to_line_excluded(f, n) <= star);
    }
}

TEST_CASE("line to point") {
    const WeightField f(31);
    double prev = 0.0;
    for (std::int64_t hi = 6; hi < 30; ++hi) {
        const double v = line_to_point(f, 5, hi);
        CHECK(v >= 0.0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(line_to_point(f, 5, 5), UsageError);
    CHECK_THROWS_AS(line_to_point(f, 0, 3), UsageError);
}

TEST_CASE("line to point has the point-to-line law") {
    constexpr std::size_t trials = 10000;
    std::vector<double> a(trials), b(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        a[i] = line_to_point(WeightField(derive_seed(41, i)), 5, 13);
        b[i] = point_to_line(WeightField(derive_seed(42, i)), 8);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(ks_two_sample(a, b) < ks_critical_001(trials, trials));
}

TEST_CASE("crossing an anti-diagonal sandwiches the point passage time") {
    RngStream rng(3, 0);
    for (int t = 0; t < 300; ++t) {
        const WeightField f(rng.next_u64());
        const std::int64_t n = 4 + t % 12;
        const std::int64_t r = 1 + t % (n - 1);
        double from_line = 0.0, to_line = 0.0;
        for (std::int64_t x = 1; x <= 2 * r - 1; ++x) {
            const LatticePoint v{x, 2 * r - x};
            to_line = std::max(to_line, passage_point(f, {1, 1}, v));
            if (precedes(v, {n, n})) from_line = std::max(from_line, passage_point(f, v, {n, n}));
        }
        const double tn = passage_point(f, {1, 1}, {n, n});
        // the two sides add the same weights in different orders
        const double slack = 1e-12 * tn;
        CHECK(from_line <= tn + slack);
        CHECK(tn <= from_line + to_line + slack);
    }
}
