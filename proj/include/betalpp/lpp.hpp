/**
 * Last passage times over a vertex-weighted quadrant.
 *
 * All passage times include the weights of both endpoints. The engines are
 * templates over any field exposing `double weight(x, y) const` for x, y >= 1;
 * WeightField goes through its unchecked accessor.
 */
#ifndef BETALPP_LPP_HPP
#define BETALPP_LPP_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <vector>

#include "betalpp/errors.hpp"
#include "betalpp/randkit.hpp"

namespace betalpp {

struct LatticePoint {
    std::int64_t x;
    std::int64_t y;
};

inline bool precedes(LatticePoint u, LatticePoint v) noexcept { return u.x <= v.x && u.y <= v.y; }

struct PassageRecord {
    std::int64_t n;
    double t_n;
    double z_n; ///< (t_n - 4n) / n^{1/3}
};

inline PassageRecord make_record(std::int64_t n, double t) {
    const double nd = static_cast<double>(n);
    return {n, t, (t - 4.0 * nd) / std::cbrt(nd)};
}

template <typename F>
concept Field = requires(const F& f, std::int64_t x) {
    { f.weight(x, x) } -> std::convertible_to<double>;
};

/// Explicit weights, mostly for tests: w[x-1][y-1] is the weight at (x, y).
class TableField {
public:
    explicit TableField(std::vector<std::vector<double>> w) : w_(std::move(w)) {}

    double weight(std::int64_t x, std::int64_t y) const {
        if (x < 1 || y < 1 || static_cast<std::size_t>(x) > w_.size() ||
            static_cast<std::size_t>(y) > w_[static_cast<std::size_t>(x - 1)].size()) {
            throw DomainError("table field queried outside its support");
        }
        return w_[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(y - 1)];
    }

private:
    std::vector<std::vector<double>> w_;
};

namespace detail {

template <Field F>
inline double cell(const F& f, std::int64_t x, std::int64_t y) {
    if constexpr (requires { f.weight_unchecked(x, y); }) {
        return f.weight_unchecked(x, y);
    } else {
        return f.weight(x, y);
    }
}

inline constexpr double kNone = -std::numeric_limits<double>::infinity();

// Forward DP from (1,1) over the triangle x + y <= 2n. Calls visit(x, D(x,y),
// max-predecessor) for every vertex on the anti-diagonal x + y = 2n.
template <Field F, typename Visit>
void sweep_to_line(const F& f, std::int64_t n, Visit&& visit) {
    const std::int64_t s = 2 * n;
    std::vector<double> row(static_cast<std::size_t>(s), kNone); // row[x], 1-based
    for (std::int64_t y = 1; y < s; ++y) {
        double left = kNone;
        for (std::int64_t x = 1; x <= s - y; ++x) {
            const auto ix = static_cast<std::size_t>(x);
            double pred = std::max(left, row[ix]);
            if (x == 1 && y == 1) pred = 0.0;
            const double d = cell(f, x, y) + pred;
            row[ix] = d;
            left = d;
            if (x + y == s) visit(x, d, pred);
        }
    }
}

} // namespace detail

/// T_{u,v}; throws UsageError unless u precedes v coordinatewise.
template <Field F>
double passage_point(const F& f, LatticePoint u, LatticePoint v) {
    if (u.x < 1 || u.y < 1) throw UsageError("lattice points need coordinates >= 1");
    if (!precedes(u, v)) throw UsageError("passage_point needs u <= v coordinatewise");
    const auto w = static_cast<std::size_t>(v.x - u.x + 1);
    std::vector<double> row(w, 0.0);
    for (std::int64_t y = u.y; y <= v.y; ++y) {
        double left = 0.0;
        for (std::size_t i = 0; i < w; ++i) {
            const double below = y == u.y ? 0.0 : row[i];
            const double pred = i == 0 ? below : (y == u.y ? left : std::max(left, below));
            row[i] = detail::cell(f, u.x + static_cast<std::int64_t>(i), y) + pred;
            left = row[i];
        }
    }
    return row.back();
}

/// T_1..T_N from a single sweep of one field; row n yields T_n = D(n, n).
template <Field F>
std::vector<PassageRecord> passage_sequence(const F& f, std::int64_t N) {
    if (N < 1) throw UsageError("passage_sequence needs N >= 1");
    std::vector<PassageRecord> out;
    out.reserve(static_cast<std::size_t>(N));
    std::vector<double> row(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t y = 1; y <= N; ++y) {
        double left = 0.0;
        for (std::int64_t x = 1; x <= N; ++x) {
            const auto ix = static_cast<std::size_t>(x - 1);
            const double pred = x == 1 ? row[ix] : std::max(left, row[ix]);
            row[ix] = detail::cell(f, x, y) + pred;
            left = row[ix];
        }
        out.push_back(make_record(y, row[static_cast<std::size_t>(y - 1)]));
    }
    return out;
}

/// T*_n: max passage time from (1,1) to the line x + y = 2n.
template <Field F>
double point_to_line(const F& f, std::int64_t n) {
    if (n < 1) throw UsageError("point_to_line needs n >= 1");
    double best = detail::kNone;
    detail::sweep_to_line(f, n, [&](std::int64_t, double d, double) { best = std::max(best, d); });
    return best;
}

/// As point_to_line with the weight of the final vertex left out.
template <Field F>
double point_to_line_excluded(const F& f, std::int64_t n) {
    if (n < 1) throw UsageError("point_to_line_excluded needs n >= 1");
    double best = detail::kNone;
    detail::sweep_to_line(f, n, [&](std::int64_t, double, double pred) { best = std::max(best, pred); });
    return best;
}

/**
 * Max passage time from any vertex of the line x + y = 2 j_lo to
 * (j_hi - 1, j_hi - 1), computed by a reverse DP from the target.
 */
template <Field F>
double line_to_point(const F& f, std::int64_t j_lo, std::int64_t j_hi) {
    if (j_lo < 1 || j_hi <= j_lo) throw UsageError("line_to_point needs 1 <= j_lo < j_hi");
    const std::int64_t t = j_hi - 1;
    const std::int64_t s = 2 * j_lo;
    // row[x] holds R(x, y+1) while row y is processed (1-based). Row y - 1
    // starts one column further right, so stale cells are never read.
    std::vector<double> row(static_cast<std::size_t>(t + 2), detail::kNone);
    double best = detail::kNone;
    for (std::int64_t y = t; y >= 1 && y + t >= s; --y) {
        double right = detail::kNone;
        for (std::int64_t x = t; x >= 1 && x + y >= s; --x) {
            const auto ix = static_cast<std::size_t>(x);
            double succ = std::max(right, row[ix]);
            if (x == t && y == t) succ = 0.0;
            const double r = detail::cell(f, x, y) + succ;
            row[ix] = r;
            right = r;
            if (x + y == s) best = std::max(best, r);
        }
    }
    return best;
}

} // namespace betalpp

#endif // BETALPP_LPP_HPP
