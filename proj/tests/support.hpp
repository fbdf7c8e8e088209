#ifndef BETALPP_TEST_SUPPORT_HPP
#define BETALPP_TEST_SUPPORT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double se = 0.0; ///< standard error of the mean
    std::size_t n = 0;
};

inline Moments moments(const std::vector<double>& v) {
    Moments m;
    m.n = v.size();
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(m.n - 1);
    m.se = std::sqrt(m.var / static_cast<double>(m.n));
    return m;
}

/// |a - b| <= k * sqrt(se_a^2 + se_b^2)
inline bool within_se(double a, double se_a, double b, double se_b, double k) {
    return std::abs(a - b) <= k * std::sqrt(se_a * se_a + se_b * se_b);
}

#endif
