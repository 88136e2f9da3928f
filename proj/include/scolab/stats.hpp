// stats.hpp
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "scolab/core.hpp"

namespace scolab {

struct Interval {
    double lo;
    double hi;
};

// Two-sided Clopper-Pearson interval at level 1 - alpha.
inline Interval clopper_pearson(long long successes, long long trials, double alpha = 0.05) {
    require(trials >= 1, "clopper_pearson: trials must be >= 1");
    require(successes >= 0 && successes <= trials, "clopper_pearson: successes out of range");
    require(alpha > 0.0 && alpha < 1.0, "clopper_pearson: alpha must lie in (0,1)");
    const double k = static_cast<double>(successes), n = static_cast<double>(trials);
    const double lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
    const double hi = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
    return {lo, hi};
}

// One-sided lower bound: P[X >= k] = alpha under p = lo.
inline double clopper_pearson_lower(long long successes, long long trials, double alpha = 0.05) {
    require(trials >= 1 && successes >= 0 && successes <= trials, "clopper_pearson_lower: bad counts");
    if (successes == 0) return 0.0;
    const double k = static_cast<double>(successes), n = static_cast<double>(trials);
    return boost::math::ibeta_inv(k, n - k + 1.0, alpha);
}

struct MeanSe {
    double mean;
    double se;
};

inline MeanSe mean_se(const std::vector<double>& v) {
    require(!v.empty(), "mean_se: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    const double mean = s / static_cast<double>(v.size());
    if (v.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(v.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

inline double median(std::vector<double> v) {
    require(!v.empty(), "median: empty sample");
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
    const double hi = v[n / 2];
    if (n % 2 == 1) return hi;
    return 0.5 * (*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2)) + hi);
}

struct RateFit {
    std::vector<std::pair<double, double>> points;  // (eps, m_hat)
    double slope = 0.0;                             // exponent of 1/eps
    double intercept = 0.0;
    double r2 = 0.0;
};

// Least squares of ln m on ln(1/eps).
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
    require(points.size() >= 3, "fit_rate: need at least 3 points");
    std::vector<double> xs, ys;
    for (const auto& [eps, m] : points) {
        require(eps > 0.0 && m > 0.0, "fit_rate: eps and m must be positive");
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(m));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 1e-300) throw InvalidArgument("fit_rate: all eps are equal");
    RateFit f;
    f.points = points;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace scolab
