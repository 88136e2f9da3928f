// info_bounds.hpp
//
// KL / Fano / two-point calculators and evaluators for the sample-complexity
// formulas. Constants that come out of the lower-bound proofs are hardcoded;
// unnamed absolute constants are parameters defaulting to 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "scolab/core.hpp"
#include "scolab/radius.hpp"

namespace scolab {

struct BoundQuery {
    int d = 1;
    RadiusSpec R{1.0};
    double epsilon = 0.1;
    double delta = 0.25;
    std::optional<double> mu;
    std::optional<double> L;
    std::optional<double> sigma;

    void validate() const {
        require(d >= 1, "BoundQuery: d must be >= 1");
        require(epsilon > 0.0, "BoundQuery: epsilon must be positive");
        require(delta > 0.0 && delta < 1.0, "BoundQuery: delta must lie in (0,1)");
        if (mu) require(*mu > 0.0, "BoundQuery: mu must be positive");
        if (L) require(*L > 0.0, "BoundQuery: L must be positive");
        if (sigma) require(*sigma > 0.0, "BoundQuery: sigma must be positive");
        if (mu && L) require(*L >= *mu, "BoundQuery: need L >= mu");
    }

    std::optional<double> kappa() const {
        if (mu && L) return *L / *mu;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Divergences and testing inequalities
// ---------------------------------------------------------------------------

// Binary relative entropy kl(p || q). Returns +inf when q is 0 or 1 and p != q.
inline double bernoulli_kl(double p, double q) {
    require(p >= 0.0 && p <= 1.0, "bernoulli_kl: p must lie in [0,1]");
    require(q >= 0.0 && q <= 1.0, "bernoulli_kl: q must lie in [0,1]");
    if (p == q) return 0.0;
    if (q == 0.0 || q == 1.0) return kInf;
    double out = 0.0;
    if (p > 0.0) out += p * std::log(p / q);
    if (p < 1.0) out += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return std::max(out, 0.0);
}

struct SymmetricCoinKl {
    double exact;
    double bound;
};

// KL(Bern(1/2 + a) || Bern(1/2 - a)) and its 16 a^2 upper bound.
inline SymmetricCoinKl symmetric_coin_kl(double alpha) {
    require(alpha >= 0.0 && alpha <= 0.25, "symmetric_coin_kl: alpha must lie in [0, 1/4]");
    if (alpha == 0.0) return {0.0, 0.0};
    return {2.0 * alpha * std::log((1.0 + 2.0 * alpha) / (1.0 - 2.0 * alpha)), 16.0 * alpha * alpha};
}

// KL(N(theta, s^2 I)^m || N(theta', s^2 I)^m) = m ||theta - theta'||^2 / (2 s^2).
inline double gaussian_product_kl(const Vec& theta, const Vec& theta_prime, double sigma, long long m) {
    require_dim(theta_prime.size(), theta.size(), "gaussian_product_kl");
    require(sigma > 0.0, "gaussian_product_kl: sigma must be positive");
    require(m >= 1, "gaussian_product_kl: m must be >= 1");
    return static_cast<double>(m) * dist2_sq(theta, theta_prime) / (2.0 * sigma * sigma);
}

// Fano: average error of any test over |V| hypotheses is at least
// 1 - (avg KL + ln 2) / ln |V|, clamped at zero.
inline double fano_error_lower_bound(double avg_kl, long long v_size) {
    require(v_size >= 2, "fano_error_lower_bound: |V| must be >= 2");
    require(avg_kl >= 0.0, "fano_error_lower_bound: avg_kl must be nonnegative");
    if (std::isinf(avg_kl)) return 0.0;
    return std::max(0.0, 1.0 - (avg_kl + std::log(2.0)) / std::log(static_cast<double>(v_size)));
}

// Minimum KL a (1 - delta, delta)-separating experiment must carry.
inline double two_point_kl_threshold(double delta) {
    require(delta > 0.0 && delta <= 0.25, "two_point_kl_threshold: delta must lie in (0, 1/4]");
    return 0.5 * std::log(1.0 / (2.0 * delta));
}

inline double pinsker_tv_bound(double kl) {
    require(kl >= 0.0, "pinsker_tv_bound: kl must be nonnegative");
    return std::sqrt(kl / 2.0);
}

// ---------------------------------------------------------------------------
// Sample-complexity formulas
// ---------------------------------------------------------------------------

struct LinfLowerBounds {
    double dimension_term;   // R^2 d / (512 eps^2)
    double confidence_term;  // R^2 ln(1/(2 delta)) / (32 eps^2)
    double combined;         // R^2 (d + ln(1/delta)) / (1024 eps^2)
    bool regime_ok;          // eps <= R/8, delta <= 1/4, R >= 1
};

inline LinfLowerBounds linf_lower_bounds(const BoundQuery& q) {
    q.validate();
    require(!q.R.is_inf(), "linf_lower_bounds: R must be finite");
    const double R = q.R.value();
    const double e2 = q.epsilon * q.epsilon;
    LinfLowerBounds out{};
    out.dimension_term = R * R * q.d / (512.0 * e2);
    out.confidence_term = R * R / (32.0 * e2) * std::log(1.0 / (2.0 * q.delta));
    out.combined = R * R / (1024.0 * e2) * (q.d + std::log(1.0 / q.delta));
    out.regime_ok = q.epsilon <= R / 8.0 && q.delta <= 0.25 && R >= 1.0;
    return out;
}

// Tent packing lower bound with rho = 8 eps / r:
// (1/96) rho^-2 (log|W| + ln(1/delta)) = r^2 (log|W| + ln(1/delta)) / (6144 eps^2).
inline double tent_lower_bound(double r, double epsilon, double delta, double log_W) {
    require(r > 0.0, "tent_lower_bound: r must be positive");
    require(epsilon > 0.0 && epsilon <= r / 16.0, "tent_lower_bound: need 0 < eps <= r/16");
    require(delta > 0.0 && delta <= 0.25, "tent_lower_bound: need 0 < delta <= 1/4");
    require(log_W > 0.0, "tent_lower_bound: log|W| must be positive");
    const double rho = 8.0 * epsilon / r;
    return (log_W + std::log(1.0 / delta)) / (96.0 * rho * rho);
}

inline double tent_rho(double r, double epsilon) { return 8.0 * epsilon / r; }

struct ScRates {
    double auc_rate;             // C sigma^2 floor(R)^2 d (d + ln 1/delta) / eps^2
    double erm_rate;             // C sigma^2 d min{kappa, floor(R)^2} (d + ln 1/delta) / eps^2
    double continuous_erm_rate;  // C sigma^2 (d + ln 1/delta) / (mu eps)
};

// Strongly convex / smooth rates up to the free multiplicative constant.
inline ScRates sc_rate_formulas(const BoundQuery& q, double constant = 1.0) {
    q.validate();
    require(q.mu && q.L && q.sigma, "sc_rate_formulas: mu, L and sigma are required");
    require(constant > 0.0, "sc_rate_formulas: constant must be positive");
    const double s2 = *q.sigma * *q.sigma;
    const double conf = q.d + std::log(1.0 / q.delta);
    const double e2 = q.epsilon * q.epsilon;
    const double kappa = *q.L / *q.mu;
    const IntOrInf fr = q.R.floor_r();
    const double fr2 = fr.is_inf() ? kInf : static_cast<double>(fr.value()) * static_cast<double>(fr.value());
    ScRates out{};
    out.auc_rate = fr.is_inf() ? kInf : constant * s2 * fr2 * q.d * conf / e2;
    out.erm_rate = constant * s2 * q.d * std::min(kappa, fr2) * conf / e2;
    out.continuous_erm_rate = constant * s2 * conf / (*q.mu * q.epsilon);
    return out;
}

}  // namespace scolab
