// families/common.hpp
#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "scolab/core.hpp"
#include "scolab/radius.hpp"
#include "scolab/rng.hpp"

namespace scolab {

// ---------------------------------------------------------------------------
// Feasible sets
// ---------------------------------------------------------------------------

struct AllSpace {};

struct BoxContinuous {
    RadiusSpec R;
};

// {-floorR, ..., floorR}^d, or Z^d when floorR is infinite.
struct BoxInteger {
    IntOrInf floorR;
};

// Euclidean ball; integer = true restricts to B_R^(2) ∩ Z^d.
struct L2Ball {
    RadiusSpec R;
    bool integer = false;
};

struct ExplicitSet {
    std::vector<Vec> points;
};

using Feasible = std::variant<AllSpace, BoxContinuous, BoxInteger, L2Ball, ExplicitSet>;

inline std::string feasible_name(const Feasible& f) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AllSpace>) return "all_space";
            else if constexpr (std::is_same_v<T, BoxContinuous>) return "box_continuous";
            else if constexpr (std::is_same_v<T, BoxInteger>) return "box_integer";
            else if constexpr (std::is_same_v<T, L2Ball>) return s.integer ? "l2_integer_ball" : "l2_ball";
            else return "explicit_set";
        },
        f);
}

inline constexpr double kFeasTol = 1e-12;

inline bool is_integral(const Vec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v) && v == std::round(v); });
}

inline bool contains(const Feasible& f, const Vec& x) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AllSpace>) {
                return true;
            } else if constexpr (std::is_same_v<T, BoxContinuous>) {
                return s.R.is_inf() || norm_inf(x) <= s.R.value() * (1.0 + kFeasTol);
            } else if constexpr (std::is_same_v<T, BoxInteger>) {
                return is_integral(x) && (s.floorR.is_inf() || norm_inf(x) <= s.floorR.as_double());
            } else if constexpr (std::is_same_v<T, L2Ball>) {
                if (s.R.is_inf()) return !s.integer || is_integral(x);
                if (s.integer) {
                    if (!is_integral(x)) return false;
                    return norm2_sq(x) <= static_cast<double>(s.R.floor_r2().value());
                }
                return std::sqrt(norm2_sq(x)) <= s.R.value() * (1.0 + kFeasTol);
            } else {
                return std::find(s.points.begin(), s.points.end(), x) != s.points.end();
            }
        },
        f);
}

// Euclidean projection; only convex sets are supported.
inline Vec project(const Feasible& f, Vec x) {
    if (const auto* box = std::get_if<BoxContinuous>(&f)) {
        if (!box->R.is_inf()) {
            const double R = box->R.value();
            for (auto& v : x) v = std::clamp(v, -R, R);
        }
        return x;
    }
    if (const auto* ball = std::get_if<L2Ball>(&f); ball && !ball->integer) {
        if (!ball->R.is_inf()) {
            const double n = std::sqrt(norm2_sq(x));
            if (n > ball->R.value())
                for (auto& v : x) v *= ball->R.value() / n;
        }
        return x;
    }
    if (std::holds_alternative<AllSpace>(f)) return x;
    throw Unsupported("project: feasible set '" + feasible_name(f) + "' is not convex");
}

struct Minimizer {
    Vec x;
    double value;
};

// Argmin over an explicit list, scanning in lexicographic order and keeping
// the first strict minimum.
template <class Objective>
Minimizer argmin_over(std::vector<Vec> points, Objective&& objective) {
    if (points.empty()) throw InvalidArgument("argmin_over: empty point list");
    std::sort(points.begin(), points.end());
    Minimizer best{points.front(), objective(points.front())};
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double v = objective(points[i]);
        if (v < best.value) best = {points[i], v};
    }
    return best;
}

// Integer argmin of (mu/2) x^2 - c x over [-F, F] (F may be infinite).
// Ties go to the smaller integer.
inline std::int64_t quad_integer_argmin(double c, double mu, IntOrInf F) {
    const double t = c / mu;
    double lo = std::floor(t), hi = std::ceil(t);
    if (!F.is_inf()) {
        const double f = F.as_double();
        lo = std::clamp(lo, -f, f);
        hi = std::clamp(hi, -f, f);
    }
    const auto val = [&](double x) { return 0.5 * mu * x * x - c * x; };
    return static_cast<std::int64_t>(val(hi) < val(lo) ? hi : lo);
}

// ---------------------------------------------------------------------------
// Summary for the Gaussian-mean families: the sample mean determines F_S.
// ---------------------------------------------------------------------------

struct GaussianSummary {
    Vec zbar;
    long long m = 0;
};

inline GaussianSummary summarize_gaussian(const std::vector<Vec>& samples, std::size_t d) {
    GaussianSummary s{Vec(d, 0.0), static_cast<long long>(samples.size())};
    for (const auto& z : samples) {
        require_dim(z.size(), d, "summarize");
        for (std::size_t i = 0; i < d; ++i) s.zbar[i] += z[i];
    }
    if (!samples.empty())
        for (auto& v : s.zbar) v /= static_cast<double>(samples.size());
    return s;
}

// Draws Z-bar directly from its law N(theta, sigma^2/m I).
inline GaussianSummary sample_gaussian_summary(const Vec& theta, double sigma, long long m, RngStream& rng) {
    GaussianSummary s{theta, m};
    const double sd = sigma / std::sqrt(static_cast<double>(m));
    for (auto& v : s.zbar) v += sd * rng.normal();
    return s;
}

inline Vec sample_gaussian(const Vec& theta, double sigma, RngStream& rng) {
    Vec z = theta;
    for (auto& v : z) v += sigma * rng.normal();
    return z;
}

// ---------------------------------------------------------------------------
// Family concepts
// ---------------------------------------------------------------------------

template <class F>
concept LossFamily = requires(const F& f, const Vec& x, const typename F::Sample& z, RngStream& rng,
                              const std::vector<typename F::Sample>& zs, const typename F::Summary& s,
                              const Feasible& feas) {
    { f.dim() } -> std::convertible_to<int>;
    { f.sample(rng) } -> std::same_as<typename F::Sample>;
    { f.loss(x, z) } -> std::convertible_to<double>;
    { f.population(x) } -> std::convertible_to<double>;
    { f.summarize(zs) } -> std::same_as<typename F::Summary>;
    { f.empirical(s, x) } -> std::convertible_to<double>;
    { f.population_minimizer(feas) } -> std::same_as<Minimizer>;
};

template <class F>
concept DifferentiableFamily = LossFamily<F> && requires(const F& f, const Vec& x, const typename F::Sample& z) {
    { f.gradient(x, z) } -> std::same_as<Vec>;
};

template <class F>
concept TwiceDifferentiableFamily = DifferentiableFamily<F> && requires(const F& f, const Vec& x,
                                                                        const typename F::Sample& z) {
    { f.hessian(x, z) } -> std::same_as<Eigen::MatrixXd>;
};

template <class F>
concept GaussianMeanFamily = LossFamily<F> && requires(const F& f, long long m, RngStream& rng) {
    { f.mean() } -> std::convertible_to<Vec>;
    { f.sigma() } -> std::convertible_to<double>;
    { f.sample_summary(m, rng) } -> std::same_as<GaussianSummary>;
};

template <LossFamily F>
std::vector<typename F::Sample> draw(const F& family, std::size_t m, RngStream& rng) {
    std::vector<typename F::Sample> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(family.sample(rng));
    return out;
}

// F_D(x) - min_X F_D. Rejects infeasible x.
template <LossFamily F>
double excess(const F& family, const Feasible& feasible, const Vec& x) {
    require_dim(x.size(), static_cast<std::size_t>(family.dim()), "excess");
    if (!contains(feasible, x)) throw InvalidArgument("excess: point is not feasible");
    return family.population(x) - family.population_minimizer(feasible).value;
}

template <LossFamily F>
double excess(const F& family, const Minimizer& opt, const Vec& x) {
    return family.population(x) - opt.value;
}

}  // namespace scolab
