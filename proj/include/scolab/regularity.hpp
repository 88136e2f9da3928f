// regularity.hpp
//
// Randomized checks of the declared regularity of each family: Lipschitz
// ratios, analytic vs finite-difference derivatives, Hessian spectra,
// anchoring, and the centered-increment law.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "scolab/families.hpp"
#include "scolab/lattice.hpp"

namespace scolab {

struct RegularityProfile {
    std::optional<double> lipschitz;  // declared constant for the data-dependent part
    Norm lipschitz_norm = Norm::l2;
    double ridge = 0.0;               // (ridge/2)||x||^2 removed before the Lipschitz check
    std::optional<double> hess_lo;    // declared eigenvalue bounds
    std::optional<double> hess_hi;
    bool anchored = false;
    bool gaussian_increment = false;
    std::vector<Vec> point_anchors;   // test points are anchor + U[-spread, spread]^d
    double spread = 1.0;
};

inline RegularityProfile regularity_profile(const CoinLinearFamily& f) {
    RegularityProfile p;
    p.lipschitz = 1.0;
    p.lipschitz_norm = Norm::linf;
    p.anchored = true;
    p.point_anchors = {Vec(static_cast<std::size_t>(f.dim()), 0.0)};
    p.spread = f.R();
    return p;
}

inline RegularityProfile regularity_profile(const TentFamily& f) {
    RegularityProfile p;
    p.lipschitz = 1.0;
    p.anchored = true;
    p.point_anchors = f.centers();
    p.spread = f.r() / 3.0;
    return p;
}

inline RegularityProfile regularity_profile(const QuadGaussianFamily& f) {
    RegularityProfile p;
    p.hess_lo = p.hess_hi = f.mu();
    p.anchored = true;
    p.gaussian_increment = true;
    p.point_anchors = {Vec(static_cast<std::size_t>(f.dim()), 0.0)};
    p.spread = 3.0;
    return p;
}

inline RegularityProfile regularity_profile(const SmallKappaQuadFamily& f) { return regularity_profile(f.as_quad()); }

inline RegularityProfile regularity_profile(const BlockGadgetFamily& f) {
    RegularityProfile p;
    p.hess_lo = f.mu();
    p.hess_hi = f.L();
    p.gaussian_increment = true;
    p.point_anchors = {Vec(static_cast<std::size_t>(f.dim()), 0.0)};
    p.spread = 2.0 * static_cast<double>(f.tau());
    return p;
}

inline RegularityProfile regularity_profile(const LogisticFamily& f) {
    RegularityProfile p;
    p.lipschitz = f.M();
    p.ridge = f.mu();
    p.hess_lo = f.mu();
    p.hess_hi = f.smoothness();
    p.point_anchors = {Vec(static_cast<std::size_t>(f.dim()), 0.0)};
    p.spread = 3.0;
    return p;
}

struct RegularityReport {
    std::string family;
    long long checks = 0;
    double max_lipschitz_ratio = 0.0;
    double max_gradient_rel_error = 0.0;
    double max_hessian_rel_error = 0.0;
    double min_eigenvalue = kInf;
    double max_eigenvalue = -kInf;
    double min_variance_ratio = kInf;
    double max_variance_ratio = -kInf;
    double max_increment_ratio = 0.0;  // |centered increment| / (2 G ||x - y||)
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

struct RegularityOptions {
    int trials = 200;                  // sampled (x, y, z) triples
    int increment_pairs = 3;           // (x, y) pairs for the variance check
    long long increment_draws = 100000;
    int increment_bound_pairs = 3;     // (x, y) pairs for the bounded-increment check
    int increment_bound_draws = 2000;
    double fd_rel_tol = 1e-5;
    double eig_rel_tol = 1e-9;
    double variance_lo = 0.9;
    double variance_hi = 1.1;
};

namespace detail {

inline double norm_of(const Vec& v, Norm n) { return n == Norm::l2 ? std::sqrt(norm2_sq(v)) : norm_inf(v); }

inline Vec random_point(const RegularityProfile& p, RngStream& rng) {
    Vec x = p.point_anchors[rng.uniform_int(p.point_anchors.size())];
    for (auto& v : x) v += p.spread * (2.0 * rng.uniform01() - 1.0);
    return x;
}

inline double fd_step(const Vec& x) { return 1e-4 * (1.0 + std::sqrt(norm2_sq(x))); }

}  // namespace detail

template <LossFamily F>
RegularityReport verify_regularity(const F& family, std::uint64_t seed, const RegularityOptions& opt = {}) {
    const RegularityProfile prof = regularity_profile(family);
    RegularityReport rep;
    rep.family = F::tag;
    RngStream rng(seed);
    const auto d = static_cast<std::size_t>(family.dim());
    const auto fail = [&](std::string msg) {
        if (rep.violations.size() < 20) rep.violations.push_back(std::move(msg));
    };
    const auto data_part = [&](const Vec& x, const typename F::Sample& z) {
        return family.loss(x, z) - 0.5 * prof.ridge * norm2_sq(x);
    };

    for (int t = 0; t < opt.trials; ++t) {
        const auto z = family.sample(rng);
        Vec x = detail::random_point(prof, rng);
        Vec y = detail::random_point(prof, rng);
        // Every other trial uses an axis-aligned pair.
        if (t % 2 == 1) {
            y = x;
            y[rng.uniform_int(d)] += prof.spread * (2.0 * rng.uniform01() - 1.0);
        }

        if (prof.anchored) {
            ++rep.checks;
            const double f0 = family.loss(Vec(d, 0.0), z);
            if (f0 != 0.0) fail("anchoring: f(0; z) = " + std::to_string(f0));
        }

        if (prof.lipschitz) {
            const double dist = detail::norm_of([&] {
                Vec v(d);
                for (std::size_t i = 0; i < d; ++i) v[i] = x[i] - y[i];
                return v;
            }(), prof.lipschitz_norm);
            if (dist > 0.0) {
                ++rep.checks;
                const double ratio = std::abs(data_part(x, z) - data_part(y, z)) / dist;
                rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, ratio);
                if (ratio > *prof.lipschitz * (1.0 + 1e-12))
                    fail("Lipschitz ratio " + std::to_string(ratio) + " exceeds " + std::to_string(*prof.lipschitz));
            }
        }

        if constexpr (DifferentiableFamily<F>) {
            ++rep.checks;
            const Vec g = family.gradient(x, z);
            const double h = detail::fd_step(x);
            double err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                Vec xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const double fd = (family.loss(xp, z) - family.loss(xm, z)) / (2.0 * h);
                err += (fd - g[i]) * (fd - g[i]);
                scale += g[i] * g[i];
            }
            const double rel = std::sqrt(err) / std::max(1.0, std::sqrt(scale));
            rep.max_gradient_rel_error = std::max(rep.max_gradient_rel_error, rel);
            if (rel > opt.fd_rel_tol) fail("gradient finite-difference error " + std::to_string(rel));
        }

        if constexpr (TwiceDifferentiableFamily<F>) {
            ++rep.checks;
            const Eigen::MatrixXd H = family.hessian(x, z);
            Eigen::MatrixXd Hfd(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            const double h = detail::fd_step(x);
            for (std::size_t j = 0; j < d; ++j) {
                Vec xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const Vec gp = family.gradient(xp, z), gm = family.gradient(xm, z);
                for (std::size_t i = 0; i < d; ++i)
                    Hfd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (gp[i] - gm[i]) / (2.0 * h);
            }
            const double rel = (Hfd - H).norm() / std::max(1.0, H.norm());
            rep.max_hessian_rel_error = std::max(rep.max_hessian_rel_error, rel);
            if (rel > opt.fd_rel_tol) fail("Hessian finite-difference error " + std::to_string(rel));

            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
            rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
            rep.max_eigenvalue = std::max(rep.max_eigenvalue, hi);
            if (prof.hess_lo && lo < *prof.hess_lo * (1.0 - opt.eig_rel_tol))
                fail("Hessian eigenvalue " + std::to_string(lo) + " below " + std::to_string(*prof.hess_lo));
            if (prof.hess_hi && hi > *prof.hess_hi * (1.0 + opt.eig_rel_tol))
                fail("Hessian eigenvalue " + std::to_string(hi) + " above " + std::to_string(*prof.hess_hi));
        }
    }

    // Centered increment f(x;Z) - f(y;Z) - F(x) + F(y).
    if constexpr (GaussianMeanFamily<F>) {
        if (prof.gaussian_increment) {
            for (int k = 0; k < opt.increment_pairs; ++k) {
                const Vec x = detail::random_point(prof, rng), y = detail::random_point(prof, rng);
                const double dF = family.population(x) - family.population(y);
                const double target = family.sigma() * family.sigma() * dist2_sq(x, y);
                double s = 0.0, s2 = 0.0;
                for (long long i = 0; i < opt.increment_draws; ++i) {
                    const auto z = family.sample(rng);
                    const double inc = family.loss(x, z) - family.loss(y, z) - dF;
                    s += inc;
                    s2 += inc * inc;
                }
                const double n = static_cast<double>(opt.increment_draws);
                const double var = (s2 - s * s / n) / (n - 1.0);
                ++rep.checks;
                if (target == 0.0) {
                    if (var > 1e-18) fail("increment variance " + std::to_string(var) + " for zero noise");
                    continue;
                }
                const double ratio = var / target;
                rep.min_variance_ratio = std::min(rep.min_variance_ratio, ratio);
                rep.max_variance_ratio = std::max(rep.max_variance_ratio, ratio);
                if (ratio < opt.variance_lo || ratio > opt.variance_hi)
                    fail("increment variance ratio " + std::to_string(ratio) + " outside [" +
                         std::to_string(opt.variance_lo) + ", " + std::to_string(opt.variance_hi) + "]");
            }
        }
    }

    // Lipschitz families: the centered increment is bounded by 2 G ||x - y||.
    if (prof.lipschitz) {
        for (int k = 0; k < opt.increment_bound_pairs; ++k) {
            const Vec x = detail::random_point(prof, rng), y = detail::random_point(prof, rng);
            Vec diff(d);
            for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - y[i];
            const double bound = 2.0 * *prof.lipschitz * detail::norm_of(diff, prof.lipschitz_norm);
            if (bound == 0.0) continue;
            const double dF = family.population(x) - family.population(y);
            for (int i = 0; i < opt.increment_bound_draws; ++i) {
                const auto z = family.sample(rng);
                const double inc = std::abs(family.loss(x, z) - family.loss(y, z) - dF);
                ++rep.checks;
                rep.max_increment_ratio = std::max(rep.max_increment_ratio, inc / bound);
                if (inc > bound * (1.0 + 1e-9)) fail("centered increment exceeds 2 G ||x - y||");
            }
        }
    }
    return rep;
}

}  // namespace scolab
