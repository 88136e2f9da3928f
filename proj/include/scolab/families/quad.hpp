// families/quad.hpp
#pragma once

#include <vector>

#include "scolab/families/common.hpp"

namespace scolab {

// f(x; Z) = (mu/2)||x||^2 - <Z, x>, Z ~ N(theta, sigma^2 I).
// F(x) = (mu/2)||x||^2 - <theta, x>; the centered increment is -<Z - theta, x - y>.
class QuadGaussianFamily {
public:
    using Sample = Vec;
    using Summary = GaussianSummary;
    static constexpr const char* tag = "quad";
    static constexpr bool anchored = true;

    QuadGaussianFamily(double mu, double sigma, Vec theta) : mu_(mu), sigma_(sigma), theta_(std::move(theta)) {
        require(!theta_.empty(), "QuadGaussianFamily: d must be >= 1");
        require(mu_ > 0.0, "QuadGaussianFamily: mu must be positive");
        require(sigma_ >= 0.0, "QuadGaussianFamily: sigma must be nonnegative");
    }

    int dim() const { return static_cast<int>(theta_.size()); }
    double mu() const { return mu_; }
    double sigma() const { return sigma_; }
    const Vec& mean() const { return theta_; }
    double smoothness() const { return mu_; }

    Sample sample(RngStream& rng) const { return sample_gaussian(theta_, sigma_, rng); }
    GaussianSummary sample_summary(long long m, RngStream& rng) const {
        return sample_gaussian_summary(theta_, sigma_, m, rng);
    }

    double loss(const Vec& x, const Sample& z) const {
        require_dim(x.size(), theta_.size(), "QuadGaussianFamily::loss");
        return 0.5 * mu_ * norm2_sq(x) - dot(z, x);
    }

    Vec gradient(const Vec& x, const Sample& z) const {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = mu_ * x[i] - z[i];
        return g;
    }

    Eigen::MatrixXd hessian(const Vec& x, const Sample&) const {
        return mu_ * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(x.size()));
    }

    double population(const Vec& x) const {
        require_dim(x.size(), theta_.size(), "QuadGaussianFamily::population");
        return 0.5 * mu_ * norm2_sq(x) - dot(theta_, x);
    }

    Summary summarize(const std::vector<Sample>& zs) const { return summarize_gaussian(zs, theta_.size()); }

    double empirical(const Summary& s, const Vec& x) const { return 0.5 * mu_ * norm2_sq(x) - dot(s.zbar, x); }

    Minimizer population_minimizer(const Feasible& f) const { return quadratic_minimizer(theta_, f); }

    // Minimizer of (mu/2)||x||^2 - <c, x> over f, shared with the ERM solvers.
    Minimizer quadratic_minimizer(const Vec& c, const Feasible& f) const {
        const auto objective = [&](const Vec& x) { return 0.5 * mu_ * norm2_sq(x) - dot(c, x); };
        Vec x(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) x[i] = c[i] / mu_;
        if (std::holds_alternative<AllSpace>(f)) return {x, objective(x)};
        if (std::holds_alternative<BoxContinuous>(f)) {
            x = project(f, x);
            return {x, objective(x)};
        }
        if (const auto* ball = std::get_if<L2Ball>(&f); ball && !ball->integer) {
            x = project(f, x);
            return {x, objective(x)};
        }
        if (const auto* box = std::get_if<BoxInteger>(&f)) {
            for (std::size_t i = 0; i < c.size(); ++i)
                x[i] = static_cast<double>(quad_integer_argmin(c[i], mu_, box->floorR));
            return {x, objective(x)};
        }
        if (const auto* ex = std::get_if<ExplicitSet>(&f)) return argmin_over(ex->points, objective);
        throw Unsupported(std::string("QuadGaussianFamily: unsupported feasible set ") + feasible_name(f));
    }

private:
    double mu_;
    double sigma_;
    Vec theta_;
};

// The 1 <= kappa < 64 hard instance: theta = (mu/2) 1 + gamma b with
// gamma <= mu/72, so the integer minimizer is 1 where b_j = +1 and 0 where b_j = -1.
class SmallKappaQuadFamily {
public:
    using Sample = Vec;
    using Summary = GaussianSummary;
    static constexpr const char* tag = "smallkappa";
    static constexpr bool anchored = true;

    SmallKappaQuadFamily(double mu, double gamma, std::vector<int> b, double sigma)
        : gamma_(gamma), b_(std::move(b)), quad_(mu, sigma, make_theta(mu, gamma, b_)) {
        require(gamma > 0.0 && gamma <= mu / 72.0, "SmallKappaQuadFamily: gamma must lie in (0, mu/72]");
    }

    int dim() const { return quad_.dim(); }
    double mu() const { return quad_.mu(); }
    double gamma() const { return gamma_; }
    double sigma() const { return quad_.sigma(); }
    const std::vector<int>& hidden() const { return b_; }
    const Vec& mean() const { return quad_.mean(); }
    const QuadGaussianFamily& as_quad() const { return quad_; }

    Sample sample(RngStream& rng) const { return quad_.sample(rng); }
    GaussianSummary sample_summary(long long m, RngStream& rng) const { return quad_.sample_summary(m, rng); }
    double loss(const Vec& x, const Sample& z) const { return quad_.loss(x, z); }
    Vec gradient(const Vec& x, const Sample& z) const { return quad_.gradient(x, z); }
    Eigen::MatrixXd hessian(const Vec& x, const Sample& z) const { return quad_.hessian(x, z); }
    double population(const Vec& x) const { return quad_.population(x); }
    Summary summarize(const std::vector<Sample>& zs) const { return quad_.summarize(zs); }
    double empirical(const Summary& s, const Vec& x) const { return quad_.empirical(s, x); }

    Minimizer population_minimizer(const Feasible& f) const {
        if (const auto* box = std::get_if<BoxInteger>(&f)) {
            require(box->floorR.is_inf() || box->floorR.value() >= 1, "SmallKappaQuadFamily: box must contain {0,1}^d");
            Vec x(b_.size());
            for (std::size_t j = 0; j < b_.size(); ++j) x[j] = b_[j] == 1 ? 1.0 : 0.0;
            return {x, population(x)};
        }
        return quad_.population_minimizer(f);
    }

    // Coordinate decoder: +1 when x_j >= 1, -1 otherwise.
    std::vector<int> decode(const Vec& x) const {
        std::vector<int> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] >= 1.0 ? 1 : -1;
        return out;
    }

private:
    static Vec make_theta(double mu, double gamma, const std::vector<int>& b) {
        require(!b.empty(), "SmallKappaQuadFamily: d must be >= 1");
        Vec t(b.size());
        for (std::size_t j = 0; j < b.size(); ++j) {
            require(b[j] == 1 || b[j] == -1, "SmallKappaQuadFamily: hidden signs must be +-1");
            t[j] = 0.5 * mu + gamma * b[j];
        }
        return t;
    }

    double gamma_;
    std::vector<int> b_;
    QuadGaussianFamily quad_;
};

}  // namespace scolab
