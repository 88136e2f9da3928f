// families/gadget.hpp
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "scolab/families/common.hpp"

namespace scolab {

// Two-variable blocks
//   mu (x - tau y)^2 + (L/4)(y - 1/2)^2 - <Z, (x, y)>
// with an odd leftover coordinate (mu/2) x_d^2 - Z_d x_d, Z ~ N(theta_b, sigma^2 I),
// theta_b = sum_j (gamma b_j / tau) e_{2j-1}.
class BlockGadgetFamily {
public:
    using Sample = Vec;
    using Summary = GaussianSummary;
    static constexpr const char* tag = "gadget";
    static constexpr bool anchored = false;

    BlockGadgetFamily(int d, double mu, double L, std::int64_t tau, double gamma, std::vector<int> b, double sigma)
        : d_(d), mu_(mu), L_(L), tau_(tau), gamma_(gamma), b_(std::move(b)), sigma_(sigma) {
        require(d >= 2, "BlockGadgetFamily: d must be >= 2");
        require(mu > 0.0 && L > 0.0, "BlockGadgetFamily: mu and L must be positive");
        require(L >= 64.0 * mu, "BlockGadgetFamily: need kappa = L/mu >= 64");
        require(tau >= 1, "BlockGadgetFamily: tau must be a positive integer");
        require(16.0 * static_cast<double>(tau * tau) * mu <= L, "BlockGadgetFamily: need tau^2 <= kappa/16");
        require(gamma > 0.0 && gamma <= mu / 24.0, "BlockGadgetFamily: gamma must lie in (0, mu/24]");
        require(sigma >= 0.0, "BlockGadgetFamily: sigma must be nonnegative");
        require(b_.size() == static_cast<std::size_t>(d / 2), "BlockGadgetFamily: need floor(d/2) hidden signs");
        for (int v : b_) require(v == 1 || v == -1, "BlockGadgetFamily: hidden signs must be +-1");
        theta_.assign(static_cast<std::size_t>(d), 0.0);
        for (std::size_t j = 0; j < b_.size(); ++j) theta_[2 * j] = gamma_ * b_[j] / static_cast<double>(tau_);
    }

    // tau = max(1, floor(min(sqrt(kappa), floor(R)) / 4)).
    static std::int64_t default_tau(double kappa, IntOrInf floorR) {
        double s = std::sqrt(kappa);
        if (!floorR.is_inf()) s = std::min(s, floorR.as_double());
        return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(s / 4.0)));
    }

    // gamma = eps / (c1 * floor(d/2)).
    static double gamma_for(double epsilon, int d, double c1) {
        require(d >= 2 && c1 > 0.0 && epsilon > 0.0, "BlockGadgetFamily::gamma_for: bad arguments");
        return epsilon / (c1 * static_cast<double>(d / 2));
    }

    int dim() const { return d_; }
    int blocks() const { return d_ / 2; }
    double mu() const { return mu_; }
    double L() const { return L_; }
    std::int64_t tau() const { return tau_; }
    double gamma() const { return gamma_; }
    double sigma() const { return sigma_; }
    double smoothness() const { return L_; }
    const std::vector<int>& hidden() const { return b_; }
    const Vec& mean() const { return theta_; }

    Sample sample(RngStream& rng) const { return sample_gaussian(theta_, sigma_, rng); }
    GaussianSummary sample_summary(long long m, RngStream& rng) const {
        return sample_gaussian_summary(theta_, sigma_, m, rng);
    }

    // Deterministic part of one block.
    double block_quadratic(double x, double y) const {
        const double p = x - static_cast<double>(tau_) * y;
        return mu_ * p * p + 0.25 * L_ * (y - 0.5) * (y - 0.5);
    }

    double deterministic(const Vec& x) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "BlockGadgetFamily");
        double v = 0.0;
        for (int j = 0; j < blocks(); ++j) v += block_quadratic(x[2 * j], x[2 * j + 1]);
        if (d_ % 2 == 1) v += 0.5 * mu_ * x.back() * x.back();
        return v;
    }

    double loss(const Vec& x, const Sample& z) const { return deterministic(x) - dot(z, x); }

    Vec gradient(const Vec& x, const Sample& z) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "BlockGadgetFamily::gradient");
        Vec g(x.size());
        const double t = static_cast<double>(tau_);
        for (int j = 0; j < blocks(); ++j) {
            const double p = x[2 * j] - t * x[2 * j + 1];
            g[2 * j] = 2.0 * mu_ * p - z[2 * j];
            g[2 * j + 1] = -2.0 * mu_ * t * p + 0.5 * L_ * (x[2 * j + 1] - 0.5) - z[2 * j + 1];
        }
        if (d_ % 2 == 1) g.back() = mu_ * x.back() - z.back();
        return g;
    }

    Eigen::MatrixXd hessian(const Vec&, const Sample&) const {
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d_, d_);
        const double t = static_cast<double>(tau_);
        for (int j = 0; j < blocks(); ++j) {
            H(2 * j, 2 * j) = 2.0 * mu_;
            H(2 * j, 2 * j + 1) = H(2 * j + 1, 2 * j) = -2.0 * mu_ * t;
            H(2 * j + 1, 2 * j + 1) = 2.0 * mu_ * t * t + 0.5 * L_;
        }
        if (d_ % 2 == 1) H(d_ - 1, d_ - 1) = mu_;
        return H;
    }

    double population(const Vec& x) const { return deterministic(x) - dot(theta_, x); }

    // phi_b(x, y) for a single block.
    double phi(int b, double x, double y) const {
        return block_quadratic(x, y) - gamma_ * b * x / static_cast<double>(tau_);
    }

    Summary summarize(const std::vector<Sample>& zs) const { return summarize_gaussian(zs, theta_.size()); }

    double empirical(const Summary& s, const Vec& x) const { return deterministic(x) - dot(s.zbar, x); }

    // Unconstrained minimizer of a block with linear term -(c1 x + c2 y).
    std::array<double, 2> block_continuous_argmin(double c1, double c2) const {
        const double y = 0.5 + 2.0 * (c2 + static_cast<double>(tau_) * c1) / L_;
        return {static_cast<double>(tau_) * y + c1 / (2.0 * mu_), y};
    }

    // Same block over the square [-R, R]^2: the interior stationary point if
    // feasible, else the best of the four edge minimizers.
    std::array<double, 2> block_box_argmin(double c1, double c2, double R) const {
        const auto q = [&](double x, double y) { return block_quadratic(x, y) - c1 * x - c2 * y; };
        auto u = block_continuous_argmin(c1, c2);
        if (std::abs(u[0]) <= R && std::abs(u[1]) <= R) return u;
        const double t = static_cast<double>(tau_);
        std::array<double, 2> best{};
        double best_v = kInf;
        const auto consider = [&](double x, double y) {
            const double v = q(x, y);
            if (v < best_v) {
                best_v = v;
                best = {x, y};
            }
        };
        for (double x : {-R, R}) {
            const double y = (2.0 * mu_ * t * x + 0.25 * L_ + c2) / (2.0 * mu_ * t * t + 0.5 * L_);
            consider(x, std::clamp(y, -R, R));
        }
        for (double y : {-R, R}) consider(std::clamp(t * y + c1 / (2.0 * mu_), -R, R), y);
        return best;
    }

    Minimizer population_minimizer(const Feasible& f) const {
        Vec x(static_cast<std::size_t>(d_), 0.0);
        if (const auto* box = std::get_if<BoxInteger>(&f)) {
            require(box->floorR.is_inf() || box->floorR.value() >= tau_, "BlockGadgetFamily: need floor(R) >= tau");
            for (int j = 0; j < blocks(); ++j) {
                if (b_[static_cast<std::size_t>(j)] == 1) {
                    x[2 * j] = static_cast<double>(tau_);
                    x[2 * j + 1] = 1.0;
                }
            }
            return {x, population(x)};
        }
        if (std::holds_alternative<AllSpace>(f) ||
            (std::holds_alternative<BoxContinuous>(f) && std::get<BoxContinuous>(f).R.is_inf())) {
            for (int j = 0; j < blocks(); ++j) {
                const auto u = block_continuous_argmin(theta_[2 * j], 0.0);
                x[2 * j] = u[0];
                x[2 * j + 1] = u[1];
            }
            return {x, population(x)};
        }
        if (const auto* box = std::get_if<BoxContinuous>(&f)) {
            for (int j = 0; j < blocks(); ++j) {
                const auto u = block_box_argmin(theta_[2 * j], 0.0, box->R.value());
                x[2 * j] = u[0];
                x[2 * j + 1] = u[1];
            }
            return {x, population(x)};
        }
        if (const auto* ex = std::get_if<ExplicitSet>(&f))
            return argmin_over(ex->points, [this](const Vec& v) { return population(v); });
        throw Unsupported(std::string("BlockGadgetFamily: unsupported feasible set ") + feasible_name(f));
    }

    // Block decoder: +1 exactly at (tau, 1), -1 elsewhere.
    std::vector<int> decode(const Vec& x) const {
        std::vector<int> out(static_cast<std::size_t>(blocks()));
        for (int j = 0; j < blocks(); ++j)
            out[static_cast<std::size_t>(j)] =
                (x[2 * j] == static_cast<double>(tau_) && x[2 * j + 1] == 1.0) ? 1 : -1;
        return out;
    }

private:
    int d_;
    double mu_;
    double L_;
    std::int64_t tau_;
    double gamma_;
    std::vector<int> b_;
    double sigma_;
    Vec theta_;
};

// ---------------------------------------------------------------------------
// Exact window check of a single block in rational arithmetic.
// ---------------------------------------------------------------------------

struct GadgetExactReport {
    bool unique_minimizers = true;   // (tau,1) for b=+1, (0,0) for b=-1
    bool opposite_gap_exact = true;  // opposite vertex exceeds the minimum by exactly gamma
    bool others_gap = true;          // every other window point exceeds it by >= 3 gamma
    bool decoder_bound = true;       // excess >= gamma/24 (1 - b bhat)
    bool det_exact = true;           // det H = mu L
    bool trace_bound = true;         // tr H <= L
    Rational det;
    Rational trace;
    Rational min_other_gap[2];       // index 0: b = -1, index 1: b = +1
    std::vector<std::string> violations;

    bool ok() const {
        return unique_minimizers && opposite_gap_exact && others_gap && decoder_bound && det_exact && trace_bound;
    }
};

inline Rational gadget_phi_exact(const Rational& mu, const Rational& L, std::int64_t tau, const Rational& gamma,
                                 int b, std::int64_t x, std::int64_t y) {
    const Rational p = Rational(x) - Rational(tau) * Rational(y);
    const Rational h = Rational(y) - Rational(1, 2);
    return mu * p * p + L / Rational(4) * h * h - gamma * Rational(b) * Rational(x) / Rational(tau);
}

// Enumerates {-4 tau..4 tau} x {-4..4} for both signs.
inline GadgetExactReport verify_gadget_exact(const Rational& mu, const Rational& L, std::int64_t tau,
                                             const Rational& gamma) {
    require(mu > Rational(0) && L >= Rational(64) * mu, "verify_gadget_exact: need mu > 0 and kappa >= 64");
    require(tau >= 1 && Rational(16 * tau * tau) * mu <= L, "verify_gadget_exact: need tau^2 <= kappa/16");
    require(gamma > Rational(0) && gamma <= mu / Rational(24), "verify_gadget_exact: need 0 < gamma <= mu/24");

    GadgetExactReport rep;
    rep.det = Rational(2) * mu * (Rational(2) * mu * Rational(tau * tau) + L / Rational(2)) -
              Rational(4) * mu * mu * Rational(tau * tau);
    rep.trace = Rational(2) * mu + Rational(2) * mu * Rational(tau * tau) + L / Rational(2);
    rep.det_exact = rep.det == mu * L;
    rep.trace_bound = rep.trace <= L;
    if (!rep.det_exact) rep.violations.push_back("determinant " + rep.det.str() + " != mu L");
    if (!rep.trace_bound) rep.violations.push_back("trace " + rep.trace.str() + " > L");

    for (int b : {-1, 1}) {
        const std::int64_t mx = b == 1 ? tau : 0, my = b == 1 ? 1 : 0;
        const std::int64_t ox = b == 1 ? 0 : tau, oy = b == 1 ? 0 : 1;
        const Rational vmin = gadget_phi_exact(mu, L, tau, gamma, b, mx, my);
        bool first_other = true;
        Rational& min_gap = rep.min_other_gap[b == 1 ? 1 : 0];
        for (std::int64_t x = -4 * tau; x <= 4 * tau; ++x) {
            for (std::int64_t y = -4; y <= 4; ++y) {
                if (x == mx && y == my) continue;
                const Rational gap = gadget_phi_exact(mu, L, tau, gamma, b, x, y) - vmin;
                const std::string at = "b=" + std::to_string(b) + " (" + std::to_string(x) + "," + std::to_string(y) + ")";
                if (gap <= Rational(0)) {
                    rep.unique_minimizers = false;
                    rep.violations.push_back("not strictly above the minimum at " + at);
                }
                const int bhat = (x == tau && y == 1) ? 1 : -1;
                if (gap < gamma / Rational(24) * Rational(1 - b * bhat)) {
                    rep.decoder_bound = false;
                    rep.violations.push_back("decoder bound fails at " + at);
                }
                if (x == ox && y == oy) {
                    if (!(gap == gamma)) {
                        rep.opposite_gap_exact = false;
                        rep.violations.push_back("opposite-vertex gap " + gap.str() + " != gamma at " + at);
                    }
                    continue;
                }
                if (first_other || gap < min_gap) min_gap = gap;
                first_other = false;
                if (gap < Rational(3) * gamma) {
                    rep.others_gap = false;
                    rep.violations.push_back("gap " + gap.str() + " < 3 gamma at " + at);
                }
            }
        }
    }
    return rep;
}

}  // namespace scolab
