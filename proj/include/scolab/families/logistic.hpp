// families/logistic.hpp
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "scolab/families/common.hpp"

namespace scolab {

struct LogisticSample {
    Vec a;
    int b = 1;
};

// log(1 + exp(t)) without overflow.
inline double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

inline double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// Ridge-regularized logistic loss (mu/2)||x||^2 + log(1 + exp(-b <a, x>)).
// Features are uniform on the radius-M sphere; the clean label is
// sign(<a, w0>) (ties to +1), flipped with probability eta.
class LogisticFamily {
public:
    using Sample = LogisticSample;
    using Summary = std::vector<LogisticSample>;  // no smaller sufficient statistic
    static constexpr const char* tag = "logistic";
    static constexpr bool anchored = false;  // f(0; z) = log 2

    LogisticFamily(int d, double mu, double M, double eta, Vec w0 = {})
        : d_(d), mu_(mu), M_(M), eta_(eta), w0_(std::move(w0)) {
        require(d >= 1, "LogisticFamily: d must be >= 1");
        require(mu > 0.0, "LogisticFamily: mu must be positive");
        require(M > 0.0, "LogisticFamily: M must be positive");
        require(eta >= 0.0 && eta < 0.5, "LogisticFamily: eta must lie in [0, 1/2)");
        if (w0_.empty()) {
            w0_.assign(static_cast<std::size_t>(d), 0.0);
            w0_[0] = 1.0;
        }
        require_dim(w0_.size(), static_cast<std::size_t>(d), "LogisticFamily: w0");
        const double n = std::sqrt(norm2_sq(w0_));
        require(n > 0.0, "LogisticFamily: w0 must be nonzero");
        // Already unit up to rounding: keep as is so serialization round-trips.
        if (std::abs(n - 1.0) > 4e-16)
            for (auto& v : w0_) v /= n;
    }

    int dim() const { return d_; }
    double mu() const { return mu_; }
    double M() const { return M_; }
    double eta() const { return eta_; }
    const Vec& w0() const { return w0_; }
    double smoothness() const { return mu_ + 0.25 * M_ * M_; }

    Sample sample(RngStream& rng) const {
        Vec a(static_cast<std::size_t>(d_));
        double n2 = 0.0;
        do {
            for (auto& v : a) v = rng.normal();
            n2 = norm2_sq(a);
        } while (n2 == 0.0);
        const double s = M_ / std::sqrt(n2);
        for (auto& v : a) v *= s;
        int b = dot(a, w0_) >= 0.0 ? 1 : -1;
        if (rng.bernoulli(eta_)) b = -b;
        return {std::move(a), b};
    }

    double loss(const Vec& x, const Sample& z) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "LogisticFamily::loss");
        return 0.5 * mu_ * norm2_sq(x) + softplus(-z.b * dot(z.a, x));
    }

    Vec gradient(const Vec& x, const Sample& z) const {
        const double c = -z.b * sigmoid(-z.b * dot(z.a, x));
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = mu_ * x[i] + c * z.a[i];
        return g;
    }

    Eigen::MatrixXd hessian(const Vec& x, const Sample& z) const {
        const double s = sigmoid(dot(z.a, x));
        const Eigen::Map<const Eigen::VectorXd> a(z.a.data(), static_cast<Eigen::Index>(z.a.size()));
        Eigen::MatrixXd H = s * (1.0 - s) * (a * a.transpose());
        H.diagonal().array() += mu_;
        return H;
    }

    // E over the data law by quadrature. Write x = alpha w0 + beta e with e
    // a unit vector orthogonal to w0, and a/M = t w0 + sqrt(1 - t^2) s e + (rest).
    // t = sin(psi) has density proportional to cos^{d-2}(psi); s = cos(phi)
    // has density proportional to sin^{d-3}(phi) for d >= 3 and is +-1 for d = 2.
    double population(const Vec& x) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "LogisticFamily::population");
        const double alpha = dot(x, w0_);
        const double beta = std::sqrt(std::max(0.0, norm2_sq(x) - alpha * alpha));
        const auto expected_softplus = [&](double u, int clean) {
            // u = <a, x>
            return (1.0 - eta_) * softplus(-clean * u) + eta_ * softplus(clean * u);
        };
        double risk;
        if (d_ == 1) {
            risk = 0.5 * (expected_softplus(M_ * alpha, 1) + expected_softplus(-M_ * alpha, -1));
        } else {
            using Q = boost::math::quadrature::gauss<double, 30>;
            constexpr double half_pi = std::numbers::pi / 2.0;
            constexpr int panels = 4;
            const auto over_psi = [&](auto&& inner) {
                double num = 0.0, den = 0.0;
                for (int side : {-1, 1}) {
                    for (int k = 0; k < panels; ++k) {
                        const double lo = half_pi * k / panels, hi = half_pi * (k + 1) / panels;
                        const auto w = [&](double psi) { return std::pow(std::cos(psi), d_ - 2); };
                        num += Q::integrate([&](double psi) { return w(psi) * inner(side * std::sin(psi), side); },
                                            lo, hi);
                        den += Q::integrate(w, lo, hi);
                    }
                }
                return num / den;
            };
            if (d_ == 2) {
                risk = over_psi([&](double t, int clean) {
                    const double c = std::sqrt(std::max(0.0, 1.0 - t * t));
                    return 0.5 * (expected_softplus(M_ * (t * alpha + c * beta), clean) +
                                  expected_softplus(M_ * (t * alpha - c * beta), clean));
                });
            } else {
                const auto ws = [&](double phi) { return std::pow(std::sin(phi), d_ - 3); };
                double ws_norm = 0.0;
                for (int k = 0; k < 2 * panels; ++k)
                    ws_norm += Q::integrate(ws, std::numbers::pi * k / (2 * panels),
                                            std::numbers::pi * (k + 1) / (2 * panels));
                risk = over_psi([&](double t, int clean) {
                    const double c = std::sqrt(std::max(0.0, 1.0 - t * t));
                    double acc = 0.0;
                    for (int k = 0; k < 2 * panels; ++k)
                        acc += Q::integrate(
                            [&](double phi) {
                                return ws(phi) * expected_softplus(M_ * (t * alpha + c * std::cos(phi) * beta), clean);
                            },
                            std::numbers::pi * k / (2 * panels), std::numbers::pi * (k + 1) / (2 * panels));
                    return acc / ws_norm;
                });
            }
        }
        return 0.5 * mu_ * norm2_sq(x) + risk;
    }

    Summary summarize(const std::vector<Sample>& zs) const { return zs; }

    double empirical(const Summary& s, const Vec& x) const {
        if (s.empty()) return 0.5 * mu_ * norm2_sq(x);
        double v = 0.0;
        for (const auto& z : s) v += loss(x, z);
        return v / static_cast<double>(s.size());
    }

    // No closed form; only explicit candidate lists are supported.
    Minimizer population_minimizer(const Feasible& f) const {
        if (const auto* ex = std::get_if<ExplicitSet>(&f))
            return argmin_over(ex->points, [this](const Vec& x) { return population(x); });
        throw Unsupported("LogisticFamily: population minimizer has no closed form over " + feasible_name(f));
    }

private:
    int d_;
    double mu_;
    double M_;
    double eta_;
    Vec w0_;
};

}  // namespace scolab
