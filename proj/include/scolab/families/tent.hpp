// families/tent.hpp
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scolab/families/common.hpp"
#include "scolab/lattice.hpp"

namespace scolab {

struct TentSummary {
    std::vector<long long> counts;  // activations per center
    long long m = 0;
};

// Tents psi_w(x) = max(0, r/4 - ||x - w||) at the packing centers. A sample
// is a subset V of the centers (membership bits in packing order); the loss
// is -max_{w in V} psi_w(x). The hidden center is included with probability
// (1 + rho)/2, every other center with (1 - rho)/2, independently.
class TentFamily {
public:
    using Sample = std::vector<std::uint8_t>;
    using Summary = TentSummary;
    static constexpr const char* tag = "tent";
    static constexpr bool anchored = true;

    TentFamily(std::vector<Vec> centers, double r, std::size_t hidden, double rho)
        : centers_(std::move(centers)), r_(r), hidden_(hidden), rho_(rho) {
        require(centers_.size() >= 2, "TentFamily: need at least two centers");
        require(r_ > 0.0, "TentFamily: r must be positive");
        require(hidden_ < centers_.size(), "TentFamily: hidden index out of range");
        require(rho_ > 0.0 && rho_ <= 0.5, "TentFamily: rho must lie in (0, 1/2]");
        d_ = static_cast<int>(centers_.front().size());
        // Positive supports are disjoint iff centers are >= r/2 apart; anchoring needs ||w|| > r/4.
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            require_dim(centers_[i].size(), static_cast<std::size_t>(d_), "TentFamily");
            require(std::sqrt(norm2_sq(centers_[i])) > r_ / 4.0, "TentFamily: center too close to the origin");
            for (std::size_t j = 0; j < i; ++j)
                require(std::sqrt(dist2_sq(centers_[i], centers_[j])) >= r_ / 2.0 * (1.0 - 1e-12),
                        "TentFamily: tent supports overlap");
        }
    }

    static TentFamily from_packing(const ScaledPacking& W, std::size_t hidden, double rho) {
        std::vector<Vec> c;
        c.reserve(W.size());
        for (const auto& w : W.centers) c.push_back(to_real(w));
        return TentFamily(std::move(c), W.radius(), hidden, rho);
    }

    // Continuous variant: sign vectors scaled onto the radius-R sphere. Centers
    // need not be integral; r = R.
    static TentFamily from_sign_packing(const SignPacking& U, double R, std::size_t hidden, double rho) {
        const double scale = R / std::sqrt(static_cast<double>(U.support_size));
        std::vector<Vec> c;
        for (const auto& u : U.vectors) {
            Vec w(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) w[i] = scale * static_cast<double>(u[i]);
            c.push_back(std::move(w));
        }
        return TentFamily(std::move(c), R, hidden, rho);
    }

    int dim() const { return d_; }
    double r() const { return r_; }
    double rho() const { return rho_; }
    std::size_t hidden() const { return hidden_; }
    std::size_t size() const { return centers_.size(); }
    const std::vector<Vec>& centers() const { return centers_; }

    double inclusion_probability(std::size_t w) const {
        return w == hidden_ ? 0.5 * (1.0 + rho_) : 0.5 * (1.0 - rho_);
    }

    double psi(std::size_t w, const Vec& x) const {
        return std::max(0.0, r_ / 4.0 - std::sqrt(dist2_sq(x, centers_[w])));
    }

    Sample sample(RngStream& rng) const {
        Sample v(centers_.size());
        for (std::size_t w = 0; w < centers_.size(); ++w) v[w] = rng.bernoulli(inclusion_probability(w)) ? 1 : 0;
        return v;
    }

    double loss(const Vec& x, const Sample& z) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "TentFamily::loss");
        require_dim(z.size(), centers_.size(), "TentFamily::loss sample");
        double best = 0.0;
        for (std::size_t w = 0; w < centers_.size(); ++w)
            if (z[w]) best = std::max(best, psi(w, x));
        return -best;
    }

    // Supports are disjoint, so the expectation is a sum over centers.
    double population(const Vec& x) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "TentFamily::population");
        double v = 0.0;
        for (std::size_t w = 0; w < centers_.size(); ++w) v -= inclusion_probability(w) * psi(w, x);
        return v;
    }

    Summary summarize(const std::vector<Sample>& zs) const {
        Summary s{std::vector<long long>(centers_.size(), 0), static_cast<long long>(zs.size())};
        for (const auto& z : zs)
            for (std::size_t w = 0; w < centers_.size(); ++w) s.counts[w] += z[w];
        return s;
    }

    double empirical(const Summary& s, const Vec& x) const {
        if (s.m == 0) return 0.0;
        double v = 0.0;
        for (std::size_t w = 0; w < centers_.size(); ++w) v -= static_cast<double>(s.counts[w]) * psi(w, x);
        return v / static_cast<double>(s.m);
    }

    // The hidden center, value -(1 + rho) r / 8, whenever it is feasible.
    Minimizer population_minimizer(const Feasible& f) const {
        if (const auto* ex = std::get_if<ExplicitSet>(&f))
            return argmin_over(ex->points, [this](const Vec& x) { return population(x); });
        if (!std::holds_alternative<L2Ball>(f) && !std::holds_alternative<AllSpace>(f))
            throw Unsupported(std::string("TentFamily: unsupported feasible set ") + feasible_name(f));
        const Vec& u = centers_[hidden_];
        if (!contains(f, u)) throw Unsupported("TentFamily: hidden center is not feasible");
        return {u, population(u)};
    }

private:
    std::vector<Vec> centers_;
    double r_;
    std::size_t hidden_;
    double rho_;
    int d_ = 0;
};

}  // namespace scolab
