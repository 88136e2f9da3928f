// families/coin.hpp
#pragma once

#include <string>
#include <vector>

#include "scolab/families/common.hpp"

namespace scolab {

enum class CoinMode { dimension, confidence };

inline const char* to_string(CoinMode m) { return m == CoinMode::dimension ? "dimension" : "confidence"; }

struct CoinSample {
    int j = 0;  // 0-based coordinate
    int k = 1;  // sign in {-1, +1}

    friend bool operator==(const CoinSample&, const CoinSample&) = default;
};

struct CoinSummary {
    std::vector<long long> signed_sum;  // sum of k over samples hitting coordinate j
    std::vector<long long> hits;        // number of samples hitting coordinate j
    long long m = 0;
};

// Linear losses f(x; (j,k)) = -k x_j on the box. In dimension mode a sample
// picks j uniformly and returns k with mean rho b_j; in confidence mode j is
// always the first coordinate and k has mean rho b.
class CoinLinearFamily {
public:
    using Sample = CoinSample;
    using Summary = CoinSummary;
    static constexpr const char* tag = "coin";
    static constexpr bool anchored = true;

    CoinLinearFamily(int d, double R, CoinMode mode, double rho, std::vector<int> b)
        : d_(d), R_(R), mode_(mode), rho_(rho), b_(std::move(b)) {
        require(d >= 1, "CoinLinearFamily: d must be >= 1");
        require(R > 0.0, "CoinLinearFamily: R must be positive");
        require(rho > 0.0 && rho <= 0.5, "CoinLinearFamily: rho must lie in (0, 1/2]");
        require(b_.size() == (mode == CoinMode::dimension ? static_cast<std::size_t>(d) : 1u),
                "CoinLinearFamily: hidden sign vector has the wrong length");
        for (int v : b_) require(v == 1 || v == -1, "CoinLinearFamily: hidden signs must be +-1");
    }

    int dim() const { return d_; }
    double R() const { return R_; }
    CoinMode mode() const { return mode_; }
    double rho() const { return rho_; }
    const std::vector<int>& hidden() const { return b_; }

    int sign_of(int j) const { return mode_ == CoinMode::dimension ? b_[static_cast<std::size_t>(j)] : b_[0]; }

    // P[(j,k)], generic over the scalar so tests can evaluate it in Rational.
    template <class T>
    T probability(int j, int k, const T& rho) const {
        if (mode_ == CoinMode::confidence) {
            if (j != 0) return T(0);
            return (T(1) + rho * T(k * b_[0])) / T(2);
        }
        return (T(1) + rho * T(k * b_[static_cast<std::size_t>(j)])) / T(2 * d_);
    }

    Sample sample(RngStream& rng) const {
        const int j = mode_ == CoinMode::dimension ? static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d_))) : 0;
        const double p_plus = 0.5 * (1.0 + rho_ * sign_of(j));
        return {j, rng.bernoulli(p_plus) ? 1 : -1};
    }

    double loss(const Vec& x, const Sample& z) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "CoinLinearFamily::loss");
        return -z.k * x[static_cast<std::size_t>(z.j)];
    }

    Vec gradient(const Vec& x, const Sample& z) const {
        Vec g(x.size(), 0.0);
        g[static_cast<std::size_t>(z.j)] = -z.k;
        return g;
    }

    template <class T, class X>
    T population_as(const X& x, const T& rho) const {
        if (mode_ == CoinMode::confidence) return -rho * T(b_[0]) * T(x[0]);
        T s(0);
        for (int j = 0; j < d_; ++j) s = s + T(b_[static_cast<std::size_t>(j)]) * T(x[static_cast<std::size_t>(j)]);
        return -(rho / T(d_)) * s;
    }

    double population(const Vec& x) const {
        require_dim(x.size(), static_cast<std::size_t>(d_), "CoinLinearFamily::population");
        return population_as<double>(x, rho_);
    }

    Summary summarize(const std::vector<Sample>& zs) const {
        Summary s{std::vector<long long>(static_cast<std::size_t>(d_), 0),
                  std::vector<long long>(static_cast<std::size_t>(d_), 0), static_cast<long long>(zs.size())};
        for (const auto& z : zs) {
            s.signed_sum[static_cast<std::size_t>(z.j)] += z.k;
            s.hits[static_cast<std::size_t>(z.j)] += 1;
        }
        return s;
    }

    double empirical(const Summary& s, const Vec& x) const {
        if (s.m == 0) return 0.0;
        double v = 0.0;
        for (int j = 0; j < d_; ++j)
            v -= static_cast<double>(s.signed_sum[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
        return v / static_cast<double>(s.m);
    }

    // Minimizer of the linear objective: the exposed vertex of the box.
    Minimizer population_minimizer(const Feasible& f) const {
        double radius;
        if (const auto* box = std::get_if<BoxContinuous>(&f)) {
            require(!box->R.is_inf(), "CoinLinearFamily: box must be bounded");
            radius = box->R.value();
        } else if (const auto* ibox = std::get_if<BoxInteger>(&f)) {
            require(!ibox->floorR.is_inf(), "CoinLinearFamily: box must be bounded");
            radius = ibox->floorR.as_double();
        } else if (const auto* ex = std::get_if<ExplicitSet>(&f)) {
            return argmin_over(ex->points, [this](const Vec& x) { return population(x); });
        } else {
            throw Unsupported(std::string("CoinLinearFamily: unsupported feasible set ") + feasible_name(f));
        }
        Vec x(static_cast<std::size_t>(d_), 0.0);
        if (mode_ == CoinMode::dimension) {
            for (int j = 0; j < d_; ++j) x[static_cast<std::size_t>(j)] = radius * b_[static_cast<std::size_t>(j)];
        } else {
            x[0] = radius * b_[0];
        }
        return {x, population(x)};
    }

private:
    int d_;
    double R_;
    CoinMode mode_;
    double rho_;
    std::vector<int> b_;
};

}  // namespace scolab
