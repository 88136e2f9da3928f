// solvers.hpp
//
// Learning rules: exact ERM per family/feasible pair, brute-force ERM over
// explicit sets, decoders, and a projected SGD baseline. Ties always go to
// the lexicographically smallest point.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "scolab/families.hpp"
#include "scolab/lattice.hpp"

namespace scolab {

struct ErmResult {
    Vec x;
    double value;
};

// ---------------------------------------------------------------------------
// Brute force over an explicit list.
// ---------------------------------------------------------------------------

template <LossFamily F>
ErmResult erm_enumerated(const F& family, const typename F::Summary& summary, std::vector<Vec> points) {
    if (points.empty()) throw InvalidArgument("erm_enumerated: empty point list");
    const auto m = argmin_over(std::move(points), [&](const Vec& x) { return family.empirical(summary, x); });
    return {m.x, m.value};
}

template <LossFamily F>
ErmResult erm_enumerated(const F& family, const typename F::Summary& summary, const IntegerPointSet& set) {
    std::vector<Vec> pts;
    pts.reserve(set.size());
    for (const auto& p : set.points) pts.push_back(to_real(p));
    return erm_enumerated(family, summary, std::move(pts));
}

template <LossFamily F>
ErmResult erm_enumerated_samples(const F& family, const std::vector<typename F::Sample>& samples,
                                 std::vector<Vec> points) {
    return erm_enumerated(family, family.summarize(samples), std::move(points));
}

// ---------------------------------------------------------------------------
// Closed-form and windowed ERM for the quadratic families.
// ---------------------------------------------------------------------------

// Per coordinate argmin of (mu/2) x^2 - zbar_j x over integers in [-floorR, floorR].
inline IVec erm_quadratic_integer_box(const Vec& zbar, double mu, IntOrInf floorR) {
    require(mu > 0.0, "erm_quadratic_integer_box: mu must be positive");
    IVec x(zbar.size());
    for (std::size_t j = 0; j < zbar.size(); ++j) x[j] = quad_integer_argmin(zbar[j], mu, floorR);
    return x;
}

// Integer argmin of one gadget block with linear term -(z1 x + z2 y) over the
// box, by enumerating the strong-convexity window around the continuous minimizer.
inline std::pair<std::int64_t, std::int64_t> erm_gadget_block(const BlockGadgetFamily& g, double z1, double z2,
                                                              IntOrInf floorR,
                                                              std::uint64_t budget = kDefaultEnumerationBudget) {
    const auto q = [&](double x, double y) { return g.block_quadratic(x, y) - z1 * x - z2 * y; };
    const auto u = g.block_continuous_argmin(z1, z2);
    const auto clampi = [&](double v) {
        double r = std::round(v);
        if (!floorR.is_inf()) r = std::clamp(r, -floorR.as_double(), floorR.as_double());
        return r;
    };
    const double rx = clampi(u[0]), ry = clampi(u[1]);
    const double gap = std::max(0.0, q(rx, ry) - q(u[0], u[1]));
    const double rad = std::sqrt(2.0 * gap / g.mu()) * (1.0 + 1e-9) + 1e-9;
    auto lo_hi = [&](double c) {
        double lo = std::ceil(c - rad), hi = std::floor(c + rad);
        if (!floorR.is_inf()) {
            lo = std::max(lo, -floorR.as_double());
            hi = std::min(hi, floorR.as_double());
        }
        return std::pair{lo, hi};
    };
    const auto [xlo, xhi] = lo_hi(u[0]);
    const auto [ylo, yhi] = lo_hi(u[1]);
    const double count = std::max(0.0, xhi - xlo + 1.0) * std::max(0.0, yhi - ylo + 1.0);
    if (count > static_cast<double>(budget))
        throw BudgetExceeded("erm_gadget_block: search window too large", count);
    // The rounded point always qualifies, so the window is never empty after clamping.
    double bx = rx, by = ry, bv = q(rx, ry);
    for (double x = xlo; x <= xhi; x += 1.0) {
        for (double y = ylo; y <= yhi; y += 1.0) {
            const double v = q(x, y);
            if (v < bv || (v == bv && (x < bx || (x == bx && y < by)))) {
                bx = x;
                by = y;
                bv = v;
            }
        }
    }
    return {static_cast<std::int64_t>(bx), static_cast<std::int64_t>(by)};
}

inline IVec erm_block_gadget(const Vec& zbar, const BlockGadgetFamily& g, IntOrInf floorR,
                             std::uint64_t budget = kDefaultEnumerationBudget) {
    require_dim(zbar.size(), static_cast<std::size_t>(g.dim()), "erm_block_gadget");
    require(floorR.is_inf() || floorR.value() >= g.tau(), "erm_block_gadget: need floor(R) >= tau");
    IVec x(zbar.size(), 0);
    for (int j = 0; j < g.blocks(); ++j) {
        const auto [a, b] = erm_gadget_block(g, zbar[2 * j], zbar[2 * j + 1], floorR, budget);
        x[2 * j] = a;
        x[2 * j + 1] = b;
    }
    if (g.dim() % 2 == 1) x.back() = quad_integer_argmin(zbar.back(), g.mu(), floorR);
    return x;
}

// clamp(zbar / mu) on a box, zbar / mu on all of R^d.
inline Vec erm_continuous(const Vec& zbar, double mu, const Feasible& feasible) {
    require(mu > 0.0, "erm_continuous: mu must be positive");
    require(std::holds_alternative<AllSpace>(feasible) || std::holds_alternative<BoxContinuous>(feasible),
            "erm_continuous: feasible set must be all-space or a box");
    Vec x(zbar.size());
    for (std::size_t j = 0; j < zbar.size(); ++j) x[j] = zbar[j] / mu;
    return project(feasible, std::move(x));
}

// ---------------------------------------------------------------------------
// Decoders.
// ---------------------------------------------------------------------------

// Most-activated center; ties to the smallest index.
inline std::size_t tent_erm(const std::vector<long long>& counts) {
    require(!counts.empty(), "tent_erm: empty count vector");
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

// R * sign of the per-coordinate signed count; zero or unseen coordinates give +1.
inline Vec coin_majority_decoder(const std::vector<long long>& signed_sum, double R) {
    Vec x(signed_sum.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = signed_sum[j] >= 0 ? R : -R;
    return x;
}

inline Vec coin_majority_decoder(const std::vector<CoinSample>& samples, int d, double R) {
    require(d >= 1, "coin_majority_decoder: d must be >= 1");
    std::vector<long long> s(static_cast<std::size_t>(d), 0);
    for (const auto& z : samples) {
        require(z.j >= 0 && z.j < d, "coin_majority_decoder: coordinate out of range");
        s[static_cast<std::size_t>(z.j)] += z.k;
    }
    return coin_majority_decoder(s, R);
}

// ---------------------------------------------------------------------------
// Projected SGD baseline.
// ---------------------------------------------------------------------------

enum class StepRule { strongly_convex, lipschitz };

struct SgdOptions {
    StepRule rule = StepRule::strongly_convex;
    double mu = 1.0;     // eta_t = 1 / (mu t)
    double G = 1.0;      // eta_t = D / (G sqrt t)
    double D = 1.0;
    bool average = true;  // average the last half of the iterates
};

template <DifferentiableFamily F>
Vec projected_sgd(const F& family, const Feasible& feasible, long long m, const SgdOptions& opt, RngStream& rng) {
    require(m >= 1, "projected_sgd: m must be >= 1");
    require(!std::holds_alternative<ExplicitSet>(feasible) &&
                !(std::holds_alternative<L2Ball>(feasible) && std::get<L2Ball>(feasible).integer) &&
                !std::holds_alternative<BoxInteger>(feasible),
            "projected_sgd: feasible set must be convex");
    const auto d = static_cast<std::size_t>(family.dim());
    Vec x = project(feasible, Vec(d, 0.0));
    Vec avg(d, 0.0);
    long long navg = 0;
    const long long start = m / 2 + 1;
    for (long long t = 1; t <= m; ++t) {
        const auto z = family.sample(rng);
        const Vec g = family.gradient(x, z);
        const double eta = opt.rule == StepRule::strongly_convex
                               ? 1.0 / (opt.mu * static_cast<double>(t))
                               : opt.D / (opt.G * std::sqrt(static_cast<double>(t)));
        for (std::size_t i = 0; i < d; ++i) x[i] -= eta * g[i];
        x = project(feasible, std::move(x));
        if (t >= start) {
            ++navg;
            for (std::size_t i = 0; i < d; ++i) avg[i] += (x[i] - avg[i]) / static_cast<double>(navg);
        }
    }
    return opt.average ? avg : x;
}

// ---------------------------------------------------------------------------
// Constant-offset wrapper: f(x; z) + c. ERM argmins must not move.
// ---------------------------------------------------------------------------

template <LossFamily F>
class OffsetFamily {
public:
    using Sample = typename F::Sample;
    using Summary = typename F::Summary;
    static constexpr const char* tag = F::tag;

    OffsetFamily(const F& base, double c) : base_(base), c_(c) {}

    int dim() const { return base_.dim(); }
    Sample sample(RngStream& rng) const { return base_.sample(rng); }
    double loss(const Vec& x, const Sample& z) const { return base_.loss(x, z) + c_; }
    double population(const Vec& x) const { return base_.population(x) + c_; }
    Summary summarize(const std::vector<Sample>& zs) const { return base_.summarize(zs); }
    double empirical(const Summary& s, const Vec& x) const { return base_.empirical(s, x) + c_; }
    Minimizer population_minimizer(const Feasible& f) const {
        auto m = base_.population_minimizer(f);
        m.value += c_;
        return m;
    }
    Vec gradient(const Vec& x, const Sample& z) const
        requires DifferentiableFamily<F>
    {
        return base_.gradient(x, z);
    }

private:
    const F& base_;
    double c_;
};

// ---------------------------------------------------------------------------
// CSV rows: solver, family, m, x1..xd, empirical, excess.
// ---------------------------------------------------------------------------

inline void write_solver_csv_header(std::ostream& os, int d) {
    os << "solver,family,m";
    for (int j = 1; j <= d; ++j) os << ",x" << j;
    os << ",empirical,excess\n";
}

inline void write_solver_csv_row(std::ostream& os, const std::string& solver, const std::string& family, long long m,
                                 const Vec& x, double empirical, double excess) {
    os << solver << ',' << family << ',' << m;
    char buf[32];
    for (double v : x) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", empirical);
    os << ',' << buf;
    std::snprintf(buf, sizeof buf, "%.17g", excess);
    os << ',' << buf << '\n';
}

}  // namespace scolab
