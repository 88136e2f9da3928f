// lattice.hpp
//
// Integer points in l2 / l-infinity balls: enumeration, exact counting,
// sign and scaled-integer packings with verifiable certificates, the
// nearest-integer box rounding and the localization radius.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "scolab/core.hpp"
#include "scolab/radius.hpp"
#include "scolab/rng.hpp"

namespace scolab {

enum class Norm { l2, linf };

inline const char* to_string(Norm n) { return n == Norm::l2 ? "l2" : "linf"; }

inline Norm parse_norm(const std::string& s) {
    if (s == "l2") return Norm::l2;
    if (s == "linf") return Norm::linf;
    throw InvalidArgument("unknown norm '" + s + "' (expected l2 or linf)");
}

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Integer points of a ball, lexicographically sorted and duplicate free.
struct IntegerPointSet {
    int dimension = 0;
    std::vector<IVec> points;
    Norm norm = Norm::l2;
    RadiusSpec radius{1.0};

    std::size_t size() const { return points.size(); }
};

inline bool in_ball(const IVec& x, Norm norm, const RadiusSpec& R) {
    if (R.is_inf()) return true;
    if (norm == Norm::linf) {
        const std::int64_t f = R.floor_r().value();
        return std::all_of(x.begin(), x.end(), [f](std::int64_t v) { return v >= -f && v <= f; });
    }
    // ||x||^2 <= R^2  iff  ||x||^2 <= floor(R^2) for integer x.
    std::int64_t s = 0;
    for (auto v : x) s += v * v;
    return s <= R.floor_r2().value();
}

// Returns an empty string when every invariant holds, otherwise the first violation.
inline std::string check_invariants(const IntegerPointSet& set) {
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        const auto& p = set.points[i];
        if (static_cast<int>(p.size()) != set.dimension) return "point " + std::to_string(i) + " has wrong length";
        if (!in_ball(p, set.norm, set.radius)) return "point " + std::to_string(i) + " outside the ball";
        if (i > 0 && !(set.points[i - 1] < p)) return "points not strictly lexicographically increasing at " + std::to_string(i);
    }
    return {};
}

// H_2(d, R): 0 for R < 1, else s * ln(e d / s) with s = min{d, floor(R^2)}.
inline double h2(int d, const RadiusSpec& R) {
    require(d >= 1, "h2: d must be >= 1");
    require(!R.is_inf(), "h2: R must be finite");
    if (R.value() < 1.0) return 0.0;
    const std::int64_t fr2 = R.floor_r2().value();
    const std::int64_t s = std::min<std::int64_t>(d, fr2);
    if (s == d) return static_cast<double>(d);
    return static_cast<double>(s) * (1.0 + std::log(static_cast<double>(d) / static_cast<double>(s)));
}

// Exact |B_R^(2) ∩ Z^d| via N(k, q) = sum_{t^2 <= q} N(k-1, q - t^2), N(0, q) = 1.
inline std::uint64_t count_integer_points_l2(int d, const RadiusSpec& R,
                                             std::uint64_t budget = kDefaultEnumerationBudget) {
    require(d >= 1, "count_integer_points_l2: d must be >= 1");
    require(!R.is_inf(), "count_integer_points_l2: R must be finite");
    const std::int64_t Q = R.floor_r2().value();
    const double work = static_cast<double>(d) * static_cast<double>(Q + 1);
    if (work > static_cast<double>(budget))
        throw BudgetExceeded("count_integer_points_l2: memo table too large", work);

    constexpr u128 cap = std::numeric_limits<std::uint64_t>::max();
    std::vector<u128> prev(static_cast<std::size_t>(Q + 1), 1), cur(static_cast<std::size_t>(Q + 1));
    for (int k = 1; k <= d; ++k) {
        for (std::int64_t q = 0; q <= Q; ++q) {
            u128 acc = prev[static_cast<std::size_t>(q)];
            for (std::int64_t t = 1; t * t <= q; ++t) acc += 2 * prev[static_cast<std::size_t>(q - t * t)];
            if (acc > cap) throw Error("count_integer_points_l2: count exceeds 64 bits");
            cur[static_cast<std::size_t>(q)] = acc;
        }
        std::swap(prev, cur);
    }
    return static_cast<std::uint64_t>(prev[static_cast<std::size_t>(Q)]);
}

namespace detail {

inline void enumerate_l2(IVec& x, std::size_t i, std::int64_t remaining, std::vector<IVec>& out) {
    if (i == x.size()) {
        out.push_back(x);
        return;
    }
    std::int64_t k = static_cast<std::int64_t>(std::sqrt(static_cast<double>(remaining)));
    while (k * k > remaining) --k;
    while ((k + 1) * (k + 1) <= remaining) ++k;
    for (std::int64_t v = -k; v <= k; ++v) {
        x[i] = v;
        enumerate_l2(x, i + 1, remaining - v * v, out);
    }
}

}  // namespace detail

inline IntegerPointSet enumerate_integer_points(int d, const RadiusSpec& R, Norm norm,
                                                std::uint64_t budget = kDefaultEnumerationBudget) {
    require(d >= 1, "enumerate_integer_points: d must be >= 1");
    require(!R.is_inf(), "enumerate_integer_points: R must be finite");
    IntegerPointSet set{d, {}, norm, R};
    const std::int64_t f = R.floor_r().value();

    double estimate;
    if (norm == Norm::linf) {
        estimate = std::pow(2.0 * static_cast<double>(f) + 1.0, d);
    } else {
        try {
            estimate = static_cast<double>(count_integer_points_l2(d, R, budget));
        } catch (const BudgetExceeded& e) {
            estimate = e.estimated_count;
        }
    }
    if (estimate > static_cast<double>(budget))
        throw BudgetExceeded("enumerate_integer_points: ball too large for budget", estimate);

    set.points.reserve(static_cast<std::size_t>(estimate));
    IVec x(static_cast<std::size_t>(d), 0);
    if (norm == Norm::l2) {
        detail::enumerate_l2(x, 0, R.floor_r2().value(), set.points);
    } else {
        std::fill(x.begin(), x.end(), -f);
        while (true) {
            set.points.push_back(x);
            int i = d - 1;
            while (i >= 0 && x[static_cast<std::size_t>(i)] == f) {
                x[static_cast<std::size_t>(i)] = -f;
                --i;
            }
            if (i < 0) break;
            ++x[static_cast<std::size_t>(i)];
        }
    }
    return set;
}

// Volumetric bound on the r-covering number of a radius-R set: (1 + 2R/r)^d.
inline double covering_bound(int d, double R, double r) {
    require(d >= 1, "covering_bound: d must be >= 1");
    require(R > 0.0 && r > 0.0, "covering_bound: R and r must be positive");
    return std::pow(1.0 + 2.0 * R / r, d);
}

// ---------------------------------------------------------------------------
// Packings
// ---------------------------------------------------------------------------

// U ⊆ {-1,0,1}^d, every vector with exactly s nonzeros, pairwise <u,u'> <= s/2.
struct SignPacking {
    int dimension = 0;
    int support_size = 0;
    std::vector<IVec> vectors;
    std::uint64_t seed = 0;

    std::size_t size() const { return vectors.size(); }
};

// Common norm r = sqrt(r_squared), W ⊆ Z^d ∩ B_R, pairwise <w,w'> <= r^2/2.
struct ScaledPacking {
    int dimension = 0;
    std::int64_t r_squared = 0;
    std::vector<IVec> centers;
    RadiusSpec enclosing_radius{1.0};
    int support_size = 0;
    std::int64_t scale = 1;  // q; 1 when the sign packing is used as-is
    std::uint64_t seed = 0;

    double radius() const { return std::sqrt(static_cast<double>(r_squared)); }
    std::size_t size() const { return centers.size(); }
};

inline std::int64_t idot(const IVec& a, const IVec& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::string check_invariants(const SignPacking& p) {
    if (p.support_size < 1 || p.support_size > p.dimension) return "support size out of range";
    if (p.vectors.size() < 2) return "fewer than two vectors";
    for (std::size_t i = 0; i < p.vectors.size(); ++i) {
        const auto& u = p.vectors[i];
        if (static_cast<int>(u.size()) != p.dimension) return "vector " + std::to_string(i) + " has wrong length";
        int nnz = 0;
        for (auto v : u) {
            if (v != 0 && v != 1 && v != -1) return "vector " + std::to_string(i) + " has entry outside {-1,0,1}";
            nnz += v != 0;
        }
        if (nnz != p.support_size) return "vector " + std::to_string(i) + " has wrong support size";
        for (std::size_t j = 0; j < i; ++j)
            if (2 * idot(u, p.vectors[j]) > p.support_size)
                return "vectors " + std::to_string(j) + "," + std::to_string(i) + " too correlated";
    }
    return {};
}

inline std::string check_invariants(const ScaledPacking& p) {
    if (p.centers.size() < 2) return "fewer than two centers";
    if (p.enclosing_radius.is_inf()) return "enclosing radius must be finite";
    // r in [R/2, R]  <=>  r^2 <= R^2 <= 4 r^2.
    if (!p.enclosing_radius.square_le(4 * p.r_squared)) return "r < R/2";
    if (p.r_squared > p.enclosing_radius.floor_r2().value()) return "r > R";
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
        const auto& w = p.centers[i];
        if (static_cast<int>(w.size()) != p.dimension) return "center " + std::to_string(i) + " has wrong length";
        if (idot(w, w) != p.r_squared) return "center " + std::to_string(i) + " does not have norm r";
        for (std::size_t j = 0; j < i; ++j)
            if (2 * idot(w, p.centers[j]) > p.r_squared)
                return "centers " + std::to_string(j) + "," + std::to_string(i) + " too correlated";
    }
    return {};
}

enum class PackingMethod {
    batch,   // draw the whole batch, reject it if any pair fails
    greedy,  // draw one candidate at a time, keep it if compatible
};

namespace detail {

inline IVec random_sparse_sign(int d, int s, RngStream& rng) {
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), 0);
    IVec u(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < s; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.uniform_int(static_cast<std::uint64_t>(d - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        u[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = rng.random_sign();
    }
    return u;
}

inline bool compatible(const IVec& u, const std::vector<IVec>& accepted, int s) {
    for (const auto& v : accepted)
        if (2 * idot(u, v) > s) return false;
    return true;
}

}  // namespace detail

// Randomized sparse sign packing. Batch mode: each attempt samples
// target_size vectors and keeps the batch only if every pair passes.
// Greedy mode: each attempt samples one candidate.
inline SignPacking sparse_sign_packing(int d, int s, std::size_t target_size, std::size_t max_attempts,
                                       std::uint64_t seed, PackingMethod method = PackingMethod::batch) {
    require(d >= 1 && s >= 1 && s <= d, "sparse_sign_packing: need 1 <= s <= d");
    require(target_size >= 2, "sparse_sign_packing: target_size must be >= 2");
    RngStream rng(seed);
    SignPacking out{d, s, {}, seed};

    if (method == PackingMethod::batch) {
        for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
            std::vector<IVec> batch;
            batch.reserve(target_size);
            bool ok = true;
            for (std::size_t i = 0; i < target_size; ++i) {
                IVec u = detail::random_sparse_sign(d, s, rng);
                // keep drawing the batch so the stream layout is attempt-independent
                if (ok && !detail::compatible(u, batch, s)) ok = false;
                batch.push_back(std::move(u));
            }
            if (ok) {
                out.vectors = std::move(batch);
                break;
            }
        }
    } else {
        for (std::size_t attempt = 0; attempt < max_attempts && out.vectors.size() < target_size; ++attempt) {
            IVec u = detail::random_sparse_sign(d, s, rng);
            if (detail::compatible(u, out.vectors, s)) out.vectors.push_back(std::move(u));
        }
        if (out.vectors.size() < target_size) out.vectors.clear();
    }
    if (out.vectors.empty())
        throw ConstructionFailed("sparse_sign_packing: no certified packing of size " + std::to_string(target_size) +
                                 " after " + std::to_string(max_attempts) + " attempts");
    std::sort(out.vectors.begin(), out.vectors.end());
    if (auto err = check_invariants(out); !err.empty()) throw Error("sparse_sign_packing: internal: " + err);
    return out;
}

// Number of vectors in {-1,0,1}^d with exactly s nonzeros (saturating).
inline double sparse_sign_universe(int d, int s) {
    double c = 1.0;
    for (int i = 0; i < s; ++i) c = c * (d - i) / (i + 1);
    return c * std::pow(2.0, s);
}

inline std::size_t default_packing_target(int d, int s) {
    const double half = std::floor(sparse_sign_universe(d, s) / 2.0);
    return static_cast<std::size_t>(std::max(2.0, std::min(8.0, half)));
}

// Scaled integer packing inside B_R^(2) with common radius r in [R/2, R].
// target_size = 0 selects default_packing_target(d, s).
inline ScaledPacking l2_integer_packing(int d, const RadiusSpec& R, std::uint64_t seed, std::size_t target_size = 0,
                                        std::size_t max_attempts = 10'000,
                                        PackingMethod method = PackingMethod::batch) {
    require(d >= 1, "l2_integer_packing: d must be >= 1");
    require(!R.is_inf() && R.value() >= 1.0, "l2_integer_packing: need finite R >= 1");
    const std::int64_t fr2 = R.floor_r2().value();
    const int s = static_cast<int>(std::min<std::int64_t>(d, fr2));
    if (target_size == 0) target_size = default_packing_target(d, s);

    SignPacking U = sparse_sign_packing(d, s, target_size, max_attempts, seed, method);

    ScaledPacking W;
    W.dimension = d;
    W.enclosing_radius = R;
    W.support_size = s;
    W.seed = seed;
    if (s == fr2) {
        W.scale = 1;
        W.r_squared = s;
        W.centers = std::move(U.vectors);
    } else {
        // q = floor(R / sqrt(d)) = max{q : q^2 d <= floor(R^2)}
        std::int64_t q = static_cast<std::int64_t>(std::sqrt(static_cast<double>(fr2) / d));
        while (q * q * d > fr2) --q;
        while ((q + 1) * (q + 1) * d <= fr2) ++q;
        W.scale = q;
        W.r_squared = q * q * d;
        for (auto& u : U.vectors) {
            for (auto& v : u) v *= q;
            W.centers.push_back(std::move(u));
        }
    }
    if (auto err = check_invariants(W); !err.empty()) throw Error("l2_integer_packing: certificate failed: " + err);
    return W;
}

// ---------------------------------------------------------------------------
// Rounding and localization
// ---------------------------------------------------------------------------

// Nearest-integer rounding into the integer box [-F, F]^d. Boundary
// coordinates (|u_j| == F) are kept; half-ties round toward zero.
inline IVec box_rounding(const Vec& u, IntOrInf floorR) {
    IVec q(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double a = std::abs(u[j]);
        if (!floorR.is_inf()) {
            const double F = static_cast<double>(floorR.value());
            if (!(a <= F)) throw InvalidArgument("box_rounding: coordinate " + std::to_string(j) + " outside the box");
            if (a == F) {
                q[j] = static_cast<std::int64_t>(u[j]);
                continue;
            }
        }
        const double r = std::ceil(a - 0.5);
        q[j] = static_cast<std::int64_t>(u[j] < 0 ? -r : r);
    }
    return q;
}

// 2 sqrt(d min{kappa, floor(R)^2} + s / mu)
inline double localization_radius(int d, double kappa, IntOrInf floorR, double s, double mu) {
    require(d >= 1, "localization_radius: d must be >= 1");
    require(kappa >= 1.0, "localization_radius: kappa must be >= 1");
    require(mu > 0.0, "localization_radius: mu must be positive");
    require(s >= 0.0, "localization_radius: s must be nonnegative");
    double k = kappa;
    if (!floorR.is_inf()) {
        const double f = static_cast<double>(floorR.value());
        k = std::min(k, f * f);
    }
    return 2.0 * std::sqrt(static_cast<double>(d) * k + s / mu);
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

inline void write_points_csv(std::ostream& os, int d, const std::vector<IVec>& points) {
    for (int i = 1; i <= d; ++i) os << (i > 1 ? "," : "") << 'x' << i;
    os << '\n';
    for (const auto& p : points) {
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
        os << '\n';
    }
}

inline void write_points_csv(std::ostream& os, const IntegerPointSet& set) {
    write_points_csv(os, set.dimension, set.points);
}

// One-line JSON header followed by the CSV body.
inline void write_packing_csv(std::ostream& os, const SignPacking& p) {
    os << "{\"d\":" << p.dimension << ",\"s\":" << p.support_size << ",\"size\":" << p.size()
       << ",\"seed\":" << p.seed << "}\n";
    write_points_csv(os, p.dimension, p.vectors);
}

inline void write_packing_csv(std::ostream& os, const ScaledPacking& p) {
    char r[64];
    std::snprintf(r, sizeof r, "%.17g", p.radius());
    os << "{\"d\":" << p.dimension << ",\"r\":" << r << ",\"r_squared\":" << p.r_squared << ",\"size\":" << p.size()
       << ",\"seed\":" << p.seed << "}\n";
    write_points_csv(os, p.dimension, p.centers);
}

}  // namespace scolab
