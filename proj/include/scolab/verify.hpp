// verify.hpp
//
// Verification suites shared by the acceptance binary and `scolab verify`.
// Every tolerance, grid and seed is fixed here.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <tuple>
#include <string>
#include <vector>

#include "scolab/experiments.hpp"
#include "scolab/regularity.hpp"

namespace scolab {

struct SuiteResult {
    std::string name;
    bool passed = true;
    double seconds = 0.0;
    double time_limit = 0.0;
    std::string summary;               // one-line digest
    std::vector<std::string> details;  // one entry per sub-check

    void check(bool ok, const std::string& what) {
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        passed = passed && ok;
    }
};

namespace detail {

inline std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

template <class Body>
SuiteResult timed_suite(const std::string& name, double time_limit, Body&& body) {
    SuiteResult r;
    r.name = name;
    r.time_limit = time_limit;
    const auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds >= time_limit) {
        r.passed = false;
        r.details.push_back("FAIL time " + fmt("%.2f s", r.seconds) + " over the limit " + fmt("%.0f s", time_limit));
    }
    return r;
}

// Independent re-check of a sign packing in plain integer arithmetic.
inline bool recheck_sign_packing(const std::vector<IVec>& U, int d, int s) {
    if (U.size() < 2) return false;
    for (std::size_t i = 0; i < U.size(); ++i) {
        if (static_cast<int>(U[i].size()) != d) return false;
        int nnz = 0;
        for (auto v : U[i]) {
            if (v < -1 || v > 1) return false;
            nnz += v != 0;
        }
        if (nnz != s) return false;
        for (std::size_t j = i + 1; j < U.size(); ++j) {
            long long ip = 0;
            for (int k = 0; k < d; ++k) ip += U[i][k] * U[j][k];
            if (2 * ip > s) return false;
        }
    }
    return true;
}

inline bool recheck_scaled_packing(const ScaledPacking& W, int d, std::int64_t num, std::int64_t den) {
    // R = num/den exactly; need r^2 <= R^2 <= 4 r^2 with r^2 = W.r_squared.
    const i128 R2n = static_cast<i128>(num) * num, R2d = static_cast<i128>(den) * den;
    const i128 r2 = W.r_squared;
    if (!(r2 * R2d <= R2n && R2n <= 4 * r2 * R2d)) return false;
    for (std::size_t i = 0; i < W.centers.size(); ++i) {
        const auto& w = W.centers[i];
        if (static_cast<int>(w.size()) != d) return false;
        long long n2 = 0;
        for (auto v : w) n2 += v * v;
        if (n2 != W.r_squared) return false;
        for (std::size_t j = i + 1; j < W.centers.size(); ++j) {
            long long ip = 0;
            for (int k = 0; k < d; ++k) ip += w[k] * W.centers[j][k];
            if (2 * ip > W.r_squared) return false;
        }
    }
    return W.centers.size() >= 2;
}

inline std::vector<Vec> linf_box(int d, std::int64_t F) {
    std::vector<Vec> out;
    for (const auto& p : enumerate_integer_points(d, RadiusSpec(static_cast<double>(F)), Norm::linf).points)
        out.push_back(to_real(p));
    return out;
}

}  // namespace detail

// count_integer_points_l2 against enumeration, d <= 6.
inline SuiteResult suite_counting() {
    return detail::timed_suite("counting", 10.0, [](SuiteResult& r) {
        int cases = 0, matches = 0;
        for (int d = 1; d <= 6; ++d)
            for (double R : {1.0, 1.5, 2.0, 2.5, 3.0, 4.0}) {
                const auto c = count_integer_points_l2(d, RadiusSpec(R));
                // brute force over the cube, independent of the l2 enumerator
                std::uint64_t brute = 0;
                for (const auto& p : enumerate_integer_points(d, RadiusSpec(R), Norm::linf).points) {
                    double n2 = 0.0;
                    for (auto v : p) n2 += static_cast<double>(v * v);
                    brute += n2 <= R * R;
                }
                const auto e = enumerate_integer_points(d, RadiusSpec(R), Norm::l2).size();
                ++cases;
                const bool ok = c == brute && e == brute;
                matches += ok;
                if (!ok)
                    r.check(false, "d=" + std::to_string(d) + " R=" + detail::fmt("%g", R) + " count=" +
                                       std::to_string(c) + " brute=" + std::to_string(brute));
            }
        r.check(matches == cases, std::to_string(matches) + "/" + std::to_string(cases) + " (d,R) cases match");
        r.summary = std::to_string(matches) + "/" + std::to_string(cases) + " exact";
    });
}

// 50 seeded sign packings and 50 scaled packings, re-verified from scratch.
inline SuiteResult suite_packing() {
    return detail::timed_suite("packing", 30.0, [](SuiteResult& r) {
        const std::vector<std::pair<int, int>> ds{{4, 4}, {8, 4}, {10, 5}, {12, 6}, {16, 8}};
        const std::vector<std::tuple<int, std::int64_t, std::int64_t>> dR{
            {8, 3, 1}, {6, 2, 1}, {2, 10, 1}, {10, 3, 2}, {4, 7, 2}};
        int sign_ok = 0, sign_runs = 0, l2_ok = 0, l2_runs = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            for (auto [d, s] : ds) {
                ++sign_runs;
                try {
                    const auto U = sparse_sign_packing(d, s, default_packing_target(d, s), 10000, 1000 + seed);
                    sign_ok += detail::recheck_sign_packing(U.vectors, d, s) && U.support_size == s;
                } catch (const Error& e) {
                    r.check(false, std::string("sign packing threw: ") + e.what());
                }
            }
            for (auto [d, num, den] : dR) {
                ++l2_runs;
                try {
                    const auto W = l2_integer_packing(d, RadiusSpec::rational(num, den), 2000 + seed);
                    l2_ok += detail::recheck_scaled_packing(W, d, num, den);
                } catch (const Error& e) {
                    r.check(false, std::string("l2 packing threw: ") + e.what());
                }
            }
        }
        r.check(sign_ok == sign_runs, std::to_string(sign_ok) + "/" + std::to_string(sign_runs) + " sign packings certified");
        r.check(l2_ok == l2_runs, std::to_string(l2_ok) + "/" + std::to_string(l2_runs) + " scaled packings certified");
        r.summary = std::to_string(sign_ok + l2_ok) + "/" + std::to_string(sign_runs + l2_runs) + " certified";
    });
}

// Exact rational window check of the block gadget.
inline SuiteResult suite_gadget() {
    return detail::timed_suite("gadget", 5.0, [](SuiteResult& r) {
        int ok = 0, n = 0;
        for (std::int64_t L : {64, 256})
            for (std::int64_t tau : {1, 2}) {
                ++n;
                const auto rep = verify_gadget_exact(Rational(1), Rational(L), tau, Rational(1, 24));
                const std::string tag = "L=" + std::to_string(L) + " tau=" + std::to_string(tau);
                r.check(rep.unique_minimizers, tag + " unique minimizers (tau,1)/(0,0)");
                r.check(rep.opposite_gap_exact, tag + " opposite-vertex gap == gamma");
                r.check(rep.others_gap, tag + " other gaps >= 3 gamma (min " + rep.min_other_gap[0].str() + ", " +
                                            rep.min_other_gap[1].str() + ")");
                r.check(rep.det_exact, tag + " det H == mu L (" + rep.det.str() + ")");
                r.check(rep.trace_bound, tag + " tr H <= L (" + rep.trace.str() + ")");
                ok += rep.ok();
            }
        r.summary = std::to_string(ok) + "/" + std::to_string(n) + " (L, tau) configurations exact";
    });
}

// Closed-form and windowed ERM against brute-force enumeration.
inline SuiteResult suite_erm_oracle(std::uint64_t seed = 20) {
    return detail::timed_suite("erm_oracle", 60.0, [seed](SuiteResult& r) {
        RngStream rng(seed);
        int quad_ok = 0, gad_ok = 0;
        const int n = 150;
        for (int t = 0; t < n; ++t) {
            const int d = 1 + static_cast<int>(rng.uniform_int(4));
            const std::int64_t F = 1 + static_cast<std::int64_t>(rng.uniform_int(4));
            Vec z(static_cast<std::size_t>(d));
            double mu;
            if (t % 2 == 0) {
                // dyadic data: every objective value is exact, so ties are real ties
                mu = 0.5 * static_cast<double>(1 + rng.uniform_int(4));
                const auto span = static_cast<std::uint64_t>(16 * (F + 1) + 1);
                for (auto& v : z) v = (static_cast<double>(rng.uniform_int(span)) - static_cast<double>(8 * (F + 1))) / 8.0;
            } else {
                mu = 0.25 + 2.0 * rng.uniform01();
                for (auto& v : z) v = mu * (2.0 * static_cast<double>(F) + 2.0) * (rng.uniform01() - 0.5);
            }
            const QuadGaussianFamily f(mu, 1.0, Vec(static_cast<std::size_t>(d), 0.0));
            const auto brute = erm_enumerated(f, GaussianSummary{z, 1}, detail::linf_box(d, F));
            quad_ok += to_real(erm_quadratic_integer_box(z, mu, F)) == brute.x;
        }
        for (int t = 0; t < n; ++t) {
            const int d = 2 + static_cast<int>(rng.uniform_int(3));
            const double L = rng.bernoulli(0.5) ? 64.0 : 256.0;
            const std::int64_t tau = 1 + static_cast<std::int64_t>(rng.uniform_int(L == 64.0 ? 2 : 4));
            const std::int64_t F = tau + static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(5 - tau)));
            std::vector<int> b(static_cast<std::size_t>(d / 2));
            for (auto& v : b) v = rng.random_sign();
            const BlockGadgetFamily g(d, 1.0, L, tau, 1.0 / 24.0, b, 1.0);
            Vec z = g.mean();
            const double scale = t % 2 == 0 ? 0.1 : 8.0;
            for (auto& v : z) v += scale * rng.normal();
            const auto brute = erm_enumerated(g, GaussianSummary{z, 1}, detail::linf_box(d, F));
            gad_ok += to_real(erm_block_gadget(z, g, F)) == brute.x;
        }
        r.check(quad_ok == n, std::to_string(quad_ok) + "/" + std::to_string(n) + " quadratic integer-box instances");
        r.check(gad_ok == n, std::to_string(gad_ok) + "/" + std::to_string(n) + " block-gadget instances");
        r.summary = std::to_string(quad_ok + gad_ok) + "/" + std::to_string(2 * n) + " argmins agree";
    });
}

// Desk-scale configuration for the integer vs continuous rate comparison.
struct RateSeparationSetup {
    ExperimentConfig integer_erm;
    ExperimentConfig continuous_erm;
    std::vector<double> nominal_eps{0.4, 0.2, 0.1, 0.05};
    double eps_scale = 1.0 / 1664.0;  // keeps every eps inside the gadget regime eps <= c1 mu d / 72
};

inline RateSeparationSetup rate_separation_setup() {
    RateSeparationSetup s;
    ExperimentConfig c;
    c.d = 4;
    c.R = RadiusSpec(8.0);
    c.mu = 1.0;
    c.L = 64.0;
    c.sigma = 1.0;
    c.delta = 0.25;
    c.trials = 1000;
    c.master_seed = 2024;
    c.m_grid.clear();
    for (long long m = 1; m <= (1LL << 22); m *= 2) c.m_grid.push_back(m);
    s.integer_erm = c;
    s.integer_erm.id = "rate-integer";
    s.integer_erm.family = "gadget";
    s.integer_erm.rule = "erm";
    s.continuous_erm = c;
    s.continuous_erm.id = "rate-continuous";
    s.continuous_erm.family = "quad";
    s.continuous_erm.rule = "erm_continuous";
    s.continuous_erm.params = {{"feasible", "box"}};
    return s;
}

inline SuiteResult suite_rate_separation(int threads = 0) {
    return detail::timed_suite("rate_separation", 600.0, [threads](SuiteResult& r) {
        const auto s = rate_separation_setup();
        const auto integer = run_rate_experiment(s.integer_erm, s.nominal_eps, s.eps_scale, threads);
        const auto contin = run_rate_experiment(s.continuous_erm, s.nominal_eps, s.eps_scale, threads);
        const auto describe = [](const RateExperimentResult& x) {
            std::string o;
            for (const auto& run : x.runs) o += (o.empty() ? "" : ",") + (run.m_hat ? std::to_string(*run.m_hat) : "none");
            return o;
        };
        const bool fi = integer.fit.has_value() && integer.runs.size() == 4 && integer.fit->points.size() == 4;
        const bool fc = contin.fit.has_value() && contin.runs.size() == 4 && contin.fit->points.size() == 4;
        const double si = fi ? integer.fit->slope : std::nan("");
        const double sc = fc ? contin.fit->slope : std::nan("");
        r.check(fi && si >= 1.6 && si <= 2.4, "integer ERM slope " + detail::fmt("%.3f", si) + " in [1.6, 2.4], m_hat " +
                                                   describe(integer));
        r.check(fc && sc >= 0.7 && sc <= 1.3, "continuous ERM slope " + detail::fmt("%.3f", sc) +
                                                   " in [0.7, 1.3], m_hat " + describe(contin));
        r.summary = "slopes integer " + detail::fmt("%.3f", si) + ", continuous " + detail::fmt("%.3f", sc);
    });
}

inline SuiteResult suite_coin_correlation() {
    return detail::timed_suite("coin_correlation", 60.0, [](SuiteResult& r) {
        double worst = -kInf;
        for (double rho : {0.125, 0.25})
            for (long long m : {4, 16, 64}) {
                const auto c = correlation_experiment(16, 1.0, rho, m, 2000, 31);
                const double slack = c.ceiling + 3.0 * c.se - c.mean;
                worst = std::max(worst, c.mean - c.ceiling - 3.0 * c.se);
                r.check(c.within_ceiling, "rho=" + detail::fmt("%g", rho) + " m=" + std::to_string(m) + " mean " +
                                              detail::fmt("%.4f", c.mean) + " <= ceiling " +
                                              detail::fmt("%.4f", c.ceiling) + " + 3 SE (slack " +
                                              detail::fmt("%.4f", slack) + ")");
            }
        r.summary = "max(mean - ceiling - 3SE) = " + detail::fmt("%.4f", worst);
    });
}

inline SuiteResult suite_tent_threshold(int threads = 0) {
    return detail::timed_suite("tent_threshold", 120.0, [threads](SuiteResult& r) {
        ExperimentConfig c;
        c.id = "tent-threshold";
        c.family = "tent";
        c.rule = "erm";
        c.d = 8;
        c.R = RadiusSpec(3.0);
        c.delta = 0.1;
        c.trials = 2000;
        c.master_seed = 77;
        c.m_grid = {4, 8, 16, 32, 64, 128, 256, 512};
        const std::uint64_t packing_seed = 5;
        const auto W = l2_integer_packing(8, RadiusSpec(3.0), packing_seed);
        const double r_ = W.radius();
        c.epsilon = r_ / 16.0;
        c.params = {{"packing_seed", packing_seed}, {"rho", tent_rho(r_, c.epsilon)}};
        const auto res = run_experiment(c, threads);

        r.check(W.size() == 8, "|W| = " + std::to_string(W.size()));
        const auto& first = res.per_m.front();
        const auto& last = res.per_m.back();
        r.check(first.p_hat < 0.5, "p_hat(m=4) = " + detail::fmt("%.4f", first.p_hat) + " < 0.5");
        r.check(last.p_hat > 0.9, "p_hat(m=512) = " + detail::fmt("%.4f", last.p_hat) + " > 0.9");
        // Monotone up to 3 standard errors between consecutive grid points.
        bool mono = true;
        for (std::size_t i = 1; i < res.per_m.size(); ++i) {
            const double p = res.per_m[i - 1].p_hat, q = res.per_m[i].p_hat;
            const double se = std::sqrt((p * (1 - p) + q * (1 - q)) / static_cast<double>(c.trials));
            mono = mono && q >= p - 3.0 * se;
        }
        std::string curve;
        for (const auto& s : res.per_m) curve += (curve.empty() ? "" : " ") + detail::fmt("%.3f", s.p_hat);
        r.check(mono, "success curve monotone within 3 SE: " + curve);
        const double lb = tent_lower_bound(r_, c.epsilon, c.delta, std::log(static_cast<double>(W.size())));
        r.check(res.m_hat.has_value() && lb < static_cast<double>(*res.m_hat),
                "tent_lower_bound " + detail::fmt("%.4f", lb) + " < m_hat " +
                    (res.m_hat ? std::to_string(*res.m_hat) : std::string("none")));
        r.summary = "p_hat " + curve;
    });
}

inline SuiteResult suite_uc_deviation() {
    return detail::timed_suite("uc_deviation", 60.0, [](SuiteResult& r) {
        int exact = 0, runs = 0;
        for (int d = 1; d <= 3; ++d)
            for (std::int64_t F : {1, 2}) {
                Vec theta(static_cast<std::size_t>(d));
                for (int j = 0; j < d; ++j) theta[static_cast<std::size_t>(j)] = 0.3 * (j + 1) * (j % 2 ? -1 : 1);
                const auto u = uc_deviation_quadratic(d, F, 1.0, 1.0, theta, 10, 100, 40 + static_cast<std::uint64_t>(d));
                ++runs;
                exact += u.cross_checked && u.exact_match && u.brute_force.size() == 100;
            }
        r.check(exact == runs, std::to_string(exact) + "/" + std::to_string(runs) +
                                   " (d, floorR) settings: closed form == brute force on all 100 trials");

        const int d = 3;
        const std::int64_t F = 2;
        const double sigma = 1.0;
        std::vector<double> scaled;
        const double ref = std::sqrt(2.0 / std::numbers::pi);  // E|N(0,1)|
        for (long long m : {100, 1000, 10000}) {
            const auto u = uc_deviation_quadratic(d, F, 1.0, sigma, {0.2, -0.1, 0.4}, m, 2000, 41, false);
            scaled.push_back(median(u.sup) * std::sqrt(static_cast<double>(m)) / (sigma * F * d));
        }
        bool within = true;
        for (double v : scaled) within = within && v >= ref / 2.0 && v <= ref * 2.0;
        for (double v : scaled) within = within && v >= scaled.front() / 2.0 && v <= scaled.front() * 2.0;
        r.check(within, "median sup * sqrt(m) / (sigma floorR d) = " + detail::fmt("%.4f", scaled[0]) + ", " +
                            detail::fmt("%.4f", scaled[1]) + ", " + detail::fmt("%.4f", scaled[2]) +
                            " within a factor 2 of each other and of sqrt(2/pi)");
        r.summary = std::to_string(exact) + "/" + std::to_string(runs) + " exact; m^-1/2 scaling " +
                    (within ? "holds" : "fails");
    });
}

inline SuiteResult suite_increment_necessity() {
    return detail::timed_suite("increment_necessity", 30.0, [](SuiteResult& r) {
        const ScalarRule zero = [](const std::vector<double>&) { return 0.0; };
        std::string freq;
        for (long long m : {1, 2, 4}) {
            const auto rep = adversarial_necessity_demo(zero, 1.0, 0.25, 0.2, m, 10000, 50);
            r.check(rep.exceeds_delta, "m=" + std::to_string(m) + " failure freq " + detail::fmt("%.4f", rep.frequency) +
                                           ", 95% lower bound " + detail::fmt("%.4f", rep.ci_lower) + " > 0.2");
            r.check(rep.excess_at_a0 >= 2 * 0.25, "m=" + std::to_string(m) + " excess at the all-zero output " +
                                                      detail::fmt("%.3f", rep.excess_at_a0) + " >= 2 eps");
            freq += (freq.empty() ? "" : ", ") + detail::fmt("%.4f", rep.frequency);
        }
        r.summary = "failure frequencies " + freq;
    });
}

inline SuiteResult suite_regularity(std::uint64_t seed = 60) {
    return detail::timed_suite("regularity", 60.0, [seed](SuiteResult& r) {
        const auto run = [&](const auto& fam) {
            const auto rep = verify_regularity(fam, seed);
            r.check(rep.ok(), std::string(rep.family) + ": " + std::to_string(rep.checks) + " checks" +
                                  (rep.ok() ? "" : ", first violation: " + rep.violations.front()));
        };
        run(CoinLinearFamily(4, 2.0, CoinMode::dimension, 0.25, {1, -1, 1, 1}));
        run(TentFamily::from_packing(l2_integer_packing(8, RadiusSpec(3.0), 5), 2, 0.5));
        run(QuadGaussianFamily(0.5, 1.5, {1.0, -2.0, 0.5}));
        run(SmallKappaQuadFamily(1.0, 1.0 / 72.0, {1, -1, 1, -1}, 1.0));
        run(BlockGadgetFamily(5, 1.0, 64.0, 2, 1.0 / 24.0, {1, -1}, 1.0));
        run(LogisticFamily(3, 0.5, 2.0, 0.1));
        int ok = 0;
        for (const auto& d : r.details) ok += d.rfind("ok", 0) == 0;
        r.summary = std::to_string(ok) + "/6 families pass";
    });
}

struct NamedSuite {
    const char* name;
    std::function<SuiteResult(int threads)> run;
};

inline const std::vector<NamedSuite>& all_suites() {
    static const std::vector<NamedSuite> suites{
        {"counting", [](int) { return suite_counting(); }},
        {"packing", [](int) { return suite_packing(); }},
        {"gadget", [](int) { return suite_gadget(); }},
        {"erm_oracle", [](int) { return suite_erm_oracle(); }},
        {"rate_separation", [](int t) { return suite_rate_separation(t); }},
        {"coin_correlation", [](int) { return suite_coin_correlation(); }},
        {"tent_threshold", [](int t) { return suite_tent_threshold(t); }},
        {"uc_deviation", [](int) { return suite_uc_deviation(); }},
        {"increment_necessity", [](int) { return suite_increment_necessity(); }},
        {"regularity", [](int) { return suite_regularity(); }},
    };
    return suites;
}

}  // namespace scolab
