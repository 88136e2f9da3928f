// experiments.hpp
//
// Seeded Monte Carlo harness: success probabilities, grid search for the
// smallest good m, rate fits, uniform-deviation sampling, the coin
// correlation ceiling and the increment-necessity construction.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "scolab/families.hpp"
#include "scolab/info_bounds.hpp"
#include "scolab/io.hpp"
#include "scolab/lattice.hpp"
#include "scolab/solvers.hpp"
#include "scolab/stats.hpp"

namespace scolab {

// ---------------------------------------------------------------------------
// Configuration and records
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::string id = "experiment";
    std::string family = "coin";  // coin | tent | quad | smallkappa | gadget
    std::string rule = "erm";     // erm | majority | erm_continuous | sgd | zero
    int d = 2;
    RadiusSpec R{1.0};
    double epsilon = 0.1;
    double delta = 0.25;
    std::optional<double> mu;
    std::optional<double> L;
    std::optional<double> sigma;
    std::vector<long long> m_grid{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    long long trials = 100;
    std::uint64_t master_seed = 1;
    bool randomize_instance = true;
    json params = json::object();  // family extras: rho, mode, c1, tau, gamma, theta, packing_seed

    void validate() const {
        require(!id.empty(), "ExperimentConfig: id must be nonempty");
        require(d >= 1, "ExperimentConfig: d must be >= 1");
        require(epsilon > 0.0, "ExperimentConfig: eps must be positive");
        require(delta > 0.0 && delta < 1.0, "ExperimentConfig: delta must lie in (0,1)");
        require(trials >= 1, "ExperimentConfig: trials must be >= 1");
        require(!m_grid.empty(), "ExperimentConfig: m grid must be nonempty");
        require(m_grid.front() >= 1, "ExperimentConfig: m grid entries must be positive");
        for (std::size_t i = 1; i < m_grid.size(); ++i)
            require(m_grid[i] > m_grid[i - 1], "ExperimentConfig: m grid must be strictly increasing");
        require(params.is_object(), "ExperimentConfig: params must be a JSON object");
    }

    double mu_or(double v) const { return mu.value_or(v); }
    double sigma_or(double v) const { return sigma.value_or(v); }
};

inline json config_to_json(const ExperimentConfig& c) {
    json j{{"id", c.id},
           {"family", c.family},
           {"rule", c.rule},
           {"d", c.d},
           {"R", c.R.str()},
           {"eps", c.epsilon},
           {"delta", c.delta},
           {"m_grid", c.m_grid},
           {"trials", c.trials},
           {"seed", c.master_seed},
           {"randomize_instance", c.randomize_instance},
           {"params", c.params}};
    j["mu"] = c.mu ? json(*c.mu) : json(nullptr);
    j["L"] = c.L ? json(*c.L) : json(nullptr);
    j["sigma"] = c.sigma ? json(*c.sigma) : json(nullptr);
    return j;
}

// Keys absent from the document keep their current values.
inline void apply_config_json(ExperimentConfig& c, const json& j) {
    static const char* known[] = {"id",    "family", "rule",   "d",    "R",  "eps",   "delta",
                                  "m_grid", "trials", "seed",  "randomize_instance",  "params",
                                  "mu",    "L",      "sigma"};
    require(j.is_object(), "config: expected a JSON object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) == std::end(known))
            throw InvalidArgument("config: unknown key '" + k + "'");
    }
    try {
        if (j.contains("id")) c.id = j["id"].get<std::string>();
        if (j.contains("family")) c.family = j["family"].get<std::string>();
        if (j.contains("rule")) c.rule = j["rule"].get<std::string>();
        if (j.contains("d")) c.d = j["d"].get<int>();
        if (j.contains("R")) c.R = j["R"].is_string() ? RadiusSpec::parse(j["R"].get<std::string>())
                                                      : RadiusSpec(j["R"].get<double>());
        if (j.contains("eps")) c.epsilon = j["eps"].get<double>();
        if (j.contains("delta")) c.delta = j["delta"].get<double>();
        if (j.contains("m_grid")) c.m_grid = j["m_grid"].get<std::vector<long long>>();
        if (j.contains("trials")) c.trials = j["trials"].get<long long>();
        if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
        if (j.contains("randomize_instance")) c.randomize_instance = j["randomize_instance"].get<bool>();
        if (j.contains("params")) c.params = j["params"];
        for (const char* k : {"mu", "L", "sigma"}) {
            if (!j.contains(k)) continue;
            std::optional<double> v;
            if (!j[k].is_null()) v = j[k].get<double>();
            if (std::string(k) == "mu") c.mu = v;
            else if (std::string(k) == "L") c.L = v;
            else c.sigma = v;
        }
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
}

struct TrialRecord {
    long long m = 0;
    long long trial = 0;
    std::uint64_t seed = 0;
    std::string instance;
    double excess = 0.0;
    bool success = false;
    bool error = false;  // solver threw; counted as a failure
    std::string error_message;
};

struct MSummary {
    long long m = 0;
    long long trials = 0;
    long long successes = 0;
    long long errors = 0;
    double p_hat = 0.0;
    Interval ci{0.0, 1.0};
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;  // ordered by (m, trial)
    std::vector<MSummary> per_m;
    std::optional<long long> m_hat;
};

// ---------------------------------------------------------------------------
// Trial functions per (family, rule)
// ---------------------------------------------------------------------------

struct TrialOutcome {
    double excess;
    std::string instance;
};

using TrialFn = std::function<TrialOutcome(long long m, RngStream& rng)>;

namespace detail {

inline std::vector<int> random_signs(std::size_t n, RngStream& rng) {
    std::vector<int> b(n);
    for (auto& v : b) v = rng.random_sign();
    return b;
}

inline std::string signs_str(const std::vector<int>& b) {
    std::string s;
    for (int v : b) s += v > 0 ? '+' : '-';
    return s;
}

template <class T>
T param_or(const json& p, const char* key, T fallback) {
    if (!p.contains(key) || p[key].is_null()) return fallback;
    try {
        return p[key].get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("params: bad value for '") + key + "': " + e.what());
    }
}

inline IntOrInf require_floor_r(const ExperimentConfig& c) {
    const IntOrInf fr = c.R.floor_r();
    require(fr.is_inf() || fr.value() >= 1, "experiment: need R >= 1 for integer feasible sets");
    return fr;
}

// Builds the instance either once (fixed mode) or per trial from the trial stream.
template <class Make>
auto instance_source(const ExperimentConfig& c, Make make) {
    using Inst = decltype(make(std::declval<RngStream&>()));
    std::optional<Inst> fixed;
    if (!c.randomize_instance) {
        RngStream r(derive_seed(c.master_seed, c.id + "/instance", 0, 0));
        fixed.emplace(make(r));
    }
    return [fixed, make](RngStream& rng) -> Inst { return fixed ? *fixed : make(rng); };
}

inline TrialFn coin_trial_fn(const ExperimentConfig& c) {
    require(!c.R.is_inf(), "coin experiment: R must be finite");
    require(c.rule == "majority" || c.rule == "erm" || c.rule == "zero", "coin experiment: rule must be majority, erm or zero");
    const double R = c.R.value();
    const double rho = param_or<double>(c.params, "rho", std::min(0.5, 4.0 * c.epsilon / R));
    const std::string mode_s = param_or<std::string>(c.params, "mode", "dimension");
    require(mode_s == "dimension" || mode_s == "confidence", "coin experiment: mode must be dimension or confidence");
    const CoinMode mode = mode_s == "dimension" ? CoinMode::dimension : CoinMode::confidence;
    const std::size_t nb = mode == CoinMode::dimension ? static_cast<std::size_t>(c.d) : 1u;
    // Validate parameters once.
    CoinLinearFamily(c.d, R, mode, rho, std::vector<int>(nb, 1));
    auto source = instance_source(c, [=](RngStream& r) { return random_signs(nb, r); });
    const int d = c.d;
    const std::string rule = c.rule;
    return [=](long long m, RngStream& rng) {
        const auto b = source(rng);
        const CoinLinearFamily fam(d, R, mode, rho, b);
        const Feasible box = BoxContinuous{RadiusSpec(R)};
        const auto opt = fam.population_minimizer(box);
        std::vector<long long> s(static_cast<std::size_t>(d), 0);
        for (long long i = 0; i < m; ++i) {
            const auto z = fam.sample(rng);
            s[static_cast<std::size_t>(z.j)] += z.k;
        }
        Vec x = rule == "zero" ? Vec(static_cast<std::size_t>(d), 0.0) : coin_majority_decoder(s, R);
        return TrialOutcome{excess(fam, opt, x), signs_str(b)};
    };
}

inline TrialFn tent_trial_fn(const ExperimentConfig& c) {
    require(c.rule == "erm", "tent experiment: rule must be erm");
    const auto packing_seed = param_or<std::uint64_t>(c.params, "packing_seed", derive_seed(c.master_seed, 0x7e47));
    const auto W = l2_integer_packing(c.d, c.R, packing_seed);
    const double r = W.radius();
    const double rho = param_or<double>(c.params, "rho", tent_rho(r, c.epsilon));
    TentFamily::from_packing(W, 0, rho);  // validates rho and the packing
    auto source = instance_source(c, [n = W.size()](RngStream& rg) { return static_cast<std::size_t>(rg.uniform_int(n)); });
    return [=](long long m, RngStream& rng) {
        const std::size_t u = source(rng);
        const TentFamily fam = TentFamily::from_packing(W, u, rho);
        std::vector<long long> counts(fam.size(), 0);
        for (std::size_t w = 0; w < fam.size(); ++w) {
            const double p = fam.inclusion_probability(w);
            for (long long i = 0; i < m; ++i) counts[w] += rng.bernoulli(p) ? 1 : 0;
        }
        const std::size_t what = tent_erm(counts);
        const double ex = fam.population(fam.centers()[what]) - fam.population(fam.centers()[u]);
        return TrialOutcome{ex, "u=" + std::to_string(u)};
    };
}

inline Vec default_theta(int d) {
    Vec t(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) t[static_cast<std::size_t>(j)] = (j % 2 == 0 ? 0.5 : -0.5) * (1.0 + 0.25 * j);
    return t;
}

inline Feasible quad_feasible(const ExperimentConfig& c) {
    const std::string kind = param_or<std::string>(c.params, "feasible", c.rule == "erm" ? "box_integer" : "box");
    if (kind == "box_integer") return BoxInteger{require_floor_r(c)};
    if (kind == "box") return BoxContinuous{c.R};
    if (kind == "all_space") return AllSpace{};
    throw InvalidArgument("params: feasible must be box_integer, box or all_space");
}

inline TrialFn quad_trial_fn(const ExperimentConfig& c) {
    const double mu = c.mu_or(1.0), sigma = c.sigma_or(1.0);
    const Vec theta = param_or<Vec>(c.params, "theta", default_theta(c.d));
    require_dim(theta.size(), static_cast<std::size_t>(c.d), "quad experiment: theta");
    const QuadGaussianFamily fam(mu, sigma, theta);
    const Feasible feas = quad_feasible(c);
    const Minimizer opt = fam.population_minimizer(feas);
    const std::string rule = c.rule;
    if (rule == "erm") {
        const auto* box = std::get_if<BoxInteger>(&feas);
        require(box != nullptr, "quad experiment: rule erm needs feasible = box_integer");
        const IntOrInf fr = box->floorR;
        return [=](long long m, RngStream& rng) {
            const auto s = fam.sample_summary(m, rng);
            return TrialOutcome{excess(fam, opt, to_real(erm_quadratic_integer_box(s.zbar, mu, fr))), "fixed"};
        };
    }
    if (rule == "erm_continuous") {
        require(!std::holds_alternative<BoxInteger>(feas), "quad experiment: erm_continuous needs a continuous set");
        return [=](long long m, RngStream& rng) {
            const auto s = fam.sample_summary(m, rng);
            return TrialOutcome{excess(fam, opt, erm_continuous(s.zbar, mu, feas)), "fixed"};
        };
    }
    if (rule == "sgd") {
        require(!std::holds_alternative<BoxInteger>(feas), "quad experiment: sgd needs a continuous set");
        SgdOptions o;
        o.rule = StepRule::strongly_convex;
        o.mu = mu;
        return [=](long long m, RngStream& rng) {
            return TrialOutcome{excess(fam, opt, projected_sgd(fam, feas, m, o, rng)), "fixed"};
        };
    }
    throw InvalidArgument("quad experiment: rule must be erm, erm_continuous or sgd");
}

inline TrialFn smallkappa_trial_fn(const ExperimentConfig& c) {
    require(c.rule == "erm", "smallkappa experiment: rule must be erm");
    const double mu = c.mu_or(1.0), sigma = c.sigma_or(1.0);
    const double gamma = param_or<double>(c.params, "gamma", mu / 72.0);
    const IntOrInf fr = require_floor_r(c);
    SmallKappaQuadFamily(mu, gamma, std::vector<int>(static_cast<std::size_t>(c.d), 1), sigma);
    auto source = instance_source(c, [n = static_cast<std::size_t>(c.d)](RngStream& r) { return random_signs(n, r); });
    return [=](long long m, RngStream& rng) {
        const auto b = source(rng);
        const SmallKappaQuadFamily fam(mu, gamma, b, sigma);
        const auto opt = fam.population_minimizer(BoxInteger{fr});
        const auto s = fam.sample_summary(m, rng);
        return TrialOutcome{excess(fam, opt, to_real(erm_quadratic_integer_box(s.zbar, mu, fr))), signs_str(b)};
    };
}

inline TrialFn gadget_trial_fn(const ExperimentConfig& c) {
    require(c.rule == "erm", "gadget experiment: rule must be erm");
    require(c.d >= 2, "gadget experiment: d must be >= 2");
    const double mu = c.mu_or(1.0), sigma = c.sigma_or(1.0);
    const double L = c.L.value_or(64.0 * mu);
    const IntOrInf fr = require_floor_r(c);
    const double c1 = param_or<double>(c.params, "c1", 1.0 / 192.0);
    const auto tau = param_or<std::int64_t>(c.params, "tau", BlockGadgetFamily::default_tau(L / mu, fr));
    const double gamma = param_or<double>(c.params, "gamma", BlockGadgetFamily::gamma_for(c.epsilon, c.d, c1));
    const auto nb = static_cast<std::size_t>(c.d / 2);
    BlockGadgetFamily(c.d, mu, L, tau, gamma, std::vector<int>(nb, 1), sigma);
    auto source = instance_source(c, [nb](RngStream& r) { return random_signs(nb, r); });
    const int d = c.d;
    return [=](long long m, RngStream& rng) {
        const auto b = source(rng);
        const BlockGadgetFamily fam(d, mu, L, tau, gamma, b, sigma);
        const auto opt = fam.population_minimizer(BoxInteger{fr});
        const auto s = fam.sample_summary(m, rng);
        return TrialOutcome{excess(fam, opt, to_real(erm_block_gadget(s.zbar, fam, fr))), signs_str(b)};
    };
}

}  // namespace detail

inline TrialFn make_trial_fn(const ExperimentConfig& c) {
    c.validate();
    if (c.family == CoinLinearFamily::tag) return detail::coin_trial_fn(c);
    if (c.family == TentFamily::tag) return detail::tent_trial_fn(c);
    if (c.family == QuadGaussianFamily::tag) return detail::quad_trial_fn(c);
    if (c.family == SmallKappaQuadFamily::tag) return detail::smallkappa_trial_fn(c);
    if (c.family == BlockGadgetFamily::tag) return detail::gadget_trial_fn(c);
    if (c.family == LogisticFamily::tag)
        throw Unsupported("experiment: logistic excess needs a population minimizer, which has no closed form");
    throw InvalidArgument("experiment: unknown family '" + c.family + "'");
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

inline unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class Body>
void parallel_for(long long n, unsigned threads, Body&& body) {
    threads = static_cast<unsigned>(std::min<long long>(std::max(1u, threads), std::max(1LL, n)));
    if (threads == 1) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (long long i = next++; i < n; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

inline std::vector<TrialRecord> run_trials(const ExperimentConfig& c, const TrialFn& fn, long long m, int threads) {
    std::vector<TrialRecord> out(static_cast<std::size_t>(c.trials));
    parallel_for(c.trials, resolve_threads(threads), [&](long long t) {
        TrialRecord& rec = out[static_cast<std::size_t>(t)];
        rec.m = m;
        rec.trial = t;
        rec.seed = derive_seed(c.master_seed, c.id, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t));
        RngStream rng(rec.seed);
        try {
            const auto o = fn(m, rng);
            rec.instance = o.instance;
            rec.excess = o.excess;
            rec.success = o.excess <= c.epsilon;
        } catch (const Error& e) {
            rec.error = true;
            rec.error_message = e.what();
            rec.excess = std::nan("");
            rec.success = false;
        }
    });
    return out;
}

inline MSummary summarize_trials(long long m, const std::vector<TrialRecord>& recs) {
    MSummary s;
    s.m = m;
    s.trials = static_cast<long long>(recs.size());
    for (const auto& r : recs) {
        s.successes += r.success ? 1 : 0;
        s.errors += r.error ? 1 : 0;
    }
    s.p_hat = static_cast<double>(s.successes) / static_cast<double>(s.trials);
    s.ci = clopper_pearson(s.successes, s.trials);
    return s;
}

inline MSummary estimate_success(const ExperimentConfig& c, long long m, int threads = 0) {
    const TrialFn fn = make_trial_fn(c);
    return summarize_trials(m, run_trials(c, fn, m, threads));
}

// Smallest grid m with p_hat >= 1 - delta; no monotone smoothing.
inline std::optional<long long> find_min_m(const std::vector<MSummary>& per_m, double delta) {
    for (const auto& s : per_m)
        if (s.p_hat >= 1.0 - delta) return s.m;
    return std::nullopt;
}

inline ExperimentResult run_experiment(const ExperimentConfig& c, int threads = 0) {
    const TrialFn fn = make_trial_fn(c);
    ExperimentResult res;
    res.config = c;
    for (long long m : c.m_grid) {
        auto recs = run_trials(c, fn, m, threads);
        res.per_m.push_back(summarize_trials(m, recs));
        res.records.insert(res.records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    res.m_hat = find_min_m(res.per_m, c.delta);
    return res;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline void write_trials_csv(std::ostream& os, const ExperimentResult& r) {
    const auto& c = r.config;
    os << "experiment_id,family,rule,d,R,eps,delta,m,trial,seed,excess,success\n";
    for (const auto& t : r.records) {
        os << c.id << ',' << c.family << ',' << c.rule << ',' << c.d << ',' << c.R.str() << ',' << fmt_double(c.epsilon)
           << ',' << fmt_double(c.delta) << ',' << t.m << ',' << t.trial << ',' << t.seed << ','
           << (t.error ? std::string("nan") : fmt_double(t.excess)) << ',' << (t.error ? -1 : (t.success ? 1 : 0))
           << '\n';
    }
}

inline json rate_fit_to_json(const RateFit& f) {
    json pts = json::array();
    for (const auto& [e, m] : f.points) pts.push_back({{"eps", e}, {"m_hat", m}});
    return {{"points", pts}, {"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

inline json summary_to_json(const ExperimentResult& r, const std::optional<RateFit>& fit = std::nullopt) {
    json per = json::array();
    for (const auto& s : r.per_m)
        per.push_back({{"m", s.m},
                       {"trials", s.trials},
                       {"successes", s.successes},
                       {"errors", s.errors},
                       {"p_hat", s.p_hat},
                       {"ci_lo", s.ci.lo},
                       {"ci_hi", s.ci.hi}});
    json j{{"config", config_to_json(r.config)}, {"per_m", per}};
    j["m_hat"] = r.m_hat ? json(*r.m_hat) : json(nullptr);
    if (fit) j["rate_fit"] = rate_fit_to_json(*fit);
    return j;
}

// ---------------------------------------------------------------------------
// Rate experiment: one experiment per eps, then a log-log fit of m_hat.
// ---------------------------------------------------------------------------

struct RateExperimentResult {
    std::vector<ExperimentResult> runs;
    std::optional<RateFit> fit;  // absent when fewer than 3 eps produced an m_hat
};

// eps_actual = eps_scale * nominal; the id gets an index suffix per eps.
inline RateExperimentResult run_rate_experiment(const ExperimentConfig& base, const std::vector<double>& nominal_eps,
                                                double eps_scale = 1.0, int threads = 0) {
    require(eps_scale > 0.0, "run_rate_experiment: eps_scale must be positive");
    RateExperimentResult out;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < nominal_eps.size(); ++i) {
        ExperimentConfig c = base;
        c.epsilon = nominal_eps[i] * eps_scale;
        c.id = base.id + "-eps" + std::to_string(i);
        out.runs.push_back(run_experiment(c, threads));
        if (out.runs.back().m_hat) pts.emplace_back(c.epsilon, static_cast<double>(*out.runs.back().m_hat));
    }
    if (pts.size() >= 3) out.fit = fit_rate(pts);
    return out;
}

// ---------------------------------------------------------------------------
// Anchored uniform deviation for the quadratic family on the integer box.
// The deviation at x is <Zbar - theta, x>, so the sup is floor(R) ||Zbar - theta||_1.
// ---------------------------------------------------------------------------

inline double uc_sup_closed_form(const Vec& zbar, const Vec& theta, std::int64_t floorR) {
    const double fr = static_cast<double>(floorR);
    double s = 0.0;
    for (std::size_t j = 0; j < zbar.size(); ++j) s += std::abs((zbar[j] - theta[j]) * fr);
    return s;
}

inline double uc_sup_brute_force(const Vec& zbar, const Vec& theta, std::int64_t floorR,
                                 std::uint64_t budget = kDefaultEnumerationBudget) {
    const auto box = enumerate_integer_points(static_cast<int>(zbar.size()), RadiusSpec(static_cast<double>(floorR)),
                                              Norm::linf, budget);
    double best = 0.0;
    for (const auto& x : box.points) {
        // Ordering the terms as in the closed form keeps the optimum bit-identical.
        double pos = 0.0, neg = 0.0;
        for (std::size_t j = 0; j < zbar.size(); ++j) {
            pos += (zbar[j] - theta[j]) * static_cast<double>(x[j]);
            neg += (zbar[j] - theta[j]) * static_cast<double>(-x[j]);
        }
        best = std::max({best, pos, neg});
    }
    return best;
}

struct UcDeviationResult {
    std::vector<double> sup;          // closed form, per trial
    std::vector<double> brute_force;  // filled when cross-checked
    bool cross_checked = false;
    bool exact_match = true;
};

inline UcDeviationResult uc_deviation_quadratic(int d, std::int64_t floorR, double mu, double sigma, const Vec& theta,
                                                long long m, long long trials, std::uint64_t seed,
                                                bool cross_check = true) {
    require(floorR >= 1, "uc_deviation_quadratic: floor(R) must be a positive integer");
    require(m >= 1 && trials >= 1, "uc_deviation_quadratic: m and trials must be positive");
    const QuadGaussianFamily fam(mu, sigma, theta);
    require_dim(theta.size(), static_cast<std::size_t>(d), "uc_deviation_quadratic: theta");
    UcDeviationResult out;
    out.cross_checked = cross_check && d <= 3;
    for (long long t = 0; t < trials; ++t) {
        RngStream rng(derive_seed(seed, "uc", static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)));
        const auto s = fam.sample_summary(m, rng);
        out.sup.push_back(uc_sup_closed_form(s.zbar, theta, floorR));
        if (out.cross_checked) {
            out.brute_force.push_back(uc_sup_brute_force(s.zbar, theta, floorR));
            if (out.brute_force.back() != out.sup.back()) out.exact_match = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coin correlation ceiling: E[<B, Y>/d] <= rho sqrt(2m/d).
// ---------------------------------------------------------------------------

struct CorrelationResult {
    double mean;
    double se;
    double ceiling;
    bool within_ceiling;  // mean <= ceiling + 3 se
};

inline CorrelationResult correlation_experiment(int d, double R, double rho, long long m, long long trials,
                                                std::uint64_t seed, const std::string& rule = "majority") {
    require(rule == "majority" || rule == "zero", "correlation_experiment: rule must be majority or zero");
    require(trials >= 2, "correlation_experiment: need at least 2 trials");
    std::vector<double> corr(static_cast<std::size_t>(trials));
    for (long long t = 0; t < trials; ++t) {
        RngStream rng(derive_seed(seed, "correlation", static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)));
        const auto b = detail::random_signs(static_cast<std::size_t>(d), rng);
        const CoinLinearFamily fam(d, R, CoinMode::dimension, rho, b);
        const auto samples = draw(fam, static_cast<std::size_t>(m), rng);
        const Vec x = rule == "majority" ? coin_majority_decoder(samples, d, R) : Vec(static_cast<std::size_t>(d), 0.0);
        double c = 0.0;
        for (int j = 0; j < d; ++j) c += b[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)] / R;
        corr[static_cast<std::size_t>(t)] = c / d;
    }
    const auto ms = mean_se(corr);
    const double ceiling = rho * std::sqrt(2.0 * static_cast<double>(m) / d);
    return {ms.mean, ms.se, ceiling, ms.mean <= ceiling + 3.0 * ms.se};
}

// ---------------------------------------------------------------------------
// Increment necessity: a two-atom law on which any deterministic rule fails
// with probability above delta.
// ---------------------------------------------------------------------------

struct NecessityReport {
    double a0;          // rule output on the all-zero sample
    double p;           // P[Z = 0] = (delta^(1/m) + 1) / 2
    double atom;        // the other atom
    double mean;        // E Z, the population minimizer
    double excess_at_a0;
    long long failures;  // all-zero sample and excess > eps
    long long trials;
    double frequency;
    double ci_lower;     // one-sided 95% Clopper-Pearson lower bound
    bool exceeds_delta;  // ci_lower > delta
};

using ScalarRule = std::function<double(const std::vector<double>&)>;

inline NecessityReport adversarial_necessity_demo(const ScalarRule& rule, double mu, double epsilon, double delta,
                                                  long long m, long long trials, std::uint64_t seed) {
    require(mu > 0.0 && epsilon > 0.0, "adversarial_necessity_demo: mu and eps must be positive");
    require(delta > 0.0 && delta < 1.0, "adversarial_necessity_demo: delta must lie in (0,1)");
    require(m >= 1 && trials >= 1, "adversarial_necessity_demo: m and trials must be positive");
    NecessityReport r{};
    r.a0 = rule(std::vector<double>(static_cast<std::size_t>(m), 0.0));
    r.p = (std::pow(delta, 1.0 / static_cast<double>(m)) + 1.0) / 2.0;
    const double k = std::ceil(2.0 * std::sqrt(epsilon / mu));
    r.atom = (r.a0 + k) / (1.0 - r.p);
    r.mean = (1.0 - r.p) * r.atom;
    const auto excess_at = [&](double x) { return 0.5 * mu * (x - r.mean) * (x - r.mean); };
    r.excess_at_a0 = excess_at(r.a0);
    r.trials = trials;
    for (long long t = 0; t < trials; ++t) {
        RngStream rng(derive_seed(seed, "necessity", static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t)));
        std::vector<double> z(static_cast<std::size_t>(m));
        bool all_zero = true;
        for (auto& v : z) {
            v = rng.bernoulli(r.p) ? 0.0 : r.atom;
            all_zero = all_zero && v == 0.0;
        }
        if (all_zero && excess_at(rule(z)) > epsilon) ++r.failures;
    }
    r.frequency = static_cast<double>(r.failures) / static_cast<double>(trials);
    r.ci_lower = clopper_pearson_lower(r.failures, trials);
    r.exceeds_delta = r.ci_lower > delta;
    return r;
}

}  // namespace scolab
