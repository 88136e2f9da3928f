// scolab: command-line front end.
//
//   scolab geometry {enumerate,count,packing,l2packing,h2} ...
//   scolab bounds --d --R --eps --delta [--mu --L --sigma]
//   scolab verify --suite <name|all>
//   scolab simulate [--config file.json] [flags] --out dir
//   scolab ratefit --in a/summary.json b/summary.json ... [--out fit.json]
//
// Exit status: 0 success, 1 verification or runtime failure, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scolab/experiments.hpp"
#include "scolab/info_bounds.hpp"
#include "scolab/io.hpp"
#include "scolab/lattice.hpp"
#include "scolab/verify.hpp"

namespace fs = std::filesystem;
using namespace scolab;

namespace {

struct UsageError : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

std::vector<std::string> g_argv;

json manifest(const json& config) {
    return {{"tool", "scolab"}, {"version", SCOLAB_VERSION}, {"command", g_argv}, {"config", config}};
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write " + p.string());
    os << text;
}

// Writes `text` to `out` (plus a sibling manifest), or to stdout when out is empty.
void emit(const std::string& out, const std::string& text, const json& config) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    write_text(out, text);
    write_text(out + ".manifest.json", manifest(config).dump(2) + "\n");
}

int threads_default() {
    const char* env = std::getenv("SCO_LAB_THREADS");
    if (!env || !*env) return 0;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(env, &pos);
        if (pos != std::string(env).size() || v < 0) throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("SCO_LAB_THREADS must be a nonnegative integer, got '") + env + "'");
    }
}

RadiusSpec parse_radius(const std::string& s) {
    try {
        return RadiusSpec::parse(s);
    } catch (const std::logic_error&) {
        throw UsageError("--R: cannot parse '" + s + "'");
    }
}

std::vector<long long> parse_grid(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(cell, &pos));
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::logic_error&) {
            throw UsageError("--m-grid: bad entry '" + cell + "'");
        }
    }
    if (out.empty()) throw UsageError("--m-grid: empty list");
    return out;
}

// ---------------------------------------------------------------------------

struct GeometryArgs {
    int d = 0;
    std::string R;
    std::string norm = "l2";
    int s = 0;
    std::size_t target = 0;
    std::size_t attempts = 10000;
    std::uint64_t seed = 1;
    std::string method = "batch";
    std::string out;
};

json geometry_config(const std::string& what, const GeometryArgs& a) {
    return {{"geometry", what}, {"d", a.d},           {"R", a.R},         {"norm", a.norm},   {"s", a.s},
            {"target", a.target}, {"attempts", a.attempts}, {"seed", a.seed}, {"method", a.method}};
}

PackingMethod parse_method(const std::string& m) {
    if (m == "batch") return PackingMethod::batch;
    if (m == "greedy") return PackingMethod::greedy;
    throw UsageError("--method must be batch or greedy");
}

void add_geometry(CLI::App& app, GeometryArgs& a, std::function<void()>& action) {
    auto* geo = app.add_subcommand("geometry", "Lattice counts, enumerations and packings");
    geo->require_subcommand(1);

    auto* en = geo->add_subcommand("enumerate", "Integer points of a ball as CSV");
    en->add_option("--d", a.d, "dimension")->required();
    en->add_option("--R", a.R, "radius (decimal, p/q)")->required();
    en->add_option("--norm", a.norm, "l2 or linf");
    en->add_option("--out", a.out, "output CSV (default stdout)");
    en->callback([&] {
        action = [&] {
            std::ostringstream os;
            write_points_csv(os, enumerate_integer_points(a.d, parse_radius(a.R), parse_norm(a.norm)));
            emit(a.out, os.str(), geometry_config("enumerate", a));
        };
    });

    auto* co = geo->add_subcommand("count", "Exact number of integer points in the l2 ball");
    co->add_option("--d", a.d, "dimension")->required();
    co->add_option("--R", a.R, "radius")->required();
    co->callback([&] {
        action = [&] { std::cout << count_integer_points_l2(a.d, parse_radius(a.R)) << "\n"; };
    });

    auto* h = geo->add_subcommand("h2", "Entropy scale of the integer l2 ball");
    h->add_option("--d", a.d, "dimension")->required();
    h->add_option("--R", a.R, "radius")->required();
    h->callback([&] {
        action = [&] { std::cout << fmt_double(h2(a.d, parse_radius(a.R))) << "\n"; };
    });

    auto* pk = geo->add_subcommand("packing", "Sparse sign packing");
    pk->add_option("--d", a.d, "dimension")->required();
    pk->add_option("--s", a.s, "support size")->required();
    pk->add_option("--target", a.target, "number of vectors (default: min(8, universe/2))");
    pk->add_option("--attempts", a.attempts, "maximum attempts");
    pk->add_option("--seed", a.seed, "seed");
    pk->add_option("--method", a.method, "batch or greedy");
    pk->add_option("--out", a.out, "output file (default stdout)");
    pk->callback([&] {
        action = [&] {
            const std::size_t target = a.target ? a.target : default_packing_target(a.d, a.s);
            std::ostringstream os;
            write_packing_csv(os, sparse_sign_packing(a.d, a.s, target, a.attempts, a.seed, parse_method(a.method)));
            emit(a.out, os.str(), geometry_config("packing", a));
        };
    });

    auto* l2 = geo->add_subcommand("l2packing", "Scaled integer packing inside the l2 ball");
    l2->add_option("--d", a.d, "dimension")->required();
    l2->add_option("--R", a.R, "radius >= 1")->required();
    l2->add_option("--target", a.target, "number of centers (0 = default)");
    l2->add_option("--attempts", a.attempts, "maximum attempts");
    l2->add_option("--seed", a.seed, "seed");
    l2->add_option("--method", a.method, "batch or greedy");
    l2->add_option("--out", a.out, "output file (default stdout)");
    l2->callback([&] {
        action = [&] {
            std::ostringstream os;
            write_packing_csv(os, l2_integer_packing(a.d, parse_radius(a.R), a.seed, a.target, a.attempts,
                                                     parse_method(a.method)));
            emit(a.out, os.str(), geometry_config("l2packing", a));
        };
    });
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
    int d = 1;
    std::string R;
    double eps = 0.1;
    double delta = 0.25;
    std::optional<double> mu, L, sigma;
    double constant = 1.0;
    std::uint64_t seed = 1;
    std::string out;
};

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json bounds_json(const BoundsArgs& a) {
    BoundQuery q;
    q.d = a.d;
    q.R = parse_radius(a.R);
    q.epsilon = a.eps;
    q.delta = a.delta;
    q.mu = a.mu;
    q.L = a.L;
    q.sigma = a.sigma;
    q.validate();

    json j;
    j["query"] = {{"d", q.d},          {"R", q.R.str()},      {"eps", q.epsilon}, {"delta", q.delta},
                  {"mu", opt_json(q.mu)}, {"L", opt_json(q.L)}, {"sigma", opt_json(q.sigma)}};
    if (!q.R.is_inf()) {
        j["h2"] = h2(q.d, q.R);
        const auto lb = linf_lower_bounds(q);
        j["linf"] = {{"dimension_term", lb.dimension_term},
                     {"confidence_term", lb.confidence_term},
                     {"combined", lb.combined},
                     {"regime_ok", lb.regime_ok}};
        try {
            j["count_l2"] = count_integer_points_l2(q.d, q.R);
        } catch (const BudgetExceeded&) {
            j["count_l2"] = nullptr;
        }
    }
    j["two_point_kl_threshold"] = q.delta <= 0.25 ? json(two_point_kl_threshold(q.delta)) : json(nullptr);
    // Tent bound on the default packing, when its preconditions hold.
    j["tent"] = nullptr;
    if (!q.R.is_inf() && q.R.value() >= 1.0 && q.delta <= 0.25) {
        try {
            const auto W = l2_integer_packing(q.d, q.R, a.seed);
            const double r = W.radius();
            if (q.epsilon <= r / 16.0)
                j["tent"] = {{"r", r},
                             {"size", W.size()},
                             {"rho", tent_rho(r, q.epsilon)},
                             {"lower_bound", tent_lower_bound(r, q.epsilon, q.delta, std::log(static_cast<double>(W.size())))}};
        } catch (const ConstructionFailed&) {
        }
    }
    j["sc_rates"] = nullptr;
    if (q.mu && q.L && q.sigma) {
        const auto s = sc_rate_formulas(q, a.constant);
        j["sc_rates"] = {{"constant", a.constant},
                         {"auc_rate", std::isinf(s.auc_rate) ? json(nullptr) : json(s.auc_rate)},
                         {"erm_rate", s.erm_rate},
                         {"continuous_erm_rate", s.continuous_erm_rate}};
        j["localization_radius"] = localization_radius(q.d, *q.L / *q.mu, q.R.floor_r(), 0.0, *q.mu);
    }
    return j;
}

void add_bounds(CLI::App& app, BoundsArgs& a, std::function<void()>& action) {
    auto* b = app.add_subcommand("bounds", "Evaluate the lower-bound and rate formulas as JSON");
    b->add_option("--d", a.d, "dimension")->required();
    b->add_option("--R", a.R, "radius (decimal, p/q or inf)")->required();
    b->add_option("--eps", a.eps, "accuracy")->required();
    b->add_option("--delta", a.delta, "failure probability")->required();
    b->add_option("--mu", a.mu, "strong convexity");
    b->add_option("--L", a.L, "smoothness");
    b->add_option("--sigma", a.sigma, "noise scale");
    b->add_option("--constant", a.constant, "multiplicative constant for the rate formulas");
    b->add_option("--seed", a.seed, "packing seed for the tent bound");
    b->add_option("--out", a.out, "output JSON (default stdout)");
    b->callback([&] {
        action = [&] {
            const json j = bounds_json(a);
            emit(a.out, j.dump(2) + "\n", j["query"]);
        };
    });
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    bool verbose = false;
};

int run_verify(const VerifyArgs& a, int threads) {
    bool any = false, ok = true;
    for (const auto& s : all_suites()) {
        if (a.suite != "all" && a.suite != s.name) continue;
        any = true;
        const auto r = s.run(threads);
        std::printf("%s %-20s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.summary.c_str());
        if (a.verbose || !r.passed)
            for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
        ok = ok && r.passed;
    }
    if (!any) throw UsageError("--suite: unknown suite '" + a.suite + "'");
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::optional<std::string> id, family, rule, R, m_grid, params;
    std::optional<int> d;
    std::optional<double> eps, delta, mu, L, sigma;
    std::optional<long long> trials;
    std::optional<std::uint64_t> seed;
    bool fixed_instance = false;
    std::string out = "out";
};

// Config file first, then flags on top.
ExperimentConfig resolve_config(const SimulateArgs& a) {
    ExperimentConfig c;
    if (!a.config_path.empty()) {
        std::ifstream is(a.config_path);
        if (!is) throw UsageError("--config: cannot open " + a.config_path);
        json j;
        try {
            j = json::parse(is);
        } catch (const json::exception& e) {
            throw UsageError("--config: " + std::string(e.what()));
        }
        apply_config_json(c, j);
    }
    if (a.id) c.id = *a.id;
    if (a.family) c.family = *a.family;
    if (a.rule) c.rule = *a.rule;
    if (a.d) c.d = *a.d;
    if (a.R) c.R = parse_radius(*a.R);
    if (a.eps) c.epsilon = *a.eps;
    if (a.delta) c.delta = *a.delta;
    if (a.mu) c.mu = a.mu;
    if (a.L) c.L = a.L;
    if (a.sigma) c.sigma = a.sigma;
    if (a.m_grid) c.m_grid = parse_grid(*a.m_grid);
    if (a.trials) c.trials = *a.trials;
    if (a.seed) c.master_seed = *a.seed;
    if (a.fixed_instance) c.randomize_instance = false;
    if (a.params) {
        try {
            const json p = json::parse(*a.params);
            if (!p.is_object()) throw UsageError("--params must be a JSON object");
            for (const auto& [k, v] : p.items()) c.params[k] = v;
        } catch (const json::exception& e) {
            throw UsageError("--params: " + std::string(e.what()));
        }
    }
    c.validate();
    return c;
}

int run_simulate(const SimulateArgs& a, int threads) {
    const ExperimentConfig c = resolve_config(a);
    const auto res = run_experiment(c, threads);
    const fs::path dir = fs::path(a.out) / c.id;
    std::ostringstream csv;
    write_trials_csv(csv, res);
    write_text(dir / "trials.csv", csv.str());
    write_text(dir / "summary.json", summary_to_json(res).dump(2) + "\n");
    write_text(dir / "manifest.json", manifest(config_to_json(c)).dump(2) + "\n");
    for (const auto& s : res.per_m)
        std::printf("m=%lld p_hat=%.4f ci=[%.4f, %.4f]%s\n", s.m, s.p_hat, s.ci.lo, s.ci.hi,
                    s.errors ? (" errors=" + std::to_string(s.errors)).c_str() : "");
    if (res.m_hat)
        std::printf("m_hat=%lld\n", *res.m_hat);
    else
        std::printf("m_hat=none\n");
    std::printf("wrote %s\n", dir.string().c_str());
    return 0;
}

void add_simulate(CLI::App& app, SimulateArgs& a, std::function<void()>& action, int& status, const int& threads) {
    auto* s = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
    s->add_option("--config", a.config_path, "JSON config; flags override its values");
    s->add_option("--id", a.id, "experiment id (output subdirectory)");
    s->add_option("--family", a.family, "coin | tent | quad | smallkappa | gadget");
    s->add_option("--rule", a.rule, "erm | majority | zero | erm_continuous | sgd");
    s->add_option("--d", a.d, "dimension");
    s->add_option("--R", a.R, "radius (decimal, p/q or inf)");
    s->add_option("--eps", a.eps, "accuracy");
    s->add_option("--delta", a.delta, "failure probability");
    s->add_option("--mu", a.mu, "strong convexity");
    s->add_option("--L", a.L, "smoothness");
    s->add_option("--sigma", a.sigma, "noise scale");
    s->add_option("--m-grid", a.m_grid, "comma-separated increasing sample sizes");
    s->add_option("--trials", a.trials, "trials per m");
    s->add_option("--seed", a.seed, "master seed");
    s->add_option("--params", a.params, "JSON object merged into the family parameters");
    s->add_flag("--fixed-instance", a.fixed_instance, "draw the hidden instance once instead of per trial");
    s->add_option("--out", a.out, "output root directory");
    s->callback([&] { action = [&] { status = run_simulate(a, threads); }; });
}

// ---------------------------------------------------------------------------

int run_ratefit(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<std::pair<double, double>> pts;
    json sources = json::array();
    for (const auto& path : inputs) {
        std::ifstream is(path);
        if (!is) throw UsageError("--in: cannot open " + path);
        json j;
        try {
            j = json::parse(is);
        } catch (const json::exception& e) {
            throw UsageError("--in " + path + ": " + e.what());
        }
        if (!j.contains("config") || !j["config"].contains("eps") || !j.contains("m_hat"))
            throw UsageError("--in " + path + ": not a summary.json");
        sources.push_back(path);
        if (j["m_hat"].is_null()) {
            std::cerr << "warning: " << path << " has no m_hat; skipped\n";
            continue;
        }
        pts.emplace_back(j["config"]["eps"].get<double>(), j["m_hat"].get<double>());
    }
    const auto fit = fit_rate(pts);
    emit(out, rate_fit_to_json(fit).dump(2) + "\n", json{{"inputs", sources}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    g_argv.assign(argv, argv + argc);
    g_argv[0] = "scolab";
    CLI::App app{"scolab: sample-complexity experiments for stochastic convex optimization"};
    app.set_version_flag("--version", std::string(SCOLAB_VERSION));
    app.require_subcommand(1);
    app.fallthrough();  // --threads may follow the subcommand

    int threads = 0;
    int status = 0;
    std::function<void()> action;

    GeometryArgs geo;
    BoundsArgs bounds;
    VerifyArgs verify;
    SimulateArgs sim;
    std::vector<std::string> fit_in;
    std::string fit_out;

    try {
        threads = threads_default();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    app.add_option("--threads", threads, "worker threads (default: SCO_LAB_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);

    add_geometry(app, geo, action);
    add_bounds(app, bounds, action);

    auto* v = app.add_subcommand("verify", "Run verification suites");
    v->add_option("--suite", verify.suite, "suite name or 'all'");
    v->add_flag("--verbose", verify.verbose, "print every sub-check");
    v->callback([&] { action = [&] { status = run_verify(verify, threads); }; });

    add_simulate(app, sim, action, status, threads);

    auto* rf = app.add_subcommand("ratefit", "Fit ln m_hat against ln(1/eps) across summaries");
    rf->add_option("--in", fit_in, "summary.json files")->required();
    rf->add_option("--out", fit_out, "output JSON (default stdout)");
    rf->callback([&] { action = [&] { status = run_ratefit(fit_in, fit_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (action) action();
        return status;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Unsupported& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
