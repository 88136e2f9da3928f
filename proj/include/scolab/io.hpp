// io.hpp
//
// Family specs as JSON (tag + params + seed) and per-sample trace CSV.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "scolab/families.hpp"
#include "scolab/lattice.hpp"

namespace scolab {

using json = nlohmann::json;

using AnyFamily =
    std::variant<CoinLinearFamily, TentFamily, QuadGaussianFamily, SmallKappaQuadFamily, BlockGadgetFamily, LogisticFamily>;

// Shortest round-trip decimal for a double.
inline std::string fmt_double(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline json family_params(const CoinLinearFamily& f) {
    return {{"d", f.dim()}, {"R", f.R()}, {"mode", to_string(f.mode())}, {"rho", f.rho()}, {"b", f.hidden()}};
}
inline json family_params(const TentFamily& f) {
    return {{"r", f.r()}, {"rho", f.rho()}, {"hidden", f.hidden()}, {"centers", f.centers()}};
}
inline json family_params(const QuadGaussianFamily& f) {
    return {{"mu", f.mu()}, {"sigma", f.sigma()}, {"theta", f.mean()}};
}
inline json family_params(const SmallKappaQuadFamily& f) {
    return {{"mu", f.mu()}, {"gamma", f.gamma()}, {"b", f.hidden()}, {"sigma", f.sigma()}};
}
inline json family_params(const BlockGadgetFamily& f) {
    return {{"d", f.dim()},         {"mu", f.mu()},        {"L", f.L()},         {"tau", f.tau()},
            {"gamma", f.gamma()},   {"b", f.hidden()},     {"sigma", f.sigma()}};
}
inline json family_params(const LogisticFamily& f) {
    return {{"d", f.dim()}, {"mu", f.mu()}, {"M", f.M()}, {"eta", f.eta()}, {"w0", f.w0()}};
}

inline json family_to_json(const AnyFamily& f, std::uint64_t seed) {
    return std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            return json{{"family", T::tag}, {"params", family_params(fam)}, {"seed", seed}};
        },
        f);
}

namespace detail {

template <class T>
T get_param(const json& p, const char* key) {
    if (!p.contains(key)) throw InvalidArgument(std::string("family spec: missing parameter '") + key + "'");
    try {
        return p.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("family spec: bad parameter '") + key + "': " + e.what());
    }
}

}  // namespace detail

// Tent specs take either explicit centers + r, or a packing recipe
// {d, R, packing_seed} that is rebuilt with l2_integer_packing.
inline AnyFamily family_from_json(const json& spec) {
    using detail::get_param;
    if (!spec.is_object() || !spec.contains("family")) throw InvalidArgument("family spec: expected {\"family\": ...}");
    const std::string tag = spec.at("family").get<std::string>();
    const json p = spec.value("params", json::object());
    if (tag == CoinLinearFamily::tag) {
        const std::string mode = p.value("mode", std::string("dimension"));
        if (mode != "dimension" && mode != "confidence") throw InvalidArgument("family spec: unknown coin mode " + mode);
        return CoinLinearFamily(get_param<int>(p, "d"), get_param<double>(p, "R"),
                                mode == "dimension" ? CoinMode::dimension : CoinMode::confidence,
                                get_param<double>(p, "rho"), get_param<std::vector<int>>(p, "b"));
    }
    if (tag == TentFamily::tag) {
        if (p.contains("centers"))
            return TentFamily(get_param<std::vector<Vec>>(p, "centers"), get_param<double>(p, "r"),
                              get_param<std::size_t>(p, "hidden"), get_param<double>(p, "rho"));
        const auto W = l2_integer_packing(get_param<int>(p, "d"), RadiusSpec(get_param<double>(p, "R")),
                                          get_param<std::uint64_t>(p, "packing_seed"));
        return TentFamily::from_packing(W, get_param<std::size_t>(p, "hidden"), get_param<double>(p, "rho"));
    }
    if (tag == QuadGaussianFamily::tag)
        return QuadGaussianFamily(get_param<double>(p, "mu"), get_param<double>(p, "sigma"), get_param<Vec>(p, "theta"));
    if (tag == SmallKappaQuadFamily::tag)
        return SmallKappaQuadFamily(get_param<double>(p, "mu"), get_param<double>(p, "gamma"),
                                    get_param<std::vector<int>>(p, "b"), get_param<double>(p, "sigma"));
    if (tag == BlockGadgetFamily::tag)
        return BlockGadgetFamily(get_param<int>(p, "d"), get_param<double>(p, "mu"), get_param<double>(p, "L"),
                                 get_param<std::int64_t>(p, "tau"), get_param<double>(p, "gamma"),
                                 get_param<std::vector<int>>(p, "b"), get_param<double>(p, "sigma"));
    if (tag == LogisticFamily::tag)
        return LogisticFamily(get_param<int>(p, "d"), get_param<double>(p, "mu"), get_param<double>(p, "M"),
                              get_param<double>(p, "eta"), p.value("w0", Vec{}));
    throw InvalidArgument("family spec: unknown family '" + tag + "'");
}

// ---------------------------------------------------------------------------
// Sample traces. One row per sample, reals written round-trip exact.
//   coin:      i,j,k        (j is 1-based)
//   tent:      i,v1..vK     (membership bits in packing order)
//   gaussian:  i,z1..zd
//   logistic:  i,b,a1..ad
// ---------------------------------------------------------------------------

inline std::string trace_header(const CoinLinearFamily&) { return "i,j,k"; }
inline std::string trace_header(const TentFamily& f) {
    std::string h = "i";
    for (std::size_t w = 1; w <= f.size(); ++w) h += ",v" + std::to_string(w);
    return h;
}
inline std::string gaussian_trace_header(int d) {
    std::string h = "i";
    for (int j = 1; j <= d; ++j) h += ",z" + std::to_string(j);
    return h;
}
inline std::string trace_header(const QuadGaussianFamily& f) { return gaussian_trace_header(f.dim()); }
inline std::string trace_header(const SmallKappaQuadFamily& f) { return gaussian_trace_header(f.dim()); }
inline std::string trace_header(const BlockGadgetFamily& f) { return gaussian_trace_header(f.dim()); }
inline std::string trace_header(const LogisticFamily& f) {
    std::string h = "i,b";
    for (int j = 1; j <= f.dim(); ++j) h += ",a" + std::to_string(j);
    return h;
}

inline void write_trace_fields(std::ostream& os, const CoinSample& z) { os << ',' << z.j + 1 << ',' << z.k; }
inline void write_trace_fields(std::ostream& os, const std::vector<std::uint8_t>& v) {
    for (auto b : v) os << ',' << static_cast<int>(b);
}
inline void write_trace_fields(std::ostream& os, const Vec& z) {
    for (double v : z) os << ',' << fmt_double(v);
}
inline void write_trace_fields(std::ostream& os, const LogisticSample& z) {
    os << ',' << z.b;
    write_trace_fields(os, z.a);
}

template <LossFamily F>
void write_trace_csv(std::ostream& os, const F& family, const std::vector<typename F::Sample>& samples) {
    os << trace_header(family) << '\n';
    for (std::size_t i = 0; i < samples.size(); ++i) {
        os << i;
        write_trace_fields(os, samples[i]);
        os << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw InvalidArgument("trace: bad number '" + s + "'");
    }
    if (pos != s.size()) throw InvalidArgument("trace: bad number '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw InvalidArgument("trace: bad integer '" + s + "'");
    }
    if (pos != s.size()) throw InvalidArgument("trace: bad integer '" + s + "'");
    return v;
}

inline CoinSample parse_trace_row(const CoinLinearFamily& f, const std::vector<std::string>& c) {
    require(c.size() == 3, "trace: coin rows have 3 fields");
    const auto j = parse_int(c[1]), k = parse_int(c[2]);
    require(j >= 1 && j <= f.dim() && (k == 1 || k == -1), "trace: coin sample out of range");
    return {static_cast<int>(j - 1), static_cast<int>(k)};
}
inline std::vector<std::uint8_t> parse_trace_row(const TentFamily& f, const std::vector<std::string>& c) {
    require(c.size() == f.size() + 1, "trace: tent row has the wrong width");
    std::vector<std::uint8_t> v(f.size());
    for (std::size_t w = 0; w < f.size(); ++w) {
        const auto b = parse_int(c[w + 1]);
        require(b == 0 || b == 1, "trace: tent bits must be 0/1");
        v[w] = static_cast<std::uint8_t>(b);
    }
    return v;
}
inline Vec parse_gaussian_row(int d, const std::vector<std::string>& c) {
    require(c.size() == static_cast<std::size_t>(d) + 1, "trace: row has the wrong width");
    Vec z(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) z[static_cast<std::size_t>(j)] = parse_double(c[static_cast<std::size_t>(j) + 1]);
    return z;
}
inline Vec parse_trace_row(const QuadGaussianFamily& f, const std::vector<std::string>& c) {
    return parse_gaussian_row(f.dim(), c);
}
inline Vec parse_trace_row(const SmallKappaQuadFamily& f, const std::vector<std::string>& c) {
    return parse_gaussian_row(f.dim(), c);
}
inline Vec parse_trace_row(const BlockGadgetFamily& f, const std::vector<std::string>& c) {
    return parse_gaussian_row(f.dim(), c);
}
inline LogisticSample parse_trace_row(const LogisticFamily& f, const std::vector<std::string>& c) {
    require(c.size() == static_cast<std::size_t>(f.dim()) + 2, "trace: logistic row has the wrong width");
    LogisticSample z;
    const auto b = parse_int(c[1]);
    require(b == 1 || b == -1, "trace: logistic label must be +-1");
    z.b = static_cast<int>(b);
    for (int j = 0; j < f.dim(); ++j) z.a.push_back(parse_double(c[static_cast<std::size_t>(j) + 2]));
    return z;
}

}  // namespace detail

template <LossFamily F>
std::vector<typename F::Sample> read_trace_csv(std::istream& is, const F& family) {
    std::string line;
    if (!std::getline(is, line) || line != trace_header(family))
        throw InvalidArgument("trace: header does not match the family");
    std::vector<typename F::Sample> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = detail::split_csv(line);
        require(!cells.empty() && detail::parse_int(cells[0]) == static_cast<long long>(out.size()),
                "trace: rows must be numbered 0, 1, 2, ...");
        out.push_back(detail::parse_trace_row(family, cells));
    }
    return out;
}

}  // namespace scolab
