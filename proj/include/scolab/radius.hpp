// radius.hpp
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "scolab/core.hpp"

namespace scolab {

// A positive radius, possibly infinite. floor_r() and floor_r2() are exact:
// a double radius is treated as the dyadic rational it represents, and a
// rational radius (num/den) is evaluated in integer arithmetic.
class RadiusSpec {
public:
    explicit RadiusSpec(double value) : value_(value) {
        require(!std::isnan(value) && value > 0.0, "RadiusSpec: radius must be positive");
    }

    static RadiusSpec infinity() { return RadiusSpec(kInf); }

    static RadiusSpec rational(std::int64_t num, std::int64_t den) {
        require(den > 0 && num > 0, "RadiusSpec: rational radius must be positive");
        RadiusSpec r(static_cast<double>(num) / static_cast<double>(den));
        r.exact_ = Rational(num, den);
        return r;
    }

    // Accepts "inf", "infinity", "p/q" or a decimal literal.
    static RadiusSpec parse(const std::string& text) {
        if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
        if (auto slash = text.find('/'); slash != std::string::npos) {
            std::size_t pos1 = 0, pos2 = 0;
            const long long n = std::stoll(text.substr(0, slash), &pos1);
            const long long d = std::stoll(text.substr(slash + 1), &pos2);
            if (pos1 != slash || pos2 != text.size() - slash - 1)
                throw InvalidArgument("RadiusSpec: cannot parse '" + text + "'");
            return rational(n, d);
        }
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw InvalidArgument("RadiusSpec: cannot parse '" + text + "'");
        return RadiusSpec(v);
    }

    double value() const { return value_; }
    bool is_inf() const { return std::isinf(value_); }
    const std::optional<Rational>& exact() const { return exact_; }

    IntOrInf floor_r() const {
        if (is_inf()) return IntOrInf::infinity();
        if (exact_) return floor_div(exact_->num(), exact_->den());
        return static_cast<std::int64_t>(std::floor(value_));
    }

    IntOrInf floor_r2() const {
        if (is_inf()) return IntOrInf::infinity();
        if (exact_) {
            const i128 n = static_cast<i128>(exact_->num()) * exact_->num();
            const i128 d = static_cast<i128>(exact_->den()) * exact_->den();
            return static_cast<std::int64_t>(n / d);
        }
        // hi + lo == value^2 exactly. floor(hi) is only wrong when hi is an
        // integer that overshoots the true square.
        const double hi = value_ * value_;
        const double lo = std::fma(value_, value_, -hi);
        double f = std::floor(hi);
        if (f == hi && lo < 0.0) f -= 1.0;
        return static_cast<std::int64_t>(f);
    }

    // Exact test of value^2 <= k.
    bool square_le(std::int64_t k) const {
        if (is_inf()) return false;
        if (exact_) {
            const i128 n = static_cast<i128>(exact_->num()) * exact_->num();
            const i128 d = static_cast<i128>(exact_->den()) * exact_->den();
            return n <= static_cast<i128>(k) * d;
        }
        const double hi = value_ * value_;
        const double lo = std::fma(value_, value_, -hi);
        const double kd = static_cast<double>(k);
        return hi < kd || (hi == kd && lo <= 0.0);
    }

    std::string str() const {
        if (is_inf()) return "inf";
        if (exact_) return exact_->str();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value_);
        return buf;
    }

private:
    static std::int64_t floor_div(std::int64_t n, std::int64_t d) {
        std::int64_t q = n / d;
        if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
        return q;
    }

    double value_;
    std::optional<Rational> exact_;
};

}  // namespace scolab
