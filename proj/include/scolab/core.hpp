// core.hpp
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scolab {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

using Vec = std::vector<double>;
using IVec = std::vector<std::int64_t>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors. Everything thrown by the library derives from scolab::Error.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    BudgetExceeded(const std::string& what, double estimate)
        : Error(what + " (estimated " + std::to_string(estimate) + " candidates)"),
          estimated_count(estimate) {}
    double estimated_count;
};

struct ConstructionFailed : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

// ---------------------------------------------------------------------------
// Integer-or-infinity, used for floor(R) and floor(R^2) when R may be infinite.
// ---------------------------------------------------------------------------

class IntOrInf {
public:
    constexpr IntOrInf() = default;  // infinity
    constexpr IntOrInf(std::int64_t v) : value_(v) {}  // NOLINT(implicit)
    static constexpr IntOrInf infinity() { return IntOrInf(); }

    constexpr bool is_inf() const { return !value_.has_value(); }
    constexpr std::int64_t value() const {
        if (!value_) throw InvalidArgument("IntOrInf: value() on infinity");
        return *value_;
    }
    double as_double() const { return value_ ? static_cast<double>(*value_) : kInf; }

    friend constexpr bool operator==(const IntOrInf&, const IntOrInf&) = default;

private:
    std::optional<std::int64_t> value_;
};

// ---------------------------------------------------------------------------
// Exact rational on int64 with 128-bit intermediates. Used where the
// library promises exact arithmetic (gadget gaps, coin probabilities).
// ---------------------------------------------------------------------------

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                       static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                       static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw InvalidArgument("Rational: division by zero");
        return from128(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static i128 gcd128(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Rational from128(i128 n, i128 d) {
        if (d == 0) throw InvalidArgument("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
        if (n > lim || n < -lim || d > lim) throw Error("Rational: int64 overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }
    void assign(std::int64_t n, std::int64_t d) { *this = from128(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// ---------------------------------------------------------------------------
// Small vector helpers.
// ---------------------------------------------------------------------------

template <class A, class B>
inline double dot(const A& a, const B& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return s;
}

template <class A>
inline double norm2_sq(const A& a) {
    return dot(a, a);
}

template <class A, class B>
inline double dist2_sq(const A& a, const B& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double t = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        s += t * t;
    }
    return s;
}

template <class A>
inline double norm_inf(const A& a) {
    double m = 0.0;
    for (auto v : a) m = std::max(m, std::abs(static_cast<double>(v)));
    return m;
}

inline Vec to_real(const IVec& v) { return Vec(v.begin(), v.end()); }

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw InvalidArgument(std::string(what) + ": dimension mismatch (got " + std::to_string(got) +
                              ", expected " + std::to_string(want) + ")");
}

}  // namespace scolab
