#include "nctori/rational.hpp"

#include <charconv>
#include <limits>

namespace nctori {

namespace {

constexpr i64 kMax = std::numeric_limits<i64>::max();
constexpr i64 kMin = std::numeric_limits<i64>::min();

i64 narrow(i128 v) {
    if (v > static_cast<i128>(kMax) || v < static_cast<i128>(kMin))
        throw OverflowError("rational arithmetic overflow");
    return static_cast<i64>(v);
}

}  // namespace

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational::Rational(i64 n, i64 d) { *this = reduce128(n, d); }

Rational Rational::reduce128(i128 n, i128 d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

Rational Rational::operator+(const Rational& o) const {
    return reduce128(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                     static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return reduce128(static_cast<i128>(num_) * o.den_ - static_cast<i128>(o.num_) * den_,
                     static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return reduce128(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw Error("rational division by zero");
    return reduce128(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
    return static_cast<i128>(num_) * o.den_ < static_cast<i128>(o.num_) * den_;
}

Rational Rational::inverse() const {
    if (num_ == 0) throw Error("rational inverse of zero");
    return reduce128(den_, num_);
}

i64 Rational::floor_ll() const {
    i64 q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

Rational Rational::mod_one() const { return *this - Rational(floor_ll()); }

Rational Rational::mod_int(i64 period) const {
    Rational q = *this / Rational(period);
    return *this - Rational(q.floor_ll()) * Rational(period);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::parse(std::string_view s) {
    auto read_int = [](std::string_view& v, i64& out) -> bool {
        const char* begin = v.data();
        const char* end = v.data() + v.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc() || ptr == begin) return false;
        v.remove_prefix(static_cast<size_t>(ptr - begin));
        return true;
    };
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    i64 n = 0;
    if (!read_int(s, n)) return std::nullopt;
    if (s.empty()) return Rational(n);
    if (s.front() != '/') return std::nullopt;
    s.remove_prefix(1);
    i64 d = 0;
    if (!read_int(s, d) || !s.empty() || d == 0) return std::nullopt;
    return Rational(n, d);
}

}  // namespace nctori
