#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nctori/errors.hpp"

namespace nctori {

using i64 = long long;
using i128 = __int128;

i128 gcd128(i128 a, i128 b);

// Reduced fraction num/den with den > 0. All arithmetic is exact; results
// that do not fit in 64 bits after reduction raise OverflowError.
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(i64 n) : num_(n) {}
    Rational(i64 n, i64 d);

    static Rational reduce128(i128 n, i128 d);

    i64 num() const { return num_; }
    i64 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    Rational inverse() const;
    i64 floor_ll() const;
    // Fractional part in [0,1).
    Rational mod_one() const;
    // Reduction modulo an integer period (used for phase exponents).
    Rational mod_int(i64 period) const;

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const;
    static std::optional<Rational> parse(std::string_view s);

  private:
    i64 num_ = 0;
    i64 den_ = 1;
};

inline Rational operator*(i64 k, const Rational& r) { return Rational(k) * r; }

}  // namespace nctori
