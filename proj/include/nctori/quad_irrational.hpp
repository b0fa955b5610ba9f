#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nctori/intmat.hpp"
#include "nctori/rational.hpp"

namespace nctori {

// Exact real quadratic irrational (a + b*sqrt(d))/e with d squarefree > 1,
// b != 0, e >= 1 and gcd(a, b, e) = 1. Construction normalizes; inputs that
// collapse to a rational raise NotQuadraticError.
class QuadIrrational {
  public:
    QuadIrrational(i64 a, i64 b, i64 d, i64 e);

    i64 a() const { return a_; }
    i64 b() const { return b_; }
    i64 d() const { return d_; }
    i64 e() const { return e_; }

    bool operator==(const QuadIrrational& o) const {
        return a_ == o.a_ && b_ == o.b_ && d_ == o.d_ && e_ == o.e_;
    }
    bool operator!=(const QuadIrrational& o) const { return !(*this == o); }

    double to_double() const;
    i64 floor_ll() const;
    // Sign of (value - t) for a rational t, computed exactly.
    int cmp(const Rational& t) const;

    QuadIrrational operator+(const Rational& r) const;
    QuadIrrational inverse() const;

    std::string str() const;
    // Grammar: (a+b√d)/e, with "rt" accepted in place of the radical sign.
    static std::optional<QuadIrrational> parse(std::string_view s);

  private:
    i64 a_, b_, d_, e_;
};

QuadIrrational mobius(const IntMat2& g, const QuadIrrational& x);

// Continued fraction of a quadratic irrational: a finite preperiod followed
// by a repeating cycle (always terminates for quadratic irrationals).
struct QuadCf {
    std::vector<i64> pre;
    std::vector<i64> cycle;
};

QuadCf quad_cf(const QuadIrrational& x);

// GL(2,Z)-orbit equivalence via coinciding continued-fraction tails.
bool quad_equivalent(const QuadIrrational& x1, const QuadIrrational& x2);

// For equivalent inputs, a matrix g in GL(2,Z) with mobius(g, x1) = x2,
// verified by exact replay. Empty when the inputs are not equivalent.
std::optional<IntMat2> quad_orbit_witness(const QuadIrrational& x1, const QuadIrrational& x2);

}  // namespace nctori
