#pragma once

#include <cmath>
#include <complex>

#include "nctori/rational.hpp"

namespace nctori {

using cplx = std::complex<double>;

// e(t) = exp(2*pi*i*t) for a plain double number of turns.
inline cplx cis_turns(double t) {
    double a = 2.0 * M_PI * t;
    return {std::cos(a), std::sin(a)};
}

// e(t) for an exact rational number of turns. The argument is reduced mod 1
// and the half turn is split off as an exact sign, so that phases whose
// exponents differ by 1/2 come out as exact floating-point negatives of each
// other. Quarter turns are returned exactly as +/-1, +/-i.
cplx unit_phase(const Rational& turns);

// A unit complex number exp(i*pi*t) carried by its exact exponent t (in half
// turns, reduced mod 2). Products and conjugates stay exact.
class ExactPhase {
  public:
    ExactPhase() : half_turns_(0) {}
    explicit ExactPhase(const Rational& half_turns) : half_turns_(half_turns.mod_int(2)) {}

    const Rational& half_turns() const { return half_turns_; }

    ExactPhase operator*(const ExactPhase& o) const {
        return ExactPhase(half_turns_ + o.half_turns_);
    }
    ExactPhase conj() const { return ExactPhase(-half_turns_); }
    ExactPhase pow(i64 n) const { return ExactPhase(Rational(n) * half_turns_); }

    bool operator==(const ExactPhase& o) const { return half_turns_ == o.half_turns_; }
    bool operator!=(const ExactPhase& o) const { return !(*this == o); }

    cplx value() const { return unit_phase(half_turns_ / Rational(2)); }

  private:
    Rational half_turns_;
};

}  // namespace nctori
