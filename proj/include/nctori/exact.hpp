#pragma once

#include <vector>

#include "nctori/intmat.hpp"
#include "nctori/rational.hpp"

namespace nctori {

// Simple continued fraction [a0; a1, ..., an] with a_i > 0 for i > 0.
struct ContinuedFraction {
    std::vector<i64> coeffs;
};

// Euclidean expansion; a0 = floor(r), fractional part in [0,1).
ContinuedFraction cf_expand(const Rational& r);
Rational cf_eval(const ContinuedFraction& cf);

// Moebius action t -> (a t + b)/(c t + d). Raises PoleError on c t + d = 0.
Rational mobius(const IntMat2& g, const Rational& t);
Rational mobius_step(const Rational& t, i64 a, i64 b, i64 c, i64 d);

// Block embedding of SL(2,Z) into SO(2,2|Z).
IntMat4 embed_so22(const IntMat2& g);

// Decompose an SL(2,Z) matrix into a word over {J0, J0^-1, P, P^-1} whose
// left-to-right product reproduces the matrix exactly.
GeneratorWord word_decompose(const IntMat2& m);

// U*M*V = diag(d1, d2) with U, V unimodular, d1 | d2, d1, d2 >= 0.
struct SmithForm {
    IntMat2 U, V;
    i64 d1 = 0, d2 = 0;
};

SmithForm snf2(const IntMat2& m);

// True iff M and N have the same Smith normal form.
bool matrix_equivalent(const IntMat2& m, const IntMat2& n);

// A matrix g in GL(2,Z) with mobius(g, r1) = r2.
IntMat2 rational_orbit_witness(const Rational& r1, const Rational& r2);

}  // namespace nctori
