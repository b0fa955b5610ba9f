#include "nctori/phase.hpp"

namespace nctori {

cplx unit_phase(const Rational& turns) {
    Rational r = turns.mod_one();
    bool flip = false;
    if (Rational(2) * r >= Rational(1)) {
        r = r - Rational(1, 2);
        flip = true;
    }
    cplx v;
    if (r.is_zero())
        v = {1.0, 0.0};
    else if (r == Rational(1, 4))
        v = {0.0, 1.0};
    else
        v = cis_turns(r.to_double());
    return flip ? -v : v;
}

}  // namespace nctori
