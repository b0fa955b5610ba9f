#pragma once

#include <map>
#include <string>
#include <vector>

#include "nctori/intmat.hpp"
#include "nctori/phase.hpp"
#include "nctori/rational.hpp"

namespace nctori {

using Lattice2 = std::array<i64, 2>;

// omega_theta(x, y) = exp(i pi theta (x1 y2 - x2 y1)), as an exact phase.
ExactPhase cocycle(const Rational& theta, Lattice2 x, Lattice2 y);

// A coefficient split into an exact unit phase and a floating scale, so that
// values built from generators keep exact phases under products.
struct PhasedCoeff {
    ExactPhase phase;
    cplx scale{1.0, 0.0};

    cplx value() const { return phase.value() * scale; }
};

// Finitely supported element of the twisted group algebra at a fixed theta.
class AlgebraElement {
  public:
    explicit AlgebraElement(const Rational& theta) : theta_(theta) {}

    static AlgebraElement delta(const Rational& theta, Lattice2 l);

    const Rational& theta() const { return theta_; }
    const std::map<Lattice2, PhasedCoeff>& coeffs() const { return coeffs_; }
    size_t support_size() const { return coeffs_.size(); }

    cplx value(Lattice2 l) const;
    const PhasedCoeff* term(Lattice2 l) const;

    // Adds a term, merging exactly when the phase exponents agree.
    void add_term(Lattice2 l, const PhasedCoeff& c);

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;  // twisted convolution
    AlgebraElement scaled(cplx s) const;
    AlgebraElement star() const;

    double norm_l1() const;
    // Largest coefficient magnitude difference against another element.
    double max_coeff_dist(const AlgebraElement& o) const;

    // Rows "l1 l2 re im", sorted lexicographically.
    std::string to_text() const;

  private:
    Rational theta_;
    std::map<Lattice2, PhasedCoeff> coeffs_;
};

// alpha_A: support map l -> A l. Requires det A = 1.
AlgebraElement act(const IntMat2& A, const AlgebraElement& f);

// Rectangular window of Z^2 with a complex vector on it.
struct LatticeWindow {
    i64 lo1, hi1, lo2, hi2;

    bool contains(Lattice2 l) const {
        return l[0] >= lo1 && l[0] <= hi1 && l[1] >= lo2 && l[1] <= hi2;
    }
    size_t size() const {
        return static_cast<size_t>(hi1 - lo1 + 1) * static_cast<size_t>(hi2 - lo2 + 1);
    }
    size_t index(Lattice2 l) const {
        return static_cast<size_t>(l[0] - lo1) * static_cast<size_t>(hi2 - lo2 + 1) +
               static_cast<size_t>(l[1] - lo2);
    }
};

struct WindowVec {
    LatticeWindow win;
    std::vector<cplx> v;

    explicit WindowVec(LatticeWindow w) : win(w), v(w.size()) {}
    cplx& at(Lattice2 l) { return v[win.index(l)]; }
    cplx value_or_zero(Lattice2 l) const { return win.contains(l) ? v[win.index(l)] : cplx{}; }
    double norm() const;
};

// Applies sum_x f(x) L_omega(x) to xi on its window. The support of the
// result must fit inside the window, otherwise WindowOverflow is raised.
WindowVec regular_rep_apply(const AlgebraElement& f, const WindowVec& xi);

}  // namespace nctori
