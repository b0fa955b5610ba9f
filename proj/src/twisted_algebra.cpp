#include "nctori/twisted_algebra.hpp"

#include <cmath>
#include <sstream>

#include "nctori/errors.hpp"

namespace nctori {

ExactPhase cocycle(const Rational& theta, Lattice2 x, Lattice2 y) {
    i64 cross = x[0] * y[1] - x[1] * y[0];
    return ExactPhase(theta * Rational(cross));
}

AlgebraElement AlgebraElement::delta(const Rational& theta, Lattice2 l) {
    AlgebraElement e(theta);
    e.coeffs_[l] = PhasedCoeff{};
    return e;
}

cplx AlgebraElement::value(Lattice2 l) const {
    auto it = coeffs_.find(l);
    return it == coeffs_.end() ? cplx{} : it->second.value();
}

const PhasedCoeff* AlgebraElement::term(Lattice2 l) const {
    auto it = coeffs_.find(l);
    return it == coeffs_.end() ? nullptr : &it->second;
}

void AlgebraElement::add_term(Lattice2 l, const PhasedCoeff& c) {
    if (c.scale == cplx{}) return;
    auto it = coeffs_.find(l);
    if (it == coeffs_.end()) {
        coeffs_[l] = c;
        return;
    }
    PhasedCoeff& cur = it->second;
    if (cur.phase == c.phase) {
        cur.scale += c.scale;
    } else {
        // Phase collision: fold both into the floating scale.
        cur = PhasedCoeff{ExactPhase(), cur.value() + c.value()};
    }
    if (cur.scale == cplx{}) coeffs_.erase(it);
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    if (theta_ != o.theta_) throw ThetaMismatch("adding elements over different theta");
    AlgebraElement r = *this;
    for (const auto& [l, c] : o.coeffs_) r.add_term(l, c);
    return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    if (theta_ != o.theta_) throw ThetaMismatch("multiplying elements over different theta");
    AlgebraElement r(theta_);
    for (const auto& [y, cy] : coeffs_)
        for (const auto& [z, cz] : o.coeffs_) {
            Lattice2 x{y[0] + z[0], y[1] + z[1]};
            PhasedCoeff c{cy.phase * cz.phase * cocycle(theta_, y, z), cy.scale * cz.scale};
            r.add_term(x, c);
        }
    return r;
}

AlgebraElement AlgebraElement::scaled(cplx s) const {
    AlgebraElement r(theta_);
    if (s == cplx{}) return r;
    for (const auto& [l, c] : coeffs_) r.coeffs_[l] = PhasedCoeff{c.phase, c.scale * s};
    return r;
}

AlgebraElement AlgebraElement::star() const {
    // omega(x, -x) = 1 on Z^2, so the involution is conjugation at -x.
    AlgebraElement r(theta_);
    for (const auto& [l, c] : coeffs_)
        r.coeffs_[Lattice2{-l[0], -l[1]}] = PhasedCoeff{c.phase.conj(), std::conj(c.scale)};
    return r;
}

double AlgebraElement::norm_l1() const {
    double s = 0;
    for (const auto& [l, c] : coeffs_) s += std::abs(c.value());
    return s;
}

double AlgebraElement::max_coeff_dist(const AlgebraElement& o) const {
    double m = 0;
    for (const auto& [l, c] : coeffs_) m = std::max(m, std::abs(c.value() - o.value(l)));
    for (const auto& [l, c] : o.coeffs_) m = std::max(m, std::abs(value(l) - c.value()));
    return m;
}

std::string AlgebraElement::to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (const auto& [l, c] : coeffs_) {
        cplx v = c.value();
        os << l[0] << " " << l[1] << " " << v.real() << " " << v.imag() << "\n";
    }
    return os.str();
}

AlgebraElement act(const IntMat2& A, const AlgebraElement& f) {
    if (A.det() != 1) throw DetError("algebra action requires det = 1");
    AlgebraElement r(f.theta());
    for (const auto& [l, c] : f.coeffs()) r.add_term(A.apply(l), c);
    return r;
}

double WindowVec::norm() const {
    double s = 0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

WindowVec regular_rep_apply(const AlgebraElement& f, const WindowVec& xi) {
    // supp(result) is contained in supp(f) + supp(xi); demand it fits.
    if (!f.coeffs().empty()) {
        i64 flo1 = 0, fhi1 = 0, flo2 = 0, fhi2 = 0;
        bool first = true;
        for (const auto& [l, c] : f.coeffs()) {
            if (first) {
                flo1 = fhi1 = l[0];
                flo2 = fhi2 = l[1];
                first = false;
            } else {
                flo1 = std::min(flo1, l[0]);
                fhi1 = std::max(fhi1, l[0]);
                flo2 = std::min(flo2, l[1]);
                fhi2 = std::max(fhi2, l[1]);
            }
        }
        i64 xlo1 = xi.win.hi1, xhi1 = xi.win.lo1, xlo2 = xi.win.hi2, xhi2 = xi.win.lo2;
        bool any = false;
        for (i64 a = xi.win.lo1; a <= xi.win.hi1; ++a)
            for (i64 b = xi.win.lo2; b <= xi.win.hi2; ++b)
                if (xi.value_or_zero({a, b}) != cplx{}) {
                    any = true;
                    xlo1 = std::min(xlo1, a);
                    xhi1 = std::max(xhi1, a);
                    xlo2 = std::min(xlo2, b);
                    xhi2 = std::max(xhi2, b);
                }
        if (any && (!xi.win.contains({flo1 + xlo1, flo2 + xlo2}) ||
                    !xi.win.contains({fhi1 + xhi1, fhi2 + xhi2})))
            throw WindowOverflow("window too small for supp(f) + supp(xi)");
    }
    WindowVec out(xi.win);
    for (const auto& [x, c] : f.coeffs()) {
        cplx fx = c.value();
        for (i64 a = xi.win.lo1; a <= xi.win.hi1; ++a)
            for (i64 b = xi.win.lo2; b <= xi.win.hi2; ++b) {
                Lattice2 y{a, b};
                Lattice2 src{a - x[0], b - x[1]};
                cplx s = xi.value_or_zero(src);
                if (s == cplx{}) continue;
                out.at(y) += fx * cocycle(f.theta(), x, src).value() * s;
            }
    }
    return out;
}

}  // namespace nctori
