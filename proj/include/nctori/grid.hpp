#pragma once

#include <string>
#include <vector>

#include "nctori/phase.hpp"
#include "nctori/rational.hpp"

namespace nctori {

// Sampling grid for functions on R x Z_c. The real line is sampled at
// p_j = -L + j*delta for j = 0..N-1 with delta = 1/(c*q*m), so that both
// translation lengths theta~ = (c p + q)/(c q) and 1/c are integer numbers
// of steps. q is the reduced denominator of theta.
class GridSpec {
  public:
    GridSpec(const Rational& theta, int c, int refine, int samples);

    const Rational& theta() const { return theta_; }
    int c() const { return c_; }
    int refine() const { return refine_; }
    int samples() const { return samples_; }

    Rational delta() const { return delta_; }
    Rational halfwidth() const { return half_; }
    Rational point(i64 j) const { return Rational(2 * j - samples_) * delta_ / Rational(2); }
    Rational theta_tilde() const;
    Rational theta_prime() const;

    // x/delta if integral; OffGridTranslation otherwise.
    i64 steps_of(const Rational& x) const;

    bool operator==(const GridSpec& o) const {
        return theta_ == o.theta_ && c_ == o.c_ && refine_ == o.refine_ && samples_ == o.samples_;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }

  private:
    Rational theta_;
    int c_, refine_, samples_;
    Rational delta_, half_;
};

// Sampled complex function on the grid; sample (j, q) sits at (p_j, q).
// Inner products are linear in the first argument and use the measure
// delta * c^{-1/2} per sample (self-dual weight on Z_c).
class GridFunction {
  public:
    explicit GridFunction(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    cplx& at(i64 j, int q) { return s_[static_cast<size_t>(j) * spec_.c() + q]; }
    const cplx& at(i64 j, int q) const { return s_[static_cast<size_t>(j) * spec_.c() + q]; }
    const std::vector<cplx>& samples() const { return s_; }
    std::vector<cplx>& samples() { return s_; }

    double weight() const;  // measure of one sample
    double norm() const;
    double boundary_mag() const;
    void scale(cplx a);
    void normalize();

    std::string dump() const;
    static GridFunction parse_dump(const std::string& text, const GridSpec& spec);

  private:
    GridSpec spec_;
    std::vector<cplx> s_;
};

cplx inner(const GridFunction& f, const GridFunction& g);
double dist(const GridFunction& f, const GridFunction& g);
GridFunction sub(const GridFunction& f, const GridFunction& g);
GridFunction add_scaled(const GridFunction& f, cplx a, const GridFunction& g);

// Gaussian test function exp(-pi((p-x0)/w)^2) e(p y0) e(q l0/c) times a
// periodic discrete bump centred at k0, optionally l2-normalized.
GridFunction make_gaussian(const GridSpec& spec, const Rational& x0, i64 k0, double width,
                           const Rational& y0, i64 l0, bool normalized = true);

}  // namespace nctori
