#pragma once

#include <vector>

#include "nctori/grid.hpp"
#include "nctori/intmat.hpp"

namespace nctori {

// Group element (x, y, k, l) of R x R^ x Z_c x Z_c^. The translation and
// modulation components are exact rationals; k and l are integer lifts, not
// residues (the half phases depend on the lift).
struct PhaseSpacePoint {
    Rational x, y;
    i64 k = 0, l = 0;

    PhaseSpacePoint operator-() const { return {-x, -y, -k, -l}; }
    PhaseSpacePoint operator+(const PhaseSpacePoint& o) const {
        return {x + o.x, y + o.y, k + o.k, l + o.l};
    }
};

// pi(g) f(p,q) = e(p y - x y/2) e(q l/c - k l/(2c)) f(p - x, q - k).
GridFunction hw_apply(const PhaseSpacePoint& g, const GridFunction& f,
                      double boundary_tol = 1e-8);
// pi*(g) = pi(-g).
GridFunction hw_adjoint(const PhaseSpacePoint& g, const GridFunction& f,
                        double boundary_tol = 1e-8);

// The form J = [[0,1,0,0],[-1,0,0,0],[0,0,0,1/c],[0,0,-1/c,0]].
Mat4Q symplectic_form(i64 c);

// M_A = diag(T1 A T1^-1, L A L^-1) with T1 = diag(theta~, 1), L = diag(-1,1).
Mat4Q build_ma(const GeneratorWord& w, const Rational& theta, i64 c);
Mat4Q build_ma_matrix(const IntMat2& A, const Rational& theta, i64 c);
// N_A = diag(S1 A^-t S1^-1, L A L^-1); equals M_A for every A.
Mat4Q build_na(const GeneratorWord& w, const Rational& theta, i64 c);
Mat4Q build_na_matrix(const IntMat2& A, const Rational& theta, i64 c);

// Applies a 4x4 matrix to a phase-space point; the discrete components of
// the image must come out integral.
PhaseSpacePoint apply_mat4(const Mat4Q& M, const PhaseSpacePoint& g);

// Weyl operators on a fixed grid. H_J0 is realized by direct quadrature of
// the scaled Fourier kernel (O(N^2 c) per application; the kernel matrix is
// precomputed once per grid), H_P by a unit-modulus chirp multiplier.
class WeylEngine {
  public:
    explicit WeylEngine(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }

    GridFunction apply_j0(const GridFunction& f, bool inverse = false) const;
    GridFunction apply_p(const GridFunction& f, bool inverse = false) const;
    GridFunction apply_gen(Gen g, const GridFunction& f) const;
    // H_A = H_{W_1} o ... o H_{W_n}: rightmost token acts first.
    GridFunction apply_word(const GeneratorWord& w, const GridFunction& f) const;
    // Same word applied to many functions; the quadrature kernel is streamed
    // once per J0-type token for the whole batch.
    std::vector<GridFunction> apply_word_batch(const GeneratorWord& w,
                                               std::vector<GridFunction> fs) const;

  private:
    GridSpec spec_;
    std::vector<double> ker_re_, ker_im_;  // forward kernel, scale folded in
    std::vector<cplx> chirp_;              // e(z_j^2 / (2 theta~))
    std::vector<cplx> disc_chirp_;         // e(-m^2 / (2c))
    std::vector<cplx> dft_;                // e(q m / c) / sqrt(c), q*c + m
    // Metaplectic correction for the chirp multiplier. e(-m^2/(2c)) is not a
    // function on Z_c when c is odd (shifting m by c flips its sign), so the
    // raw multiplier cannot intertwine pi with pi o M_P: each wrapped row
    // comes out off by -1. A pure modulation sigma(j, m) = e(j alpha) u(m)
    // repairs the relation exactly on the lattice T(Z^2) + S(Z^2) used by
    // the bimodule and the covariance checks; it exists precisely when the
    // numerator of theta is even (trivial for even c). See chirp_is_exact().
    std::vector<cplx> sigma_;
    i64 sigma_period_ = 1;
    bool chirp_has_correction_ = false;
    cplx sigma_at(i64 j, int m) const {
        i64 r = j % sigma_period_;
        if (r < 0) r += sigma_period_;
        return sigma_[static_cast<size_t>(r) * spec_.c() + m];
    }
    void build_sigma();

  public:
    // Whether the chirp multiplier carries an exact lattice intertwining
    // relation on this grid (always true for even c or even theta numerator).
    bool chirp_is_exact() const { return spec_.c() % 2 == 0 || chirp_has_correction_; }
};

// || H_A pi(g) f - pi(M_A g) H_A f || / || f ||.
double covariance_residual(const WeylEngine& eng, const GeneratorWord& w,
                           const PhaseSpacePoint& g, const GridFunction& f);

struct OrderPhase {
    cplx lambda;    // mean of the per-function phases
    double spread;  // max deviation from the mean

    // Principal root gamma with gamma^order = lambda; scaling the word
    // operator by conj(gamma) normalizes it to an honest order-i unitary.
    cplx root(int order) const {
        return std::polar(std::pow(std::abs(lambda), 1.0 / order),
                          std::arg(lambda) / order);
    }
};

// Extracts lambda with H_A^i f = lambda f across a family of test functions.
// Raises OrderMismatch when the image is not parallel to f within order_tol.
OrderPhase order_phase(const WeylEngine& eng, const GeneratorWord& w, int order,
                       const std::vector<GridFunction>& family, double order_tol = 1e-6);

}  // namespace nctori
