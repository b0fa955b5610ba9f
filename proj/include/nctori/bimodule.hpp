#pragma once

#include "nctori/heisenberg_weyl.hpp"
#include "nctori/twisted_algebra.hpp"

namespace nctori {

// Exact data of the Heisenberg equivalence bimodule between A_theta' and
// A_theta, theta' = theta/(c theta + 1): the 4x2 lattice maps T and S, the
// form J and its positive part, and the 2x2 blocks T1, S1, L, Z. All fields
// are exact rationals; the defining identities T^t J T = Theta and
// S^t J S = -Theta' are verified at construction.
class LatticeEmbedding {
  public:
    LatticeEmbedding(const Rational& theta, i64 c);

    const Rational& theta() const { return theta_; }
    i64 c() const { return c_; }
    Rational theta_tilde() const { return theta_tilde_; }
    Rational theta_prime() const { return theta_prime_; }
    Rational ct1() const { return ct1_; }  // c*theta + 1

    using Col2 = std::array<Rational, 2>;
    using Vec4 = std::array<Rational, 4>;

    // Columns of T and S (rows indexed 0..3).
    Vec4 t_vector(Lattice2 l) const;
    Vec4 s_vector(Lattice2 l) const;
    // The same lattice points as group elements (x, y, k, l).
    PhaseSpacePoint t_point(Lattice2 l) const;
    PhaseSpacePoint s_point(Lattice2 l) const;

    const Mat4Q& form_j() const { return j_; }
    const Mat4Q& form_j_pos() const { return j_pos_; }
    const Mat2Q& t1() const { return t1_; }
    const Mat2Q& s1() const { return s1_; }
    const Mat2Q& flip_l() const { return l_; }
    const Mat2Q& z() const { return z_; }

  private:
    Rational theta_;
    i64 c_;
    Rational ct1_, theta_tilde_, theta_prime_;
    std::array<Vec4, 2> t_cols_, s_cols_;
    Mat4Q j_, j_pos_;
    Mat2Q t1_, s1_, l_, z_;
};

// Right action f.U_l and left action V_l.f of the canonical unitaries,
// evaluated from the displayed bimodule formulas (they agree samplewise with
// pi(Tl) and pi*(Sl)).
GridFunction act_right(const GridFunction& f, Lattice2 l, const LatticeEmbedding& e);
GridFunction act_left(Lattice2 l, const GridFunction& f, const LatticeEmbedding& e);

// Single coefficient of the algebra-valued inner products.
cplx inner_a_coeff(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                   Lattice2 l);
cplx inner_b_coeff(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                   Lattice2 l, double K = 1.0);

// <f,g>_A over theta with support |l|_inf <= radius. Raises WindowTooSmall
// when the boundary shell still carries coefficients above shell_tol.
AlgebraElement inner_a(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                       i64 radius, double shell_tol = 1e-10);
// B<f,g> over theta', scaled by K.
AlgebraElement inner_b(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                       i64 radius, double K = 1.0, double shell_tol = 1e-10);

// f.a and b.f for finitely supported algebra elements.
GridFunction module_right(const GridFunction& f, const AlgebraElement& a,
                          const LatticeEmbedding& e);
GridFunction module_left(const AlgebraElement& b, const GridFunction& f,
                         const LatticeEmbedding& e);

struct Calibration {
    double K = 1.0;
    double rel_spread = 0.0;    // max relative deviation of per-triple estimates
    double residual = 0.0;      // worst compatibility residual with the mean K
};

// Least-squares K from B<f,g>.h = f.<g,h>_A over the given triples.
Calibration calibrate_k(const LatticeEmbedding& e,
                        const std::vector<std::array<GridFunction, 3>>& triples, i64 radius,
                        double consistency_tol = 1e-6);

// Exact rational checks M_A(T l) = T(A l) and N_A(S l) = S(A^-t l) for all
// |l|_inf <= range; returns false with a counterexample on failure.
struct LatticeIdentityResult {
    bool ok = true;
    IntMat2 matrix;
    Lattice2 failing_l{0, 0};
    int side = 0;  // 0 = T side, 1 = S side
};

LatticeIdentityResult lattice_identity_check(const IntMat2& a, const LatticeEmbedding& e,
                                             i64 range = 5);

struct EquivarianceReport {
    double right_action = 0;  // H(f.U_l) vs (Hf).U_{Wl}
    double left_action = 0;   // H(V_l.f) vs V_{W^-t l}.(Hf)
    double inner_a = 0;       // <Hf,Hg>_A vs re-indexed <f,g>_A
    double inner_b = 0;       // B<Hf,Hg> vs re-indexed B<f,g>
    double max_residual() const {
        return std::max(std::max(right_action, left_action), std::max(inner_a, inner_b));
    }
};

EquivarianceReport equivariance_residual(const WeylEngine& eng, const GeneratorWord& w,
                                         const GridFunction& f, const GridFunction& g,
                                         const LatticeEmbedding& e, i64 radius);

}  // namespace nctori
