#include "nctori/bimodule.hpp"

#include <cmath>

#include "nctori/errors.hpp"

namespace nctori {

namespace {

Rational dot4(const LatticeEmbedding::Vec4& a, const LatticeEmbedding::Vec4& b) {
    Rational s;
    for (int i = 0; i < 4; ++i) s += a[i] * b[i];
    return s;
}

// <v, J' v / 2> for the positive part of the form.
Rational half_pairing(const Mat4Q& j_pos, const LatticeEmbedding::Vec4& v) {
    auto w = j_pos.apply(v);
    for (auto& x : w) x = x / Rational(2);
    return dot4(v, w);
}

void check_spec_theta(const GridFunction& f, const LatticeEmbedding& e) {
    if (f.spec().theta() != e.theta() || f.spec().c() != e.c())
        throw SpecMismatch("grid function does not match the embedding");
}

}  // namespace

LatticeEmbedding::LatticeEmbedding(const Rational& theta, i64 c) : theta_(theta), c_(c) {
    if (c_ < 1) throw ConfigError("c must be >= 1");
    ct1_ = Rational(c_) * theta_ + Rational(1);
    if (ct1_.is_zero()) throw PoleError("theta = -1/c");
    theta_tilde_ = ct1_ / Rational(c_);
    theta_prime_ = theta_ / ct1_;

    t_cols_[0] = {theta_tilde_, Rational(0), Rational(-1), Rational(0)};
    t_cols_[1] = {Rational(0), Rational(1), Rational(0), Rational(1)};
    s_cols_[0] = {Rational(0), -ct1_.inverse(), Rational(0), Rational(-1)};
    s_cols_[1] = {Rational(1, c_), Rational(0), Rational(-1), Rational(0)};

    j_ = symplectic_form(c_);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            j_pos_.m[i][k] = j_.m[i][k].sign() > 0 ? j_.m[i][k] : Rational(0);

    t1_ = Mat2Q::diag(theta_tilde_, Rational(1));
    s1_ = Mat2Q{Rational(0), Rational(1, c_), -ct1_.inverse(), Rational(0)};
    l_ = Mat2Q::diag(Rational(-1), Rational(1));
    z_ = Mat2Q{Rational(0), Rational(-1, c_), Rational(1, c_), Rational(0)};

    // Defining identities, exactly.
    auto pair_cols = [&](const std::array<Vec4, 2>& cols, int a, int b) {
        return dot4(cols[static_cast<size_t>(a)], j_.apply(cols[static_cast<size_t>(b)]));
    };
    bool t_ok = pair_cols(t_cols_, 0, 0).is_zero() && pair_cols(t_cols_, 1, 1).is_zero() &&
                pair_cols(t_cols_, 0, 1) == theta_ && pair_cols(t_cols_, 1, 0) == -theta_;
    bool s_ok = pair_cols(s_cols_, 0, 0).is_zero() && pair_cols(s_cols_, 1, 1).is_zero() &&
                pair_cols(s_cols_, 0, 1) == -theta_prime_ &&
                pair_cols(s_cols_, 1, 0) == theta_prime_;
    // -C Z = D for the embedded shear blocks C = [[0,-c],[c,0]], D = I.
    Mat2Q cmat{Rational(0), Rational(-c_), Rational(c_), Rational(0)};
    bool z_ok = (-(cmat * z_)) == Mat2Q::identity();
    if (!t_ok || !s_ok || !z_ok) throw Error("lattice embedding failed its defining identities");
}

LatticeEmbedding::Vec4 LatticeEmbedding::t_vector(Lattice2 l) const {
    Vec4 v;
    for (int i = 0; i < 4; ++i)
        v[static_cast<size_t>(i)] = Rational(l[0]) * t_cols_[0][static_cast<size_t>(i)] +
                                    Rational(l[1]) * t_cols_[1][static_cast<size_t>(i)];
    return v;
}

LatticeEmbedding::Vec4 LatticeEmbedding::s_vector(Lattice2 l) const {
    Vec4 v;
    for (int i = 0; i < 4; ++i)
        v[static_cast<size_t>(i)] = Rational(l[0]) * s_cols_[0][static_cast<size_t>(i)] +
                                    Rational(l[1]) * s_cols_[1][static_cast<size_t>(i)];
    return v;
}

PhaseSpacePoint LatticeEmbedding::t_point(Lattice2 l) const {
    Vec4 v = t_vector(l);
    return {v[0], v[1], v[2].num(), v[3].num()};
}

PhaseSpacePoint LatticeEmbedding::s_point(Lattice2 l) const {
    Vec4 v = s_vector(l);
    return {v[0], v[1], v[2].num(), v[3].num()};
}

GridFunction act_right(const GridFunction& f, Lattice2 l, const LatticeEmbedding& e) {
    check_spec_theta(f, e);
    const GridSpec& spec = f.spec();
    const i64 N = spec.samples();
    const int c = spec.c();
    auto v = e.t_vector(l);
    i64 sx = spec.steps_of(v[0]);
    Rational scalar = -half_pairing(e.form_j_pos(), v);
    GridFunction out(spec);
    std::vector<Rational> tj(static_cast<size_t>(N));
    for (i64 j = 0; j < N; ++j) tj[static_cast<size_t>(j)] = scalar + spec.point(j) * v[1];
    for (i64 j = 0; j < N; ++j) {
        i64 src_j = j - sx;
        if (src_j < 0 || src_j >= N) continue;
        for (int q = 0; q < c; ++q) {
            int src_q = static_cast<int>((((q - v[2].num()) % c) + c) % c);
            out.at(j, q) = unit_phase(tj[static_cast<size_t>(j)] + Rational(q) * v[3] / Rational(c)) *
                           f.at(src_j, src_q);
        }
    }
    return out;
}

GridFunction act_left(Lattice2 l, const GridFunction& f, const LatticeEmbedding& e) {
    check_spec_theta(f, e);
    const GridSpec& spec = f.spec();
    const i64 N = spec.samples();
    const int c = spec.c();
    auto v = e.s_vector(l);
    i64 sx = spec.steps_of(v[0]);
    Rational scalar = -half_pairing(e.form_j_pos(), v);
    GridFunction out(spec);
    for (i64 j = 0; j < N; ++j) {
        i64 src_j = j + sx;
        if (src_j < 0 || src_j >= N) continue;
        Rational tj = scalar - spec.point(j) * v[1];
        for (int q = 0; q < c; ++q) {
            int src_q = static_cast<int>((((q + v[2].num()) % c) + c) % c);
            out.at(j, q) = unit_phase(tj - Rational(q) * v[3] / Rational(c)) * f.at(src_j, src_q);
        }
    }
    return out;
}

cplx inner_a_coeff(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                   Lattice2 l) {
    check_spec_theta(f, e);
    if (f.spec() != g.spec()) throw SpecMismatch("inner product across different grids");
    const GridSpec& spec = f.spec();
    const i64 N = spec.samples();
    const int c = spec.c();
    auto v = e.t_vector(l);
    i64 sx = spec.steps_of(v[0]);
    Rational scalar = -half_pairing(e.form_j_pos(), v);
    cplx acc{};
    for (i64 j = 0; j < N; ++j) {
        i64 gj = j + sx;
        if (gj < 0 || gj >= N) continue;
        Rational tj = scalar - spec.point(j) * v[1];
        for (int q = 0; q < c; ++q) {
            int gq = static_cast<int>((((q + v[2].num()) % c) + c) % c);
            acc += unit_phase(tj - Rational(q) * v[3] / Rational(c)) * g.at(gj, gq) *
                   std::conj(f.at(j, q));
        }
    }
    return acc * f.weight();
}

cplx inner_b_coeff(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                   Lattice2 l, double K) {
    check_spec_theta(f, e);
    if (f.spec() != g.spec()) throw SpecMismatch("inner product across different grids");
    const GridSpec& spec = f.spec();
    const i64 N = spec.samples();
    const int c = spec.c();
    auto v = e.s_vector(l);
    i64 sx = spec.steps_of(v[0]);
    Rational scalar = half_pairing(e.form_j_pos(), v);
    cplx acc{};
    for (i64 j = 0; j < N; ++j) {
        i64 gj = j + sx;
        if (gj < 0 || gj >= N) continue;
        Rational tj = scalar + spec.point(j) * v[1];
        for (int q = 0; q < c; ++q) {
            int gq = static_cast<int>((((q + v[2].num()) % c) + c) % c);
            acc += unit_phase(tj + Rational(q) * v[3] / Rational(c)) * std::conj(g.at(gj, gq)) *
                   f.at(j, q);
        }
    }
    return acc * (K * f.weight());
}

namespace {

AlgebraElement collect_coeffs(const GridFunction& f, const GridFunction& g,
                              const LatticeEmbedding& e, i64 radius, double shell_tol,
                              bool b_side, double K) {
    AlgebraElement out(b_side ? e.theta_prime() : e.theta());
    double shell_max = 0;
    for (i64 l1 = -radius; l1 <= radius; ++l1)
        for (i64 l2 = -radius; l2 <= radius; ++l2) {
            Lattice2 l{l1, l2};
            cplx v = b_side ? inner_b_coeff(f, g, e, l, K) : inner_a_coeff(f, g, e, l);
            if (std::max(std::abs(l1), std::abs(l2)) == radius)
                shell_max = std::max(shell_max, std::abs(v));
            out.add_term(l, PhasedCoeff{ExactPhase(), v});
        }
    if (shell_max > shell_tol)
        throw WindowTooSmall("inner-product coefficients have not decayed at the window edge");
    return out;
}

}  // namespace

AlgebraElement inner_a(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                       i64 radius, double shell_tol) {
    return collect_coeffs(f, g, e, radius, shell_tol, false, 1.0);
}

AlgebraElement inner_b(const GridFunction& f, const GridFunction& g, const LatticeEmbedding& e,
                       i64 radius, double K, double shell_tol) {
    return collect_coeffs(f, g, e, radius, shell_tol, true, K);
}

GridFunction module_right(const GridFunction& f, const AlgebraElement& a,
                          const LatticeEmbedding& e) {
    if (a.theta() != e.theta()) throw ThetaMismatch("right module action needs theta coefficients");
    GridFunction out(f.spec());
    for (const auto& [l, coeff] : a.coeffs()) {
        GridFunction term = act_right(f, l, e);
        cplx cv = coeff.value();
        for (size_t i = 0; i < out.samples().size(); ++i) out.samples()[i] += cv * term.samples()[i];
    }
    return out;
}

GridFunction module_left(const AlgebraElement& b, const GridFunction& f,
                         const LatticeEmbedding& e) {
    if (b.theta() != e.theta_prime())
        throw ThetaMismatch("left module action needs theta' coefficients");
    GridFunction out(f.spec());
    for (const auto& [l, coeff] : b.coeffs()) {
        GridFunction term = act_left(l, f, e);
        cplx cv = coeff.value();
        for (size_t i = 0; i < out.samples().size(); ++i) out.samples()[i] += cv * term.samples()[i];
    }
    return out;
}

Calibration calibrate_k(const LatticeEmbedding& e,
                        const std::vector<std::array<GridFunction, 3>>& triples, i64 radius,
                        double consistency_tol) {
    if (triples.empty()) throw Error("calibration needs at least one triple");
    std::vector<double> ks;
    std::vector<GridFunction> xs, ys;
    for (const auto& t : triples) {
        const GridFunction& f = t[0];
        const GridFunction& g = t[1];
        const GridFunction& h = t[2];
        GridFunction x = module_left(inner_b(f, g, e, radius, 1.0, 1e-8), h, e);
        GridFunction y = module_right(f, inner_a(g, h, e, radius, 1e-8), e);
        double x2 = x.norm();
        cplx k = inner(y, x) / (x2 * x2);
        if (std::abs(k.imag()) > 1e-6 * std::abs(k.real()))
            throw InconsistentCalibration("per-triple constant is not real");
        ks.push_back(k.real());
        xs.push_back(std::move(x));
        ys.push_back(std::move(y));
    }
    double mean = 0;
    for (double k : ks) mean += k;
    mean /= static_cast<double>(ks.size());
    Calibration cal;
    cal.K = mean;
    for (double k : ks) cal.rel_spread = std::max(cal.rel_spread, std::abs(k - mean) / std::abs(mean));
    if (cal.rel_spread > consistency_tol)
        throw InconsistentCalibration("per-triple constants disagree beyond tolerance");
    for (size_t i = 0; i < xs.size(); ++i) {
        GridFunction d = xs[i];
        for (size_t s = 0; s < d.samples().size(); ++s)
            d.samples()[s] = mean * d.samples()[s] - ys[i].samples()[s];
        cal.residual = std::max(cal.residual, d.norm() / ys[i].norm());
    }
    return cal;
}

LatticeIdentityResult lattice_identity_check(const IntMat2& a, const LatticeEmbedding& e,
                                             i64 range) {
    LatticeIdentityResult res;
    res.matrix = a;
    Mat4Q m = build_ma_matrix(a, e.theta(), e.c());
    Mat4Q n = build_na_matrix(a, e.theta(), e.c());
    IntMat2 amt = a.inverse_unimodular().transpose();
    for (i64 l1 = -range; l1 <= range; ++l1)
        for (i64 l2 = -range; l2 <= range; ++l2) {
            Lattice2 l{l1, l2};
            if (m.apply(e.t_vector(l)) != e.t_vector(a.apply(l))) {
                res.ok = false;
                res.failing_l = l;
                res.side = 0;
                return res;
            }
            if (n.apply(e.s_vector(l)) != e.s_vector(amt.apply(l))) {
                res.ok = false;
                res.failing_l = l;
                res.side = 1;
                return res;
            }
        }
    return res;
}

EquivarianceReport equivariance_residual(const WeylEngine& eng, const GeneratorWord& w,
                                         const GridFunction& f, const GridFunction& g,
                                         const LatticeEmbedding& e, i64 radius) {
    EquivarianceReport rep;
    IntMat2 wm = w.evaluate();
    IntMat2 winv = wm.inverse_unimodular();
    IntMat2 wmt = winv.transpose();
    GridFunction hf = eng.apply_word(w, f);
    GridFunction hg = eng.apply_word(w, g);
    double fn = f.norm();

    std::vector<Lattice2> window;
    for (i64 l1 = -radius; l1 <= radius; ++l1)
        for (i64 l2 = -radius; l2 <= radius; ++l2) window.push_back({l1, l2});

    std::vector<GridFunction> lhs_r, lhs_l;
    lhs_r.reserve(window.size());
    lhs_l.reserve(window.size());
    for (Lattice2 l : window) {
        lhs_r.push_back(act_right(f, l, e));
        lhs_l.push_back(act_left(l, f, e));
    }
    lhs_r = eng.apply_word_batch(w, std::move(lhs_r));
    lhs_l = eng.apply_word_batch(w, std::move(lhs_l));
    for (size_t i = 0; i < window.size(); ++i) {
        rep.right_action = std::max(
            rep.right_action, dist(lhs_r[i], act_right(hf, wm.apply(window[i]), e)) / fn);
        rep.left_action = std::max(
            rep.left_action, dist(lhs_l[i], act_left(wmt.apply(window[i]), hf, e)) / fn);
    }
    for (Lattice2 l : window) {
        rep.inner_a = std::max(rep.inner_a, std::abs(inner_a_coeff(hf, hg, e, l) -
                                                     inner_a_coeff(f, g, e, winv.apply(l))));
        rep.inner_b = std::max(rep.inner_b, std::abs(inner_b_coeff(hf, hg, e, l) -
                                                     inner_b_coeff(f, g, e, wm.transpose().apply(l))));
    }
    return rep;
}

}  // namespace nctori
