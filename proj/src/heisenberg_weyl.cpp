#include "nctori/heisenberg_weyl.hpp"

#include <cmath>
#include <numeric>

#include "nctori/errors.hpp"

namespace nctori {

namespace {

void check_spec(const GridSpec& a, const GridSpec& b) {
    if (a != b) throw SpecMismatch("grid function does not match the engine grid");
}

}  // namespace

GridFunction hw_apply(const PhaseSpacePoint& g, const GridFunction& f, double boundary_tol) {
    const GridSpec& spec = f.spec();
    const int N = spec.samples();
    const int c = spec.c();
    i64 sx = spec.steps_of(g.x);
    if (sx != 0 && f.boundary_mag() > boundary_tol)
        throw BoundaryOverflow("translating a function with non-decayed edges");
    // Phase turns: y*p_j - x*y/2 (continuous) + (2 q l - k l)/(2c) (discrete).
    Rational xy2 = g.x * g.y / Rational(2);
    Rational ystep = g.y * spec.delta() / Rational(2);
    std::vector<cplx> cont(static_cast<size_t>(N));
    std::vector<Rational> contr(static_cast<size_t>(N));
    for (i64 j = 0; j < N; ++j) contr[static_cast<size_t>(j)] = ystep * Rational(2 * j - N) - xy2;
    std::vector<Rational> disc(static_cast<size_t>(c));
    for (int q = 0; q < c; ++q)
        disc[static_cast<size_t>(q)] = Rational(2 * q * g.l - g.k * g.l, 2 * c);
    GridFunction out(spec);
    for (i64 j = 0; j < N; ++j) {
        i64 src_j = j - sx;
        bool in = src_j >= 0 && src_j < N;
        for (int q = 0; q < c; ++q) {
            if (!in) continue;
            int src_q = static_cast<int>((((q - g.k) % c) + c) % c);
            out.at(j, q) = unit_phase(contr[static_cast<size_t>(j)] + disc[static_cast<size_t>(q)]) *
                           f.at(src_j, src_q);
        }
    }
    return out;
}

GridFunction hw_adjoint(const PhaseSpacePoint& g, const GridFunction& f, double boundary_tol) {
    return hw_apply(-g, f, boundary_tol);
}

Mat4Q symplectic_form(i64 c) {
    Mat4Q j;
    j.m[0][1] = Rational(1);
    j.m[1][0] = Rational(-1);
    j.m[2][3] = Rational(1, c);
    j.m[3][2] = Rational(-1, c);
    return j;
}

Mat4Q build_ma_matrix(const IntMat2& A, const Rational& theta, i64 c) {
    Rational ct1 = Rational(c) * theta + Rational(1);
    if (ct1.is_zero()) throw PoleError("theta = -1/c");
    Rational tt = ct1 / Rational(c);
    Mat2Q t1 = Mat2Q::diag(tt, Rational(1));
    Mat2Q l = Mat2Q::diag(Rational(-1), Rational(1));
    Mat2Q a2 = Mat2Q::from_int(A);
    return Mat4Q::block_diag(t1 * a2 * t1.inverse(), l * a2 * l.inverse());
}

Mat4Q build_ma(const GeneratorWord& w, const Rational& theta, i64 c) {
    return build_ma_matrix(w.evaluate(), theta, c);
}

Mat4Q build_na_matrix(const IntMat2& A, const Rational& theta, i64 c) {
    Rational ct1 = Rational(c) * theta + Rational(1);
    if (ct1.is_zero()) throw PoleError("theta = -1/c");
    Mat2Q s1{Rational(0), Rational(1, c), -ct1.inverse(), Rational(0)};
    Mat2Q l = Mat2Q::diag(Rational(-1), Rational(1));
    Mat2Q amt = Mat2Q::from_int(A.inverse_unimodular().transpose());
    Mat2Q a2 = Mat2Q::from_int(A);
    return Mat4Q::block_diag(s1 * amt * s1.inverse(), l * a2 * l.inverse());
}

Mat4Q build_na(const GeneratorWord& w, const Rational& theta, i64 c) {
    return build_na_matrix(w.evaluate(), theta, c);
}

PhaseSpacePoint apply_mat4(const Mat4Q& M, const PhaseSpacePoint& g) {
    std::array<Rational, 4> v{g.x, g.y, Rational(g.k), Rational(g.l)};
    std::array<Rational, 4> w = M.apply(v);
    if (!w[2].is_integer() || !w[3].is_integer())
        throw Error("matrix image leaves the discrete lattice");
    return {w[0], w[1], w[2].num(), w[3].num()};
}

WeylEngine::WeylEngine(const GridSpec& spec) : spec_(spec) {
    const i64 N = spec_.samples();
    const i64 c = spec_.c();
    const i64 q = spec_.theta().den();
    const i64 p = spec_.theta().num();
    const i64 m = spec_.refine();
    // p_j z_{j'} / theta~ = n_j n_{j'} / D with n_j = 2j - N.
    const i64 D = 4 * c * q * m * m * (c * p + q);
    Rational tt = spec_.theta_tilde();
    double scale = spec_.delta().to_double() / std::sqrt(tt.to_double());

    ker_re_.resize(static_cast<size_t>(N) * N);
    ker_im_.resize(static_cast<size_t>(N) * N);
    if (D <= (1 << 22)) {
        std::vector<cplx> tab(static_cast<size_t>(D));
        for (i64 u = 0; u < D; ++u) tab[static_cast<size_t>(u)] = unit_phase(Rational(u, D));
        for (i64 j = 0; j < N; ++j) {
            i64 nj = 2 * j - N;
            for (i64 jp = 0; jp < N; ++jp) {
                i64 u = (((-nj * (2 * jp - N)) % D) + D) % D;
                cplx v = scale * tab[static_cast<size_t>(u)];
                ker_re_[static_cast<size_t>(j * N + jp)] = v.real();
                ker_im_[static_cast<size_t>(j * N + jp)] = v.imag();
            }
        }
    } else {
        for (i64 j = 0; j < N; ++j) {
            i64 nj = 2 * j - N;
            for (i64 jp = 0; jp < N; ++jp) {
                cplx v = scale * unit_phase(Rational(-nj * (2 * jp - N), D));
                ker_re_[static_cast<size_t>(j * N + jp)] = v.real();
                ker_im_[static_cast<size_t>(j * N + jp)] = v.imag();
            }
        }
    }

    chirp_.resize(static_cast<size_t>(N));
    for (i64 j = 0; j < N; ++j) {
        i64 nj = 2 * j - N;
        chirp_[static_cast<size_t>(j)] = unit_phase(Rational(nj * nj, 2 * D));
    }
    disc_chirp_.resize(static_cast<size_t>(c));
    for (i64 mm = 0; mm < c; ++mm)
        disc_chirp_[static_cast<size_t>(mm)] = unit_phase(Rational(-mm * mm, 2 * c));
    dft_.resize(static_cast<size_t>(c) * c);
    double cs = 1.0 / std::sqrt(static_cast<double>(c));
    for (i64 qq = 0; qq < c; ++qq)
        for (i64 mm = 0; mm < c; ++mm)
            dft_[static_cast<size_t>(qq * c + mm)] = cs * unit_phase(Rational(qq * mm, c));

    build_sigma();
}

namespace {

i64 mod_inverse(i64 a, i64 n) {
    i64 t = 0, newt = 1, r = n, newr = ((a % n) + n) % n;
    while (newr != 0) {
        i64 q = r / newr;
        std::swap(t, newt);
        newt -= q * t;
        std::swap(r, newr);
        newr -= q * r;
    }
    if (r != 1) throw Error("element not invertible");
    return ((t % n) + n) % n;
}

}  // namespace

void WeylEngine::build_sigma() {
    const i64 c = spec_.c();
    chirp_has_correction_ = false;
    sigma_.assign(static_cast<size_t>(c), cplx{1.0, 0.0});
    sigma_period_ = 1;
    if (c % 2 == 0) return;  // e(-m^2/(2c)) is c-periodic; no correction needed
    const i64 p = spec_.theta().num();
    const i64 q = spec_.theta().den();
    const i64 m0 = spec_.refine();
    const i64 s_t = spec_.steps_of(spec_.theta_tilde());  // (c p + q) m0
    // The correction must satisfy, for both shear steps s in {s_t, q*m0},
    //   sigma(j, m) = w(m) sigma(j - s, (m+1) mod c),   w(m) = -1 at m = c-1.
    // A pure modulation sigma(j, m) = e(j*alpha) u(m) solves this exactly
    // when p is even; for odd p no correction of any kind is consistent.
    Rational alpha;
    if (p == 0) {
        alpha = Rational(1, 2 * c * q * m0);
    } else if (p % 2 == 0) {
        i64 pa = std::abs(p);
        i64 base = (((c * p + q) % pa) + pa) % pa;
        i64 t = ((pa / 2) % pa) * mod_inverse(base, pa) % pa;
        alpha = Rational(t, c * p * m0);
    } else {
        return;  // leave sigma trivial; the chirp then intertwines only mod signs
    }
    chirp_has_correction_ = true;
    sigma_period_ = alpha.mod_one().is_zero() ? 1 : alpha.mod_one().den();
    sigma_.assign(static_cast<size_t>(sigma_period_) * c, cplx{});
    // Row phases: u(0) = e(0), u(m+1) = u(m) e(s_t * alpha); the wrap row's
    // half-turn requirement closes the cycle by the choice of alpha.
    std::vector<Rational> mu(static_cast<size_t>(c));
    for (i64 m = 0; m + 1 < c; ++m)
        mu[static_cast<size_t>(m + 1)] = mu[static_cast<size_t>(m)] + Rational(s_t) * alpha;
    // Anchor the global phase at the window centre row 0 so the multiplier
    // leaves the centre sample untouched.
    Rational anchor = Rational(spec_.samples() / 2) * alpha;
    for (i64 j = 0; j < sigma_period_; ++j)
        for (i64 m = 0; m < c; ++m)
            sigma_[static_cast<size_t>(j) * c + m] =
                unit_phase(Rational(j) * alpha - anchor + mu[static_cast<size_t>(m)]);
}

namespace {

// out[j][col] = sum_j' K[j][j'] in[j'][col], row-major planar buffers.
// Columns are processed in fixed-width chunks so the inner loop vectorizes.
template <int W>
void matvec_chunk(const double* kr, const double* ki, bool inverse, i64 N, const double* in_re,
                  const double* in_im, double* out_re, double* out_im, i64 stride) {
    for (i64 j = 0; j < N; ++j) {
        const double* krow = kr + j * N;
        const double* kim = ki + j * N;
        double ar[W] = {0};
        double ai[W] = {0};
        if (!inverse) {
            for (i64 jp = 0; jp < N; ++jp) {
                double a = krow[jp], b = kim[jp];
                const double* fr = in_re + jp * stride;
                const double* fi = in_im + jp * stride;
                for (int w = 0; w < W; ++w) {
                    ar[w] += a * fr[w] - b * fi[w];
                    ai[w] += a * fi[w] + b * fr[w];
                }
            }
        } else {
            for (i64 jp = 0; jp < N; ++jp) {
                double a = krow[jp], b = -kim[jp];
                const double* fr = in_re + jp * stride;
                const double* fi = in_im + jp * stride;
                for (int w = 0; w < W; ++w) {
                    ar[w] += a * fr[w] - b * fi[w];
                    ai[w] += a * fi[w] + b * fr[w];
                }
            }
        }
        for (int w = 0; w < W; ++w) {
            out_re[j * stride + w] = ar[w];
            out_im[j * stride + w] = ai[w];
        }
    }
}

void matvec(const double* kr, const double* ki, bool inverse, i64 N, i64 ncols, double* in_re,
            double* in_im, double* out_re, double* out_im) {
    i64 col = 0;
    while (col < ncols) {
        i64 left = ncols - col;
        if (left >= 8) {
            matvec_chunk<8>(kr, ki, inverse, N, in_re + col, in_im + col, out_re + col,
                            out_im + col, ncols);
            col += 8;
        } else if (left >= 4) {
            matvec_chunk<4>(kr, ki, inverse, N, in_re + col, in_im + col, out_re + col,
                            out_im + col, ncols);
            col += 4;
        } else if (left >= 2) {
            matvec_chunk<2>(kr, ki, inverse, N, in_re + col, in_im + col, out_re + col,
                            out_im + col, ncols);
            col += 2;
        } else {
            matvec_chunk<1>(kr, ki, inverse, N, in_re + col, in_im + col, out_re + col,
                            out_im + col, ncols);
            col += 1;
        }
    }
}

}  // namespace

GridFunction WeylEngine::apply_j0(const GridFunction& f, bool inverse) const {
    std::vector<GridFunction> fs{f};
    GeneratorWord w{{inverse ? Gen::J0Inv : Gen::J0}};
    return std::move(apply_word_batch(w, std::move(fs)).front());
}

GridFunction WeylEngine::apply_p(const GridFunction& f, bool inverse) const {
    check_spec(f.spec(), spec_);
    const i64 N = spec_.samples();
    const int c = spec_.c();
    GridFunction out(spec_);
    for (i64 j = 0; j < N; ++j) {
        cplx ch = inverse ? std::conj(chirp_[static_cast<size_t>(j)]) : chirp_[static_cast<size_t>(j)];
        for (int m = 0; m < c; ++m) {
            cplx dm = inverse ? std::conj(disc_chirp_[static_cast<size_t>(m)])
                              : disc_chirp_[static_cast<size_t>(m)];
            cplx sg = sigma_at(j, m);
            if (inverse) sg = std::conj(sg);
            out.at(j, m) = sg * ch * dm * f.at(j, m);
        }
    }
    return out;
}

GridFunction WeylEngine::apply_gen(Gen g, const GridFunction& f) const {
    switch (g) {
        case Gen::J0: return apply_j0(f, false);
        case Gen::J0Inv: return apply_j0(f, true);
        case Gen::P: return apply_p(f, false);
        case Gen::PInv: return apply_p(f, true);
    }
    throw Error("bad generator token");
}

GridFunction WeylEngine::apply_word(const GeneratorWord& w, const GridFunction& f) const {
    std::vector<GridFunction> fs{f};
    return std::move(apply_word_batch(w, std::move(fs)).front());
}

std::vector<GridFunction> WeylEngine::apply_word_batch(const GeneratorWord& w,
                                                       std::vector<GridFunction> fs) const {
    const i64 N = spec_.samples();
    const int c = spec_.c();
    for (const GridFunction& f : fs) check_spec(f.spec(), spec_);
    const i64 ncols = static_cast<i64>(fs.size()) * c;
    std::vector<double> in_re, in_im, out_re, out_im;
    for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) {
        Gen g = *it;
        if (g == Gen::P || g == Gen::PInv) {
            for (GridFunction& f : fs) f = apply_p(f, g == Gen::PInv);
            continue;
        }
        bool inverse = g == Gen::J0Inv;
        in_re.assign(static_cast<size_t>(N * ncols), 0.0);
        in_im.assign(static_cast<size_t>(N * ncols), 0.0);
        out_re.resize(static_cast<size_t>(N * ncols));
        out_im.resize(static_cast<size_t>(N * ncols));
        // Per function: q-DFT into planar columns [j][func*c + m].
        for (size_t fidx = 0; fidx < fs.size(); ++fidx) {
            const GridFunction& f = fs[fidx];
            for (i64 j = 0; j < N; ++j)
                for (int m = 0; m < c; ++m) {
                    cplx acc{};
                    for (int q = 0; q < c; ++q) {
                        cplx d = dft_[static_cast<size_t>(q * c + m)];
                        if (inverse) d = std::conj(d);
                        acc += d * f.at(j, q);
                    }
                    size_t idx = static_cast<size_t>(j * ncols) + fidx * c + m;
                    in_re[idx] = acc.real();
                    in_im[idx] = acc.imag();
                }
        }
        matvec(ker_re_.data(), ker_im_.data(), inverse, N, ncols, in_re.data(), in_im.data(),
               out_re.data(), out_im.data());
        for (size_t fidx = 0; fidx < fs.size(); ++fidx) {
            GridFunction& f = fs[fidx];
            for (i64 j = 0; j < N; ++j)
                for (int m = 0; m < c; ++m) {
                    size_t idx = static_cast<size_t>(j * ncols) + fidx * c + m;
                    f.at(j, m) = {out_re[idx], out_im[idx]};
                }
        }
    }
    return fs;
}

double covariance_residual(const WeylEngine& eng, const GeneratorWord& w,
                           const PhaseSpacePoint& g, const GridFunction& f) {
    Mat4Q M = build_ma(w, eng.spec().theta(), eng.spec().c());
    GridFunction lhs = eng.apply_word(w, hw_apply(g, f));
    GridFunction rhs = hw_apply(apply_mat4(M, g), eng.apply_word(w, f));
    return dist(lhs, rhs) / f.norm();
}

OrderPhase order_phase(const WeylEngine& eng, const GeneratorWord& w, int order,
                       const std::vector<GridFunction>& family, double order_tol) {
    if (family.empty()) throw Error("order_phase needs a nonempty family");
    std::vector<cplx> lambdas;
    std::vector<GridFunction> imgs = family;
    for (int n = 0; n < order; ++n) imgs = eng.apply_word_batch(w, std::move(imgs));
    for (size_t i = 0; i < family.size(); ++i) {
        const GridFunction& f = family[i];
        const GridFunction& h = imgs[i];
        double n2 = f.norm();
        cplx lam = inner(h, f) / (n2 * n2);
        if (dist(h, add_scaled(GridFunction(eng.spec()), lam, f)) / n2 > order_tol)
            throw OrderMismatch("word power image is not parallel to the input");
        lambdas.push_back(lam);
    }
    cplx mean{};
    for (cplx l : lambdas) mean += l;
    mean /= static_cast<double>(lambdas.size());
    double spread = 0;
    for (cplx l : lambdas) spread = std::max(spread, std::abs(l - mean));
    return {mean, spread};
}

}  // namespace nctori
