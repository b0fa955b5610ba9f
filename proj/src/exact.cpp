#include "nctori/exact.hpp"

#include <numeric>

#include "nctori/errors.hpp"

namespace nctori {

ContinuedFraction cf_expand(const Rational& r) {
    ContinuedFraction cf;
    i64 a0 = r.floor_ll();
    cf.coeffs.push_back(a0);
    Rational rest = r - Rational(a0);
    // Euclid on the fractional part: num/den with 0 <= num < den.
    i64 num = rest.num();
    i64 den = rest.den();
    while (num != 0) {
        cf.coeffs.push_back(den / num);
        i64 t = den % num;
        den = num;
        num = t;
    }
    return cf;
}

Rational cf_eval(const ContinuedFraction& cf) {
    if (cf.coeffs.empty()) throw Error("empty continued fraction");
    for (size_t i = 1; i < cf.coeffs.size(); ++i)
        if (cf.coeffs[i] <= 0) throw Error("continued fraction coefficients must be positive");
    Rational v(cf.coeffs.back());
    for (size_t i = cf.coeffs.size() - 1; i-- > 0;) v = Rational(cf.coeffs[i]) + v.inverse();
    return v;
}

Rational mobius_step(const Rational& t, i64 a, i64 b, i64 c, i64 d) {
    i128 den = static_cast<i128>(c) * t.num() + static_cast<i128>(d) * t.den();
    if (den == 0) throw PoleError("moebius pole: c*theta + d = 0");
    i128 num = static_cast<i128>(a) * t.num() + static_cast<i128>(b) * t.den();
    return Rational::reduce128(num, den);
}

Rational mobius(const IntMat2& g, const Rational& t) {
    i64 dt = g.det();
    if (dt != 1 && dt != -1) throw DetError("moebius action requires det = +/-1");
    return mobius_step(t, g.a, g.b, g.c, g.d);
}

IntMat4 embed_so22(const IntMat2& g) {
    if (g.det() != 1) throw DetError("SO(2,2|Z) embedding requires det = 1");
    IntMat4 r;
    r.m = {{{g.a, 0, 0, g.b},
            {0, g.a, -g.b, 0},
            {0, -g.c, g.d, 0},
            {g.c, 0, 0, g.d}}};
    return r;
}

namespace {

// Left-multiplication steps recorded while reducing M to the identity.
struct Reducer {
    IntMat2 m;
    std::vector<Gen> applied;  // in application order

    void push(Gen g) {
        m = gen_matrix(g) * m;
        applied.push_back(g);
    }
    // P^n on the left adds n*row1 to row2.
    void shear_lower(i64 n) {
        Gen g = n > 0 ? Gen::P : Gen::PInv;
        for (i64 i = 0; i < (n < 0 ? -n : n); ++i) push(g);
    }
    // J0 P^{-n} J0^{-1} = [[1,n],[0,1]] adds n*row2 to row1.
    void shear_upper(i64 n) {
        push(Gen::J0Inv);
        shear_lower(-n);
        push(Gen::J0);
    }
};

i64 round_div(i64 a, i64 b) {
    // Nearest integer to a/b, ties toward zero.
    i64 q = a / b;
    i64 r = a - q * b;
    if (2 * (r < 0 ? -r : r) > (b < 0 ? -b : b)) q += (a < 0) == (b < 0) ? 1 : -1;
    return q;
}

void cancel_pairs(std::vector<Gen>& t) {
    std::vector<Gen> out;
    for (Gen g : t) {
        if (!out.empty() && out.back() == gen_inverse(g))
            out.pop_back();
        else
            out.push_back(g);
    }
    t = std::move(out);
}

// Rewrite runs of J0 using J0^4 = I, shortening J0^3 to J0^-1 and so on.
void reduce_j0_runs(std::vector<Gen>& t) {
    std::vector<Gen> out;
    size_t i = 0;
    while (i < t.size()) {
        if (t[i] == Gen::J0 || t[i] == Gen::J0Inv) {
            i64 e = 0;
            while (i < t.size() && (t[i] == Gen::J0 || t[i] == Gen::J0Inv)) {
                e += t[i] == Gen::J0 ? 1 : -1;
                ++i;
            }
            e = ((e % 4) + 4) % 4;  // 0..3
            if (e == 3) {
                out.push_back(Gen::J0Inv);
            } else {
                for (i64 k = 0; k < e; ++k) out.push_back(Gen::J0);
            }
        } else {
            out.push_back(t[i]);
            ++i;
        }
    }
    t = std::move(out);
}

}  // namespace

GeneratorWord word_decompose(const IntMat2& m) {
    if (m.det() != 1) throw DetError("word decomposition requires det = 1");
    Reducer r{m, {}};
    // Euclid on the first column (a, c).
    while (r.m.c != 0) {
        if (r.m.a == 0) {
            r.push(Gen::J0);  // (a,c) -> (c,-a)
            continue;
        }
        i64 q = round_div(r.m.c, r.m.a);
        if (q != 0) r.shear_lower(-q);
        if (r.m.c != 0) r.push(Gen::J0);
    }
    // Now m = [[s, b],[0, s]] with s = +/-1.
    if (r.m.a == -1) {
        r.push(Gen::J0);
        r.push(Gen::J0);
    }
    if (r.m.b != 0) r.shear_upper(-r.m.b);
    // The recorded steps compose right-to-left: G_m ... G_1 * m = I, hence
    // m = G_1^-1 G_2^-1 ... G_m^-1 (inverted tokens in application order).
    GeneratorWord w;
    w.tokens.reserve(r.applied.size());
    for (Gen g : r.applied) w.tokens.push_back(gen_inverse(g));
    cancel_pairs(w.tokens);
    reduce_j0_runs(w.tokens);
    cancel_pairs(w.tokens);
    return w;
}

namespace {

struct SnfState {
    IntMat2 u = IntMat2::identity();
    IntMat2 v = IntMat2::identity();
    IntMat2 d;

    void swap_rows() {
        std::swap(d.a, d.c);
        std::swap(d.b, d.d);
        std::swap(u.a, u.c);
        std::swap(u.b, u.d);
    }
    void swap_cols() {
        std::swap(d.a, d.b);
        std::swap(d.c, d.d);
        std::swap(v.a, v.b);
        std::swap(v.c, v.d);
    }
    void add_row(i64 k) {  // row2 += k*row1
        d.c += k * d.a;
        d.d += k * d.b;
        u.c += k * u.a;
        u.d += k * u.b;
    }
    void add_col(i64 k) {  // col2 += k*col1
        d.b += k * d.a;
        d.d += k * d.c;
        v.b += k * v.a;
        v.d += k * v.c;
    }
    void add_col1(i64 k) {  // col1 += k*col2
        d.a += k * d.b;
        d.c += k * d.d;
        v.a += k * v.b;
        v.c += k * v.d;
    }
    void negate_row(int i) {
        if (i == 0) {
            d.a = -d.a;
            d.b = -d.b;
            u.a = -u.a;
            u.b = -u.b;
        } else {
            d.c = -d.c;
            d.d = -d.d;
            u.c = -u.c;
            u.d = -u.d;
        }
    }
};

}  // namespace

SmithForm snf2(const IntMat2& m) {
    SnfState s;
    s.d = m;
    for (int guard = 0; guard < 256; ++guard) {
        if (s.d.a == 0 && s.d.b == 0 && s.d.c == 0 && s.d.d == 0) break;
        // Pivot a nonzero entry into (0,0).
        if (s.d.a == 0) {
            if (s.d.c != 0)
                s.swap_rows();
            else if (s.d.b != 0)
                s.swap_cols();
            else {
                s.swap_rows();
                s.swap_cols();
            }
            continue;
        }
        if (s.d.c != 0) {
            i64 q = s.d.c / s.d.a;
            s.add_row(-q);
            if (s.d.c != 0) s.swap_rows();
            continue;
        }
        if (s.d.b != 0) {
            i64 q = s.d.b / s.d.a;
            s.add_col(-q);
            if (s.d.b != 0) s.swap_cols();
            continue;
        }
        // Diagonal; enforce divisibility d1 | d2.
        if (s.d.d % s.d.a != 0) {
            s.add_col1(1);  // brings d2 into column 1
            continue;
        }
        break;
    }
    if (s.d.a < 0) s.negate_row(0);
    if (s.d.d < 0) s.negate_row(1);
    if (s.d.a == 0 && s.d.d != 0) {
        s.swap_rows();
        s.swap_cols();
    }
    SmithForm out{s.u, s.v, s.d.a, s.d.d};
    // Internal consistency: U*M*V = D with unimodular factors.
    IntMat2 check = s.u * m * s.v;
    i64 du = s.u.det(), dv = s.v.det();
    if (check != IntMat2{out.d1, 0, 0, out.d2} || (du != 1 && du != -1) ||
        (dv != 1 && dv != -1) || (out.d2 != 0 && out.d1 == 0) ||
        (out.d1 != 0 && out.d2 % out.d1 != 0))
        throw Error("smith normal form internal check failed");
    return out;
}

bool matrix_equivalent(const IntMat2& m, const IntMat2& n) {
    SmithForm sm = snf2(m), sn = snf2(n);
    return sm.d1 == sn.d1 && sm.d2 == sn.d2;
}

namespace {

// Extended gcd: returns g and x,y with a*x + b*y = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Unimodular matrix with top row (q, -p), sending p/q to 0.
IntMat2 send_to_zero(const Rational& r) {
    i64 p = r.num(), q = r.den();
    i64 v, u;
    i64 g = ext_gcd(q, p, v, u);  // q*v + p*u = 1
    if (g != 1) throw Error("reduced rational expected");
    return IntMat2{q, -p, u, v};
}

}  // namespace

IntMat2 rational_orbit_witness(const Rational& r1, const Rational& r2) {
    IntMat2 g1 = send_to_zero(r1);
    IntMat2 g2 = send_to_zero(r2);
    IntMat2 w = g2.inverse_unimodular() * g1;
    if (mobius(w, r1) != r2) throw Error("orbit witness replay failed");
    return w;
}

}  // namespace nctori
