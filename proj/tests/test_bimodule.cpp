#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nctori/bimodule.hpp"
#include "nctori/errors.hpp"

using namespace nctori;

namespace {

const Rational kTheta(2, 5);
constexpr int kC = 3;

const GridSpec& spec() {
    static GridSpec s(kTheta, kC, 2, 512);
    return s;
}
const LatticeEmbedding& emb() {
    static LatticeEmbedding e(kTheta, kC);
    return e;
}
const WeylEngine& engine() {
    static WeylEngine e(spec());
    return e;
}

GridFunction rand_gaussian(std::mt19937_64& rng) {
    auto ri = [&](i64 lo, i64 hi) { return lo + static_cast<i64>(rng() % (hi - lo + 1)); };
    Rational x0 = Rational(ri(-8, 8)) * spec().delta();
    Rational y0(ri(-4, 4), 8);
    double w = 0.75 + 0.02 * static_cast<double>(ri(0, 10));
    return make_gaussian(spec(), x0, ri(0, kC - 1), w, y0, ri(-2, 2));
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0;
    for (size_t i = 0; i < a.samples().size(); ++i)
        m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
    return m;
}

GridFunction scaled(const GridFunction& f, cplx a) {
    GridFunction r = f;
    r.scale(a);
    return r;
}

}  // namespace

TEST_CASE("embedding fields for theta = 1/2, c = 1") {
    LatticeEmbedding e(Rational(1, 2), 1);
    CHECK(e.theta_tilde() == Rational(3, 2));
    CHECK(e.theta_prime() == Rational(1, 3));
    auto t10 = e.t_vector({1, 0});
    CHECK(t10 == LatticeEmbedding::Vec4{Rational(3, 2), Rational(0), Rational(-1), Rational(0)});
    auto t01 = e.t_vector({0, 1});
    CHECK(t01 == LatticeEmbedding::Vec4{Rational(0), Rational(1), Rational(0), Rational(1)});
}

TEST_CASE("embedding degenerate cases") {
    LatticeEmbedding flat(Rational(0), 1);
    CHECK(flat.theta_tilde() == Rational(1));
    CHECK(flat.theta_prime() == Rational(0));
    CHECK_THROWS_AS(LatticeEmbedding(Rational(-1, 2), 2), PoleError);
}

TEST_CASE("embedding identities hold exactly for random theta and c") {
    std::mt19937_64 rng(51);
    int built = 0;
    while (built < 50) {
        i64 q = 1 + static_cast<i64>(rng() % 20);
        i64 p = static_cast<i64>(rng() % 41) - 20;
        i64 c = 1 + static_cast<i64>(rng() % 6);
        Rational th(p, q);
        if ((Rational(c) * th + Rational(1)).is_zero()) continue;
        LatticeEmbedding e(th, c);  // constructor verifies T^tJT and S^tJS
        ++built;
    }
    CHECK(built == 50);
}

TEST_CASE("lattice identities for torsion generators, P, and random words") {
    for (IntMat2 a : {mat_w2(), mat_w3(), mat_w4(), mat_w6(), mat_p()})
        CHECK(lattice_identity_check(a, emb()).ok);
    CHECK(lattice_identity_check(IntMat2::identity(), emb()).ok);

    std::mt19937_64 rng(52);
    for (int t = 0; t < 20; ++t) {
        GeneratorWord w;
        size_t len = rng() % 9;
        for (size_t i = 0; i < len; ++i) w.tokens.push_back(static_cast<Gen>(rng() % 4));
        CHECK(lattice_identity_check(w.evaluate(), emb()).ok);
    }

    // The displayed order-6 case: M6 T(1,0) = T(W6 (1,0)) = T(1,-1).
    Mat4Q m6 = build_ma_matrix(mat_w6(), kTheta, kC);
    CHECK(m6.apply(emb().t_vector({1, 0})) == emb().t_vector({1, -1}));
}

TEST_CASE("right action matches the heisenberg-weyl translate samplewise") {
    std::mt19937_64 rng(53);
    GridFunction f = rand_gaussian(rng);
    for (Lattice2 l : {Lattice2{0, 0}, {1, 0}, {0, 1}, {-1, 2}, {2, -1}, {-2, -2}}) {
        GridFunction via_formula = act_right(f, l, emb());
        GridFunction via_hw = hw_apply(emb().t_point(l), f);
        CHECK(max_abs_diff(via_formula, via_hw) == 0.0);
    }
}

TEST_CASE("left action matches the adjoint translate samplewise") {
    std::mt19937_64 rng(54);
    GridFunction f = rand_gaussian(rng);
    for (Lattice2 l : {Lattice2{0, 0}, {1, 0}, {0, 1}, {-1, 2}, {2, -1}, {-2, -2}}) {
        GridFunction via_formula = act_left(l, f, emb());
        GridFunction via_hw = hw_adjoint(emb().s_point(l), f);
        CHECK(max_abs_diff(via_formula, via_hw) == 0.0);
    }
}

TEST_CASE("module composition laws carry the twisted cocycles") {
    std::mt19937_64 rng(55);
    GridFunction f = rand_gaussian(rng);
    for (auto [l, lp] : {std::pair<Lattice2, Lattice2>{{1, 0}, {0, 1}},
                         {{1, -1}, {2, 1}},
                         {{-2, 1}, {1, 2}}}) {
        GridFunction lhs = act_right(act_right(f, l, emb()), lp, emb());
        Lattice2 sum{l[0] + lp[0], l[1] + lp[1]};
        GridFunction rhs = scaled(act_right(f, sum, emb()), cocycle(kTheta, l, lp).value());
        CHECK(dist(lhs, rhs) / f.norm() < 1e-12);

        GridFunction lhs2 = act_left(l, act_left(lp, f, emb()), emb());
        GridFunction rhs2 =
            scaled(act_left(sum, f, emb()), cocycle(emb().theta_prime(), l, lp).value());
        CHECK(dist(lhs2, rhs2) / f.norm() < 1e-12);
    }
}

TEST_CASE("inner product over theta") {
    std::mt19937_64 rng(56);
    GridFunction f = rand_gaussian(rng);
    GridFunction g = rand_gaussian(rng);

    SUBCASE("diagonal coefficient is the squared norm") {
        cplx c0 = inner_a_coeff(f, f, emb(), {0, 0});
        CHECK(c0.real() == doctest::Approx(f.norm() * f.norm()).epsilon(1e-12));
        CHECK(std::abs(c0.imag()) < 1e-14);
    }
    SUBCASE("coefficients are translated scalar products") {
        for (Lattice2 l : {Lattice2{1, 0}, {0, 1}, {2, -1}, {-1, -2}}) {
            cplx lhs = inner_a_coeff(f, g, emb(), l);
            cplx rhs = inner(act_right(g, {-l[0], -l[1]}, emb()), f);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
    SUBCASE("hermitian symmetry") {
        AlgebraElement ab = inner_a(f, g, emb(), 6);
        AlgebraElement ba_star = inner_a(g, f, emb(), 6).star();
        CHECK(ab.max_coeff_dist(ba_star) < 1e-12);
    }
    SUBCASE("gaussian coefficients decay within the default window") {
        AlgebraElement a = inner_a(f, g, emb(), 6);
        for (const auto& [l, cv] : a.coeffs())
            if (std::max(std::abs(l[0]), std::abs(l[1])) == 6) CHECK(std::abs(cv.value()) < 1e-10);
    }
}

TEST_CASE("inner product over theta prime") {
    std::mt19937_64 rng(57);
    GridFunction f = rand_gaussian(rng);
    GridFunction g = rand_gaussian(rng);

    cplx c0 = inner_b_coeff(f, f, emb(), {0, 0});
    CHECK(c0.real() == doctest::Approx(f.norm() * f.norm()).epsilon(1e-12));

    for (Lattice2 l : {Lattice2{1, 0}, {0, 1}, {2, -1}}) {
        cplx lhs = inner_b_coeff(f, g, emb(), l, 1.0);
        cplx rhs = inner(f, act_left(l, g, emb()));
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }

    AlgebraElement bb = inner_b(f, g, emb(), 12);
    AlgebraElement bswap = inner_b(g, f, emb(), 12).star();
    CHECK(bb.max_coeff_dist(bswap) < 1e-10);
    CHECK(bb.theta() == emb().theta_prime());
}

TEST_CASE("the compatibility constant") {
    std::mt19937_64 rng(58);
    std::vector<std::array<GridFunction, 3>> triples;
    for (int t = 0; t < 5; ++t)
        triples.push_back({rand_gaussian(rng), rand_gaussian(rng), rand_gaussian(rng)});
    Calibration cal = calibrate_k(emb(), triples, 12);
    CHECK(cal.K > 0);
    CHECK(cal.rel_spread < 1e-6);
    CHECK(cal.residual < 1e-5);

    // module-level constant: scaling every input leaves K unchanged
    std::vector<std::array<GridFunction, 3>> doubled;
    for (auto& t : triples)
        doubled.push_back({scaled(t[0], 2.0), scaled(t[1], 2.0), scaled(t[2], 2.0)});
    Calibration cal2 = calibrate_k(emb(), doubled, 12);
    CHECK(cal2.K == doctest::Approx(cal.K).epsilon(1e-9));

    // held-out triple
    std::vector<std::array<GridFunction, 3>> held;
    held.push_back({rand_gaussian(rng), rand_gaussian(rng), rand_gaussian(rng)});
    Calibration cal3 = calibrate_k(emb(), held, 12);
    CHECK(std::abs(cal3.K - cal.K) / cal.K < 1e-6);

    MESSAGE("calibrated K = ", cal.K);
}

TEST_CASE("window too small raises") {
    std::mt19937_64 rng(59);
    GridFunction f = rand_gaussian(rng);
    CHECK_THROWS_AS(inner_a(f, f, emb(), 1, 1e-10), WindowTooSmall);
}

TEST_CASE("equivariance of the weyl operators on the bimodule") {
    std::mt19937_64 rng(60);
    GridFunction f = rand_gaussian(rng);
    GridFunction g = rand_gaussian(rng);

    EquivarianceReport id = equivariance_residual(engine(), GeneratorWord{}, f, g, emb(), 2);
    CHECK(id.right_action == 0.0);
    CHECK(id.left_action == 0.0);
    CHECK(id.inner_a == 0.0);
    CHECK(id.inner_b == 0.0);

    struct Case {
        const char* name;
        GeneratorWord w;
    };
    for (const Case& cs : {Case{"W2", {{Gen::J0, Gen::J0}}},
                           Case{"W3", {{Gen::PInv, Gen::J0}}},
                           Case{"W4", {{Gen::J0}}},
                           Case{"W6", {{Gen::J0, Gen::P}}},
                           Case{"P", {{Gen::P}}}}) {
        EquivarianceReport r = equivariance_residual(engine(), cs.w, f, g, emb(), 3);
        CAPTURE(cs.name);
        CHECK(r.right_action < 1e-5);
        CHECK(r.left_action < 1e-5);
        CHECK(r.inner_a < 1e-5);
        CHECK(r.inner_b < 1e-5);
    }
}
