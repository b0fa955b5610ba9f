#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nctori/errors.hpp"
#include "nctori/exact.hpp"
#include "nctori/quad_irrational.hpp"
#include "oracles.hpp"

using namespace nctori;

namespace {

i64 rand_in(std::mt19937_64& rng, i64 lo, i64 hi) {
    return lo + static_cast<i64>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

// Random SL(2,Z) element as a product of random shears, capped entry size.
IntMat2 rand_sl2(std::mt19937_64& rng, i64 max_entry, int steps = 24) {
    IntMat2 m = IntMat2::identity();
    for (int i = 0; i < steps; ++i) {
        i64 k = rand_in(rng, -9, 9);
        if (k == 0) k = 1;
        IntMat2 s = (rng() & 1) ? IntMat2{1, k, 0, 1} : IntMat2{1, 0, k, 1};
        IntMat2 next = m * s;
        if (next.max_abs() > max_entry) break;
        m = next;
    }
    return m;
}

GeneratorWord rand_word(std::mt19937_64& rng, size_t max_len) {
    GeneratorWord w;
    size_t n = rng() % (max_len + 1);
    for (size_t i = 0; i < n; ++i)
        w.tokens.push_back(static_cast<Gen>(rng() % 4));
    return w;
}

Rational rand_rational(std::mt19937_64& rng, i64 bound) {
    i64 q = rand_in(rng, 1, bound);
    i64 p = rand_in(rng, -bound, bound);
    return Rational(p, q);
}

}  // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(-7, 3).floor_ll() == -3);
    CHECK(Rational(-7, 3).mod_one() == Rational(2, 3));
    CHECK(Rational(5, 2).mod_int(2) == Rational(1, 2));
    CHECK(Rational(-1, 2).mod_int(2) == Rational(3, 2));
    CHECK(Rational::parse("22/7").value() == Rational(22, 7));
    CHECK(Rational::parse("-3").value() == Rational(-3));
    CHECK(!Rational::parse("1/0").has_value());
    CHECK(Rational(22, 7).str() == "22/7");
    CHECK(Rational(5).str() == "5");
}

TEST_CASE("continued fraction expansion matches the Euclidean oracle") {
    auto check_one = [](i64 p, i64 q) {
        ContinuedFraction cf = cf_expand(Rational(p, q));
        CHECK(cf.coeffs == oracle::euclid_cf(Rational(p, q).num(), Rational(p, q).den()));
        CHECK(cf_eval(cf) == Rational(p, q));
    };
    check_one(3, 7);
    check_one(22, 7);
    check_one(5, 1);
    check_one(-3, 7);

    CHECK(cf_expand(Rational(3, 7)).coeffs == std::vector<i64>{0, 2, 3});
    CHECK(cf_expand(Rational(5)).coeffs == std::vector<i64>{5});
    CHECK(cf_expand(Rational(22, 7)).coeffs == std::vector<i64>{3, 7});
}

TEST_CASE("continued fraction evaluation") {
    CHECK(cf_eval({{0, 2, 3}}) == Rational(3, 7));
    CHECK(cf_eval({{5}}) == Rational(5));
    CHECK(cf_eval({{0, 7}}) == Rational(1, 7));
    CHECK_THROWS_AS(cf_eval({{}}), Error);
}

TEST_CASE("cf round trip over all reduced p/q up to 50") {
    for (i64 q = 1; q <= 50; ++q)
        for (i64 p = -50; p <= 50; ++p) {
            if (std::gcd(std::abs(p), q) != 1) continue;
            Rational r(p, q);
            ContinuedFraction cf = cf_expand(r);
            CHECK(cf_eval(cf) == r);
            // a0 = 0 exactly for r in [0,1)
            CHECK((cf.coeffs[0] == 0) == (Rational(0) <= r && r < Rational(1)));
            for (size_t i = 1; i < cf.coeffs.size(); ++i) CHECK(cf.coeffs[i] > 0);
        }
}

TEST_CASE("moebius action on rationals") {
    CHECK(mobius(IntMat2::identity(), Rational(3, 7)) == Rational(3, 7));
    CHECK(mobius(IntMat2{1, 0, 1, 1}, Rational(1, 2)) == Rational(1, 3));
    CHECK_THROWS_AS(mobius(IntMat2{1, 0, 2, 1}, Rational(-1, 2)), PoleError);
    CHECK_THROWS_AS(mobius(IntMat2{2, 0, 0, 1}, Rational(1, 2)), DetError);
}

TEST_CASE("moebius is a group action") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        IntMat2 g = rand_sl2(rng, 1000);
        IntMat2 h = rand_sl2(rng, 1000);
        Rational th = rand_rational(rng, 40);
        Rational lhs, rhs;
        bool lhs_pole = false, rhs_pole = false;
        try {
            lhs = mobius(g * h, th);
        } catch (const PoleError&) {
            lhs_pole = true;
        }
        try {
            rhs = mobius(g, mobius(h, th));
        } catch (const PoleError&) {
            rhs_pole = true;
        }
        CHECK(lhs_pole == rhs_pole);
        if (!lhs_pole) CHECK(lhs == rhs);
    }
}

TEST_CASE("SO(2,2|Z) embedding blocks and conditions") {
    CHECK(embed_so22(IntMat2::identity()) == IntMat4::identity());
    CHECK_THROWS_AS(embed_so22(IntMat2{1, 0, 0, -1}), DetError);

    std::mt19937_64 rng(12);
    for (int t = 0; t < 100; ++t) {
        IntMat2 g = rand_sl2(rng, 1000000);
        IntMat4 e = embed_so22(g);
        // Block layout: A = aI, B = [[0,b],[-b,0]], C = [[0,-c],[c,0]], D = dI
        // in the (R^2) x (R^2)* coordinates used by the skew-matrix action.
        IntMat2 A{e.m[0][0], e.m[0][1], e.m[1][0], e.m[1][1]};
        IntMat2 B{e.m[0][2], e.m[0][3], e.m[1][2], e.m[1][3]};
        IntMat2 C{e.m[2][0], e.m[2][1], e.m[3][0], e.m[3][1]};
        IntMat2 D{e.m[2][2], e.m[2][3], e.m[3][2], e.m[3][3]};
        CHECK(A == IntMat2{g.a, 0, 0, g.a});
        CHECK(B == IntMat2{0, g.b, -g.b, 0});
        CHECK(C == IntMat2{0, -g.c, g.c, 0});
        CHECK(D == IntMat2{g.d, 0, 0, g.d});
        // A^t C + C^t A = 0, B^t D + D^t B = 0, A^t D + B^t C = I
        auto zsum = [](const IntMat2& x, const IntMat2& y) {
            return x.transpose() * y + y.transpose() * x;
        };
        CHECK(zsum(A, C) == IntMat2{0, 0, 0, 0});
        CHECK(zsum(B, D) == IntMat2{0, 0, 0, 0});
        CHECK(A.transpose() * D + B.transpose() * C == IntMat2::identity());
    }
}

TEST_CASE("embedded action agrees with the scalar moebius action") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        IntMat2 g = rand_sl2(rng, 1000);
        Rational th = rand_rational(rng, 30);
        auto via_blocks = oracle::block_mobius(g, th);
        if (!via_blocks.has_value()) {
            CHECK_THROWS_AS(mobius(g, th), PoleError);
        } else {
            CHECK(mobius(g, th) == *via_blocks);
        }
    }
}

TEST_CASE("generator word token semantics") {
    // P^-1 * J0 = [[0,1],[-1,-1]] = W3, verified by direct multiplication.
    IntMat2 prod = mat_p().inverse_unimodular() * mat_j0();
    CHECK(prod == mat_w3());
    GeneratorWord w{{Gen::PInv, Gen::J0}};
    CHECK(w.evaluate() == mat_w3());
    CHECK(GeneratorWord{{Gen::J0}}.evaluate() == mat_w4());
    CHECK(GeneratorWord{}.evaluate() == IntMat2::identity());
    CHECK(GeneratorWord::parse("Pinv J0").value().tokens == w.tokens);
    CHECK(w.str() == "Pinv J0");
    CHECK((w.inverse()).evaluate() == mat_w3().inverse_unimodular());
}

TEST_CASE("word decomposition canonical small cases") {
    CHECK(word_decompose(mat_w4()).tokens == std::vector<Gen>{Gen::J0});
    CHECK(word_decompose(IntMat2::identity()).tokens.empty());
    CHECK(word_decompose(mat_w3()).evaluate() == mat_w3());
    CHECK_THROWS_AS(word_decompose(IntMat2{1, 0, 0, -1}), DetError);
}

TEST_CASE("word decomposition round trip on random words") {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 100; ++t) {
        GeneratorWord w = rand_word(rng, 40);
        IntMat2 m = w.evaluate();
        CHECK(word_decompose(m).evaluate() == m);
    }
}

TEST_CASE("word decomposition on large-entry matrices") {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 100; ++t) {
        IntMat2 m = rand_sl2(rng, 1000000, 40);
        CHECK(word_decompose(m).evaluate() == m);
    }
}

TEST_CASE("smith normal form examples") {
    SUBCASE("nilpotent shear") {
        SmithForm s = snf2(IntMat2{0, 1, 0, 0});
        CHECK(s.d1 == 1);
        CHECK(s.d2 == 0);
        auto ref = oracle::snf_small_search(IntMat2{0, 1, 0, 0}, 2);
        REQUIRE(ref.has_value());
        CHECK(ref->first == 1);
        CHECK(ref->second == 0);
    }
    SUBCASE("identity") {
        SmithForm s = snf2(IntMat2::identity());
        CHECK(s.d1 == 1);
        CHECK(s.d2 == 1);
    }
    SUBCASE("diagonal with divisibility") {
        SmithForm s = snf2(IntMat2{2, 0, 0, 4});
        CHECK(s.d1 == 2);  // gcd of entries
        CHECK(s.d2 == 4);  // |det| / d1
    }
    SUBCASE("zero matrix") {
        SmithForm s = snf2(IntMat2{0, 0, 0, 0});
        CHECK(s.d1 == 0);
        CHECK(s.d2 == 0);
    }
}

TEST_CASE("smith form factorization and invariance") {
    std::mt19937_64 rng(16);
    for (int t = 0; t < 200; ++t) {
        IntMat2 m{rand_in(rng, -30, 30), rand_in(rng, -30, 30), rand_in(rng, -30, 30),
                  rand_in(rng, -30, 30)};
        SmithForm s = snf2(m);
        CHECK(s.U * m * s.V == IntMat2{s.d1, 0, 0, s.d2});
        CHECK(std::abs(s.U.det()) == 1);
        CHECK(std::abs(s.V.det()) == 1);
        CHECK(s.d1 >= 0);
        CHECK(s.d2 >= 0);
        if (s.d1 != 0) CHECK(s.d2 % s.d1 == 0);
        // D is invariant under unimodular pre/post multiplication.
        IntMat2 p = rand_sl2(rng, 50, 6), q = rand_sl2(rng, 50, 6);
        SmithForm s2 = snf2(p * m * q);
        CHECK(s2.d1 == s.d1);
        CHECK(s2.d2 == s.d2);
    }
}

TEST_CASE("matrix equivalence by smith form") {
    IntMat2 n1{0, 1, 0, 0};
    CHECK(matrix_equivalent(n1, n1));
    CHECK(!matrix_equivalent(n1, IntMat2{0, 2, 0, 0}));
    CHECK(matrix_equivalent(n1, IntMat2{1, 0, 0, 0}));
}

TEST_CASE("rational orbit witness") {
    CHECK(rational_orbit_witness(Rational(0), Rational(0)) == IntMat2::identity());
    IntMat2 w = rational_orbit_witness(Rational(1, 2), Rational(0));
    CHECK(mobius(w, Rational(1, 2)) == Rational(0));
    CHECK(std::abs(w.det()) == 1);
    // the map to zero has top row (q, -p)
    CHECK(w.a == 2);
    CHECK(w.b == -1);

    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        Rational r1 = rand_rational(rng, 60);
        Rational r2 = rand_rational(rng, 60);
        IntMat2 g = rational_orbit_witness(r1, r2);
        CHECK(mobius(g, r1) == r2);
        CHECK(std::abs(g.det()) == 1);
    }
}

TEST_CASE("torsion generators have the right orders") {
    auto order_of = [](const IntMat2& w) {
        IntMat2 m = w;
        for (int i = 1; i <= 12; ++i) {
            if (m == IntMat2::identity()) return i;
            m = m * w;
        }
        return -1;
    };
    CHECK(order_of(mat_w2()) == 2);
    CHECK(order_of(mat_w3()) == 3);
    CHECK(order_of(mat_w4()) == 4);
    CHECK(order_of(mat_w6()) == 6);
}

TEST_CASE("quadratic irrational normalization and parsing") {
    QuadIrrational r2(0, 1, 2, 1);
    CHECK(r2.str() == "(0+1√2)/1");
    CHECK(QuadIrrational(0, 1, 8, 2) == QuadIrrational(0, 1, 2, 1));  // sqrt(8)/2 = sqrt(2)
    CHECK(QuadIrrational(2, 2, 2, 4) == QuadIrrational(1, 1, 2, 2));
    CHECK_THROWS_AS(QuadIrrational(1, 0, 2, 1), NotQuadraticError);
    CHECK_THROWS_AS(QuadIrrational(1, 1, 4, 1), NotQuadraticError);
    CHECK(QuadIrrational::parse("(0+1√2)/1").value() == r2);
    CHECK(QuadIrrational::parse("(0+1rt2)/1").value() == r2);
    CHECK(QuadIrrational::parse("(1-1rt5)/2").value() == QuadIrrational(1, -1, 5, 2));
    CHECK(!QuadIrrational::parse("(1+0rt2)/1").has_value());
    CHECK(r2.floor_ll() == 1);
    CHECK(QuadIrrational(0, -1, 2, 1).floor_ll() == -2);
    CHECK(QuadIrrational(1, 1, 5, 2).floor_ll() == 1);  // golden ratio
}

TEST_CASE("quadratic continued fractions") {
    QuadCf c2 = quad_cf(QuadIrrational(0, 1, 2, 1));
    CHECK(c2.pre == std::vector<i64>{1});
    CHECK(c2.cycle == std::vector<i64>{2});
    QuadCf c3 = quad_cf(QuadIrrational(0, 1, 3, 1));
    CHECK(c3.pre == std::vector<i64>{1});
    CHECK(c3.cycle == std::vector<i64>{1, 2});
    QuadCf cg = quad_cf(QuadIrrational(1, 1, 5, 2));
    CHECK(cg.cycle == std::vector<i64>{1});
}

TEST_CASE("quadratic orbit equivalence") {
    QuadIrrational r2(0, 1, 2, 1);
    QuadIrrational r2p1(1, 1, 2, 1);
    QuadIrrational r3(0, 1, 3, 1);
    CHECK(quad_equivalent(r2, r2));
    CHECK(quad_equivalent(r2, r2p1));
    CHECK(!quad_equivalent(r2, r3));

    auto w = quad_orbit_witness(r2, r2p1);
    REQUIRE(w.has_value());
    CHECK(mobius(*w, r2) == r2p1);
    CHECK(!quad_orbit_witness(r2, r3).has_value());

    std::mt19937_64 rng(18);
    for (int t = 0; t < 40; ++t) {
        IntMat2 g = rand_sl2(rng, 40, 8);
        QuadIrrational img = mobius(g, r3);
        CHECK(quad_equivalent(r3, img));
        auto wt = quad_orbit_witness(r3, img);
        REQUIRE(wt.has_value());
        CHECK(mobius(*wt, r3) == img);
    }
}

TEST_CASE("quadratic moebius arithmetic") {
    QuadIrrational r2(0, 1, 2, 1);
    // flip: 1/sqrt(2) = sqrt(2)/2
    CHECK(mobius(IntMat2{0, 1, 1, 0}, r2) == QuadIrrational(0, 1, 2, 2));
    CHECK(r2.inverse() == QuadIrrational(0, 1, 2, 2));
    CHECK((r2 + Rational(3, 2)) == QuadIrrational(3, 2, 2, 2));
    std::mt19937_64 rng(19);
    for (int t = 0; t < 60; ++t) {
        IntMat2 g = rand_sl2(rng, 60, 8);
        IntMat2 h = rand_sl2(rng, 60, 8);
        CHECK(mobius(g * h, r2) == mobius(g, mobius(h, r2)));
    }
}
