#include "nctori/checks.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include <json.hpp>

#include "nctori/bimodule.hpp"
#include "nctori/errors.hpp"
#include "nctori/morita.hpp"
#include "nctori/stft.hpp"

namespace nctori {

namespace {

using Rng = std::mt19937_64;

i64 rand_in(Rng& rng, i64 lo, i64 hi) {
    return lo + static_cast<i64>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

IntMat2 rand_sl2(Rng& rng, i64 max_entry, int steps = 24) {
    IntMat2 m = IntMat2::identity();
    for (int i = 0; i < steps; ++i) {
        i64 k = rand_in(rng, -9, 9);
        if (k == 0) k = 1;
        IntMat2 next = m * ((rng() & 1) ? IntMat2{1, k, 0, 1} : IntMat2{1, 0, k, 1});
        if (next.max_abs() > max_entry) break;
        m = next;
    }
    return m;
}

GeneratorWord rand_word(Rng& rng, size_t max_len) {
    GeneratorWord w;
    size_t n = rng() % (max_len + 1);
    for (size_t i = 0; i < n; ++i) w.tokens.push_back(static_cast<Gen>(rng() % 4));
    return w;
}

Rational rand_rational(Rng& rng, i64 bound) {
    i64 q = rand_in(rng, 1, bound);
    i64 p = rand_in(rng, -bound, bound);
    i64 g = std::gcd(std::abs(p), q);
    return Rational(p / g, q / g);
}

struct Collector {
    std::vector<CheckReport>& out;
    double default_tol;
    std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();

    // Elapsed time since the previous emission, so that the first report of a
    // battery section carries the section's cost and later ones are ~0.
    double take_elapsed() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - mark).count();
        mark = now;
        return s;
    }
    void exact(const std::string& id, double residual,
               std::map<std::string, std::string> params = {}) {
        out.push_back({id, std::move(params), residual, 0.0, residual == 0.0, Tier::Exact,
                       take_elapsed()});
    }
    void quad(const std::string& id, double residual, double tol,
              std::map<std::string, std::string> params = {}) {
        out.push_back({id, std::move(params), residual, tol, residual <= tol, Tier::Quadrature,
                       take_elapsed()});
    }
};

// Moebius action through the embedded 2x2 block formula, for consistency
// checks against the scalar action.
std::optional<Rational> block_mobius(const IntMat2& g, const Rational& theta) {
    Mat2Q A = Mat2Q::diag(Rational(g.a), Rational(g.a));
    Mat2Q B{Rational(0), Rational(g.b), Rational(-g.b), Rational(0)};
    Mat2Q C{Rational(0), Rational(-g.c), Rational(g.c), Rational(0)};
    Mat2Q D = Mat2Q::diag(Rational(g.d), Rational(g.d));
    Mat2Q Th = Mat2Q::skew(theta);
    Mat2Q den = C * Th + D;
    if (den.det().is_zero()) return std::nullopt;
    Mat2Q res = (A * Th + B) * den.inverse();
    if (!res.a.is_zero() || !res.d.is_zero() || res.b != -res.c) return std::nullopt;
    return res.b;
}

bool generator_shaped(const IntMat2& m) { return m.a == m.d; }

std::vector<GridFunction> gaussian_family(Rng& rng, const GridSpec& spec, int count) {
    std::vector<GridFunction> fam;
    for (int i = 0; i < count; ++i) {
        Rational x0 = Rational(rand_in(rng, -8, 8)) * spec.delta();
        Rational y0(rand_in(rng, -4, 4), 8);
        double w = 0.75 + 0.02 * static_cast<double>(rand_in(rng, 0, 10));
        fam.push_back(make_gaussian(spec, x0, rand_in(rng, 0, spec.c() - 1), w, y0,
                                    rand_in(rng, -2, 2)));
    }
    return fam;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0;
    for (size_t i = 0; i < a.samples().size(); ++i)
        m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
    return m;
}

struct NamedWord {
    const char* name;
    GeneratorWord word;
    int order;  // 0 for infinite
};

const std::vector<NamedWord>& weyl_words() {
    static const std::vector<NamedWord> words = {
        {"J0", {{Gen::J0}}, 4},      {"P", {{Gen::P}}, 0},
        {"W2", {{Gen::J0, Gen::J0}}, 2}, {"W3", {{Gen::PInv, Gen::J0}}, 3},
        {"W4", {{Gen::J0}}, 4},      {"W6", {{Gen::J0, Gen::P}}, 6},
    };
    return words;
}

}  // namespace

void RunConfig::validate() const {
    if (c < 1) throw ConfigError("c must be >= 1");
    if (refine < 1) throw ConfigError("refine must be >= 1");
    if (samples < 2 || samples % 2) throw ConfigError("samples must be even and >= 2");
    if (stft_samples < 2 || stft_samples % 2)
        throw ConfigError("stft samples must be even and >= 2");
    if (tolerance < 0) throw ConfigError("tolerance must be nonnegative");
    if (window < 1) throw ConfigError("window must be >= 1");
    Rational ct1 = Rational(c) * theta + Rational(1);
    if (ct1.is_zero()) throw PoleError("theta = -1/c");
    if (ct1.sign() < 0) throw ConfigError("c*theta + 1 must be positive");
}

std::vector<CheckReport> run_exact_checks(const RunConfig& cfg) {
    cfg.validate();
    std::vector<CheckReport> out;
    Collector col{out, cfg.tolerance};
    Rng rng(cfg.seed);

    {  // continued fractions round-trip on every reduced fraction
        double fails = 0;
        for (i64 q = 1; q <= 50; ++q)
            for (i64 p = -50; p <= 50; ++p) {
                if (std::gcd(std::abs(p), q) != 1) continue;
                Rational r(p, q);
                ContinuedFraction cf = cf_expand(r);
                bool ok = cf_eval(cf) == r && (cf.coeffs[0] == 0) == (Rational(0) <= r && r < Rational(1));
                for (size_t i = 1; i < cf.coeffs.size(); ++i) ok = ok && cf.coeffs[i] > 0;
                if (!ok) fails += 1;
            }
        col.exact("exact.cf_round_trip", fails, {{"range", "q<=50"}});
    }
    {  // moebius composition law
        double fails = 0;
        for (int t = 0; t < 200; ++t) {
            IntMat2 g = rand_sl2(rng, 1000), h = rand_sl2(rng, 1000);
            Rational th = rand_rational(rng, 40);
            try {
                if (mobius(g * h, th) != mobius(g, mobius(h, th))) fails += 1;
            } catch (const PoleError&) {
            }
        }
        col.exact("exact.mobius_composition", fails, {{"trials", "200"}});
    }
    {  // SO(2,2|Z) embedding conditions and moebius consistency
        double fails = 0;
        for (int t = 0; t < 100; ++t) {
            IntMat2 g = rand_sl2(rng, 1000000);
            IntMat4 e = embed_so22(g);
            IntMat2 A{e.m[0][0], e.m[0][1], e.m[1][0], e.m[1][1]};
            IntMat2 B{e.m[0][2], e.m[0][3], e.m[1][2], e.m[1][3]};
            IntMat2 C{e.m[2][0], e.m[2][1], e.m[3][0], e.m[3][1]};
            IntMat2 D{e.m[2][2], e.m[2][3], e.m[3][2], e.m[3][3]};
            bool ok = (A.transpose() * C + C.transpose() * A) == IntMat2{0, 0, 0, 0} &&
                      (B.transpose() * D + D.transpose() * B) == IntMat2{0, 0, 0, 0} &&
                      (A.transpose() * D + B.transpose() * C) == IntMat2::identity();
            if (!ok) fails += 1;
            Rational th = rand_rational(rng, 30);
            auto blocks = block_mobius(g, th);
            try {
                Rational direct = mobius(g, th);
                if (!blocks || *blocks != direct) fails += 1;
            } catch (const PoleError&) {
                if (blocks) fails += 1;
            }
        }
        col.exact("exact.embed_so22", fails, {{"trials", "100"}, {"entries", "<=1e6"}});
    }
    {  // torsion orders and the transpose-inverse conjugation identity
        double fails = 0;
        auto pow_id = [](const IntMat2& w, int k) {
            IntMat2 m = IntMat2::identity();
            for (int i = 0; i < k; ++i) m = m * w;
            return m == IntMat2::identity();
        };
        if (!pow_id(mat_w2(), 2) || !pow_id(mat_w3(), 3) || !pow_id(mat_w4(), 4) ||
            !pow_id(mat_w6(), 6))
            fails += 1;
        IntMat2 j0 = mat_j0();
        for (int t = 0; t < 20; ++t) {
            GeneratorWord w = rand_word(rng, 12);
            for (Gen gtok : w.tokens) {
                IntMat2 m = gen_matrix(gtok);
                if (!generator_shaped(m)) fails += 1;
                if (m.inverse_unimodular().transpose() != j0 * m * j0.inverse_unimodular())
                    fails += 1;
            }
            IntMat2 a = w.evaluate();
            if (a.inverse_unimodular().transpose() != j0 * a * j0.inverse_unimodular()) fails += 1;
        }
        col.exact("exact.generator_orders_and_transpose", fails);
    }
    {  // word decomposition round trips
        double fails = 0;
        for (int t = 0; t < 100; ++t) {
            GeneratorWord w = rand_word(rng, 40);
            IntMat2 m = w.evaluate();
            if (word_decompose(m).evaluate() != m) fails += 1;
        }
        col.exact("exact.word_round_trip_words", fails, {{"trials", "100"}});
        fails = 0;
        for (int t = 0; t < 100; ++t) {
            IntMat2 m = rand_sl2(rng, 1000000, 40);
            if (word_decompose(m).evaluate() != m) fails += 1;
        }
        col.exact("exact.word_round_trip_matrices", fails,
                  {{"trials", "100"}, {"entries", "<=1e6"}});
    }
    {  // smith forms
        double fails = 0;
        for (int t = 0; t < 200; ++t) {
            IntMat2 m{rand_in(rng, -30, 30), rand_in(rng, -30, 30), rand_in(rng, -30, 30),
                      rand_in(rng, -30, 30)};
            SmithForm s = snf2(m);
            if (s.U * m * s.V != IntMat2{s.d1, 0, 0, s.d2}) fails += 1;
            if (std::abs(s.U.det()) != 1 || std::abs(s.V.det()) != 1) fails += 1;
            SmithForm s2 = snf2(rand_sl2(rng, 50, 6) * m * rand_sl2(rng, 50, 6));
            if (s2.d1 != s.d1 || s2.d2 != s.d2) fails += 1;
        }
        col.exact("exact.smith_form", fails, {{"trials", "200"}});
    }
    {  // cocycle identity and action multiplicativity
        double fails = 0;
        Rational th = cfg.theta;
        for (int t = 0; t < 1000; ++t) {
            Lattice2 x{rand_in(rng, -20, 20), rand_in(rng, -20, 20)};
            Lattice2 y{rand_in(rng, -20, 20), rand_in(rng, -20, 20)};
            Lattice2 z{rand_in(rng, -20, 20), rand_in(rng, -20, 20)};
            Lattice2 xy{x[0] + y[0], x[1] + y[1]}, yz{y[0] + z[0], y[1] + z[1]};
            if (cocycle(th, x, y) * cocycle(th, xy, z) != cocycle(th, x, yz) * cocycle(th, y, z))
                fails += 1;
        }
        col.exact("exact.cocycle_identity", fails, {{"trials", "1000"}});
    }
    {  // embedding identities T^tJT = Theta, S^tJS = -Theta' (ctor-verified)
        double fails = 0;
        int built = 0;
        while (built < 50) {
            Rational th = rand_rational(rng, 20);
            i64 c = rand_in(rng, 1, 6);
            if ((Rational(c) * th + Rational(1)).is_zero()) continue;
            try {
                LatticeEmbedding e(th, c);
            } catch (const Error&) {
                fails += 1;
            }
            ++built;
        }
        col.exact("exact.embedding_identities", fails, {{"trials", "50"}});
    }
    {  // lattice identities at the configured embedding
        LatticeEmbedding emb(cfg.theta, cfg.c);
        double fails = 0;
        for (IntMat2 a : {mat_w2(), mat_w3(), mat_w4(), mat_w6(), mat_p()})
            if (!lattice_identity_check(a, emb).ok) fails += 1;
        for (int t = 0; t < 20; ++t)
            if (!lattice_identity_check(rand_word(rng, 8).evaluate(), emb).ok) fails += 1;
        col.exact("exact.lattice_identities", fails, {{"range", "|l|<=5"}});
    }
    {  // M_A is J-symplectic, composes multiplicatively, and equals N_A
        Mat4Q J = symplectic_form(cfg.c);
        double fails = 0;
        for (int t = 0; t < 50; ++t) {
            GeneratorWord w = rand_word(rng, 12);
            Mat4Q M = build_ma(w, cfg.theta, cfg.c);
            if (!(M.transpose() * J * M == J)) fails += 1;
            Mat4Q prod = Mat4Q::identity();
            for (Gen gtok : w.tokens) prod = prod * build_ma_matrix(gen_matrix(gtok), cfg.theta, cfg.c);
            if (!(prod == M)) fails += 1;
            if (!(build_na(w, cfg.theta, cfg.c) == M)) fails += 1;
        }
        col.exact("exact.ma_symplectic", fails, {{"words", "50"}, {"max_len", "12"}});
    }
    {  // certificates replay for every reduced fraction
        double fails = 0;
        IntMat2 a{1, 1, 0, 1};
        for (i64 q = 1; q <= 50; ++q)
            for (i64 p = -50; p <= 50; ++p) {
                if (std::gcd(std::abs(p), q) != 1) continue;
                Rational r(p, q);
                EquivalenceCertificate cf_ = finite_chain(r);
                if (!cf_.replay_ok || cf_.theta_end != r || !cf_.theta_start.is_integer())
                    fails += 1;
                EquivalenceCertificate cz = z_chain(r, a);
                if (!cz.replay_ok) fails += 1;
            }
        col.exact("exact.certificates_replay", fails, {{"range", "q<=50"}});
    }
    {  // classification engine spot checks
        double fails = 0;
        QuadIrrational root2(0, 1, 2, 1);
        Decision d1 = decide_finite(Rational(1, 2), root2, 2);
        if (d1.verdict != Verdict::NotEquivalent || !d1.trace_obstruction ||
            d1.trace_obstruction->first.rank() != 1 || d1.trace_obstruction->second.rank() != 2)
            fails += 1;
        Decision d2 = decide_z(Rational(1, 3), Rational(1, 5), IntMat2{1, 1, 0, 1},
                               IntMat2{1, 2, 0, 1});
        if (d2.verdict != Verdict::NotEquivalent || !d2.snf_obstruction ||
            (*d2.snf_obstruction)[0] != 1 || (*d2.snf_obstruction)[2] != 2)
            fails += 1;
        Decision d3 = decide_finite(Rational(1, 2), Rational(3, 7), 4);
        if (d3.verdict != Verdict::Equivalent || d3.certificates.size() != 2 ||
            !d3.certificates[0].replay())
            fails += 1;
        for (int t = 0; t < 20; ++t) {
            Rational r1 = rand_rational(rng, 30), r2 = rand_rational(rng, 30);
            IntMat2 a = rand_sl2(rng, 40, 8);
            if (decide_z(r1, r2, a, a).verdict != decide_finite(r1, r2, 4).verdict) fails += 1;
        }
        col.exact("exact.classification_engine", fails);
    }
    {  // K-group torsion is conjugation invariant
        double fails = 0;
        for (int t = 0; t < 100; ++t) {
            IntMat2 pm = rand_sl2(rng, 60, 8);
            IntMat2 conj = pm * IntMat2{1, 4, 0, 1} * pm.inverse_unimodular();
            if (kgroup_report(conj, cfg.theta).k1_torsion != 4) fails += 1;
            if (!conjugation_isomorphism_check(IntMat2{1, 4, 0, 1}, pm)) fails += 1;
        }
        col.exact("exact.kgroup_invariance", fails, {{"trials", "100"}});
    }

    std::sort(out.begin(), out.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
    return out;
}

std::vector<CheckReport> run_quadrature_checks(const RunConfig& cfg) {
    cfg.validate();
    std::vector<CheckReport> out;
    Collector col{out, cfg.tolerance};
    Rng rng(cfg.seed + 1);

    GridSpec spec(cfg.theta, cfg.c, cfg.refine, cfg.samples);
    LatticeEmbedding emb(cfg.theta, cfg.c);
    WeylEngine eng(spec);
    const int c = spec.c();

    std::vector<GridFunction> family = gaussian_family(rng, spec, 10);

    try {  // precondition: the family decays inside the window
        double edge = 0;
        for (const GridFunction& f : family) edge = std::max(edge, f.boundary_mag());
        col.quad("hw.family_boundary_decay", edge, 1e-12);
        // The chirp's lattice intertwining needs an exact correction, which
        // exists iff num(theta) is even (or c is even). Without it the
        // chirp-dependent checks below fail by construction.
        col.quad("weyl.chirp_correction_available", eng.chirp_is_exact() ? 0.0 : 1.0, 0.0,
                 {{"theta", cfg.theta.str()}, {"c", std::to_string(cfg.c)}});
    } catch (const Error& err) {
        col.quad("aborted.preconditions", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // unitarity, adjoint, composition, lift dependence
        double uni = 0, adj = 0, comp = 0, lift = 0;
        const GridFunction& f = family[0];
        for (int t = 0; t < 100; ++t) {
            PhaseSpacePoint g{Rational(rand_in(rng, -15, 15)) * spec.delta(),
                              Rational(rand_in(rng, -8, 8), 3), rand_in(rng, -2, 2),
                              rand_in(rng, -2, 2)};
            PhaseSpacePoint h{Rational(rand_in(rng, -15, 15)) * spec.delta(),
                              Rational(rand_in(rng, -8, 8), 3), rand_in(rng, -2, 2),
                              rand_in(rng, -2, 2)};
            GridFunction gf = hw_apply(g, f);
            uni = std::max(uni, std::abs(gf.norm() - f.norm()));
            if (t < 10) adj = std::max(adj, dist(hw_adjoint(g, gf), f));
            GridFunction lhs = hw_apply(g, hw_apply(h, f));
            Rational turns = (h.x * g.y - g.x * h.y) / Rational(2) +
                             Rational(h.k * g.l - g.k * h.l, 2 * c);
            GridFunction rhs = hw_apply(g + h, f);
            rhs.scale(unit_phase(turns));
            comp = std::max(comp, dist(lhs, rhs) / f.norm());
            if (t < 8) {
                PhaseSpacePoint gc{g.x, g.y, g.k + c, g.l};
                GridFunction a = hw_apply(gc, f);
                GridFunction b = hw_apply(g, f);
                b.scale(g.l % 2 == 0 ? 1.0 : -1.0);
                lift = std::max(lift, max_abs_diff(a, b));
            }
        }
        col.quad("hw.unitarity", uni, 1e-14);
        col.quad("hw.adjoint_round_trip", adj, 1e-14);
        col.quad("hw.composition_law", comp, 1e-12, {{"pairs", "100"}});
        col.exact("hw.lift_dependence", lift);
    } catch (const Error& err) {
        col.quad("aborted.hw_representation", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // weyl J0: gaussian image, inversion, parity, fourth power
        double tt = spec.theta_tilde().to_double();
        GridFunction f(spec);
        for (i64 j = 0; j < spec.samples(); ++j) {
            double p = spec.point(j).to_double();
            for (int q = 0; q < c; ++q) f.at(j, q) = std::exp(-M_PI * p * p / tt);
        }
        GridFunction img = eng.apply_j0(f);
        double gauss = 0;
        for (i64 j = 0; j < spec.samples(); ++j) {
            double z = spec.point(j).to_double();
            for (int q = 0; q < c; ++q) {
                cplx expect = q == 0 ? std::sqrt(static_cast<double>(c)) *
                                           std::exp(-M_PI * z * z / tt)
                                     : cplx{};
                gauss = std::max(gauss, std::abs(img.at(j, q) - expect));
            }
        }
        col.quad("weyl.j0_gaussian_image", gauss, 1e-8);
        const GridFunction& g0 = family[1];
        GridFunction h1 = eng.apply_j0(g0);
        col.quad("weyl.j0_inversion", dist(eng.apply_j0(h1, true), g0), 1e-8);
        GridFunction h4 = eng.apply_j0(eng.apply_j0(eng.apply_j0(h1)));
        col.quad("weyl.j0_fourth_power", dist(h4, g0), 1e-8);
        GridFunction hp = eng.apply_p(g0);
        double mod = 0;
        for (size_t i = 0; i < g0.samples().size(); ++i)
            mod = std::max(mod, std::abs(std::abs(hp.samples()[i]) - std::abs(g0.samples()[i])));
        col.quad("weyl.p_unit_modulus", mod, 1e-15);
        col.quad("weyl.p_inversion", max_abs_diff(eng.apply_p(hp, true), g0), 1e-14);
    } catch (const Error& err) {
        col.quad("aborted.weyl_generators", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // covariance battery: 6 words x {T(l), S(l): |l|<=2} x family
        std::vector<PhaseSpacePoint> points;
        for (i64 l1 = -2; l1 <= 2; ++l1)
            for (i64 l2 = -2; l2 <= 2; ++l2) {
                points.push_back(emb.t_point({l1, l2}));
                points.push_back(emb.s_point({l1, l2}));
            }
        for (const NamedWord& nw : weyl_words()) {
            Mat4Q M = build_ma(nw.word, cfg.theta, cfg.c);
            std::vector<GridFunction> hf = eng.apply_word_batch(nw.word, family);
            double worst = 0;
            for (const PhaseSpacePoint& g : points) {
                std::vector<GridFunction> lhs;
                lhs.reserve(family.size());
                for (const GridFunction& f : family) lhs.push_back(hw_apply(g, f));
                lhs = eng.apply_word_batch(nw.word, std::move(lhs));
                PhaseSpacePoint mg = apply_mat4(M, g);
                for (size_t i = 0; i < family.size(); ++i)
                    worst = std::max(worst,
                                     dist(lhs[i], hw_apply(mg, hf[i])) / family[i].norm());
            }
            col.quad(std::string("weyl.covariance_") + nw.name, worst, cfg.tolerance,
                     {{"points", std::to_string(points.size())},
                      {"family", std::to_string(family.size())}});
        }
    } catch (const Error& err) {
        col.quad("aborted.weyl_covariance", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // finite-order phases
        for (const NamedWord& nw : weyl_words()) {
            if (nw.order == 0 || std::string(nw.name) == "J0") continue;
            try {
                OrderPhase ph = order_phase(eng, nw.word, nw.order, family, cfg.tolerance);
                std::map<std::string, std::string> lam{
                    {"lambda_re", std::to_string(ph.lambda.real())},
                    {"lambda_im", std::to_string(ph.lambda.imag())}};
                col.quad(std::string("weyl.order_modulus_") + nw.name,
                         std::abs(std::abs(ph.lambda) - 1.0), 1e-8, lam);
                col.quad(std::string("weyl.order_spread_") + nw.name, ph.spread, 1e-6);
                if (nw.order == 4)
                    col.quad("weyl.order_lambda4_is_one", std::abs(ph.lambda - cplx{1.0, 0.0}),
                             1e-6);
            } catch (const OrderMismatch& err) {
                col.quad(std::string("weyl.order_modulus_") + nw.name, 1.0, 1e-8,
                         {{"error", err.what()}});
                col.quad(std::string("weyl.order_spread_") + nw.name, 1.0, 1e-6,
                         {{"error", err.what()}});
                if (nw.order == 4)
                    col.quad("weyl.order_lambda4_is_one", 1.0, 1e-6, {{"error", err.what()}});
            }
        }
    } catch (const Error& err) {
        col.quad("aborted.finite_order_phases", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // bimodule actions match the representation samplewise
        double right = 0, left = 0, rlaw = 0, llaw = 0;
        const GridFunction& f = family[2];
        for (i64 l1 = -2; l1 <= 2; ++l1)
            for (i64 l2 = -2; l2 <= 2; ++l2) {
                Lattice2 l{l1, l2};
                right = std::max(right,
                                 max_abs_diff(act_right(f, l, emb), hw_apply(emb.t_point(l), f)));
                left = std::max(left,
                                max_abs_diff(act_left(l, f, emb), hw_adjoint(emb.s_point(l), f)));
            }
        for (int t = 0; t < 10; ++t) {
            Lattice2 l{rand_in(rng, -2, 2), rand_in(rng, -2, 2)};
            Lattice2 lp{rand_in(rng, -2, 2), rand_in(rng, -2, 2)};
            Lattice2 sum{l[0] + lp[0], l[1] + lp[1]};
            GridFunction lhs = act_right(act_right(f, l, emb), lp, emb);
            GridFunction rhs = act_right(f, sum, emb);
            rhs.scale(cocycle(cfg.theta, l, lp).value());
            rlaw = std::max(rlaw, dist(lhs, rhs) / f.norm());
            GridFunction lhs2 = act_left(l, act_left(lp, f, emb), emb);
            GridFunction rhs2 = act_left(sum, f, emb);
            rhs2.scale(cocycle(emb.theta_prime(), l, lp).value());
            llaw = std::max(llaw, dist(lhs2, rhs2) / f.norm());
        }
        col.quad("bimodule.right_action_matches_rep", right, 1e-14);
        col.quad("bimodule.left_action_matches_adjoint", left, 1e-14);
        col.quad("bimodule.right_cocycle_law", rlaw, 1e-12);
        col.quad("bimodule.left_cocycle_law", llaw, 1e-12);
    } catch (const Error& err) {
        col.quad("aborted.bimodule_actions", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // inner products: defining relations and hermitian symmetry
        const GridFunction& f = family[3];
        const GridFunction& g = family[4];
        double rel_a = 0, rel_b = 0;
        for (Lattice2 l : {Lattice2{1, 0}, {0, 1}, {2, -1}, {-1, -2}}) {
            rel_a = std::max(rel_a, std::abs(inner_a_coeff(f, g, emb, l) -
                                             inner(act_right(g, {-l[0], -l[1]}, emb), f)));
            rel_b = std::max(rel_b,
                             std::abs(inner_b_coeff(f, g, emb, l) - inner(f, act_left(l, g, emb))));
        }
        col.quad("bimodule.inner_a_translated_scalar_products", rel_a, 1e-12);
        col.quad("bimodule.inner_b_translated_scalar_products", rel_b, 1e-12);
        col.quad("bimodule.inner_a_hermitian",
                 inner_a(f, g, emb, 6).max_coeff_dist(inner_a(g, f, emb, 6).star()), 1e-12);
        col.quad("bimodule.inner_b_hermitian",
                 inner_b(f, g, emb, 12).max_coeff_dist(inner_b(g, f, emb, 12).star()), 1e-10);
        AlgebraElement a6 = inner_a(f, g, emb, 6);
        double shell = 0;
        for (const auto& [l, cv] : a6.coeffs())
            if (std::max(std::abs(l[0]), std::abs(l[1])) == 6)
                shell = std::max(shell, std::abs(cv.value()));
        col.quad("bimodule.inner_a_decay", shell, 1e-10, {{"radius", "6"}});
    } catch (const Error& err) {
        col.quad("aborted.bimodule_inner_products", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // compatibility constant
        std::vector<std::array<GridFunction, 3>> triples;
        for (int t = 0; t < 5; ++t) {
            auto fam = gaussian_family(rng, spec, 3);
            triples.push_back({fam[0], fam[1], fam[2]});
        }
        try {
            Calibration cal = calibrate_k(emb, triples, 12, 1e-6);
            col.quad("bimodule.k_calibration_spread", cal.rel_spread, 1e-6,
                     {{"K", std::to_string(cal.K)}});
            col.quad("bimodule.k_compatibility_residual", cal.residual, 1e-5,
                     {{"K", std::to_string(cal.K)}});
        } catch (const Error& err) {
            col.quad("bimodule.k_calibration_spread", 1.0, 1e-6, {{"error", err.what()}});
            col.quad("bimodule.k_compatibility_residual", 1.0, 1e-5, {{"error", err.what()}});
        }
    } catch (const Error& err) {
        col.quad("aborted.k_calibration", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // equivariance of every finite-order word and the shear
        const GridFunction& f = family[5];
        const GridFunction& g = family[6];
        for (const NamedWord& nw : weyl_words()) {
            if (std::string(nw.name) == "J0") continue;
            EquivarianceReport rep = equivariance_residual(eng, nw.word, f, g, emb, cfg.window);
            col.quad(std::string("bimodule.equivariance_") + nw.name, rep.max_residual(),
                     1e-5,
                     {{"right", std::to_string(rep.right_action)},
                      {"left", std::to_string(rep.left_action)},
                      {"inner_a", std::to_string(rep.inner_a)},
                      {"inner_b", std::to_string(rep.inner_b)}});
        }
    } catch (const Error& err) {
        col.quad("aborted.bimodule_equivariance", 1.0, 0.0, {{"error", err.what()}});
    }
    try {  // STFT on the reduced grid
        GridSpec sspec(cfg.theta, cfg.c, 2, cfg.stft_samples);
        Rng srng(cfg.seed + 2);
        std::vector<GridFunction> sf = gaussian_family(srng, sspec, 4);
        GridFunction window_fn = make_gaussian(sspec, Rational(0), 0, 1.0, Rational(0), 0);
        StftArray v = stft(window_fn, sf[0]);
        double fact = 0;
        for (int t = 0; t < 20; ++t) {
            i64 a = sspec.samples() / 2 + rand_in(srng, -32, 32);
            i64 n = sspec.samples() / 2 + rand_in(srng, -32, 32);
            int k = static_cast<int>(rand_in(srng, 0, c - 1));
            int l = static_cast<int>(rand_in(srng, 0, c - 1));
            fact = std::max(fact,
                            std::abs(v.at(a, n, k, l) - stft_direct_at(window_fn, sf[0], a, n, k, l)));
        }
        col.quad("stft.factorization_agreement", fact, 1e-10, {{"points", "20"}});
        col.quad("stft.isometry", std::abs(v.norm() - sf[0].norm() * window_fn.norm()), 1e-6);
        double pv = parseval_residual(window_fn, window_fn, window_fn, window_fn);
        pv = std::max(pv, parseval_residual(sf[0], sf[1], sf[2], sf[3]));
        col.quad("stft.parseval", pv, 1e-6);
    } catch (const Error& err) {
        col.quad("aborted.stft", 1.0, 0.0, {{"error", err.what()}});
    }

    try {  // twisted convolution, involution, action, regular representation
        Rational th = cfg.theta;
        auto rand_elem = [&](int terms) {
            AlgebraElement e(th);
            for (int i = 0; i < terms; ++i)
                e.add_term({rand_in(rng, -3, 3), rand_in(rng, -3, 3)},
                           PhasedCoeff{ExactPhase(),
                                       {static_cast<double>(rand_in(rng, -100, 100)) / 100.0,
                                        static_cast<double>(rand_in(rng, -100, 100)) / 100.0}});
            return e;
        };
        double worst = 0;
        for (int t = 0; t < 10; ++t) {
            AlgebraElement f = rand_elem(5), g = rand_elem(5), h = rand_elem(5);
            worst = std::max(worst, ((f * g) * h).max_coeff_dist(f * (g * h)));
            worst = std::max(worst, (f * g).star().max_coeff_dist(g.star() * f.star()));
            worst = std::max(worst, f.star().star().max_coeff_dist(f));
            IntMat2 a = rand_sl2(rng, 40, 8);
            worst = std::max(worst, act(a, f * g).max_coeff_dist(act(a, f) * act(a, g)));
        }
        col.quad("alg.twisted_convolution_laws", worst, 1e-13, {{"trials", "10"}});
        LatticeWindow win{-6, 6, -6, 6};
        WindowVec xi(win);
        for (i64 a = -2; a <= 2; ++a)
            for (i64 b = -2; b <= 2; ++b)
                xi.at({a, b}) = {static_cast<double>(rand_in(rng, -100, 100)) / 100.0,
                                 static_cast<double>(rand_in(rng, -100, 100)) / 100.0};
        double rep = 0;
        for (int t = 0; t < 25; ++t) {
            Lattice2 x{rand_in(rng, -2, 2), rand_in(rng, -2, 2)};
            Lattice2 y{rand_in(rng, -2, 2), rand_in(rng, -2, 2)};
            WindowVec lhs = regular_rep_apply(AlgebraElement::delta(th, x),
                                              regular_rep_apply(AlgebraElement::delta(th, y), xi));
            WindowVec rhs =
                regular_rep_apply(AlgebraElement::delta(th, {x[0] + y[0], x[1] + y[1]}), xi);
            cplx w = cocycle(th, x, y).value();
            for (size_t i = 0; i < lhs.v.size(); ++i)
                rep = std::max(rep, std::abs(lhs.v[i] - w * rhs.v[i]));
        }
        col.quad("alg.regular_rep_law", rep, 1e-14, {{"pairs", "25"}});
    } catch (const Error& err) {
        col.quad("aborted.twisted_algebra", 1.0, 0.0, {{"error", err.what()}});
    }
    std::sort(out.begin(), out.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
    return out;
}

std::vector<CheckReport> run_all_checks(const RunConfig& cfg) {
    std::vector<CheckReport> all = run_exact_checks(cfg);
    std::vector<CheckReport> quad = run_quadrature_checks(cfg);
    all.insert(all.end(), quad.begin(), quad.end());
    std::sort(all.begin(), all.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.check_id < b.check_id; });
    return all;
}

bool all_pass(const std::vector<CheckReport>& reports) {
    for (const CheckReport& r : reports)
        if (!r.pass) return false;
    return true;
}

std::string reports_to_json(const std::vector<CheckReport>& reports, int indent) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckReport& r : reports) {
        nlohmann::json j;
        j["check_id"] = r.check_id;
        j["params"] = r.params;
        j["residual"] = r.residual;
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        j["tier"] = r.tier == Tier::Exact ? "exact" : "quadrature";
        // wall time is intentionally not serialized: reports are byte-stable
        // for fixed seed and configuration
        arr.push_back(j);
    }
    return arr.dump(indent);
}

}  // namespace nctori
