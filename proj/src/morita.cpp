#include "nctori/morita.hpp"

#include <json.hpp>

#include "nctori/errors.hpp"

namespace nctori {

using nlohmann::json;

bool is_rational(const ThetaValue& t) { return std::holds_alternative<Rational>(t); }

std::string theta_str(const ThetaValue& t) {
    if (is_rational(t)) return std::get<Rational>(t).str();
    return std::get<QuadIrrational>(t).str();
}

std::optional<ThetaValue> parse_theta(std::string_view s) {
    if (auto r = Rational::parse(s)) return ThetaValue(*r);
    if (auto q = QuadIrrational::parse(s)) return ThetaValue(*q);
    return std::nullopt;
}

Rational MoritaStep::apply(const Rational& t) const {
    switch (kind) {
        case StepKind::Shear: return mobius_step(t, 1, 0, param, 1);
        case StepKind::Flip:
            if (t.is_zero()) throw PoleError("flip at theta = 0");
            return t.inverse();
        case StepKind::IntShift: return t + Rational(param);
    }
    throw Error("bad step kind");
}

bool EquivalenceCertificate::replay() const {
    Rational t = theta_start;
    IntMat2 acc = IntMat2::identity();
    for (const MoritaStep& s : steps) {
        try {
            t = s.apply(t);
        } catch (const Error&) {
            return false;
        }
        acc = s.conjugator * acc;
    }
    return t == theta_end && acc == k_accum;
}

namespace {

MoritaStep make_step(StepKind kind, i64 param, bool with_conjugators) {
    MoritaStep s;
    s.kind = kind;
    s.param = param;
    if (with_conjugators) {
        if (kind == StepKind::Shear) s.conjugator = mat_j0();
        if (kind == StepKind::Flip) s.conjugator = mat_flip_l();
    }
    return s;
}

EquivalenceCertificate build_chain(const Rational& r, bool with_conjugators) {
    EquivalenceCertificate cert;
    cert.theta_end = r;
    i64 a0 = r.floor_ll();
    Rational frac = r - Rational(a0);
    if (frac.is_zero()) {
        cert.theta_start = Rational(0);
        if (a0 != 0) cert.steps.push_back(make_step(StepKind::IntShift, a0, with_conjugators));
    } else {
        ContinuedFraction cf = cf_expand(frac);  // [0; a1, ..., an]
        size_t n = cf.coeffs.size() - 1;
        if (n == 1) {
            cert.theta_start = Rational(cf.coeffs[1]);
            cert.steps.push_back(make_step(StepKind::Flip, 0, with_conjugators));
        } else {
            cert.theta_start = Rational(cf.coeffs[n]);
            for (size_t k = n - 1; k >= 1; --k) {
                cert.steps.push_back(
                    make_step(StepKind::Shear, cf.coeffs[k], with_conjugators));
                if (k > 1) cert.steps.push_back(make_step(StepKind::Flip, 0, with_conjugators));
            }
        }
        if (a0 != 0) cert.steps.push_back(make_step(StepKind::IntShift, a0, with_conjugators));
    }
    for (const MoritaStep& s : cert.steps) cert.k_accum = s.conjugator * cert.k_accum;
    cert.replay_ok = cert.replay();
    if (!cert.replay_ok) throw Error("certificate replay failed");
    return cert;
}

}  // namespace

EquivalenceCertificate finite_chain(const Rational& r) { return build_chain(r, false); }

EquivalenceCertificate z_chain(const Rational& r, const IntMat2& a) {
    if (a.det() != 1) throw DetError("z-chain requires det A = 1");
    return build_chain(r, true);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Equivalent: return "equivalent";
        case Verdict::NotEquivalent: return "not_equivalent";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

Rational TraceRange::generator() const {
    if (!is_rational(theta)) throw Error("rank-2 trace range has no single generator");
    return Rational(1, k * std::get<Rational>(theta).den());
}

std::string TraceRange::str() const {
    if (rank() == 1) return "(" + generator().str() + ")Z";
    return "(1/" + std::to_string(k) + ")(Z + (" + theta_str(theta) + ")Z)";
}

TraceRange trace_range(const ThetaValue& theta, i64 k) {
    if (k < 1) throw Error("group order must be positive");
    return TraceRange{k, theta};
}

namespace {

Decision decide_theta_orbit(const ThetaValue& t1, const ThetaValue& t2, i64 trace_group_order,
                            bool with_z_chains, const IntMat2& a) {
    Decision d;
    if (is_rational(t1) && is_rational(t2)) {
        d.verdict = Verdict::Equivalent;
        d.reason = "both rational: each side chains to an integer theta";
        const Rational& r1 = std::get<Rational>(t1);
        const Rational& r2 = std::get<Rational>(t2);
        if (with_z_chains) {
            d.certificates.push_back(z_chain(r1, a));
            d.certificates.push_back(z_chain(r2, a));
        } else {
            d.certificates.push_back(finite_chain(r1));
            d.certificates.push_back(finite_chain(r2));
        }
        return d;
    }
    if (is_rational(t1) != is_rational(t2)) {
        d.verdict = Verdict::NotEquivalent;
        d.reason = "trace ranges have different rank (rational vs irrational theta)";
        d.trace_obstruction = {trace_range(t1, trace_group_order), trace_range(t2, trace_group_order)};
        return d;
    }
    const QuadIrrational& q1 = std::get<QuadIrrational>(t1);
    const QuadIrrational& q2 = std::get<QuadIrrational>(t2);
    if (auto w = quad_orbit_witness(q1, q2)) {
        d.verdict = Verdict::Equivalent;
        d.reason = "same GL(2,Z) orbit: continued-fraction tails coincide";
        d.orbit_witness = *w;
    } else {
        d.verdict = Verdict::NotEquivalent;
        d.reason = "different GL(2,Z) orbits: continued-fraction tails differ";
    }
    return d;
}

bool infinite_order(const IntMat2& a) {
    i64 tr = a.trace();
    if (tr > 2 || tr < -2) return true;
    if (tr == 2) return a != IntMat2::identity();
    if (tr == -2) return a != IntMat2{-1, 0, 0, -1};
    return false;  // |trace| < 2: elliptic, finite order
}

}  // namespace

Decision decide_finite(const ThetaValue& t1, const ThetaValue& t2, int i) {
    if (i != 2 && i != 3 && i != 4 && i != 6) throw ConfigError("group must be Z2, Z3, Z4 or Z6");
    return decide_theta_orbit(t1, t2, i, false, IntMat2::identity());
}

Decision decide_z(const ThetaValue& t1, const ThetaValue& t2, const IntMat2& a,
                  const IntMat2& b) {
    if (a.det() != 1 || b.det() != 1) throw DetError("crossed-product matrices must be in SL(2,Z)");
    if (a == b) return decide_theta_orbit(t1, t2, 1, true, a);

    Decision d;
    bool both_rational = is_rational(t1) && is_rational(t2);
    bool both_irrational = !is_rational(t1) && !is_rational(t2);

    if (both_rational && a.trace() == 2 && b.trace() == 2 && infinite_order(a) &&
        infinite_order(b)) {
        IntMat2 ma = IntMat2::identity() - a.inverse_unimodular();
        IntMat2 mb = IntMat2::identity() - b.inverse_unimodular();
        SmithForm sa = snf2(ma), sb = snf2(mb);
        if (sa.d1 == sb.d1 && sa.d2 == sb.d2) {
            d.verdict = Verdict::Equivalent;
            d.reason = "trace-2 matrices with matrix-equivalent I - A^-1 and I - B^-1";
        } else {
            d.verdict = Verdict::NotEquivalent;
            d.reason = "smith forms of I - A^-1 and I - B^-1 differ";
        }
        d.snf_obstruction = {sa.d1, sa.d2, sb.d1, sb.d2};
        return d;
    }
    if (both_irrational && infinite_order(a) && infinite_order(b)) {
        const QuadIrrational& q1 = std::get<QuadIrrational>(t1);
        const QuadIrrational& q2 = std::get<QuadIrrational>(t2);
        auto w = quad_orbit_witness(q1, q2);
        IntMat2 ma = IntMat2::identity() - a.inverse_unimodular();
        IntMat2 mb = IntMat2::identity() - b.inverse_unimodular();
        SmithForm sa = snf2(ma), sb = snf2(mb);
        bool mats = sa.d1 == sb.d1 && sa.d2 == sb.d2;
        d.snf_obstruction = {sa.d1, sa.d2, sb.d1, sb.d2};
        if (w && mats) {
            d.verdict = Verdict::Equivalent;
            d.reason = "same theta orbit and matrix-equivalent I - A^-1, I - B^-1";
            d.orbit_witness = *w;
        } else {
            d.verdict = Verdict::NotEquivalent;
            d.reason = w ? "smith forms of I - A^-1 and I - B^-1 differ"
                         : "different GL(2,Z) orbits of theta";
            if (w) d.orbit_witness = *w;
        }
        return d;
    }
    d.verdict = Verdict::Unknown;
    d.reason = "outside the decided cases (mixed theta kinds or non-generic matrices)";
    return d;
}

KGroupReport kgroup_report(const IntMat2& a, const Rational& theta) {
    (void)theta;  // the K-groups do not depend on theta in the trace-2 case
    if (a.trace() != 2) throw TraceError("K-group formulas require trace(A) = 2");
    if (a == IntMat2::identity())
        throw TraceError("A = I is degenerate: the action must have infinite order");
    SmithForm s = snf2(IntMat2::identity() - a.inverse_unimodular());
    if (s.d2 != 0) throw Error("I - A^-1 of a trace-2 matrix must be singular");
    return KGroupReport{3, 3, s.d1};
}

bool conjugation_isomorphism_check(const IntMat2& a, const IntMat2& pm, i64 monomial_range) {
    if (a.det() != 1) throw DetError("conjugation check requires det A = 1");
    i64 pdet = pm.det();
    if (pdet != 1 && pdet != -1) throw DetError("conjugator must be in GL(2,Z)");
    IntMat2 b = pm * a * pm.inverse_unimodular();
    // A^-1 P^-1 = P^-1 B^-1, exactly.
    if (a.inverse_unimodular() * pm.inverse_unimodular() !=
        pm.inverse_unimodular() * b.inverse_unimodular())
        return false;
    // Monomial spot check: pulling back e(<n, x>) intertwines the two torus
    // automorphisms iff the index maps P^-t A^-t and B^-t P^-t agree.
    IntMat2 lhs = pm.inverse_unimodular().transpose() * a.inverse_unimodular().transpose();
    IntMat2 rhs = b.inverse_unimodular().transpose() * pm.inverse_unimodular().transpose();
    for (i64 n1 = -monomial_range; n1 <= monomial_range; ++n1)
        for (i64 n2 = -monomial_range; n2 <= monomial_range; ++n2) {
            if (lhs.apply({n1, n2}) != rhs.apply({n1, n2})) return false;
        }
    return true;
}

namespace {

json mat_to_json(const IntMat2& m) {
    return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

std::optional<IntMat2> mat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        return std::nullopt;
    return IntMat2{j[0][0].get<i64>(), j[0][1].get<i64>(), j[1][0].get<i64>(), j[1][1].get<i64>()};
}

json cert_to_json_obj(const EquivalenceCertificate& cert) {
    json steps = json::array();
    for (const MoritaStep& s : cert.steps) {
        json step;
        switch (s.kind) {
            case StepKind::Shear:
                step["kind"] = "shear";
                step["c"] = s.param;
                break;
            case StepKind::Flip: step["kind"] = "flip"; break;
            case StepKind::IntShift:
                step["kind"] = "int_shift";
                step["n"] = s.param;
                break;
        }
        step["conjugator"] = mat_to_json(s.conjugator);
        steps.push_back(step);
    }
    return json{{"theta_start", cert.theta_start.str()},
                {"steps", steps},
                {"theta_end", cert.theta_end.str()},
                {"K_accum", mat_to_json(cert.k_accum)},
                {"replay_ok", cert.replay_ok}};
}

}  // namespace

std::string certificate_to_json(const EquivalenceCertificate& cert, int indent) {
    return cert_to_json_obj(cert).dump(indent);
}

std::optional<EquivalenceCertificate> certificate_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    EquivalenceCertificate cert;
    auto ts = Rational::parse(j.value("theta_start", ""));
    auto te = Rational::parse(j.value("theta_end", ""));
    if (!ts || !te || !j.contains("steps") || !j.contains("K_accum")) return std::nullopt;
    cert.theta_start = *ts;
    cert.theta_end = *te;
    for (const json& sj : j["steps"]) {
        MoritaStep s;
        std::string kind = sj.value("kind", "");
        if (kind == "shear") {
            s.kind = StepKind::Shear;
            s.param = sj.value("c", i64{0});
        } else if (kind == "flip") {
            s.kind = StepKind::Flip;
        } else if (kind == "int_shift") {
            s.kind = StepKind::IntShift;
            s.param = sj.value("n", i64{0});
        } else {
            return std::nullopt;
        }
        auto cm = mat_from_json(sj.value("conjugator", json::array()));
        if (!cm) return std::nullopt;
        s.conjugator = *cm;
        cert.steps.push_back(s);
    }
    auto ka = mat_from_json(j["K_accum"]);
    if (!ka) return std::nullopt;
    cert.k_accum = *ka;
    cert.replay_ok = cert.replay();
    return cert;
}

std::string decision_to_json(const Decision& d, int indent) {
    json j;
    j["verdict"] = verdict_name(d.verdict);
    j["reason"] = d.reason;
    json certs = json::array();
    for (const auto& c : d.certificates) certs.push_back(cert_to_json_obj(c));
    j["certificates"] = certs;
    if (d.orbit_witness) j["orbit_witness"] = mat_to_json(*d.orbit_witness);
    if (d.trace_obstruction)
        j["trace_ranges"] = json::array(
            {d.trace_obstruction->first.str(), d.trace_obstruction->second.str()});
    if (d.snf_obstruction) {
        const auto& s = *d.snf_obstruction;
        j["smith_forms"] = json::array(
            {json::array({s[0], s[1]}), json::array({s[2], s[3]})});
    }
    return j.dump(indent);
}

}  // namespace nctori
