"""Smoke tests for the python bindings: exact arithmetic, certificates,
decision engine, and a small-grid pass over the Weyl operators."""

import json
import math
import sys

import _nctori as n


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol


def test_exact_arithmetic():
    assert n.cf_expand("3/7") == [0, 2, 3]
    assert n.cf_expand("22/7") == [3, 7]
    assert n.cf_eval([0, 2, 3]) == "3/7"
    assert n.mobius([[1, 0], [1, 1]], "1/2") == "1/3"

    tokens = n.word_decompose([[0, 1], [-1, 0]])
    assert tokens == ["J0"]
    m = n.word_evaluate(" ".join(n.word_decompose([[3, 2], [4, 3]])))
    assert m == [[3, 2], [4, 3]]

    d1, d2, _, _ = n.snf2([[2, 0], [0, 4]])
    assert (d1, d2) == (2, 4)
    assert n.matrix_equivalent([[0, 1], [0, 0]], [[1, 0], [0, 0]])
    assert not n.matrix_equivalent([[0, 1], [0, 0]], [[0, 2], [0, 0]])

    w = n.rational_orbit_witness("3/7", "1/2")
    assert n.mobius(w, "3/7") == "1/2"

    assert n.quad_equivalent("(0+1rt2)/1", "(1+1rt2)/1")
    assert not n.quad_equivalent("(0+1rt2)/1", "(0+1rt3)/1")


def test_certificates_and_decisions():
    cert = json.loads(n.finite_chain("3/7"))
    assert cert["replay_ok"]
    assert cert["theta_start"] == "3"
    assert cert["steps"][0]["kind"] == "shear"

    z = json.loads(n.z_chain("3/7", [[1, 1], [0, 1]]))
    assert z["K_accum"] == [[0, 1], [-1, 0]]

    d = json.loads(n.decide_finite("1/2", "3/7", 4))
    assert d["verdict"] == "equivalent"
    assert len(d["certificates"]) == 2

    d = json.loads(n.decide_finite("1/2", "(0+1rt2)/1", 2))
    assert d["verdict"] == "not_equivalent"
    assert d["trace_ranges"][0] == "(1/4)Z"

    d = json.loads(n.decide_z("1/3", "1/5", [[1, 1], [0, 1]], [[1, 2], [0, 1]]))
    assert d["verdict"] == "not_equivalent"
    assert d["smith_forms"] == [[1, 0], [2, 0]]

    assert n.kgroup_report([[1, 4], [0, 1]], "1/2") == (3, 3, 4)
    assert n.trace_range("1/3", 2) == "(1/6)Z"


def test_grid_and_weyl():
    spec = n.GridSpec("2/5", 3, 2, 512)
    assert approx(spec.delta, 1.0 / 30.0)
    f = n.make_gaussian(spec, width=0.8)
    assert approx(f.norm(), 1.0, 1e-12)
    assert f.boundary_mag() < 1e-12

    g = n.hw_apply(f, "1/30", "1/2", 1, -1)
    assert approx(g.norm(), 1.0, 1e-12)

    eng = n.WeylEngine(spec)
    assert eng.chirp_is_exact()
    h = eng.apply_word("J0", f)
    assert approx(h.norm(), 1.0, 1e-9)
    assert eng.covariance_residual("Pinv J0", "T", 1, 0, f) < 1e-6
    assert eng.covariance_residual("P", "S", 0, 1, f) < 1e-6

    fam = [n.make_gaussian(spec, width=0.8), n.make_gaussian(spec, x0="1/10", width=0.85)]
    lam, spread = eng.order_phase("J0", 4, fam)
    assert abs(lam - 1.0) < 1e-6 and spread < 1e-6
    lam3, _ = eng.order_phase("Pinv J0", 3, fam)
    assert approx(abs(lam3), 1.0, 1e-8)

    emb = n.LatticeEmbedding("2/5", 3)
    assert emb.theta_prime == "2/11"
    r = emb.act_right(f, 1, 0)
    assert approx(r.norm(), 1.0, 1e-12)
    c0 = emb.inner_a_coeff(f, f, 0, 0)
    assert approx(c0.real, 1.0, 1e-10) and abs(c0.imag) < 1e-12

    rep = n.equivariance_residual(eng, "P", f, r, emb, 2)
    assert max(rep.values()) < 1e-5


def test_twisted_algebra():
    u1 = n.AlgebraElement.delta("2/5", 1, 0)
    u2 = n.AlgebraElement.delta("2/5", 0, 1)
    p12 = u1 * u2
    p21 = u2 * u1
    ratio = p12.value(1, 1) / p21.value(1, 1)
    assert approx(ratio.real, math.cos(2 * math.pi * 2 / 5), 1e-12)
    assert approx(ratio.imag, math.sin(2 * math.pi * 2 / 5), 1e-12)
    assert u1.star().value(-1, 0) == 1.0
    j0 = n.act([[0, 1], [-1, 0]], u1)
    assert j0.value(0, -1) == 1.0
    txt = p12.to_text()
    assert txt.startswith("1 1 ")

    spec = n.GridSpec("2/5", 3, 2, 512)
    emb = n.LatticeEmbedding("2/5", 3)
    f = n.make_gaussian(spec, width=0.8)
    a = emb.inner_a(f, f, 6)
    assert a.theta == "2/5"
    assert approx(abs(a.value(0, 0)), 1.0, 1e-10)
    b = emb.inner_b(f, f, 12)
    assert b.theta == "2/11"


def test_exact_battery():
    reports = json.loads(n.run_checks(samples=512, refine=2, exact_only=True))
    assert all(r["pass"] for r in reports)
    assert any(r["check_id"] == "exact.certificates_replay" for r in reports)


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
