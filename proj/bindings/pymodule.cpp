#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nctori/bimodule.hpp"
#include "nctori/checks.hpp"
#include "nctori/errors.hpp"
#include "nctori/morita.hpp"
#include "nctori/stft.hpp"

namespace py = pybind11;
using namespace nctori;

namespace {

Rational rat(const std::string& s) {
    auto r = Rational::parse(s);
    if (!r) throw ParseError("cannot parse rational: " + s);
    return *r;
}

ThetaValue theta_value(const std::string& s) {
    auto t = parse_theta(s);
    if (!t) throw ParseError("cannot parse theta: " + s);
    return *t;
}

IntMat2 mat(const std::array<std::array<i64, 2>, 2>& m) {
    return IntMat2{m[0][0], m[0][1], m[1][0], m[1][1]};
}

std::array<std::array<i64, 2>, 2> unmat(const IntMat2& m) {
    return {{{m.a, m.b}, {m.c, m.d}}};
}

GeneratorWord word(const std::string& s) {
    auto w = GeneratorWord::parse(s);
    if (!w) throw ParseError("cannot parse generator word: " + s);
    return *w;
}

}  // namespace

PYBIND11_MODULE(_nctori, m) {
    m.doc() = "noncommutative torus crossed products: exact arithmetic, Weyl operators, "
              "Heisenberg bimodule and Morita certificates";

    py::register_exception<Error>(m, "NctoriError");

    // exact arithmetic
    m.def("cf_expand", [](const std::string& r) { return cf_expand(rat(r)).coeffs; },
          py::arg("rational"));
    m.def("cf_eval", [](const std::vector<i64>& coeffs) {
        return cf_eval(ContinuedFraction{coeffs}).str();
    });
    m.def("mobius", [](const std::array<std::array<i64, 2>, 2>& g, const std::string& t) {
        ThetaValue tv = theta_value(t);
        if (is_rational(tv)) return mobius(mat(g), std::get<Rational>(tv)).str();
        return mobius(mat(g), std::get<QuadIrrational>(tv)).str();
    });
    m.def("word_decompose", [](const std::array<std::array<i64, 2>, 2>& g) {
        GeneratorWord w = word_decompose(mat(g));
        std::vector<std::string> tokens;
        for (Gen t : w.tokens) tokens.emplace_back(gen_name(t));
        return tokens;
    });
    m.def("word_evaluate", [](const std::string& w) { return unmat(word(w).evaluate()); });
    m.def("snf2", [](const std::array<std::array<i64, 2>, 2>& g) {
        SmithForm s = snf2(mat(g));
        return py::make_tuple(s.d1, s.d2, unmat(s.U), unmat(s.V));
    });
    m.def("matrix_equivalent",
          [](const std::array<std::array<i64, 2>, 2>& a, const std::array<std::array<i64, 2>, 2>& b) {
              return matrix_equivalent(mat(a), mat(b));
          });
    m.def("rational_orbit_witness", [](const std::string& a, const std::string& b) {
        return unmat(rational_orbit_witness(rat(a), rat(b)));
    });
    m.def("quad_equivalent", [](const std::string& a, const std::string& b) {
        auto qa = QuadIrrational::parse(a), qb = QuadIrrational::parse(b);
        if (!qa || !qb) throw ParseError("expected quadratic irrationals (a+b√d)/e");
        return quad_equivalent(*qa, *qb);
    });

    // classification engine (JSON results)
    m.def("finite_chain",
          [](const std::string& r) { return certificate_to_json(finite_chain(rat(r)), 2); });
    m.def("z_chain", [](const std::string& r, const std::array<std::array<i64, 2>, 2>& a) {
        return certificate_to_json(z_chain(rat(r), mat(a)), 2);
    });
    m.def("decide_finite", [](const std::string& t1, const std::string& t2, int i) {
        return decision_to_json(decide_finite(theta_value(t1), theta_value(t2), i), 2);
    });
    m.def("decide_z", [](const std::string& t1, const std::string& t2,
                         const std::array<std::array<i64, 2>, 2>& a,
                         const std::array<std::array<i64, 2>, 2>& b) {
        return decision_to_json(decide_z(theta_value(t1), theta_value(t2), mat(a), mat(b)), 2);
    });
    m.def("kgroup_report", [](const std::array<std::array<i64, 2>, 2>& a, const std::string& t) {
        KGroupReport r = kgroup_report(mat(a), rat(t));
        return py::make_tuple(r.k0_rank, r.k1_rank, r.k1_torsion);
    });
    m.def("trace_range", [](const std::string& t, i64 k) {
        return trace_range(theta_value(t), k).str();
    });

    // twisted group algebra
    py::class_<AlgebraElement>(m, "AlgebraElement")
        .def(py::init([](const std::string& theta) { return AlgebraElement(rat(theta)); }),
             py::arg("theta"))
        .def_static("delta",
                    [](const std::string& theta, i64 l1, i64 l2) {
                        return AlgebraElement::delta(rat(theta), {l1, l2});
                    })
        .def_property_readonly("theta", [](const AlgebraElement& a) { return a.theta().str(); })
        .def("add_term",
             [](AlgebraElement& a, i64 l1, i64 l2, cplx v) {
                 a.add_term({l1, l2}, PhasedCoeff{ExactPhase(), v});
             })
        .def("value", [](const AlgebraElement& a, i64 l1, i64 l2) { return a.value({l1, l2}); })
        .def("support_size", &AlgebraElement::support_size)
        .def("star", &AlgebraElement::star)
        .def("to_text", &AlgebraElement::to_text)
        .def("__mul__", [](const AlgebraElement& a, const AlgebraElement& b) { return a * b; })
        .def("__add__", [](const AlgebraElement& a, const AlgebraElement& b) { return a + b; });
    m.def("cocycle", [](const std::string& theta, i64 x1, i64 x2, i64 y1, i64 y2) {
        return cocycle(rat(theta), {x1, x2}, {y1, y2}).value();
    });
    m.def("act", [](const std::array<std::array<i64, 2>, 2>& a, const AlgebraElement& f) {
        return act(mat(a), f);
    });

    // grids and operators
    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](const std::string& theta, int c, int refine, int samples) {
                 return GridSpec(rat(theta), c, refine, samples);
             }),
             py::arg("theta"), py::arg("c"), py::arg("refine"), py::arg("samples"))
        .def_property_readonly("samples", &GridSpec::samples)
        .def_property_readonly("c", &GridSpec::c)
        .def_property_readonly("delta", [](const GridSpec& s) { return s.delta().to_double(); })
        .def_property_readonly("halfwidth",
                               [](const GridSpec& s) { return s.halfwidth().to_double(); })
        .def_property_readonly("theta_tilde",
                               [](const GridSpec& s) { return s.theta_tilde().str(); })
        .def_property_readonly("theta_prime",
                               [](const GridSpec& s) { return s.theta_prime().str(); });

    py::class_<GridFunction>(m, "GridFunction")
        .def("norm", &GridFunction::norm)
        .def("boundary_mag", &GridFunction::boundary_mag)
        .def("dump", &GridFunction::dump)
        .def("at", [](const GridFunction& f, i64 j, int q) { return f.at(j, q); })
        .def("samples", [](const GridFunction& f) { return f.samples(); });

    m.def("make_gaussian",
          [](const GridSpec& spec, const std::string& x0, i64 k0, double width,
             const std::string& y0, i64 l0) {
              return make_gaussian(spec, rat(x0), k0, width, rat(y0), l0);
          },
          py::arg("spec"), py::arg("x0") = "0", py::arg("k0") = 0, py::arg("width") = 1.0,
          py::arg("y0") = "0", py::arg("l0") = 0);
    m.def("grid_inner", [](const GridFunction& f, const GridFunction& g) { return inner(f, g); });

    m.def("hw_apply", [](const GridFunction& f, const std::string& x, const std::string& y, i64 k,
                         i64 l) { return hw_apply(PhaseSpacePoint{rat(x), rat(y), k, l}, f); },
          py::arg("f"), py::arg("x"), py::arg("y"), py::arg("k"), py::arg("l"));

    py::class_<WeylEngine>(m, "WeylEngine")
        .def(py::init<const GridSpec&>())
        .def("apply_word",
             [](const WeylEngine& e, const std::string& w, const GridFunction& f) {
                 return e.apply_word(word(w), f);
             })
        .def("chirp_is_exact", &WeylEngine::chirp_is_exact)
        .def("covariance_residual",
             [](const WeylEngine& e, const std::string& w, const std::string& side, i64 l1, i64 l2,
                const GridFunction& f) {
                 LatticeEmbedding emb(e.spec().theta(), e.spec().c());
                 PhaseSpacePoint g =
                     side == "T" ? emb.t_point({l1, l2}) : emb.s_point({l1, l2});
                 return covariance_residual(e, word(w), g, f);
             })
        .def("order_phase", [](const WeylEngine& e, const std::string& w, int order,
                               const std::vector<GridFunction>& family) {
            OrderPhase p = order_phase(e, word(w), order, family);
            return py::make_tuple(p.lambda, p.spread);
        });

    py::class_<LatticeEmbedding>(m, "LatticeEmbedding")
        .def(py::init([](const std::string& theta, i64 c) {
                 return LatticeEmbedding(rat(theta), c);
             }),
             py::arg("theta"), py::arg("c"))
        .def_property_readonly("theta_prime",
                               [](const LatticeEmbedding& e) { return e.theta_prime().str(); })
        .def("act_right", [](const LatticeEmbedding& e, const GridFunction& f, i64 l1, i64 l2) {
            return act_right(f, {l1, l2}, e);
        })
        .def("act_left", [](const LatticeEmbedding& e, i64 l1, i64 l2, const GridFunction& f) {
            return act_left({l1, l2}, f, e);
        })
        .def("inner_a",
             [](const LatticeEmbedding& e, const GridFunction& f, const GridFunction& g,
                i64 radius, double shell_tol) { return inner_a(f, g, e, radius, shell_tol); },
             py::arg("f"), py::arg("g"), py::arg("radius"), py::arg("shell_tol") = 1e-10)
        .def("inner_b",
             [](const LatticeEmbedding& e, const GridFunction& f, const GridFunction& g,
                i64 radius, double K, double shell_tol) {
                 return inner_b(f, g, e, radius, K, shell_tol);
             },
             py::arg("f"), py::arg("g"), py::arg("radius"), py::arg("K") = 1.0,
             py::arg("shell_tol") = 1e-10)
        .def("inner_a_coeff",
             [](const LatticeEmbedding& e, const GridFunction& f, const GridFunction& g, i64 l1,
                i64 l2) { return inner_a_coeff(f, g, e, {l1, l2}); })
        .def("inner_b_coeff",
             [](const LatticeEmbedding& e, const GridFunction& f, const GridFunction& g, i64 l1,
                i64 l2, double K) { return inner_b_coeff(f, g, e, {l1, l2}, K); },
             py::arg("f"), py::arg("g"), py::arg("l1"), py::arg("l2"), py::arg("K") = 1.0)
        .def("calibrate_k", [](const LatticeEmbedding& e,
                               const std::vector<std::vector<GridFunction>>& triples,
                               i64 radius) {
            std::vector<std::array<GridFunction, 3>> ts;
            for (const auto& t : triples) {
                if (t.size() != 3) throw ParseError("each calibration entry needs three functions");
                ts.push_back({t[0], t[1], t[2]});
            }
            Calibration c = calibrate_k(e, ts, radius);
            return py::make_tuple(c.K, c.rel_spread, c.residual);
        });

    m.def("equivariance_residual",
          [](const WeylEngine& eng, const std::string& w, const GridFunction& f,
             const GridFunction& g, const LatticeEmbedding& e, i64 radius) {
              EquivarianceReport r = equivariance_residual(eng, word(w), f, g, e, radius);
              py::dict d;
              d["right_action"] = r.right_action;
              d["left_action"] = r.left_action;
              d["inner_a"] = r.inner_a;
              d["inner_b"] = r.inner_b;
              return d;
          });

    // verification batteries
    m.def("run_checks",
          [](const std::string& theta, int c, int samples, int refine, double tol, i64 window,
             unsigned long long seed, bool exact_only) {
              RunConfig cfg;
              cfg.theta = rat(theta);
              cfg.c = c;
              cfg.samples = samples;
              cfg.refine = refine;
              cfg.tolerance = tol;
              cfg.window = window;
              cfg.seed = seed;
              return reports_to_json(exact_only ? run_exact_checks(cfg) : run_all_checks(cfg), 2);
          },
          py::arg("theta") = "2/5", py::arg("c") = 3, py::arg("samples") = 2048,
          py::arg("refine") = 8, py::arg("tol") = 1e-6, py::arg("window") = 3, py::arg("seed") = 1,
          py::arg("exact_only") = false);
}
