// nctori: verification and classification tool for rotation-algebra
// crossed products and their Morita equivalence certificates.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "nctori/bimodule.hpp"
#include "nctori/checks.hpp"
#include "nctori/errors.hpp"
#include "nctori/morita.hpp"

using namespace nctori;

namespace {

struct GroupSpec {
    bool finite = true;
    int order = 4;
    IntMat2 matrix = IntMat2::identity();
};

// "Z2|Z3|Z4|Z6" or "Z:[a,b;c,d]".
std::optional<GroupSpec> parse_group(const std::string& s) {
    GroupSpec g;
    if (s == "Z2" || s == "Z3" || s == "Z4" || s == "Z6") {
        g.finite = true;
        g.order = s[1] - '0';
        return g;
    }
    if (s.rfind("Z:[", 0) != 0 || s.back() != ']') return std::nullopt;
    std::string body = s.substr(3, s.size() - 4);
    for (char& ch : body)
        if (ch == ';' || ch == ',') ch = ' ';
    std::istringstream is(body);
    i64 a, b, c, d;
    if (!(is >> a >> b >> c >> d)) return std::nullopt;
    std::string rest;
    if (is >> rest) return std::nullopt;
    g.finite = false;
    g.matrix = IntMat2{a, b, c, d};
    return g;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output file: " + path);
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noncommutative torus crossed-product verification tool"};
    app.require_subcommand(1);

    std::string theta_str_opt = "2/5";
    int c_opt = 3;
    int n_opt = 2048;
    int m_opt = 8;
    double tol_opt = 1e-6;
    i64 window_opt = 3;
    unsigned long long seed_opt = 1;
    std::string out_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--theta", theta_str_opt, "theta as p/q");
        cmd->add_option("--c", c_opt, "order of the cyclic factor Z_c");
        cmd->add_option("--N", n_opt, "real-line sample count (even)");
        cmd->add_option("--m", m_opt, "grid refinement factor");
        cmd->add_option("--tol", tol_opt, "quadrature tolerance");
        cmd->add_option("--window", window_opt, "coefficient window radius R");
        cmd->add_option("--seed", seed_opt, "random seed for the check batteries");
        cmd->add_option("--out", out_path, "write output to this file instead of stdout");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the exact and quadrature check suites");
    add_common(verify);

    CLI::App* decide =
        app.add_subcommand("decide", "decide Morita equivalence of two crossed products");
    std::string th1_arg, th2_arg, grp1_arg, grp2_arg;
    decide->add_option("theta1", th1_arg, "first theta: p/q or (a+b√d)/e")->required();
    decide->add_option("theta2", th2_arg, "second theta")->required();
    decide->add_option("group", grp1_arg, "Z2|Z3|Z4|Z6 or Z:[a,b;c,d]")->required();
    decide->add_option("group2", grp2_arg, "second matrix Z:[a,b;c,d] (defaults to the first)");
    decide->add_option("--out", out_path, "write output to this file instead of stdout");

    CLI::App* chain = app.add_subcommand("chain", "emit a Morita equivalence certificate");
    std::string chain_theta;
    std::string chain_matrix;
    chain->add_option("theta", chain_theta, "rational theta as p/q")->required();
    chain->add_option("--matrix", chain_matrix,
                      "Z:[a,b;c,d]: accumulate conjugators for the Z-crossed product");
    chain->add_option("--out", out_path, "write output to this file instead of stdout");

    CLI::App* weyl = app.add_subcommand("weyl", "apply a Weyl operator word and dump the result");
    std::string word_arg;
    bool gaussian_flag = false;
    weyl->add_option("word", word_arg, "tokens over J0, J0inv, P, Pinv (e.g. \"Pinv J0\")")
        ->required();
    weyl->add_flag("--gaussian", gaussian_flag, "apply to the normalized centred gaussian");
    add_common(weyl);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            RunConfig cfg;
            auto th = Rational::parse(theta_str_opt);
            if (!th) throw ParseError("cannot parse --theta: " + theta_str_opt);
            cfg.theta = *th;
            cfg.c = c_opt;
            cfg.samples = n_opt;
            cfg.refine = m_opt;
            cfg.tolerance = tol_opt;
            cfg.window = window_opt;
            cfg.seed = seed_opt;
            std::vector<CheckReport> reports = run_all_checks(cfg);
            write_output(out_path, reports_to_json(reports, 2));
            size_t failed = 0;
            for (const CheckReport& r : reports)
                if (!r.pass) ++failed;
            std::cerr << reports.size() - failed << "/" << reports.size() << " checks passed\n";
            return all_pass(reports) ? 0 : 1;
        }
        if (*decide) {
            auto t1 = parse_theta(th1_arg);
            auto t2 = parse_theta(th2_arg);
            if (!t1) throw ParseError("cannot parse theta: " + th1_arg);
            if (!t2) throw ParseError("cannot parse theta: " + th2_arg);
            auto g1 = parse_group(grp1_arg);
            if (!g1) throw ParseError("cannot parse group: " + grp1_arg);
            Decision d;
            if (g1->finite) {
                if (!grp2_arg.empty())
                    throw ParseError("a second matrix is only meaningful for Z-crossed products");
                d = decide_finite(*t1, *t2, g1->order);
            } else {
                IntMat2 b = g1->matrix;
                if (!grp2_arg.empty()) {
                    auto g2 = parse_group(grp2_arg);
                    if (!g2 || g2->finite) throw ParseError("cannot parse group: " + grp2_arg);
                    b = g2->matrix;
                }
                d = decide_z(*t1, *t2, g1->matrix, b);
            }
            write_output(out_path, decision_to_json(d, 2));
            return 0;
        }
        if (*chain) {
            auto th = Rational::parse(chain_theta);
            if (!th) throw ParseError("chain needs a rational theta, got: " + chain_theta);
            EquivalenceCertificate cert;
            if (chain_matrix.empty()) {
                cert = finite_chain(*th);
            } else {
                auto g = parse_group(chain_matrix);
                if (!g || g->finite) throw ParseError("cannot parse matrix: " + chain_matrix);
                cert = z_chain(*th, g->matrix);
            }
            write_output(out_path, certificate_to_json(cert, 2));
            return 0;
        }
        if (*weyl) {
            auto th = Rational::parse(theta_str_opt);
            if (!th) throw ParseError("cannot parse --theta: " + theta_str_opt);
            auto word = GeneratorWord::parse(word_arg);
            if (!word) throw ParseError("cannot parse word: " + word_arg);
            GridSpec spec(*th, c_opt, m_opt, n_opt);
            if (!gaussian_flag)
                throw ConfigError("no input selected: pass --gaussian");
            GridFunction f = make_gaussian(spec, Rational(0), 0, 1.0, Rational(0), 0);
            WeylEngine eng(spec);
            GridFunction out = eng.apply_word(*word, f);
            write_output(out_path, out.dump());
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
