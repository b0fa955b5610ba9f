// Acceptance suite: runs the full exact and quadrature batteries at the
// reference configuration (theta = 2/5, c = 3, N = 2048, m = 8) and grades
// them against the seven release criteria, one line each.

#include <cstdio>
#include <string>
#include <vector>

#include "nctori/checks.hpp"
#include "nctori/errors.hpp"

using namespace nctori;

namespace {

struct Criterion {
    int number;
    const char* title;
    double budget_seconds;
    std::vector<std::string> prefixes;
};

bool starts_with_any(const std::string& id, const std::vector<std::string>& prefixes) {
    for (const std::string& p : prefixes)
        if (id.rfind(p, 0) == 0) return true;
    return false;
}

}  // namespace

int main() {
    RunConfig cfg;  // reference configuration: 2/5, c=3, N=2048, m=8, tol 1e-6, R=3
    std::vector<CheckReport> reports;
    try {
        reports = run_all_checks(cfg);
    } catch (const Error& e) {
        std::printf("ACCEPTANCE: FAIL (battery aborted: %s)\n", e.what());
        return 1;
    }

    const std::vector<Criterion> criteria = {
        {1,
         "exact tier: embedding, symplectic and lattice identities",
         5.0,
         {"exact.embedding_identities", "exact.ma_symplectic", "exact.lattice_identities",
          "exact.generator_orders_and_transpose"}},
        {2, "word decomposition round-trips", 5.0, {"exact.word_round_trip_matrices"}},
        {3,
         "Heisenberg-Weyl covariance of the six Weyl words",
         120.0,
         {"weyl.covariance_", "hw.family_boundary_decay"}},
        {4, "finite-order phases of the Weyl operators", 120.0, {"weyl.order_"}},
        {5, "bimodule battery: actions, inner products, equivariance, K", 300.0, {"bimodule."}},
        {6, "STFT factorization, isometry and Parseval", 60.0, {"stft."}},
        {7,
         "classification engine: certificates, obstructions, K-groups",
         10.0,
         {"exact.certificates_replay", "exact.classification_engine", "exact.kgroup_invariance"}},
    };

    bool all_ok = true;
    std::vector<bool> claimed(reports.size(), false);
    for (const Criterion& cr : criteria) {
        size_t checks = 0, failed = 0;
        double seconds = 0, worst_margin = 0;
        std::string worst_id;
        for (size_t i = 0; i < reports.size(); ++i) {
            const CheckReport& r = reports[i];
            if (!starts_with_any(r.check_id, cr.prefixes)) continue;
            claimed[i] = true;
            ++checks;
            seconds += r.seconds;
            if (!r.pass) {
                ++failed;
                if (worst_id.empty() || r.residual > worst_margin) {
                    worst_margin = r.residual;
                    worst_id = r.check_id;
                }
            }
        }
        bool ok = checks > 0 && failed == 0 && seconds < cr.budget_seconds;
        all_ok = all_ok && ok;
        std::printf("criterion %d: %s  [%zu checks, %.1fs of %.0fs] %s", cr.number,
                    ok ? "PASS" : "FAIL", checks, seconds, cr.budget_seconds, cr.title);
        if (failed > 0)
            std::printf("  (%zu failed, worst %s residual %.3e)", failed, worst_id.c_str(),
                        worst_margin);
        else if (checks == 0)
            std::printf("  (no checks matched)");
        else if (seconds >= cr.budget_seconds)
            std::printf("  (over budget)");
        std::printf("\n");
    }

    size_t extra = 0, extra_failed = 0;
    for (size_t i = 0; i < reports.size(); ++i) {
        if (claimed[i]) continue;
        ++extra;
        if (!reports[i].pass) {
            ++extra_failed;
            std::printf("supporting check FAILED: %s residual %.3e tolerance %.3e\n",
                        reports[i].check_id.c_str(), reports[i].residual, reports[i].tolerance);
        }
    }
    bool extra_ok = extra_failed == 0;
    all_ok = all_ok && extra_ok;
    std::printf("supporting invariants: %s  [%zu checks]\n", extra_ok ? "PASS" : "FAIL", extra);
    std::printf("ACCEPTANCE: %s\n", all_ok ? "PASS" : "FAIL");
    return all_ok ? 0 : 1;
}
