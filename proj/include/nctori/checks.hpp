#pragma once

#include <map>
#include <string>
#include <vector>

#include "nctori/rational.hpp"

namespace nctori {

enum class Tier { Exact, Quadrature };

struct CheckReport {
    std::string check_id;
    std::map<std::string, std::string> params;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
    Tier tier = Tier::Exact;
    double seconds = 0;  // time attributed to this check's battery section
};

struct RunConfig {
    Rational theta = Rational(2, 5);
    int c = 3;
    int samples = 2048;       // N
    int refine = 8;           // m
    double tolerance = 1e-6;  // quadrature-tier default
    i64 window = 3;           // coefficient window R
    unsigned long long seed = 1;
    int stft_samples = 256;   // reduced grid for the 4-index transform

    void validate() const;
};

// Exact-tier battery: integer/rational identities, word decomposition,
// lattice identities, certificates, classification engine. Residuals count
// failures and tolerances are zero.
std::vector<CheckReport> run_exact_checks(const RunConfig& cfg);

// Quadrature-tier battery: Heisenberg-Weyl representation, Weyl operators,
// bimodule actions and inner products, STFT. Builds the grid engine.
std::vector<CheckReport> run_quadrature_checks(const RunConfig& cfg);

// Both tiers, sorted by check_id.
std::vector<CheckReport> run_all_checks(const RunConfig& cfg);

bool all_pass(const std::vector<CheckReport>& reports);
std::string reports_to_json(const std::vector<CheckReport>& reports, int indent = -1);

}  // namespace nctori
