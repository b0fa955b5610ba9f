#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nctori/exact.hpp"
#include "nctori/quad_irrational.hpp"

namespace nctori {

// theta is either an exact rational or an exact quadratic irrational.
using ThetaValue = std::variant<Rational, QuadIrrational>;

bool is_rational(const ThetaValue& t);
std::string theta_str(const ThetaValue& t);
std::optional<ThetaValue> parse_theta(std::string_view s);

enum class StepKind { Shear, Flip, IntShift };

struct MoritaStep {
    StepKind kind = StepKind::IntShift;
    i64 param = 0;  // c for Shear (positive), n for IntShift
    IntMat2 conjugator = IntMat2::identity();

    Rational apply(const Rational& t) const;
    bool operator==(const MoritaStep& o) const {
        return kind == o.kind && param == o.param && conjugator == o.conjugator;
    }
};

// Replayable chain of Morita steps from an integer theta to the target,
// with the ordered product of step conjugators.
struct EquivalenceCertificate {
    Rational theta_start, theta_end;
    std::vector<MoritaStep> steps;
    IntMat2 k_accum = IntMat2::identity();
    bool replay_ok = false;

    // Exact replay; returns false (and clears replay_ok) on any mismatch.
    bool replay() const;
};

EquivalenceCertificate finite_chain(const Rational& r);
EquivalenceCertificate z_chain(const Rational& r, const IntMat2& a);

enum class Verdict { Equivalent, NotEquivalent, Unknown };

const char* verdict_name(Verdict v);

// Range of the canonical trace: (1/k)(Z + theta Z).
struct TraceRange {
    i64 k = 1;
    ThetaValue theta;

    int rank() const { return is_rational(theta) ? 1 : 2; }
    // For rank 1: the positive generator of the cyclic range.
    Rational generator() const;
    std::string str() const;
};

TraceRange trace_range(const ThetaValue& theta, i64 k);

struct Decision {
    Verdict verdict = Verdict::Unknown;
    std::string reason;
    std::vector<EquivalenceCertificate> certificates;
    std::optional<IntMat2> orbit_witness;
    std::optional<std::pair<TraceRange, TraceRange>> trace_obstruction;
    std::optional<std::array<i64, 4>> snf_obstruction;  // d1,d2 for each side
};

// Morita decision for A_theta x Z_i, i in {2, 3, 4, 6}.
Decision decide_finite(const ThetaValue& t1, const ThetaValue& t2, int i);
// Morita decision for A_theta x_A Z vs A_theta' x_B Z.
Decision decide_z(const ThetaValue& t1, const ThetaValue& t2, const IntMat2& a,
                  const IntMat2& b);

struct KGroupReport {
    int k0_rank = 3;
    int k1_rank = 3;
    i64 k1_torsion = 0;  // h1; torsion group Z_{h1}, trivial when h1 = 1
};

// K-groups of the crossed product for trace-2 matrices (TraceError otherwise;
// the identity is rejected as degenerate).
KGroupReport kgroup_report(const IntMat2& a, const Rational& theta);

// Exact intertwining bookkeeping for conjugated torus automorphisms:
// A^-1 P^-1 = P^-1 B^-1 with B = P A P^-1, plus a monomial index spot-check.
bool conjugation_isomorphism_check(const IntMat2& a, const IntMat2& pm, i64 monomial_range = 4);

// JSON serialization (stable field names).
std::string certificate_to_json(const EquivalenceCertificate& cert, int indent = -1);
std::optional<EquivalenceCertificate> certificate_from_json(const std::string& text);
std::string decision_to_json(const Decision& d, int indent = -1);

}  // namespace nctori
