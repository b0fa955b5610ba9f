#include "nctori/quad_irrational.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "nctori/errors.hpp"

namespace nctori {

namespace {

i64 checked(i128 v) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw OverflowError("quadratic irrational overflow");
    return static_cast<i64>(v);
}

i64 isqrt_ll(i64 v) {
    if (v < 0) throw Error("isqrt of negative");
    i64 s = static_cast<i64>(std::sqrt(static_cast<double>(v)));
    while (s > 0 && s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
}

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

// Sign of A + B*sqrt(d) for integer A, B with B != 0 and d nonsquare.
int sign_surd(i128 A, i128 B, i128 d) {
    if (B > 0) {
        if (A >= 0) return 1;
        return A * A < B * B * d ? 1 : -1;
    }
    if (A <= 0) return -1;
    return A * A > B * B * d ? 1 : -1;
}

}  // namespace

QuadIrrational::QuadIrrational(i64 a, i64 b, i64 d, i64 e) : a_(a), b_(b), d_(d), e_(e) {
    if (e_ == 0) throw Error("quadratic irrational with zero denominator");
    if (b_ == 0 || d_ <= 1) throw NotQuadraticError("value is rational, not a quadratic irrational");
    // Pull square factors of d into b.
    for (i64 f = 2; f * f <= d_;) {
        if (d_ % (f * f) == 0) {
            d_ /= f * f;
            b_ = checked(static_cast<i128>(b_) * f);
        } else {
            ++f;
        }
    }
    if (d_ == 1) throw NotQuadraticError("radicand is a perfect square");
    if (e_ < 0) {
        a_ = -a_;
        b_ = -b_;
        e_ = -e_;
    }
    i64 g = std::gcd(std::gcd(std::abs(a_), std::abs(b_)), e_);
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        e_ /= g;
    }
}

double QuadIrrational::to_double() const {
    return (static_cast<double>(a_) + static_cast<double>(b_) * std::sqrt(static_cast<double>(d_))) /
           static_cast<double>(e_);
}

int QuadIrrational::cmp(const Rational& t) const {
    // sign of (a*q - p*e) + b*q*sqrt(d), with e, q > 0.
    i128 A = static_cast<i128>(a_) * t.den() - static_cast<i128>(t.num()) * e_;
    i128 B = static_cast<i128>(b_) * t.den();
    return sign_surd(A, B, d_);
}

i64 QuadIrrational::floor_ll() const {
    i64 n = static_cast<i64>(std::floor(to_double()));
    while (cmp(Rational(n)) < 0) --n;
    while (cmp(Rational(n + 1)) > 0) ++n;
    return n;
}

QuadIrrational QuadIrrational::operator+(const Rational& r) const {
    return QuadIrrational(checked(static_cast<i128>(a_) * r.den() + static_cast<i128>(r.num()) * e_),
                          checked(static_cast<i128>(b_) * r.den()), d_,
                          checked(static_cast<i128>(e_) * r.den()));
}

QuadIrrational QuadIrrational::inverse() const {
    i128 nrm = static_cast<i128>(a_) * a_ - static_cast<i128>(b_) * b_ * d_;
    // e*(a - b*sqrt(d)) / (a^2 - b^2 d)
    return QuadIrrational(checked(static_cast<i128>(e_) * a_), checked(-static_cast<i128>(e_) * b_),
                          d_, checked(nrm));
}

std::string QuadIrrational::str() const {
    std::string s = "(" + std::to_string(a_);
    s += b_ >= 0 ? "+" : "-";
    s += std::to_string(std::abs(b_)) + "√" + std::to_string(d_) + ")/" + std::to_string(e_);
    return s;
}

std::optional<QuadIrrational> QuadIrrational::parse(std::string_view s) {
    auto strip = [](std::string_view v) {
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
        while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
        return v;
    };
    s = strip(s);
    if (s.empty() || s.front() != '(') return std::nullopt;
    s.remove_prefix(1);
    auto read_int = [](std::string_view& v, i64& out) -> bool {
        size_t i = 0;
        bool neg = false;
        if (i < v.size() && (v[i] == '+' || v[i] == '-')) {
            neg = v[i] == '-';
            ++i;
        }
        if (i >= v.size() || v[i] < '0' || v[i] > '9') return false;
        i64 r = 0;
        while (i < v.size() && v[i] >= '0' && v[i] <= '9') {
            r = r * 10 + (v[i] - '0');
            ++i;
        }
        out = neg ? -r : r;
        v.remove_prefix(i);
        return true;
    };
    i64 a = 0, b = 0, d = 0, e = 1;
    if (!read_int(s, a)) return std::nullopt;
    if (s.empty() || (s.front() != '+' && s.front() != '-')) return std::nullopt;
    if (!read_int(s, b)) return std::nullopt;
    if (s.rfind("√", 0) == 0)
        s.remove_prefix(3);
    else if (s.rfind("rt", 0) == 0)
        s.remove_prefix(2);
    else if (s.rfind("sqrt", 0) == 0)
        s.remove_prefix(4);
    else
        return std::nullopt;
    if (!read_int(s, d)) return std::nullopt;
    if (s.empty() || s.front() != ')') return std::nullopt;
    s.remove_prefix(1);
    if (!s.empty()) {
        if (s.front() != '/') return std::nullopt;
        s.remove_prefix(1);
        if (!read_int(s, e) || !s.empty()) return std::nullopt;
    }
    try {
        return QuadIrrational(a, b, d, e);
    } catch (const Error&) {
        return std::nullopt;
    }
}

QuadIrrational mobius(const IntMat2& g, const QuadIrrational& x) {
    i64 dt = g.det();
    if (dt != 1 && dt != -1) throw DetError("moebius action requires det = +/-1");
    // (g.a*x + g.b) / (g.c*x + g.d) with x = (a + b sqrt(d))/e; rationalize.
    i128 A1 = static_cast<i128>(g.a) * x.a() + static_cast<i128>(g.b) * x.e();
    i128 B1 = static_cast<i128>(g.a) * x.b();
    i128 A2 = static_cast<i128>(g.c) * x.a() + static_cast<i128>(g.d) * x.e();
    i128 B2 = static_cast<i128>(g.c) * x.b();
    i128 num_a = A1 * A2 - B1 * B2 * x.d();
    i128 num_b = B1 * A2 - A1 * B2;
    i128 den = A2 * A2 - B2 * B2 * x.d();
    i128 gg = gcd128(gcd128(num_a, num_b), den);
    if (gg > 1) {
        num_a /= gg;
        num_b /= gg;
        den /= gg;
    }
    return QuadIrrational(checked(num_a), checked(num_b), x.d(), checked(den));
}

namespace {

// State of the P,Q continued-fraction recurrence for (P + sqrt(D))/Q.
struct Surd {
    i64 P, Q, D, sqrtD;

    i64 next_coeff() {
        i64 s = sqrtD;
        i64 a = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
        i64 Pn = a * Q - P;
        i64 Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
        return a;
    }
};

Surd to_surd(const QuadIrrational& x) {
    i64 P, Q;
    i128 D128 = static_cast<i128>(x.b()) * x.b() * x.d();
    if (x.b() > 0) {
        P = x.a();
        Q = x.e();
    } else {
        P = -x.a();
        Q = -x.e();
    }
    i64 D = checked(D128);
    if ((D128 - static_cast<i128>(P) * P) % Q != 0) {
        i64 qa = std::abs(Q);
        D = checked(D128 * Q * Q);
        P = checked(static_cast<i128>(P) * qa);
        Q = checked(static_cast<i128>(Q) * qa);
    }
    return Surd{P, Q, D, isqrt_ll(D)};
}

std::vector<i64> primitive_cycle(const std::vector<i64>& c) {
    size_t n = c.size();
    for (size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (size_t i = 0; i + p < n && ok; ++i) ok = c[i] == c[i + p];
        if (ok) return std::vector<i64>(c.begin(), c.begin() + p);
    }
    return c;
}

size_t min_rotation_index(const std::vector<i64>& c) {
    size_t n = c.size(), best = 0;
    for (size_t r = 1; r < n; ++r) {
        for (size_t i = 0; i < n; ++i) {
            i64 lhs = c[(r + i) % n], rhs = c[(best + i) % n];
            if (lhs != rhs) {
                if (lhs < rhs) best = r;
                break;
            }
        }
    }
    return best;
}

std::vector<i64> rotated(const std::vector<i64>& c, size_t r) {
    std::vector<i64> out;
    out.reserve(c.size());
    for (size_t i = 0; i < c.size(); ++i) out.push_back(c[(r + i) % c.size()]);
    return out;
}

}  // namespace

QuadCf quad_cf(const QuadIrrational& x) {
    Surd s = to_surd(x);
    std::map<std::pair<i64, i64>, size_t> seen;
    std::vector<i64> coeffs;
    for (;;) {
        auto key = std::make_pair(s.P, s.Q);
        auto it = seen.find(key);
        if (it != seen.end()) {
            QuadCf out;
            out.pre.assign(coeffs.begin(), coeffs.begin() + static_cast<long>(it->second));
            out.cycle.assign(coeffs.begin() + static_cast<long>(it->second), coeffs.end());
            return out;
        }
        seen.emplace(key, coeffs.size());
        coeffs.push_back(s.next_coeff());
        if (coeffs.size() > 100000) throw Error("continued fraction failed to become periodic");
    }
}

bool quad_equivalent(const QuadIrrational& x1, const QuadIrrational& x2) {
    QuadCf c1 = quad_cf(x1), c2 = quad_cf(x2);
    std::vector<i64> p1 = primitive_cycle(c1.cycle), p2 = primitive_cycle(c2.cycle);
    if (p1.size() != p2.size()) return false;
    return rotated(p1, min_rotation_index(p1)) == rotated(p2, min_rotation_index(p2));
}

namespace {

// Matrix sending the tail value after h coefficients back to x:
// x = (p_{h-1} t + p_{h-2}) / (q_{h-1} t + q_{h-2}).
IntMat2 convergent_matrix(const std::vector<i64>& coeffs, size_t h) {
    i64 p1 = 1, p0 = 0;  // p_{k-1}, p_{k-2}
    i64 q1 = 0, q0 = 1;
    for (size_t k = 0; k < h; ++k) {
        i64 p = checked(static_cast<i128>(coeffs[k]) * p1 + p0);
        i64 q = checked(static_cast<i128>(coeffs[k]) * q1 + q0);
        p0 = p1;
        p1 = p;
        q0 = q1;
        q1 = q;
    }
    return IntMat2{p1, p0, q1, q0};
}

}  // namespace

std::optional<IntMat2> quad_orbit_witness(const QuadIrrational& x1, const QuadIrrational& x2) {
    if (!quad_equivalent(x1, x2)) return std::nullopt;
    QuadCf c1 = quad_cf(x1), c2 = quad_cf(x2);
    std::vector<i64> p1 = primitive_cycle(c1.cycle), p2 = primitive_cycle(c2.cycle);
    size_t h1 = c1.pre.size() + min_rotation_index(p1);
    size_t h2 = c2.pre.size() + min_rotation_index(p2);
    std::vector<i64> s1 = c1.pre, s2 = c2.pre;
    s1.insert(s1.end(), c1.cycle.begin(), c1.cycle.end());
    s2.insert(s2.end(), c2.cycle.begin(), c2.cycle.end());
    IntMat2 m1 = convergent_matrix(s1, h1);
    IntMat2 m2 = convergent_matrix(s2, h2);
    IntMat2 g = m2 * m1.inverse_unimodular();
    if (mobius(g, x1) != x2) throw Error("quadratic orbit witness replay failed");
    return g;
}

}  // namespace nctori
