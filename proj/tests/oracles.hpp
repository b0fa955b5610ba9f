#pragma once

// Independent reference implementations used only by the test suites. These
// deliberately avoid the library's code paths so that derived expected values
// are computed twice, by different routes.

#include <complex>
#include <optional>
#include <vector>

#include "nctori/intmat.hpp"
#include "nctori/rational.hpp"

namespace oracle {

using nctori::i64;
using nctori::IntMat2;
using nctori::Mat2Q;
using nctori::Rational;

// Plain Euclidean-algorithm continued fraction of p/q, q > 0.
inline std::vector<i64> euclid_cf(i64 p, i64 q) {
    std::vector<i64> out;
    // floor division first step, then positive remainders throughout
    i64 a0 = p >= 0 ? p / q : -((-p + q - 1) / q);
    out.push_back(a0);
    i64 num = p - a0 * q;
    i64 den = q;
    while (num != 0) {
        out.push_back(den / num);
        i64 t = den % num;
        den = num;
        num = t;
    }
    return out;
}

// Bottom-up exact evaluation of [a0; a1, ..., an].
inline Rational cf_value(const std::vector<i64>& a) {
    Rational v(a.back());
    for (size_t i = a.size() - 1; i-- > 0;) v = Rational(a[i]) + v.inverse();
    return v;
}

// Exhaustive search for a Smith form of a 2x2 integer matrix over unimodular
// matrices with small entries. Returns the diagonal if found.
inline std::optional<std::pair<i64, i64>> snf_small_search(const IntMat2& m, i64 bound) {
    std::vector<IntMat2> uni;
    for (i64 a = -bound; a <= bound; ++a)
        for (i64 b = -bound; b <= bound; ++b)
            for (i64 c = -bound; c <= bound; ++c)
                for (i64 d = -bound; d <= bound; ++d) {
                    IntMat2 g{a, b, c, d};
                    i64 dt = a * d - b * c;
                    if (dt == 1 || dt == -1) uni.push_back(g);
                }
    for (const auto& u : uni)
        for (const auto& v : uni) {
            IntMat2 r = u * m * v;
            if (r.b == 0 && r.c == 0 && r.a >= 0 && r.d >= 0 &&
                (r.a == 0 ? r.d == 0 : r.d % r.a == 0))
                return std::make_pair(r.a, r.d);
        }
    return std::nullopt;
}

// The Moebius action through the 2x2 block formula (A*Theta + B)(C*Theta + D)^-1
// carried out in exact rational matrix arithmetic.
inline std::optional<Rational> block_mobius(const IntMat2& g, const Rational& theta) {
    Mat2Q A = Mat2Q::diag(Rational(g.a), Rational(g.a));
    Mat2Q B{Rational(0), Rational(g.b), Rational(-g.b), Rational(0)};
    Mat2Q C{Rational(0), Rational(-g.c), Rational(g.c), Rational(0)};
    Mat2Q D = Mat2Q::diag(Rational(g.d), Rational(g.d));
    Mat2Q Th = Mat2Q::skew(theta);
    Mat2Q den = C * Th + D;
    if (den.det().is_zero()) return std::nullopt;
    Mat2Q res = (A * Th + B) * den.inverse();
    // Expect skew form [[0, t'], [-t', 0]].
    if (!res.a.is_zero() || !res.d.is_zero() || res.b != -res.c) return std::nullopt;
    return res.b;
}

// Closed-form overlap of two unnormalized grid Gaussians with a common real
// width: the R-integral in closed form, the Z_c sum evaluated directly.
//   f_i(p,q) = exp(-pi((p-x_i)/w)^2) e(p y_i) e(q l_i/c) env(q - k_i)
// with env the periodic bump of width c/2 used by the factory (1 when c=1).
inline std::complex<double> gaussian_overlap(double w, int c, double x1, double y1, long long k1,
                                             long long l1, double x2, double y2, long long k2,
                                             long long l2) {
    double yd = y1 - y2;
    double xm = 0.5 * (x1 + x2);
    double dx = x1 - x2;
    double mag = (w / std::sqrt(2.0)) * std::exp(-M_PI * dx * dx / (2.0 * w * w)) *
                 std::exp(-M_PI * w * w * yd * yd / 2.0);
    std::complex<double> rpart =
        mag * std::complex<double>{std::cos(2 * M_PI * xm * yd), std::sin(2 * M_PI * xm * yd)};
    auto env = [&](long long q, long long k) {
        if (c == 1) return 1.0;
        double wc = c / 2.0;
        double s = 0;
        for (int n = -3; n <= 3; ++n) {
            double r = (static_cast<double>(q - k) + n * c) / wc;
            s += std::exp(-M_PI * r * r);
        }
        return s;
    };
    std::complex<double> dpart{};
    for (long long q = 0; q < c; ++q) {
        double t = 2 * M_PI * static_cast<double>(q) * static_cast<double>(l1 - l2) / c;
        dpart += env(q, k1) * env(q, k2) * std::complex<double>{std::cos(t), std::sin(t)};
    }
    dpart /= std::sqrt(static_cast<double>(c));
    return rpart * dpart;
}

}  // namespace oracle
