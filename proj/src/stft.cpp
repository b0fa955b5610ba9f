#include "nctori/stft.hpp"

#include <cmath>

#include "nctori/errors.hpp"

namespace nctori {

Rational stft_y_point(const GridSpec& spec, i64 n) {
    return Rational(2 * n - spec.samples()) / (Rational(2 * spec.samples()) * spec.delta());
}

double StftArray::norm() const {
    double acc = 0;
    for (const cplx& z : v) acc += std::norm(z);
    return std::sqrt(acc * weight());
}

StftArray stft(const GridFunction& g, const GridFunction& f) {
    if (f.spec() != g.spec()) throw SpecMismatch("stft inputs on different grids");
    const GridSpec& spec = f.spec();
    const i64 N = spec.samples();
    const int c = spec.c();
    const double delta = spec.delta().to_double();
    const double cs = 1.0 / std::sqrt(static_cast<double>(c));

    // e(-p_j y_n) = e(-(2j-N)(2n-N)/(4N)), transposed to [n][j].
    const i64 D = 4 * N;
    std::vector<cplx> tab(static_cast<size_t>(D));
    for (i64 u = 0; u < D; ++u) tab[static_cast<size_t>(u)] = unit_phase(Rational(u, D));
    std::vector<cplx> E(static_cast<size_t>(N) * N);
    for (i64 n = 0; n < N; ++n)
        for (i64 j = 0; j < N; ++j) {
            i64 u = (((-(2 * j - N) * (2 * n - N)) % D) + D) % D;
            E[static_cast<size_t>(n * N + j)] = tab[static_cast<size_t>(u)];
        }

    StftArray out(spec);
    std::vector<cplx> bar(static_cast<size_t>(N) * c);
    std::vector<cplx> dftc(static_cast<size_t>(c) * c);
    for (int q = 0; q < c; ++q)
        for (int l = 0; l < c; ++l)
            dftc[static_cast<size_t>(q * c + l)] = unit_phase(Rational(-q * l, c));

    for (i64 a = 0; a < N; ++a) {
        i64 sa = a - N / 2;  // x_a / delta
        for (int k = 0; k < c; ++k) {
            // bar(j, l) = c^{-1/2} sum_q f(j,q) conj(g(j-sa, q-k)) e(-q l/c)
            for (i64 j = 0; j < N; ++j) {
                i64 src = j - sa;
                for (int l = 0; l < c; ++l) bar[static_cast<size_t>(j * c + l)] = cplx{};
                if (src < 0 || src >= N) continue;
                for (int q = 0; q < c; ++q) {
                    int gq = (((q - k) % c) + c) % c;
                    cplx h = f.at(j, q) * std::conj(g.at(src, gq));
                    if (h == cplx{}) continue;
                    for (int l = 0; l < c; ++l)
                        bar[static_cast<size_t>(j * c + l)] += h * dftc[static_cast<size_t>(q * c + l)];
                }
            }
            for (i64 n = 0; n < N; ++n) {
                const cplx* row = &E[static_cast<size_t>(n * N)];
                for (int l = 0; l < c; ++l) {
                    cplx acc{};
                    for (i64 j = 0; j < N; ++j) acc += row[j] * bar[static_cast<size_t>(j * c + l)];
                    out.at(a, n, k, l) = acc * (delta * cs);
                }
            }
        }
    }
    return out;
}

cplx stft_direct_at(const GridFunction& g, const GridFunction& f, i64 a, i64 n, int k, int l) {
    if (f.spec() != g.spec()) throw SpecMismatch("stft inputs on different grids");
    const GridSpec& spec = f.spec();
    const i64 N = spec.samples();
    const int c = spec.c();
    Rational yn = stft_y_point(spec, n);
    i64 sa = a - N / 2;
    cplx acc{};
    for (i64 j = 0; j < N; ++j) {
        i64 src = j - sa;
        if (src < 0 || src >= N) continue;
        Rational tj = -(spec.point(j) * yn);
        for (int q = 0; q < c; ++q) {
            int gq = (((q - k) % c) + c) % c;
            acc += f.at(j, q) * std::conj(g.at(src, gq)) *
                   unit_phase(tj + Rational(-q * l, c));
        }
    }
    return acc * (spec.delta().to_double() / std::sqrt(static_cast<double>(c)));
}

double parseval_residual(const GridFunction& f1, const GridFunction& f2, const GridFunction& g1,
                         const GridFunction& g2) {
    StftArray v1 = stft(g1, f1);
    StftArray v2 = stft(g2, f2);
    cplx lhs{};
    for (size_t i = 0; i < v1.v.size(); ++i) lhs += v1.v[i] * std::conj(v2.v[i]);
    lhs *= v1.weight();
    cplx rhs = inner(f1, f2) * std::conj(inner(g1, g2));
    return std::abs(lhs - rhs);
}

}  // namespace nctori
