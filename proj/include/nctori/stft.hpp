#pragma once

#include "nctori/grid.hpp"

namespace nctori {

// Sampled short-time Fourier transform V_g f on the phase-space grid
// (x_a, y_n, k, l): x on the spatial grid, y on the dual grid with spacing
// 1/(N*delta) centred at 0, k and l in 0..c-1. Stored as a flat 4-index
// array of size N*N*c*c; mind the memory for large N.
// Dual-grid point y_n = (2n - N)/(2 N delta).
Rational stft_y_point(const GridSpec& spec, i64 n);

struct StftArray {
    GridSpec spec;
    std::vector<cplx> v;

    explicit StftArray(const GridSpec& s)
        : spec(s),
          v(static_cast<size_t>(s.samples()) * s.samples() * s.c() * s.c()) {}

    Rational y_point(i64 n) const { return stft_y_point(spec, n); }
    cplx& at(i64 a, i64 n, int k, int l) {
        return v[((static_cast<size_t>(a) * spec.samples() + n) * spec.c() + k) * spec.c() + l];
    }
    const cplx& at(i64 a, i64 n, int k, int l) const {
        return v[((static_cast<size_t>(a) * spec.samples() + n) * spec.c() + k) * spec.c() + l];
    }
    // Phase-space measure: delta * 1/(N*delta) * c^{-1/2} * c^{-1/2}.
    double weight() const {
        return 1.0 / (static_cast<double>(spec.samples()) * spec.c());
    }
    double norm() const;
};

// Full transform via the partial-Fourier factorization V_g f = F2 Ta (f (x) conj g).
StftArray stft(const GridFunction& g, const GridFunction& f);

// Single sample by the direct double sum (independent evaluation path).
cplx stft_direct_at(const GridFunction& g, const GridFunction& f, i64 a, i64 n, int k, int l);

// | <V_g1 f1, V_g2 f2> - <f1,f2> conj(<g1,g2>) |.
double parseval_residual(const GridFunction& f1, const GridFunction& f2, const GridFunction& g1,
                         const GridFunction& g2);

}  // namespace nctori
