#pragma once

#include <array>
#include <string>
#include <vector>

#include "nctori/rational.hpp"

namespace nctori {

// 2x2 integer matrix [[a,b],[c,d]] with overflow-checked products.
struct IntMat2 {
    i64 a = 1, b = 0, c = 0, d = 1;

    static IntMat2 identity() { return {}; }

    i64 det() const;
    i64 trace() const { return a + d; }
    IntMat2 operator*(const IntMat2& o) const;
    IntMat2 operator+(const IntMat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    IntMat2 operator-(const IntMat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    bool operator==(const IntMat2& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator!=(const IntMat2& o) const { return !(*this == o); }

    IntMat2 transpose() const { return {a, c, b, d}; }
    // Inverse of a matrix with det = +/-1.
    IntMat2 inverse_unimodular() const;
    IntMat2 neg() const { return {-a, -b, -c, -d}; }
    std::array<i64, 2> apply(std::array<i64, 2> v) const {
        return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
    }
    i64 max_abs() const;
    std::string str() const;
};

// Fixed matrices: the order-i torus automorphism generators, the two
// SL(2,Z) generators, and the flip, in the usual conventions.
IntMat2 mat_w2();
IntMat2 mat_w3();
IntMat2 mat_w4();
IntMat2 mat_w6();
IntMat2 mat_j0();
IntMat2 mat_p();
IntMat2 mat_flip_l();

enum class Gen : unsigned char { J0, J0Inv, P, PInv };

const char* gen_name(Gen g);
IntMat2 gen_matrix(Gen g);
Gen gen_inverse(Gen g);

// A word over {J0, J0^-1, P, P^-1}; evaluates left to right as a matrix
// product.
struct GeneratorWord {
    std::vector<Gen> tokens;

    IntMat2 evaluate() const;
    GeneratorWord inverse() const;
    std::string str() const;
    static std::optional<GeneratorWord> parse(std::string_view s);
};

// 2x2 rational matrix, used for the exact symbolic checks.
struct Mat2Q {
    Rational a, b, c, d;

    static Mat2Q identity() { return {Rational(1), Rational(0), Rational(0), Rational(1)}; }
    static Mat2Q from_int(const IntMat2& m) {
        return {Rational(m.a), Rational(m.b), Rational(m.c), Rational(m.d)};
    }
    static Mat2Q diag(const Rational& x, const Rational& y) {
        return {x, Rational(0), Rational(0), y};
    }
    static Mat2Q skew(const Rational& t) { return {Rational(0), t, -t, Rational(0)}; }

    Rational det() const { return a * d - b * c; }
    Mat2Q operator*(const Mat2Q& o) const;
    Mat2Q operator+(const Mat2Q& o) const;
    Mat2Q operator-() const { return {-a, -b, -c, -d}; }
    bool operator==(const Mat2Q& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    Mat2Q transpose() const { return {a, c, b, d}; }
    Mat2Q inverse() const;
};

// 4x4 rational matrix.
struct Mat4Q {
    std::array<std::array<Rational, 4>, 4> m{};

    static Mat4Q identity();
    static Mat4Q block_diag(const Mat2Q& top, const Mat2Q& bottom);

    Mat4Q operator*(const Mat4Q& o) const;
    bool operator==(const Mat4Q& o) const;
    Mat4Q transpose() const;
    std::array<Rational, 4> apply(const std::array<Rational, 4>& v) const;
};

// 4x4 integer matrix (the SO(2,2|Z) embedding target).
struct IntMat4 {
    std::array<std::array<i64, 4>, 4> m{};

    static IntMat4 identity();
    IntMat4 operator*(const IntMat4& o) const;
    bool operator==(const IntMat4& o) const;
    IntMat4 transpose() const;
};

}  // namespace nctori
