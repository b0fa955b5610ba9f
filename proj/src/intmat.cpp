#include "nctori/intmat.hpp"

#include <limits>

#include "nctori/errors.hpp"

namespace nctori {

namespace {

i64 checked(i128 v) {
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
        throw OverflowError("integer matrix overflow");
    return static_cast<i64>(v);
}

i128 m128(i64 x, i64 y) { return static_cast<i128>(x) * y; }

}  // namespace

i64 IntMat2::det() const { return checked(m128(a, d) - m128(b, c)); }

IntMat2 IntMat2::operator*(const IntMat2& o) const {
    return {checked(m128(a, o.a) + m128(b, o.c)), checked(m128(a, o.b) + m128(b, o.d)),
            checked(m128(c, o.a) + m128(d, o.c)), checked(m128(c, o.b) + m128(d, o.d))};
}

IntMat2 IntMat2::inverse_unimodular() const {
    i64 dt = det();
    if (dt == 1) return {d, -b, -c, a};
    if (dt == -1) return {-d, b, c, -a};
    throw DetError("matrix is not unimodular");
}

i64 IntMat2::max_abs() const {
    i64 r = 0;
    for (i64 v : {a, b, c, d}) r = std::max(r, v < 0 ? -v : v);
    return r;
}

std::string IntMat2::str() const {
    return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
           std::to_string(d) + "]]";
}

IntMat2 mat_w2() { return {-1, 0, 0, -1}; }
IntMat2 mat_w3() { return {0, 1, -1, -1}; }
IntMat2 mat_w4() { return {0, 1, -1, 0}; }
IntMat2 mat_w6() { return {1, 1, -1, 0}; }
IntMat2 mat_j0() { return {0, 1, -1, 0}; }
IntMat2 mat_p() { return {1, 0, 1, 1}; }
IntMat2 mat_flip_l() { return {-1, 0, 0, 1}; }

const char* gen_name(Gen g) {
    switch (g) {
        case Gen::J0: return "J0";
        case Gen::J0Inv: return "J0inv";
        case Gen::P: return "P";
        case Gen::PInv: return "Pinv";
    }
    return "?";
}

IntMat2 gen_matrix(Gen g) {
    switch (g) {
        case Gen::J0: return mat_j0();
        case Gen::J0Inv: return mat_j0().inverse_unimodular();
        case Gen::P: return mat_p();
        case Gen::PInv: return mat_p().inverse_unimodular();
    }
    throw Error("bad generator token");
}

Gen gen_inverse(Gen g) {
    switch (g) {
        case Gen::J0: return Gen::J0Inv;
        case Gen::J0Inv: return Gen::J0;
        case Gen::P: return Gen::PInv;
        case Gen::PInv: return Gen::P;
    }
    throw Error("bad generator token");
}

IntMat2 GeneratorWord::evaluate() const {
    IntMat2 m = IntMat2::identity();
    for (Gen g : tokens) m = m * gen_matrix(g);
    return m;
}

GeneratorWord GeneratorWord::inverse() const {
    GeneratorWord w;
    w.tokens.reserve(tokens.size());
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) w.tokens.push_back(gen_inverse(*it));
    return w;
}

std::string GeneratorWord::str() const {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ' ';
        s += gen_name(tokens[i]);
    }
    return s;
}

std::optional<GeneratorWord> GeneratorWord::parse(std::string_view s) {
    GeneratorWord w;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && (s[i] == ' ' || s[i] == ',')) ++i;
    };
    skip_ws();
    while (i < s.size()) {
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != ',') ++j;
        std::string_view tok = s.substr(i, j - i);
        if (tok == "J0")
            w.tokens.push_back(Gen::J0);
        else if (tok == "J0inv" || tok == "J0^-1")
            w.tokens.push_back(Gen::J0Inv);
        else if (tok == "P")
            w.tokens.push_back(Gen::P);
        else if (tok == "Pinv" || tok == "P^-1")
            w.tokens.push_back(Gen::PInv);
        else
            return std::nullopt;
        i = j;
        skip_ws();
    }
    return w;
}

Mat2Q Mat2Q::operator*(const Mat2Q& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2Q Mat2Q::operator+(const Mat2Q& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
}

Mat2Q Mat2Q::inverse() const {
    Rational dt = det();
    if (dt.is_zero()) throw Error("singular 2x2 rational matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

Mat4Q Mat4Q::identity() {
    Mat4Q r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = Rational(1);
    return r;
}

Mat4Q Mat4Q::block_diag(const Mat2Q& top, const Mat2Q& bottom) {
    Mat4Q r;
    r.m[0][0] = top.a;
    r.m[0][1] = top.b;
    r.m[1][0] = top.c;
    r.m[1][1] = top.d;
    r.m[2][2] = bottom.a;
    r.m[2][3] = bottom.b;
    r.m[3][2] = bottom.c;
    r.m[3][3] = bottom.d;
    return r;
}

Mat4Q Mat4Q::operator*(const Mat4Q& o) const {
    Mat4Q r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Rational acc;
            for (int k = 0; k < 4; ++k) acc += m[i][k] * o.m[k][j];
            r.m[i][j] = acc;
        }
    return r;
}

bool Mat4Q::operator==(const Mat4Q& o) const {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (m[i][j] != o.m[i][j]) return false;
    return true;
}

Mat4Q Mat4Q::transpose() const {
    Mat4Q r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.m[i][j] = m[j][i];
    return r;
}

std::array<Rational, 4> Mat4Q::apply(const std::array<Rational, 4>& v) const {
    std::array<Rational, 4> r;
    for (int i = 0; i < 4; ++i) {
        Rational acc;
        for (int k = 0; k < 4; ++k) acc += m[i][k] * v[k];
        r[i] = acc;
    }
    return r;
}

IntMat4 IntMat4::identity() {
    IntMat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1;
    return r;
}

IntMat4 IntMat4::operator*(const IntMat4& o) const {
    IntMat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            i128 acc = 0;
            for (int k = 0; k < 4; ++k) acc += static_cast<i128>(m[i][k]) * o.m[k][j];
            r.m[i][j] = checked(acc);
        }
    return r;
}

bool IntMat4::operator==(const IntMat4& o) const { return m == o.m; }

IntMat4 IntMat4::transpose() const {
    IntMat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.m[i][j] = m[j][i];
    return r;
}

}  // namespace nctori
