#include "nctori/grid.hpp"

#include <cmath>
#include <sstream>

#include "nctori/errors.hpp"

namespace nctori {

GridSpec::GridSpec(const Rational& theta, int c, int refine, int samples)
    : theta_(theta), c_(c), refine_(refine), samples_(samples) {
    if (c_ < 1) throw ConfigError("c must be >= 1");
    if (refine_ < 1) throw ConfigError("refine must be >= 1");
    if (samples_ < 2 || samples_ % 2 != 0) throw ConfigError("sample count must be even and >= 2");
    Rational ct1 = Rational(c_) * theta_ + Rational(1);
    if (ct1.is_zero()) throw PoleError("theta = -1/c");
    if (ct1.sign() < 0) throw ConfigError("c*theta + 1 must be positive for the grid");
    delta_ = Rational(1, static_cast<i64>(c_) * theta_.den() * refine_);
    half_ = Rational(samples_) * delta_ / Rational(2);
}

Rational GridSpec::theta_tilde() const {
    return (Rational(c_) * theta_ + Rational(1)) / Rational(c_);
}

Rational GridSpec::theta_prime() const {
    return theta_ / (Rational(c_) * theta_ + Rational(1));
}

i64 GridSpec::steps_of(const Rational& x) const {
    Rational s = x / delta_;
    if (!s.is_integer()) throw OffGridTranslation("translation " + x.str() + " is off the grid");
    return s.num();
}

GridFunction::GridFunction(const GridSpec& spec)
    : spec_(spec), s_(static_cast<size_t>(spec.samples()) * spec.c()) {}

double GridFunction::weight() const {
    return spec_.delta().to_double() / std::sqrt(static_cast<double>(spec_.c()));
}

double GridFunction::norm() const {
    double acc = 0;
    for (const cplx& z : s_) acc += std::norm(z);
    return std::sqrt(acc * weight());
}

double GridFunction::boundary_mag() const {
    double m = 0;
    for (int q = 0; q < spec_.c(); ++q) {
        m = std::max(m, std::abs(at(0, q)));
        m = std::max(m, std::abs(at(spec_.samples() - 1, q)));
    }
    return m;
}

void GridFunction::scale(cplx a) {
    for (cplx& z : s_) z *= a;
}

void GridFunction::normalize() {
    double n = norm();
    if (n == 0) throw Error("cannot normalize the zero function");
    scale(cplx{1.0 / n, 0.0});
}

std::string GridFunction::dump() const {
    std::ostringstream os;
    os.precision(17);
    os << "# " << spec_.samples() << " " << spec_.c() << " " << spec_.delta().to_double() << " "
       << spec_.halfwidth().to_double() << "\n";
    for (i64 j = 0; j < spec_.samples(); ++j)
        for (int q = 0; q < spec_.c(); ++q) {
            const cplx& z = at(j, q);
            os << j << " " << q << " " << z.real() << " " << z.imag() << "\n";
        }
    return os.str();
}

GridFunction GridFunction::parse_dump(const std::string& text, const GridSpec& spec) {
    std::istringstream is(text);
    std::string header;
    std::getline(is, header);
    GridFunction f(spec);
    i64 j;
    int q;
    double re, im;
    while (is >> j >> q >> re >> im) {
        if (j < 0 || j >= spec.samples() || q < 0 || q >= spec.c())
            throw ParseError("sample index out of range in dump");
        f.at(j, q) = {re, im};
    }
    return f;
}

cplx inner(const GridFunction& f, const GridFunction& g) {
    if (f.spec() != g.spec()) throw SpecMismatch("inner product across different grids");
    cplx acc{};
    const auto& a = f.samples();
    const auto& b = g.samples();
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc * f.weight();
}

double dist(const GridFunction& f, const GridFunction& g) {
    if (f.spec() != g.spec()) throw SpecMismatch("distance across different grids");
    double acc = 0;
    for (size_t i = 0; i < f.samples().size(); ++i) acc += std::norm(f.samples()[i] - g.samples()[i]);
    return std::sqrt(acc * f.weight());
}

GridFunction sub(const GridFunction& f, const GridFunction& g) {
    if (f.spec() != g.spec()) throw SpecMismatch("subtraction across different grids");
    GridFunction r = f;
    for (size_t i = 0; i < r.samples().size(); ++i) r.samples()[i] -= g.samples()[i];
    return r;
}

GridFunction add_scaled(const GridFunction& f, cplx a, const GridFunction& g) {
    if (f.spec() != g.spec()) throw SpecMismatch("addition across different grids");
    GridFunction r = f;
    for (size_t i = 0; i < r.samples().size(); ++i) r.samples()[i] += a * g.samples()[i];
    return r;
}

GridFunction make_gaussian(const GridSpec& spec, const Rational& x0, i64 k0, double width,
                           const Rational& y0, i64 l0, bool normalized) {
    if (width <= 0) throw ConfigError("gaussian width must be positive");
    GridFunction f(spec);
    const int c = spec.c();
    // Periodic discrete bump on Z_c; constant when c = 1.
    std::vector<double> env(static_cast<size_t>(c), 1.0);
    if (c > 1) {
        double wc = c / 2.0;
        for (int q = 0; q < c; ++q) {
            double s = 0;
            for (int n = -3; n <= 3; ++n) {
                double r = (static_cast<double>(q - k0) + n * c) / wc;
                s += std::exp(-M_PI * r * r);
            }
            env[static_cast<size_t>(q)] = s;
        }
    }
    for (i64 j = 0; j < spec.samples(); ++j) {
        Rational p = spec.point(j);
        double dx = (p - x0).to_double() / width;
        double mag = std::exp(-M_PI * dx * dx);
        cplx mod = unit_phase(p * y0);
        for (int q = 0; q < c; ++q)
            f.at(j, q) = mag * env[static_cast<size_t>(q)] * mod *
                         unit_phase(Rational(q * l0, c));
    }
    if (normalized) f.normalize();
    return f;
}

}  // namespace nctori
