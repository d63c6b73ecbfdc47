#include "cgc/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>
#include <boost/math/special_functions/ellint_rj.hpp>

#include "cgc/error.hpp"

namespace cgc::elliptic {

namespace {

constexpr double kSnap = 1e-12;
constexpr double kPoleTol = 1e-13;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
        throw DomainError(std::string(what) + " must be finite");
}

void require_standard(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("modulus p = " + std::to_string(p) + " outside [0,1]");
}

double snap(double p)
{
    if (p < kSnap)
        return 0.0;
    if (std::abs(p - 1.0) < kSnap)
        return 1.0;
    return p;
}

double complement(double p) { return std::sqrt((1.0 - p) * (1.0 + p)); }

// Descending Landen / AGM sequence starting from (1, q, p).
struct Agm {
    static constexpr int kMax = 32;
    std::array<double, kMax> a{}, c{};
    int n = 0;
    double quarter = kInf;  // F_p
};

Agm agm_sequence(double p)
{
    Agm g;
    double a = 1.0, b = complement(p), c = p;
    g.a[0] = a;
    g.c[0] = c;
    const double eps = std::numeric_limits<double>::epsilon();
    while (std::abs(c) > eps * a && g.n + 1 < Agm::kMax) {
        const double an = 0.5 * (a + b);
        const double bn = std::sqrt(a * b);
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        ++g.n;
        g.a[g.n] = a;
        g.c[g.n] = c;
    }
    g.quarter = kPi / (2.0 * a);
    return g;
}

JacobiEval jacobi_snapped(double s, double p)
{
    if (p == 0.0)
        return {std::sin(s), std::cos(s), 1.0, s};
    if (p == 1.0) {
        const double sech = 1.0 / std::cosh(s);
        return {std::tanh(s), sech, sech, std::atan(std::sinh(s))};
    }
    const Agm g = agm_sequence(p);
    const double half_period = 2.0 * g.quarter;
    // am(u + 2F) = am(u) + pi
    const double m = std::nearbyint(s / half_period);
    const double u = s - m * half_period;
    double phi = std::ldexp(g.a[g.n] * u, g.n);
    for (int i = g.n; i >= 1; --i)
        phi = 0.5 * (phi + std::asin(g.c[i] / g.a[i] * std::sin(phi)));
    const double sgn = (static_cast<long long>(m) % 2 == 0) ? 1.0 : -1.0;
    const double sn = std::sin(phi), cn = std::cos(phi);
    const double q = complement(p);
    const double dn = std::sqrt(q * q + p * p * cn * cn);
    return {sgn * sn, sgn * cn, dn, phi + m * kPi};
}

struct Triple {
    double sn, cn, dn;
};

double pick(const Triple& t, char letter)
{
    switch (letter) {
    case 's': return t.sn;
    case 'c': return t.cn;
    case 'd': return t.dn;
    default: return 1.0;
    }
}

constexpr std::array<const char*, 12> kRatioNames = {"sn", "cn", "dn", "sc", "cd", "dc",
                                                     "nc", "nd", "sd", "ns", "cs", "ds"};

// nearest zero of sn (even) or cn (odd) in multiples of the quarter period
double nearest_zero(double u, double quarter, bool odd)
{
    if (!std::isfinite(quarter))
        return odd ? kInf : 0.0;
    const double shift = odd ? quarter : 0.0;
    const double m = std::nearbyint((u - shift) / (2.0 * quarter));
    return shift + 2.0 * quarter * m;
}

void check_pole(double u, double quarter, bool odd, double scale, Ratio name)
{
    const double u0 = nearest_zero(u, quarter, odd);
    if (!std::isfinite(u0))
        return;
    if (std::abs(u - u0) <= kPoleTol * std::max(1.0, std::abs(u0)))
        throw PoleError(std::string("pole of ") + to_string(name), u0 / scale);
}

double legendre_complete_pi(double k, double p)
{
    const double q = complement(p);
    return boost::math::ellint_rf(0.0, q * q, 1.0) +
           k / 3.0 * boost::math::ellint_rj(0.0, q * q, 1.0, 1.0 - k);
}

}  // namespace

Modulus::Modulus(double p, ModulusRegime r) : p_(p), q_(0.0), regime_(r) {}

Modulus::Modulus(double p) : p_(0.0), q_(1.0), regime_(ModulusRegime::standard)
{
    require_finite(p, "modulus");
    p = snap(std::abs(p));
    if (p > 1.0) {
        p_ = p;
        q_ = 0.0;
        regime_ = ModulusRegime::reciprocal;
        return;
    }
    p_ = p;
    q_ = complement(p);
}

Modulus Modulus::imaginary(double magnitude)
{
    require_finite(magnitude, "modulus");
    magnitude = std::abs(magnitude);
    if (magnitude < kSnap)
        return Modulus(0.0);
    return Modulus(magnitude, ModulusRegime::imaginary);
}

double Modulus::p_prime() const noexcept { return p_ / std::hypot(1.0, p_); }
double Modulus::q_prime() const noexcept { return 1.0 / std::hypot(1.0, p_); }

Ratio parse_ratio(std::string_view name)
{
    for (std::size_t i = 0; i < kRatioNames.size(); ++i)
        if (name == kRatioNames[i])
            return static_cast<Ratio>(i);
    throw DomainError("unknown Jacobi function '" + std::string(name) +
                      "' (expected one of sn cn dn sc cd dc nc nd sd ns cs ds)");
}

const char* to_string(Ratio r) { return kRatioNames[static_cast<std::size_t>(r)]; }

JacobiEval jacobi(double s, double p)
{
    require_finite(s, "argument s");
    require_finite(p, "modulus");
    require_standard(p);
    return jacobi_snapped(s, snap(p));
}

JacobiEval jacobi(double s, const Modulus& m)
{
    if (m.regime() != ModulusRegime::standard)
        throw DomainError("jacobi() needs a modulus in [0,1]; use jacobi_general");
    return jacobi(s, m.p());
}

double jacobi_general(double s, const Modulus& m, Ratio name)
{
    require_finite(s, "argument s");
    double pb = m.p(), scale = 1.0;
    switch (m.regime()) {
    case ModulusRegime::standard: break;
    case ModulusRegime::reciprocal:
        scale = m.p();
        pb = 1.0 / m.p();
        break;
    case ModulusRegime::imaginary:
        scale = std::hypot(1.0, m.p());
        pb = m.p_prime();
        break;
    }
    pb = snap(pb);
    const double u = s * scale;
    const JacobiEval b = jacobi_snapped(u, pb);

    Triple t{};
    // which base zero each target function inherits: 0 none, 1 sn-type, 2 cn-type
    int zero_c = 0, zero_d = 0;
    switch (m.regime()) {
    case ModulusRegime::standard:
        t = {b.sn, b.cn, b.dn};
        zero_c = 2;
        break;
    case ModulusRegime::reciprocal:
        t = {pb * b.sn, b.dn, b.cn};
        zero_d = 2;
        break;
    case ModulusRegime::imaginary:
        t = {m.q_prime() * b.sn / b.dn, b.cn / b.dn, 1.0 / b.dn};
        zero_c = 2;
        break;
    }

    const char* code = to_string(name);
    const char num = code[0], den = code[1];
    if (den != 'n') {
        const int zt = den == 's' ? 1 : den == 'c' ? zero_c : zero_d;
        if (zt != 0) {
            const double quarter = pb == 1.0 ? kInf : agm_sequence(pb).quarter;
            check_pole(u, quarter, zt == 2, scale, name);
        }
    }
    if (num == 'n')
        return 1.0 / pick(t, den);
    return pick(t, num) / pick(t, den);
}

ImagValue jacobi_imaginary_argument(double s, const Modulus& m, Ratio name)
{
    require_finite(s, "argument s");
    if (m.regime() != ModulusRegime::standard)
        throw DomainError("imaginary argument transformation needs a modulus in [0,1]");
    const double q = snap(m.q());
    const JacobiEval j = jacobi_snapped(s, q);
    const double S = j.sn, C = j.cn, D = j.dn;
    const double quarter = q == 1.0 ? kInf : agm_sequence(q).quarter;

    auto pole_c = [&] { check_pole(s, quarter, true, 1.0, name); };
    auto pole_s = [&] { check_pole(s, quarter, false, 1.0, name); };
    switch (name) {
    case Ratio::sn: pole_c(); return {S / C, true};
    case Ratio::cn: pole_c(); return {1.0 / C, false};
    case Ratio::dn: pole_c(); return {D / C, false};
    case Ratio::sc: return {S, true};
    case Ratio::cd: return {1.0 / D, false};
    case Ratio::dc: return {D, false};
    case Ratio::nc: return {C, false};
    case Ratio::nd: return {C / D, false};
    case Ratio::sd: return {S / D, true};
    case Ratio::ns: pole_s(); return {-C / S, true};
    case Ratio::cs: pole_s(); return {-1.0 / S, true};
    case Ratio::ds: pole_s(); return {-D / S, true};
    }
    return {0.0, false};
}

double complete_F(double p)
{
    require_finite(p, "modulus");
    require_standard(p);
    p = snap(p);
    if (p == 1.0)
        throw DivergenceError("complete integral F_p diverges at p = 1");
    return agm_sequence(p).quarter;
}

double complete_E(double p)
{
    require_finite(p, "modulus");
    require_standard(p);
    p = snap(p);
    if (p == 1.0)
        return 1.0;
    if (p == 0.0)
        return kPi / 2.0;
    const double q = complement(p);
    return boost::math::ellint_rf(0.0, q * q, 1.0) -
           p * p / 3.0 * boost::math::ellint_rd(0.0, q * q, 1.0);
}

double complete_Pi(double k, double p)
{
    require_finite(k, "characteristic");
    require_finite(p, "modulus");
    require_standard(p);
    if (k >= 1.0)
        throw DomainError("characteristic k = " + std::to_string(k) +
                          " out of range: complete Pi needs k < 1");
    p = snap(p);
    if (p == 1.0)
        throw DivergenceError("complete integral Pi^k_p diverges at p = 1");
    if (k == 0.0)
        return complete_F(p);
    return legendre_complete_pi(k, p);
}

namespace detail {

double F_angle(double phi, double p)
{
    require_finite(phi, "amplitude");
    require_standard(p);
    p = snap(p);
    const double m = std::nearbyint(phi / kPi);
    const double t = phi - m * kPi;
    const double sn = std::sin(t), cn = std::cos(t);
    const double q = complement(p);
    double v = sn * boost::math::ellint_rf(cn * cn, cn * cn + q * q * sn * sn, 1.0);
    if (m != 0.0)
        v += 2.0 * m * complete_F(p);
    return v;
}

double E_angle(double phi, double p)
{
    require_finite(phi, "amplitude");
    require_standard(p);
    p = snap(p);
    const double m = std::nearbyint(phi / kPi);
    const double t = phi - m * kPi;
    const double sn = std::sin(t), cn = std::cos(t);
    const double q = complement(p);
    const double x = cn * cn, y = cn * cn + q * q * sn * sn;
    double v = sn * boost::math::ellint_rf(x, y, 1.0);
    if (p != 0.0)
        v -= p * p / 3.0 * sn * sn * sn * boost::math::ellint_rd(x, y, 1.0);
    if (m != 0.0)
        v += 2.0 * m * complete_E(p);
    return v;
}

double Pi_angle(double k, double phi, double p)
{
    require_finite(phi, "amplitude");
    require_finite(k, "characteristic");
    require_standard(p);
    p = snap(p);
    if (k >= 1.0) {
        const double crit = std::asin(1.0 / std::sqrt(k));
        if (std::abs(phi) >= crit * (1.0 - 1e-15))
            throw PoleError("integrand pole of Pi crossed", std::copysign(crit, phi));
    }
    const double m = std::nearbyint(phi / kPi);
    const double t = phi - m * kPi;
    const double sn = std::sin(t), cn = std::cos(t);
    const double q = complement(p);
    const double x = cn * cn, y = cn * cn + q * q * sn * sn;
    double v = sn * boost::math::ellint_rf(x, y, 1.0);
    if (k != 0.0) {
        const double w = cn * cn + (1.0 - k) * sn * sn;
        v += k / 3.0 * sn * sn * sn * boost::math::ellint_rj(x, y, 1.0, w);
    }
    if (m != 0.0)
        v += 2.0 * m * complete_Pi(k, p);
    return v;
}

}  // namespace detail

double incomplete_F(double s, double p) { return detail::F_angle(jacobi(s, p).am, p); }

double incomplete_E(double s, double p) { return detail::E_angle(jacobi(s, p).am, p); }

double incomplete_Pi(double k, double p, double s)
{
    const JacobiEval j = jacobi(s, p);
    try {
        return detail::Pi_angle(k, j.am, p);
    } catch (const PoleError& e) {
        // report the crossing in the Jacobi argument
        throw PoleError(e.what(), detail::F_angle(e.where(), snap(p)));
    }
}

double pi_reciprocal_modulus(double k, double P, double a, double s)
{
    require_finite(P, "modulus");
    if (!(P > 1.0))
        throw DomainError("reciprocal-modulus transform needs P > 1");
    const double p = 1.0 / P;
    return p * incomplete_Pi(k * p * p, p, a * s / p);
}

ImagValue pi_imaginary_argument(double k, double p, double a, double s)
{
    require_finite(k, "characteristic");
    require_standard(p);
    if (a == 0.0)
        throw DomainError("imaginary-argument transform needs a != 0");
    p = snap(p);
    const double q = complement(p);
    const double v = a * s;
    if (std::abs(k - 1.0) < 1e-14) {
        if (p == 1.0)  // integrand cos^2
            return {0.5 * (v + std::sin(v) * std::cos(v)), true};
        return {(incomplete_E(v, q) - p * p * v) / (q * q), true};
    }
    try {
        return {(v - k * incomplete_Pi(1.0 - k, q, v)) / (1.0 - k), true};
    } catch (const PoleError& e) {
        throw PoleError(e.what(), e.where() / a);
    }
}

double pi_imaginary_modulus(double k, double P, double a, double s)
{
    require_finite(P, "modulus");
    require_finite(k, "characteristic");
    if (a == 0.0)
        throw DomainError("imaginary-modulus transform needs a != 0");
    const Modulus m = Modulus::imaginary(P);
    if (m.regime() == ModulusRegime::standard)  // P snapped to 0
        return incomplete_Pi(k, 0.0, a * s);
    const double pp = m.p_prime(), qq = m.q_prime();
    const double x = a * s;
    const double kk = pp * pp + k * qq * qq;
    if (std::abs(kk) < 1e-14)
        return qq * incomplete_E(x / qq, pp);
    try {
        return pp * pp / kk * x + k * qq * qq * qq / kk * incomplete_Pi(kk, pp, x / qq);
    } catch (const PoleError& e) {
        throw PoleError(e.what(), e.where() * qq);
    }
}

}  // namespace cgc::elliptic

namespace cgc {

const char* to_string(GeometricLimit g)
{
    switch (g) {
    case GeometricLimit::point: return "point";
    case GeometricLimit::geodesic: return "geodesic";
    case GeometricLimit::clifford_torus: return "clifford torus";
    case GeometricLimit::ideal_boundary: return "ideal boundary";
    }
    return "?";
}

}  // namespace cgc
