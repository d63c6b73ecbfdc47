#include "cgc/profile.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cgc/error.hpp"
#include "cgc/format.hpp"

namespace cgc::profile {

using elliptic::Modulus;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr double kFlatTol = 1e-12;
// fraction of the pole-free half window F_p/A used for nc, sc and dc rows
constexpr double kPoleWindow = 0.9;

enum class Space { s3, h3e, h3h, h3p };

struct RowInfo {
    Row row;
    const char* name;
    const char* tag;
    Space space;
    Regime regime;
    FnType fn;
    ParamKind kind;
    const char* formula;
};

// clang-format off
constexpr std::array<RowInfo, kRowCount> kRows = {{
    {Row::s3_neg_cn, "s3-neg-cn", "cn", Space::s3, Regime::negative, FnType::cn, ParamKind::modulus, "r = amp cn(A s), psi from Pi"},
    {Row::s3_neg_dn, "s3-neg-dn", "dn", Space::s3, Regime::negative, FnType::dn, ParamKind::modulus, "r = amp dn(A s), psi from Pi"},
    {Row::s3_flat, "s3-flat", "flat", Space::s3, Regime::flat, FnType::trig, ParamKind::modulus, "r = sqrt(1-p^2) cos(p s), flat front"},
    {Row::s3_clifford, "s3-clifford", "clifford", Space::s3, Regime::flat, FnType::constant, ParamKind::radius, "r = r0 constant, Clifford torus"},
    {Row::s3_mix_cd1, "s3-mix-cd1", "cd1", Space::s3, Regime::mixed, FnType::cd, ParamKind::modulus, "r = amp cd(A s), first cd branch"},
    {Row::s3_mix_cd2, "s3-mix-cd2", "cd2", Space::s3, Regime::mixed, FnType::cd, ParamKind::modulus, "r = amp cd(A s), second cd branch"},
    {Row::s3_pos_cn, "s3-pos-cn", "cn", Space::s3, Regime::positive, FnType::cn, ParamKind::modulus, "r = amp cn(A s), psi from Pi"},
    {Row::s3_pos_dn, "s3-pos-dn", "dn", Space::s3, Regime::positive, FnType::dn, ParamKind::modulus, "r = amp dn(A s), psi from Pi"},
    {Row::h3e_neg_cn, "h3e-neg-cn", "cn", Space::h3e, Regime::negative, FnType::cn, ParamKind::modulus, "r = amp cn(A s)"},
    {Row::h3e_neg_dn, "h3e-neg-dn", "dn", Space::h3e, Regime::negative, FnType::dn, ParamKind::modulus, "r = amp dn(A s)"},
    {Row::h3e_mix_nc1, "h3e-mix-nc1", "nc1", Space::h3e, Regime::mixed, FnType::nc, ParamKind::modulus, "r = amp nc(A s), first nc branch"},
    {Row::h3e_mix_sc1, "h3e-mix-sc1", "sc1", Space::h3e, Regime::mixed, FnType::sc, ParamKind::modulus, "r = amp sc(A s), first sc branch"},
    {Row::h3e_mix_sc2, "h3e-mix-sc2", "sc2", Space::h3e, Regime::mixed, FnType::sc, ParamKind::modulus, "r = amp sc(A s), second sc branch"},
    {Row::h3e_mix_nc2, "h3e-mix-nc2", "nc2", Space::h3e, Regime::mixed, FnType::nc, ParamKind::modulus, "r = amp nc(A s), second nc branch"},
    {Row::h3e_snowman, "h3e-snowman", "snowman", Space::h3e, Regime::flat, FnType::hyperbolic, ParamKind::modulus, "r = sqrt(1-p^2)/p cosh(s/p), snowman front"},
    {Row::h3e_hourglass, "h3e-hourglass", "hourglass", Space::h3e, Regime::flat, FnType::hyperbolic, ParamKind::modulus, "r = sqrt(1-p^2) sinh(p s), hourglass front"},
    {Row::h3e_pos_cn, "h3e-pos-cn", "cn", Space::h3e, Regime::positive, FnType::cn, ParamKind::modulus, "r = amp cn(A s)"},
    {Row::h3e_pos_dn, "h3e-pos-dn", "dn", Space::h3e, Regime::positive, FnType::dn, ParamKind::modulus, "r = amp dn(A s)"},
    {Row::h3h_neg_dn, "h3h-neg-dn", "dn", Space::h3h, Regime::negative, FnType::dn, ParamKind::modulus, "r = amp dn(A s)"},
    {Row::h3h_mix_nc1, "h3h-mix-nc1", "nc1", Space::h3h, Regime::mixed, FnType::nc, ParamKind::modulus, "r = amp nc(A s), first nc branch"},
    {Row::h3h_mix_dc1, "h3h-mix-dc1", "dc1", Space::h3h, Regime::mixed, FnType::dc, ParamKind::modulus, "r = amp dc(A s), first dc branch"},
    {Row::h3h_mix_dc2, "h3h-mix-dc2", "dc2", Space::h3h, Regime::mixed, FnType::dc, ParamKind::modulus, "r = amp dc(A s), second dc branch"},
    {Row::h3h_mix_nc2, "h3h-mix-nc2", "nc2", Space::h3h, Regime::mixed, FnType::nc, ParamKind::modulus, "r = amp nc(A s), second nc branch"},
    {Row::h3h_peach, "h3h-peach", "peach", Space::h3h, Regime::flat, FnType::hyperbolic, ParamKind::modulus, "r = sqrt(1+p^2) cosh(p s), peach front"},
    {Row::h3h_pos_dn, "h3h-pos-dn", "dn", Space::h3h, Regime::positive, FnType::dn, ParamKind::modulus, "r = amp dn(A s)"},
    {Row::h3p_neg_dn, "h3p-neg-dn", "dn", Space::h3p, Regime::negative, FnType::dn, ParamKind::constant_C, "r = sqrt(C/K) dn(A s), p^2 = 1/(1-K)"},
    {Row::h3p_mix_nc1, "h3p-mix-nc1", "nc1", Space::h3p, Regime::mixed, FnType::nc, ParamKind::constant_C, "r = sqrt(C/(K-1)) nc(A s), C < 0"},
    {Row::h3p_mix_nc2, "h3p-mix-nc2", "nc2", Space::h3p, Regime::mixed, FnType::nc, ParamKind::constant_C, "r = sqrt(C/K) nc(A s), C > 0"},
    {Row::h3p_flat, "h3p-flat", "flat", Space::h3p, Regime::flat, FnType::hyperbolic, ParamKind::modulus, "r = p cosh(p s), flat front"},
    {Row::h3p_pos_dn, "h3p-pos-dn", "dn", Space::h3p, Regime::positive, FnType::dn, ParamKind::constant_C, "r = sqrt(C/(K-1)) dn(A s), p^2 = 1/K"},
}};
// clang-format on

const RowInfo& info(Row r) { return kRows[static_cast<std::size_t>(r)]; }

SpaceForm space_of(Space s)
{
    switch (s) {
    case Space::s3: return kS3;
    case Space::h3e: return kH3Elliptic;
    case Space::h3h: return kH3Hyperbolic;
    case Space::h3p: return kH3Parabolic;
    }
    return kS3;
}

Space space_kind(const SpaceForm& sf)
{
    if (sf.kappa() == 1)
        return Space::s3;
    if (sf.kappa() == -1) {
        switch (sf.rotation()) {
        case Rotation::elliptic: return Space::h3e;
        case Rotation::hyperbolic: return Space::h3h;
        case Rotation::parabolic: return Space::h3p;
        }
    }
    throw DomainError("closed-form profiles exist only in S^3 and H^3 (got " + sf.name() +
                      "); use integrate_ode for the Euclidean case");
}

Regime regime_of(int kappa, double K)
{
    if (!std::isfinite(K))
        throw DomainError("K must be finite");
    if (K == 0.0)
        throw DomainError("K = 0 is excluded (tubular surfaces)");
    const double Kk = K + kappa;
    if (std::abs(Kk) <= kFlatTol)
        return Regime::flat;
    if (K < 0 && Kk < 0)
        return Regime::negative;
    if (K > 0 && Kk > 0)
        return Regime::positive;
    return Regime::mixed;
}

Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
Interval open(double lo, double hi) { return {lo, hi, true, true}; }

Interval param_interval(Row row, double K)
{
    switch (row) {
    case Row::s3_flat:
    case Row::s3_clifford:
    case Row::h3e_snowman:
    case Row::h3e_hourglass: return open(0, 1);
    case Row::h3h_peach:
    case Row::h3p_flat:
    case Row::h3p_mix_nc2:
    case Row::h3p_pos_dn: return open(0, kInf);
    case Row::h3p_neg_dn:
    case Row::h3p_mix_nc1: return open(-kInf, 0);
    case Row::h3e_neg_dn: return closed(std::sqrt(1 / (1 - K)), 1);
    case Row::h3e_mix_nc1: return closed(std::sqrt(1 - K), 1);
    case Row::h3e_mix_nc2: return closed(std::sqrt(K), 1);
    case Row::h3e_pos_dn: return closed(std::sqrt(1 / K), 1);
    case Row::h3h_neg_dn: return closed(0, std::sqrt(1 / (1 - K)));
    case Row::h3h_mix_nc1: return closed(0, std::sqrt(K));
    case Row::h3h_mix_nc2: return closed(0, std::sqrt(1 - K));
    case Row::h3h_pos_dn: return closed(0, std::sqrt(1 / K));
    default: return closed(0, 1);
    }
}

// Fixed modulus of the parabolic rows.
double parabolic_modulus(Row row, double K)
{
    switch (row) {
    case Row::h3p_neg_dn: return std::sqrt(1 / (1 - K));
    case Row::h3p_mix_nc1: return std::sqrt(1 - K);
    case Row::h3p_mix_nc2: return std::sqrt(K);
    case Row::h3p_pos_dn: return 1 / std::sqrt(K);
    default: return 0;
    }
}

// C as a function of the row parameter.
double C_formula(Row row, double K, double p)
{
    const double p2 = p * p, q2 = (1 - p) * (1 + p);
    switch (row) {
    case Row::s3_neg_cn: return (K + 1) * (p2 - 1) / (p2 - (K + 1));
    case Row::s3_neg_dn: return (K + 1) * q2 / (1 - (K + 1) * p2);
    case Row::s3_flat: return p2;
    case Row::s3_clifford: return 0;
    case Row::s3_mix_cd1: return (K + 1) * p2 / ((K + 1) * p2 - K);
    case Row::s3_mix_cd2: return (K + 1) / (K + 1 - K * p2);
    case Row::s3_pos_cn: return (K + 1) * p2 / (K + p2);
    case Row::s3_pos_dn: return (K + 1) / (K * p2 + 1);
    case Row::h3e_neg_cn: return (1 - K) * q2 / (1 - K - p2);
    case Row::h3e_neg_dn: return -(1 - K) * q2 / ((1 - K) * p2 - 1);
    case Row::h3e_mix_nc1: return (K - 1) * q2 / (K - 1 + p2);
    case Row::h3e_mix_sc1: return (1 - K) * q2 / (1 - (1 - K) * p2);
    case Row::h3e_mix_sc2: return (1 - K) / (1 - K * p2);
    case Row::h3e_mix_nc2: return p2 * (1 - K) / (p2 - K);
    case Row::h3e_snowman: return 1 / p2;
    case Row::h3e_hourglass: return p2;
    case Row::h3e_pos_cn: return (K - 1) * p2 / (K - p2);
    case Row::h3e_pos_dn: return (K - 1) / (K * p2 - 1);
    case Row::h3h_neg_dn: return (1 - K) * q2 / (1 - (1 - K) * p2);
    case Row::h3h_mix_nc1: return -p2 * (1 - K) / (K - p2);
    case Row::h3h_mix_dc1: return p2 * (1 - K) / (K + p2 * (1 - K));
    case Row::h3h_mix_dc2: return (1 - K) / (1 - K * q2);
    case Row::h3h_mix_nc2: return (1 - K) * q2 / (1 - K - p2);
    case Row::h3h_peach: return -p2;
    case Row::h3h_pos_dn: return (1 - K) / (1 - K * p2);
    case Row::h3p_flat: return p2;
    default: return p;  // parabolic Jacobi rows are parametrised by C itself
    }
}

// p^2 as a function of C (inverse of C_formula).
double p2_formula(Row row, double K, double C)
{
    switch (row) {
    case Row::s3_neg_cn: return (K + 1) * (C - 1) / (C - (K + 1));
    case Row::s3_neg_dn: return ((K + 1) - C) / ((K + 1) * (1 - C));
    case Row::s3_flat: return C;
    case Row::s3_mix_cd1: return K * C / ((K + 1) * (C - 1));
    case Row::s3_mix_cd2: return (K + 1) * (C - 1) / (K * C);
    case Row::s3_pos_cn: return K * C / (K + 1 - C);
    case Row::s3_pos_dn: return (K + 1 - C) / (K * C);
    case Row::h3e_neg_cn:
    case Row::h3e_mix_nc1:
    case Row::h3h_mix_nc2: return (1 - K) * (C - 1) / (C - (1 - K));
    case Row::h3e_neg_dn: return (C - (1 - K)) / ((1 - K) * (C - 1));
    case Row::h3e_mix_sc1:
    case Row::h3h_neg_dn: return ((1 - K) - C) / ((1 - K) * (1 - C));
    case Row::h3e_mix_sc2:
    case Row::h3e_pos_dn:
    case Row::h3h_pos_dn: return (C - 1 + K) / (K * C);
    case Row::h3e_mix_nc2:
    case Row::h3h_mix_nc1: return K * C / (C - (1 - K));
    case Row::h3e_snowman: return 1 / C;
    case Row::h3e_hourglass: return C;
    case Row::h3e_pos_cn: return K * C / (K - 1 + C);
    case Row::h3h_mix_dc1: return K * C / ((1 - K) * (1 - C));
    case Row::h3h_mix_dc2: return (1 - K) * (1 - C) / (K * C);
    case Row::h3h_peach: return -C;
    case Row::h3p_flat: return C;
    default: return NAN;
    }
}

struct BoundInfo {
    Interval interval;
    std::string text;
};

BoundInfo bound_info(const SpaceForm& space, double K)
{
    const Regime reg = regime_of(space.kappa(), K);
    const Space sp = space_kind(space);
    const Interval all = open(-kInf, kInf);
    switch (sp) {
    case Space::s3:
        switch (reg) {
        case Regime::positive: return {closed(0, K + 1), "0 <= C <= K+1"};
        case Regime::negative: return {closed(K + 1, 1), "K+1 <= C <= 1"};
        case Regime::mixed: return {closed(0, 1), "0 <= C <= 1"};
        case Regime::flat: return {{0, 1, false, true}, "0 <= C < 1"};
        }
        break;
    case Space::h3e:
        switch (reg) {
        case Regime::positive: return {{0, kInf, false, true}, "C >= 0"};
        case Regime::negative: return {{-kInf, 1, true, false}, "C <= 1"};
        case Regime::mixed: return {all, "C real"};
        case Regime::flat: return {open(0, kInf), "C > 0"};
        }
        break;
    case Space::h3h:
        switch (reg) {
        case Regime::positive: return {{-kInf, 1 - K, true, false}, "C <= 1-K"};
        case Regime::negative: return {{1 - K, kInf, false, true}, "C >= 1-K"};
        case Regime::mixed: return {all, "C real"};
        case Regime::flat: return {open(-kInf, 0), "C < 0"};
        }
        break;
    case Space::h3p:
        switch (reg) {
        case Regime::positive: return {{0, kInf, false, true}, "C >= 0"};
        case Regime::negative: return {{-kInf, 0, true, false}, "C <= 0"};
        case Regime::mixed: return {all, "C real"};
        case Regime::flat: return {open(0, kInf), "C > 0"};
        }
        break;
    }
    return {all, "C real"};
}

void require_row_matches(const CaseId& id)
{
    const RowInfo& ri = info(id.row);
    if (!(space_of(ri.space) == id.space))
        throw DomainError(std::string("row ") + ri.name + " does not belong to " + id.space.name());
    if (regime_of(id.space.kappa(), id.K) != ri.regime)
        throw DomainError(std::string("row ") + ri.name + " does not apply at K = " +
                          format_double(id.K));
}

[[noreturn]] void degenerate(const CaseId& id, double param, GeometricLimit g)
{
    throw DegenerateCase(std::string(row_name(id.row)) + " degenerates at parameter " +
                             format_double(param) + " (limit: " + to_string(g) + ")",
                         g);
}

struct FnValue {
    double f, f1, f2;  // value and derivatives in the Jacobi argument
    double sn, cn, dn;
};

FnValue jacobi_fn(FnType fn, double u, double p, double A)
{
    using elliptic::Ratio;
    if (fn == FnType::nc || fn == FnType::sc || fn == FnType::dc) {
        const Ratio ratio = fn == FnType::nc ? Ratio::nc : fn == FnType::sc ? Ratio::sc : Ratio::dc;
        try {
            elliptic::jacobi_general(u, Modulus(p), ratio);
        } catch (const PoleError& e) {
            throw PoleError(std::string("profile ") + e.what(), e.where() / A);
        }
    }
    const auto j = elliptic::jacobi(u, p);
    const double sn = j.sn, cn = j.cn, dn = j.dn;
    const double p2 = p * p, q2 = (1 - p) * (1 + p);
    FnValue v{0, 0, 0, sn, cn, dn};
    switch (fn) {
    case FnType::cn:
        v = {cn, -sn * dn, cn * (2 * p2 * sn * sn - 1), sn, cn, dn};
        break;
    case FnType::dn:
        v = {dn, -p2 * sn * cn, -p2 * dn * (cn * cn - sn * sn), sn, cn, dn};
        break;
    case FnType::cd:
        v = {cn / dn, -q2 * sn / (dn * dn), -q2 * cn * (dn * dn + 2 * p2 * sn * sn) / (dn * dn * dn),
             sn, cn, dn};
        break;
    case FnType::sc:
        v = {sn / cn, dn / (cn * cn), sn * (2 * dn * dn - p2 * cn * cn) / (cn * cn * cn), sn, cn, dn};
        break;
    case FnType::nc:
        v = {1 / cn, sn * dn / (cn * cn),
             (cn * cn * (dn * dn - p2 * sn * sn) + 2 * sn * sn * dn * dn) / (cn * cn * cn), sn, cn,
             dn};
        break;
    case FnType::dc:
        v = {dn / cn, q2 * sn / (cn * cn), q2 * dn * (cn * cn + 2 * sn * sn) / (cn * cn * cn), sn, cn,
             dn};
        break;
    default: break;
    }
    return v;
}

// continuous branch of atan(tan(x)/p)
double unwrapped_atan_tan(double x, double p)
{
    const double n = std::nearbyint(x / kPi);
    const double y = x - n * kPi;
    return n * kPi + std::atan2(std::sin(y), p * std::cos(y));
}

ProfileSample elementary(const CaseParams& cp, double s)
{
    const double p = cp.p;
    ProfileSample ps{s, 0, 0, 0, 0, 0, 0, 0};
    switch (cp.id.row) {
    case Row::s3_flat: {
        const double a = std::sqrt((1 - p) * (1 + p)), x = p * s;
        const double c = std::cos(x), sn = std::sin(x);
        ps.r = a * c;
        ps.dr = -a * p * sn;
        ps.ddr = -a * p * p * c;
        const double w = p * p * c * c + sn * sn;
        ps.psi = s - unwrapped_atan_tan(x, p);
        ps.dpsi = 1 - p * p / w;
        ps.ddpsi = p * p * (2 * p * (1 - p * p) * sn * c) / (w * w);
        break;
    }
    case Row::s3_clifford:
        ps.r = cp.param;
        ps.psi = s;
        ps.dpsi = 1;
        break;
    case Row::h3e_snowman: {
        const double a = std::sqrt((1 - p) * (1 + p)) / p, x = s / p;
        const double ch = std::cosh(x), sh = std::sinh(x);
        ps.r = a * ch;
        ps.dr = a / p * sh;
        ps.ddr = a / (p * p) * ch;
        const double w = 1 + (1 - p * p) * sh * sh;
        ps.psi = std::atanh(p * std::tanh(x)) - s;
        ps.dpsi = -1 + 1 / w;
        ps.ddpsi = -(2 * (1 - p * p) * sh * ch / p) / (w * w);
        break;
    }
    case Row::h3e_hourglass: {
        const double a = std::sqrt((1 - p) * (1 + p)), x = p * s;
        const double ch = std::cosh(x), sh = std::sinh(x);
        ps.r = a * sh;
        ps.dr = a * p * ch;
        ps.ddr = a * p * p * sh;
        const double w = 1 + (1 - p * p) * sh * sh;
        ps.psi = std::atanh(p * std::tanh(x)) - s;
        ps.dpsi = p * p / w - 1;
        ps.ddpsi = -p * p * (2 * p * (1 - p * p) * sh * ch) / (w * w);
        break;
    }
    case Row::h3h_peach: {
        const double a = std::sqrt(1 + p * p), x = p * s;
        const double ch = std::cosh(x), sh = std::sinh(x);
        ps.r = a * ch;
        ps.dr = a * p * sh;
        ps.ddr = a * p * p * ch;
        const double w = p * p * ch * ch + sh * sh;
        ps.psi = s - std::atan(std::tanh(x) / p);
        ps.dpsi = 1 - p * p / w;
        ps.ddpsi = p * p * (2 * p * (p * p + 1) * sh * ch) / (w * w);
        break;
    }
    case Row::h3p_flat: {
        const double x = p * s;
        const double ch = std::cosh(x), sh = std::sinh(x), th = std::tanh(x);
        ps.r = p * ch;
        ps.dr = p * p * sh;
        ps.ddr = p * p * p * ch;
        ps.psi = s - th / p;
        ps.dpsi = th * th;
        ps.ddpsi = 2 * th * p / (ch * ch);
        break;
    }
    default: break;
    }
    return ps;
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(Rotation r)
{
    switch (r) {
    case Rotation::elliptic: return "elliptic";
    case Rotation::hyperbolic: return "hyperbolic";
    case Rotation::parabolic: return "parabolic";
    }
    return "?";
}

Rotation parse_rotation(std::string_view s)
{
    if (s == "elliptic")
        return Rotation::elliptic;
    if (s == "hyperbolic")
        return Rotation::hyperbolic;
    if (s == "parabolic")
        return Rotation::parabolic;
    throw DomainError("unknown rotation '" + std::string(s) +
                      "' (expected elliptic, hyperbolic or parabolic)");
}

SpaceForm::SpaceForm(int kappa, Rotation rotation) : kappa_(kappa), rotation_(rotation)
{
    if (kappa < -1 || kappa > 1)
        throw DomainError("kappa must be -1, 0 or 1");
    if (rotation == Rotation::hyperbolic && kappa != -1)
        throw DomainError("hyperbolic rotations exist only in H^3");
    if (rotation == Rotation::parabolic && kappa == 1)
        throw DomainError("there are no parabolic rotations in S^3");
}

int SpaceForm::kappa1() const noexcept
{
    switch (rotation_) {
    case Rotation::elliptic: return 1;
    case Rotation::hyperbolic: return -1;
    case Rotation::parabolic: return 0;
    }
    return 0;
}

int SpaceForm::kappa2() const noexcept
{
    if (rotation_ == Rotation::parabolic)
        return 0;
    if (kappa_ == 0)
        return 1;
    // kappa * kappa1 * kappa2 > 0
    return kappa_ * kappa1();
}

std::string SpaceForm::name() const
{
    const char* sp = kappa_ == 1 ? "S^3" : kappa_ == 0 ? "R^3" : "H^3";
    return std::string(sp) + " " + to_string(rotation_);
}

const char* to_string(Regime r)
{
    switch (r) {
    case Regime::negative: return "negative";
    case Regime::flat: return "flat";
    case Regime::mixed: return "mixed";
    case Regime::positive: return "positive";
    }
    return "?";
}

const char* to_string(FnType f)
{
    switch (f) {
    case FnType::cn: return "cn";
    case FnType::dn: return "dn";
    case FnType::cd: return "cd";
    case FnType::sc: return "sc";
    case FnType::nc: return "nc";
    case FnType::dc: return "dc";
    case FnType::trig: return "trig";
    case FnType::hyperbolic: return "hyperbolic";
    case FnType::constant: return "constant";
    }
    return "?";
}

const char* row_name(Row r) { return info(r).name; }
const char* branch_tag(Row r) { return info(r).tag; }
FnType fn_type(Row r) { return info(r).fn; }
ParamKind param_kind(Row r) { return info(r).kind; }
SpaceForm row_space(Row r) { return space_of(info(r).space); }

std::string row_summary(Row r)
{
    const RowInfo& ri = info(r);
    std::string s = std::string(ri.name) + ": " + space_of(ri.space).name() + ", ";
    const int kappa = space_of(ri.space).kappa();
    switch (ri.regime) {
    case Regime::negative: s += kappa == 1 ? "K < -1" : "K < 0"; break;
    case Regime::flat: s += kappa == 1 ? "K = -1" : "K = 1"; break;
    case Regime::mixed: s += kappa == 1 ? "-1 < K < 0" : "0 < K < 1"; break;
    case Regime::positive: s += kappa == 1 ? "K > 0" : "K > 1"; break;
    }
    s += ", branch " + std::string(ri.tag) + ": " + ri.formula;
    return s;
}

Row parse_row(std::string_view name)
{
    for (const auto& ri : kRows)
        if (name == ri.name)
            return ri.row;
    throw DomainError("unknown row '" + std::string(name) + "'");
}

std::vector<Row> all_rows()
{
    std::vector<Row> v;
    for (const auto& ri : kRows)
        v.push_back(ri.row);
    return v;
}

bool Interval::contains(double x) const
{
    const bool above = lo_open ? x > lo : x >= lo;
    const bool below = hi_open ? x < hi : x <= hi;
    return above && below;
}

std::string Interval::str() const
{
    auto num = [](double v) {
        if (std::isinf(v))
            return std::string(v > 0 ? "inf" : "-inf");
        return format_double(v);
    };
    return std::string(lo_open ? "(" : "[") + num(lo) + "," + num(hi) + (hi_open ? ")" : "]");
}

std::vector<Branch> classify(const SpaceForm& space, double K)
{
    const Regime reg = regime_of(space.kappa(), K);
    const Space sp = space_kind(space);
    std::vector<Branch> out;
    for (const auto& ri : kRows) {
        if (ri.space != sp || ri.regime != reg)
            continue;
        const double Kr = reg == Regime::flat ? -space.kappa() : K;
        out.push_back({{space, Kr, reg, ri.row}, ri.kind, param_interval(ri.row, Kr)});
    }
    return out;
}

Branch find_branch(const SpaceForm& space, double K, std::string_view tag)
{
    std::string tags;
    for (const Branch& b : classify(space, K)) {
        if (tag == branch_tag(b.id.row) || tag == row_name(b.id.row))
            return b;
        tags += std::string(tags.empty() ? "" : ", ") + branch_tag(b.id.row);
    }
    throw DomainError("no branch '" + std::string(tag) + "' for " + space.name() + " at K = " +
                      format_double(K) + " (available: " + tags + ")");
}

Branch branch_of(Row row, double K)
{
    const SpaceForm sf = row_space(row);
    for (const Branch& b : classify(sf, K))
        if (b.id.row == row)
            return b;
    throw DomainError(std::string("row ") + row_name(row) + " does not apply at K = " +
                      format_double(K));
}

double d_from_r(const SpaceForm& space, double r)
{
    const double r2 = r * r;
    constexpr double tol = 1e-12;
    if (space.isotropic()) {
        if (!(r > 0))
            throw ConstraintViolation("parabolic profiles need r > 0 (got r = " + format_double(r) + ")");
        return 1 / (2 * r);
    }
    switch (space.kappa()) {
    case 1:
        if (r2 > 1 + tol)
            throw ConstraintViolation("S^3 profile needs r^2 <= 1 (got r = " + format_double(r) + ")");
        return std::sqrt(std::max(0.0, (1 - r) * (1 + r)));
    case -1:
        if (space.rotation() == Rotation::elliptic)
            return std::sqrt(1 + r2);
        if (r2 < 1 - tol)
            throw ConstraintViolation("hyperbolic rotation needs r^2 >= 1 (got r = " +
                                      format_double(r) + ")");
        return std::sqrt(std::max(0.0, (r - 1) * (r + 1)));
    default:
        throw DomainError("no quadric relation for R^3");
    }
}

CaseParams make_params(const CaseId& id, double param)
{
    require_row_matches(id);
    if (!std::isfinite(param))
        throw DomainError("parameter must be finite");
    const Interval iv = param_interval(id.row, id.K);
    const ParamKind kind = param_kind(id.row);
    if (!iv.contains(param)) {
        const char* what = kind == ParamKind::constant_C ? "C" : kind == ParamKind::radius ? "r0" : "p";
        throw BoundsError(std::string(what) + " = " + format_double(param) + " outside " + iv.str() +
                          " for branch " + row_name(id.row));
    }

    CaseParams cp;
    cp.id = id;
    cp.param = param;
    const double K = id.K;
    const Row row = id.row;
    const FnType fn = fn_type(row);

    if (fn == FnType::trig || fn == FnType::hyperbolic || fn == FnType::constant) {
        cp.p = row == Row::s3_clifford ? 0.0 : param;
        cp.C = C_formula(row, K, param);
        cp.A = row == Row::s3_clifford ? 1.0 : row == Row::h3e_snowman ? 1 / param : param;
        return cp;
    }

    double p = param, amp2 = 0, A2 = 0;
    if (kind == ParamKind::constant_C) {
        const double C = param;
        p = parabolic_modulus(row, K);
        cp.C = C;
        switch (row) {
        case Row::h3p_neg_dn: amp2 = C / K; A2 = (K - 1) * C; break;
        case Row::h3p_mix_nc1: amp2 = C / (K - 1); A2 = -C; break;
        case Row::h3p_mix_nc2: amp2 = C / K; A2 = C; break;
        case Row::h3p_pos_dn: amp2 = C / (K - 1); A2 = K * C; break;
        default: break;
        }
    } else {
        const double p2 = p * p, q2 = (1 - p) * (1 + p);
        switch (row) {
        case Row::s3_neg_cn: amp2 = p2 / (p2 - (K + 1)); A2 = K * (K + 1) / (p2 - (K + 1)); break;
        case Row::s3_neg_dn: amp2 = 1 / (1 - (K + 1) * p2); A2 = K * (K + 1) / (1 - (K + 1) * p2); break;
        case Row::s3_mix_cd1: amp2 = p2 / ((K + 1) * p2 - K); A2 = -K * (K + 1) / ((K + 1) * p2 - K); break;
        case Row::s3_mix_cd2: amp2 = p2 / (K + 1 - K * p2); A2 = -K * (K + 1) / (K + 1 - K * p2); break;
        case Row::s3_pos_cn: amp2 = p2 / (K + p2); A2 = K * (K + 1) / (K + p2); break;
        case Row::s3_pos_dn: amp2 = 1 / (K * p2 + 1); A2 = K * (K + 1) / (K * p2 + 1); break;
        case Row::h3e_neg_cn: amp2 = p2 / (1 - K - p2); A2 = -K * (1 - K) / (1 - K - p2); break;
        case Row::h3e_neg_dn: amp2 = 1 / ((1 - K) * p2 - 1); A2 = -K * (1 - K) / ((1 - K) * p2 - 1); break;
        case Row::h3e_mix_nc1: amp2 = q2 / (K - 1 + p2); A2 = K * (1 - K) / (K - 1 + p2); break;
        case Row::h3e_mix_sc1: amp2 = q2 / (1 + p2 * (K - 1)); A2 = K * (1 - K) / (1 + p2 * (K - 1)); break;
        case Row::h3e_mix_sc2: amp2 = q2 / (1 - K * p2); A2 = K * (1 - K) / (1 - K * p2); break;
        case Row::h3e_mix_nc2: amp2 = q2 / (p2 - K); A2 = K * (1 - K) / (p2 - K); break;
        case Row::h3e_pos_cn: amp2 = p2 / (K - p2); A2 = K * (K - 1) / (K - p2); break;
        case Row::h3e_pos_dn: amp2 = 1 / (K * p2 - 1); A2 = K * (K - 1) / (K * p2 - 1); break;
        case Row::h3h_neg_dn: amp2 = 1 / (1 + (K - 1) * p2); A2 = K * (K - 1) / (1 + (K - 1) * p2); break;
        case Row::h3h_mix_nc1: amp2 = q2 / (K - p2); A2 = K * (1 - K) / (K - p2); break;
        case Row::h3h_mix_dc1: amp2 = 1 / (K - p2 * (K - 1)); A2 = K * (1 - K) / (K - p2 * (K - 1)); break;
        case Row::h3h_mix_dc2: amp2 = 1 / (1 - K * q2); A2 = K * (1 - K) / (1 - K * q2); break;
        case Row::h3h_mix_nc2: amp2 = q2 / (1 - K - p2); A2 = K * (1 - K) / (1 - K - p2); break;
        case Row::h3h_pos_dn: amp2 = 1 / (1 - K * p2); A2 = K * (K - 1) / (1 - K * p2); break;
        default: break;
        }
        cp.C = C_formula(row, K, p);
    }

    // amplitudes beyond 1e12 come from an endpoint hit up to rounding of p
    if (!std::isfinite(amp2) || !std::isfinite(A2) || amp2 < 0 || A2 <= 0 || amp2 > 1e12 ||
        !std::isfinite(cp.C))
        degenerate(id, param, GeometricLimit::ideal_boundary);
    if (amp2 == 0)
        degenerate(id, param, kind == ParamKind::constant_C ? GeometricLimit::ideal_boundary
                                                            : GeometricLimit::geodesic);
    const bool constant_fn = (fn == FnType::dn && p == 0) ||
                             ((fn == FnType::cd || fn == FnType::dc) && p == 1);
    if (constant_fn)
        degenerate(id, param, GeometricLimit::geodesic);

    cp.p = p;
    cp.amp = std::sqrt(amp2);
    cp.A = std::sqrt(A2);
    const double A = cp.A, p2 = p * p, q2 = (1 - p) * (1 + p);

    cp.integral = CaseParams::Integral::pi;
    switch (row) {
    case Row::s3_neg_cn: cp.psi_lin = -K; cp.psi_coef = K / A; cp.k = p2 / (K + 1); break;
    case Row::s3_neg_dn: cp.psi_lin = -K; cp.psi_coef = K / A; cp.k = 1 / (K + 1); break;
    case Row::s3_mix_cd1: cp.psi_lin = 0; cp.psi_coef = 1 / A; cp.k = (K + 1) * p2 / K; break;
    case Row::s3_mix_cd2: cp.psi_lin = 1; cp.psi_coef = -1 / A; cp.k = K * p2 / (K + 1); break;
    case Row::s3_pos_cn: cp.psi_lin = -K; cp.psi_coef = (K + 1) / A; cp.k = -p2 / K; break;
    case Row::s3_pos_dn: cp.psi_lin = -K; cp.psi_coef = (K + 1) / A; cp.k = -1 / K; break;
    case Row::h3e_neg_cn: cp.psi_lin = -K; cp.psi_coef = K / A; cp.k = p2 / (1 - K); break;
    case Row::h3e_neg_dn: cp.psi_lin = -K; cp.psi_coef = K / A; cp.k = 1 / (1 - K); break;
    case Row::h3e_mix_nc1:
        cp.psi_lin = -A2 * p2 / (1 - K); cp.psi_coef = A * q2 / K; cp.k = (1 - K) / A2; break;
    case Row::h3e_mix_sc1:
        cp.psi_lin = -1; cp.psi_coef = A * q2 / K; cp.k = A2 * p2 / (1 - K); break;
    case Row::h3e_mix_sc2:
        cp.psi_lin = 0; cp.psi_coef = A * q2 / (K - 1); cp.k = A2 * p2 / K; break;
    case Row::h3e_mix_nc2:
        cp.psi_lin = A2 * q2 / (1 - K); cp.psi_coef = A * q2 / (K - 1); cp.k = K / A2; break;
    case Row::h3e_pos_cn: cp.psi_lin = -K; cp.psi_coef = (K - 1) / A; cp.k = p2 / K; break;
    case Row::h3e_pos_dn: cp.psi_lin = -K; cp.psi_coef = (K - 1) / A; cp.k = 1 / K; break;
    case Row::h3h_neg_dn: cp.psi_lin = K; cp.psi_coef = -K / A; cp.k = 1 / (1 - K); break;
    case Row::h3h_mix_nc1:
        cp.psi_lin = A2 * q2 / (1 - K); cp.psi_coef = A * q2 / (K - 1); cp.k = -K / A2; break;
    case Row::h3h_mix_dc1: cp.psi_lin = 1; cp.psi_coef = -1 / A; cp.k = K / (K - 1); break;
    case Row::h3h_mix_dc2: cp.psi_lin = 0; cp.psi_coef = 1 / A; cp.k = (K - 1) / K; break;
    case Row::h3h_mix_nc2:
        cp.psi_lin = A2 * p2 / (K - 1); cp.psi_coef = A * q2 / K; cp.k = (K - 1) / A2; break;
    case Row::h3h_pos_dn: cp.psi_lin = K; cp.psi_coef = -(K - 1) / A; cp.k = 1 / K; break;
    case Row::h3p_neg_dn: cp.psi_lin = K; cp.psi_coef = -K / A; cp.k = p2; break;
    case Row::h3p_pos_dn: cp.psi_lin = K; cp.psi_coef = -(K - 1) / A; cp.k = p2; break;
    case Row::h3p_mix_nc1:
        cp.integral = CaseParams::Integral::e; cp.psi_lin = 0; cp.psi_coef = 1 / A; break;
    case Row::h3p_mix_nc2:
        cp.integral = CaseParams::Integral::e; cp.psi_lin = 1; cp.psi_coef = -1 / A; break;
    default: break;
    }
    if (cp.integral == CaseParams::Integral::pi && !(cp.k < 1))
        throw DomainError(std::string("characteristic k = ") + format_double(cp.k) + " >= 1 in " +
                          row_name(row) + " at parameter " + format_double(param));
    return cp;
}

CaseParams make_params_from_C(const CaseId& id, double C)
{
    switch (param_kind(id.row)) {
    case ParamKind::constant_C: return make_params(id, C);
    case ParamKind::radius:
        throw DomainError("Clifford tori have C = 0 and are parametrised by their radius r0");
    case ParamKind::modulus: break;
    }
    CaseParams cp = make_params(id, modulus_from_C(id, C).p());
    return cp;
}

ProfileSample profile(const CaseParams& cp, double s)
{
    if (!std::isfinite(s))
        throw DomainError("s must be finite");
    const FnType fn = fn_type(cp.id.row);
    ProfileSample ps{};
    if (fn == FnType::trig || fn == FnType::hyperbolic || fn == FnType::constant) {
        ps = elementary(cp, s);
    } else {
        const double A = cp.A, u = A * s;
        const FnValue v = jacobi_fn(fn, u, cp.p, A);
        ps.s = s;
        ps.r = cp.amp * v.f;
        ps.dr = cp.amp * A * v.f1;
        ps.ddr = cp.amp * A * A * v.f2;
        const double sn = v.sn, cn = v.cn, dn = v.dn;
        if (cp.integral == CaseParams::Integral::pi) {
            const double den = 1 - cp.k * sn * sn;
            ps.psi = cp.psi_lin * s + cp.psi_coef * elliptic::incomplete_Pi(cp.k, cp.p, u);
            ps.dpsi = cp.psi_lin + cp.psi_coef * A / den;
            ps.ddpsi = cp.psi_coef * A * A * 2 * cp.k * sn * cn * dn / (den * den);
        } else {
            ps.psi = cp.psi_lin * s + cp.psi_coef * elliptic::incomplete_E(u, cp.p);
            ps.dpsi = cp.psi_lin + cp.psi_coef * A * dn * dn;
            ps.ddpsi = cp.psi_coef * A * A * (-2 * cp.p * cp.p * sn * cn * dn);
        }
    }
    ps.d = d_from_r(cp.id.space, ps.r);
    return ps;
}

double C_from_modulus(const CaseId& id, double p)
{
    require_row_matches(id);
    switch (param_kind(id.row)) {
    case ParamKind::constant_C:
        throw DomainError(std::string(row_name(id.row)) + " is parametrised by C directly");
    case ParamKind::radius: return 0.0;
    case ParamKind::modulus: break;
    }
    const Interval iv = param_interval(id.row, id.K);
    if (!std::isfinite(p) || !iv.contains(p))
        throw BoundsError("p = " + format_double(p) + " outside " + iv.str() + " for branch " +
                          row_name(id.row));
    return C_formula(id.row, id.K, p);
}

Interval C_bound(const SpaceForm& space, double K) { return bound_info(space, K).interval; }

Interval C_range(const CaseId& id)
{
    const double K = id.K;
    switch (id.row) {
    case Row::s3_neg_cn:
    case Row::s3_pos_cn:
    case Row::h3e_neg_cn:
    case Row::h3e_pos_cn: return closed(0, 1);
    case Row::s3_neg_dn: return closed(K + 1, 0);
    case Row::s3_flat: return {0, 1, true, true};
    case Row::s3_clifford: return closed(0, 0);
    case Row::s3_mix_cd1: return closed(0, K + 1);
    case Row::s3_mix_cd2: return closed(K + 1, 1);
    case Row::s3_pos_dn: return closed(1, K + 1);
    case Row::h3e_neg_dn:
    case Row::h3e_mix_nc1:
    case Row::h3h_mix_nc1: return {-kInf, 0, true, false};
    case Row::h3e_mix_sc1:
    case Row::h3h_mix_dc1: return closed(0, 1 - K);
    case Row::h3e_mix_sc2:
    case Row::h3h_mix_dc2: return closed(1 - K, 1);
    case Row::h3e_mix_nc2:
    case Row::h3e_pos_dn:
    case Row::h3h_mix_nc2: return {1, kInf, false, true};
    case Row::h3e_snowman: return open(1, kInf);
    case Row::h3e_hourglass: return open(0, 1);
    case Row::h3h_neg_dn: return {1 - K, kInf, false, true};
    case Row::h3h_peach: return open(-kInf, 0);
    case Row::h3h_pos_dn: return {-kInf, 1 - K, true, false};
    case Row::h3p_neg_dn:
    case Row::h3p_mix_nc1: return open(-kInf, 0);
    case Row::h3p_mix_nc2:
    case Row::h3p_pos_dn:
    case Row::h3p_flat: return open(0, kInf);
    }
    return open(-kInf, kInf);
}

Modulus modulus_from_C(const CaseId& id, double C)
{
    require_row_matches(id);
    if (!std::isfinite(C))
        throw DomainError("C must be finite");
    const BoundInfo b = bound_info(id.space, id.K);
    if (!b.interval.contains(C))
        throw BoundsError("C = " + format_double(C) + " violates " + b.text + " for " +
                          id.space.name() + " at K = " + format_double(id.K));
    const Interval range = C_range(id);
    const bool on_bound = C == b.interval.lo || C == b.interval.hi;
    if (!range.contains(C))
        throw BoundsError("C = " + format_double(C) + " outside " + range.str() +
                              " covered by branch " + row_name(id.row),
                          on_bound);
    switch (param_kind(id.row)) {
    case ParamKind::constant_C: return Modulus(parabolic_modulus(id.row, id.K));
    case ParamKind::radius:
        throw DomainError("Clifford tori have C = 0 and are parametrised by their radius r0");
    case ParamKind::modulus: break;
    }
    double p2 = p2_formula(id.row, id.K, C);
    if (!std::isfinite(p2))
        throw BoundsError("C = " + format_double(C) + " is a limiting value of branch " +
                              row_name(id.row) + " (p diverges)",
                          true);
    if (p2 < 0 && p2 > -1e-15)
        p2 = 0;
    if (p2 < 0)
        throw BoundsError("C = " + format_double(C) + " gives p^2 < 0 on branch " + row_name(id.row));
    return Modulus(std::sqrt(p2));
}

double rhs_r(const SpaceForm& sf, double K, double C, double r)
{
    const double r2 = r * r;
    const int kappa = sf.kappa();
    if (sf.isotropic())
        return (-1.0 / kappa) * (C - K * r2) * ((K + kappa) * r2 - C);
    if (kappa == 0)
        return ((1 - C) + K * r2) * (C - K * r2);
    const int k1 = sf.kappa1(), k2 = sf.kappa2();
    return (1.0 / (kappa * k1 * k2)) * ((1 - C) + k1 * K * r2) * (C - k1 * (K + kappa) * r2);
}

double rhs_r_slope(const SpaceForm& sf, double K, double C, double r)
{
    const double r2 = r * r;
    const int kappa = sf.kappa();
    if (sf.isotropic()) {
        const double a = C - K * r2, b = (K + kappa) * r2 - C;
        return (-1.0 / kappa) * (-2 * K * r * b + 2 * (K + kappa) * r * a);
    }
    if (kappa == 0)
        return 2 * K * r * (C - K * r2) - 2 * K * r * ((1 - C) + K * r2);
    const int k1 = sf.kappa1(), k2 = sf.kappa2();
    const double a = (1 - C) + k1 * K * r2, b = C - k1 * (K + kappa) * r2;
    return (1.0 / (kappa * k1 * k2)) * (2 * k1 * K * r * b - 2 * k1 * (K + kappa) * r * a);
}

double rhs_psi(const SpaceForm& sf, double K, double C, double r)
{
    const double r2 = r * r;
    const int kappa = sf.kappa();
    if (sf.isotropic())
        return K - C / r2;
    if (kappa == 0)
        return K * r2 + 1 - C;
    const int k1 = sf.kappa1(), k2 = sf.kappa2();
    return (k1 * K * r2 + 1 - C) / (k2 * (1 - kappa * k1 * r2));
}

Residual ode_residual(const CaseParams& cp, double s)
{
    const ProfileSample ps = profile(cp, s);
    const SpaceForm& sf = cp.id.space;
    Residual res{};
    res.rhs_r = rhs_r(sf, cp.id.K, cp.C, ps.r);
    res.rhs_psi = rhs_psi(sf, cp.id.K, cp.C, ps.r);
    res.res_r = ps.dr * ps.dr - res.rhs_r;
    res.res_psi = ps.dpsi - res.rhs_psi;
    return res;
}

Window natural_window(const CaseParams& cp)
{
    const FnType fn = fn_type(cp.id.row);
    const double p = cp.p;
    switch (fn) {
    case FnType::constant: return {-kPi, kPi, 2 * kPi};
    case FnType::trig: return {-kPi / p, kPi / p, 2 * kPi / p};
    case FnType::hyperbolic: {
        const double w = cp.id.row == Row::h3e_snowman ? 2 * p : 2 / p;
        return {-w, w, 0};
    }
    default: break;
    }
    const double A = cp.A;
    if (p >= 1.0)
        return {-4 / A, 4 / A, 0};
    const double F = elliptic::complete_F(p);
    switch (fn) {
    case FnType::cn:
    case FnType::cd: return {-2 * F / A, 2 * F / A, 4 * F / A};
    case FnType::dn: return {-F / A, F / A, 2 * F / A};
    default: return {-kPoleWindow * F / A, kPoleWindow * F / A, 0};
    }
}

}  // namespace cgc::profile
