#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cgc/elliptic.hpp"

namespace cgc::profile {

enum class Rotation { elliptic, hyperbolic, parabolic };

const char* to_string(Rotation r);
Rotation parse_rotation(std::string_view s);

// Ambient space form (kappa = +1 S^3, 0 R^3, -1 H^3) with its rotation type.
class SpaceForm {
public:
    SpaceForm() : SpaceForm(1, Rotation::elliptic) {}
    SpaceForm(int kappa, Rotation rotation);

    int kappa() const noexcept { return kappa_; }
    Rotation rotation() const noexcept { return rotation_; }
    // signs of the rotation-plane and complement-plane metrics (0 for parabolic)
    int kappa1() const noexcept;
    int kappa2() const noexcept;
    bool isotropic() const noexcept { return rotation_ == Rotation::parabolic; }
    std::string name() const;

    bool operator==(const SpaceForm&) const = default;

private:
    int kappa_;
    Rotation rotation_;
};

inline const SpaceForm kS3{1, Rotation::elliptic};
inline const SpaceForm kH3Elliptic{-1, Rotation::elliptic};
inline const SpaceForm kH3Hyperbolic{-1, Rotation::hyperbolic};
inline const SpaceForm kH3Parabolic{-1, Rotation::parabolic};
inline const SpaceForm kR3{0, Rotation::elliptic};

// Sign pattern of (K, K + kappa).
enum class Regime {
    negative,  // K < 0 and K + kappa < 0
    flat,      // K + kappa = 0
    mixed,     // K and K + kappa of opposite sign
    positive,  // K > 0 and K + kappa > 0
};

const char* to_string(Regime r);

enum class Row {
    s3_neg_cn, s3_neg_dn, s3_flat, s3_clifford, s3_mix_cd1, s3_mix_cd2, s3_pos_cn, s3_pos_dn,
    h3e_neg_cn, h3e_neg_dn, h3e_mix_nc1, h3e_mix_sc1, h3e_mix_sc2, h3e_mix_nc2, h3e_snowman,
    h3e_hourglass, h3e_pos_cn, h3e_pos_dn,
    h3h_neg_dn, h3h_mix_nc1, h3h_mix_dc1, h3h_mix_dc2, h3h_mix_nc2, h3h_peach, h3h_pos_dn,
    h3p_neg_dn, h3p_mix_nc1, h3p_mix_nc2, h3p_flat, h3p_pos_dn,
};

inline constexpr int kRowCount = 30;

enum class FnType { cn, dn, cd, sc, nc, dc, trig, hyperbolic, constant };

// What the free parameter of a row is.
enum class ParamKind { modulus, constant_C, radius };

const char* to_string(FnType f);
const char* row_name(Row r);        // e.g. "s3-neg-cn"
const char* branch_tag(Row r);      // e.g. "cn", "sc1", "peach"
std::string row_summary(Row r);     // one-line description for help output
Row parse_row(std::string_view name);
FnType fn_type(Row r);
ParamKind param_kind(Row r);
SpaceForm row_space(Row r);
std::vector<Row> all_rows();

struct Interval {
    double lo, hi;
    bool lo_open, hi_open;
    bool contains(double x) const;
    std::string str() const;
};

struct CaseId {
    SpaceForm space;
    double K = 1;
    Regime regime = Regime::positive;
    Row row = Row::s3_pos_cn;
};

struct Branch {
    CaseId id;
    ParamKind kind;
    Interval interval;  // admissible values of the free parameter
};

// All solution branches for (space, K). K = 0 and kappa = 0 are rejected.
std::vector<Branch> classify(const SpaceForm& space, double K);
// The branch of (space, K) with the given tag.
Branch find_branch(const SpaceForm& space, double K, std::string_view tag);
Branch branch_of(Row row, double K);

// Numeric data of one table row. psi(s) = psi_lin*s + psi_coef*I(A s) where I is
// Pi(k; p | .), E(. | p) or absent.
struct CaseParams {
    enum class Integral { none, pi, e };

    CaseId id;
    double param = 0;  // the free parameter as supplied (p, C, or r0)
    double p = 0;      // modulus of the Jacobi function or elementary rate
    double A = 1;      // argument scale
    double amp = 0;    // amplitude of r
    double C = 0;      // integration constant of the ODE
    double psi_lin = 0, psi_coef = 0, k = 0;
    Integral integral = Integral::none;
};

// Builds parameters from the row's free parameter. Throws BoundsError outside the
// row interval and DegenerateCase at endpoints where the profile collapses.
CaseParams make_params(const CaseId& id, double param);
CaseParams make_params_from_C(const CaseId& id, double C);

struct ProfileSample {
    double s, r, psi, d;
    double dr, dpsi;    // first derivatives in s
    double ddr, ddpsi;  // second derivatives in s
};

ProfileSample profile(const CaseParams& params, double s);

// The quadric relation d(r) of the space form; throws ConstraintViolation where it
// has no real solution.
double d_from_r(const SpaceForm& space, double r);

// Mutually inverse relations between the free parameter and C.
double C_from_modulus(const CaseId& id, double p);
elliptic::Modulus modulus_from_C(const CaseId& id, double C);
// Set of C covered by the row, and the regime bound the space form imposes.
Interval C_range(const CaseId& id);
Interval C_bound(const SpaceForm& space, double K);

struct Residual {
    double res_r, res_psi;
    double rhs_r, rhs_psi;
};

// Right-hand sides of the profile ODEs at radius r.
double rhs_r(const SpaceForm& space, double K, double C, double r);
double rhs_psi(const SpaceForm& space, double K, double C, double r);
// d rhs_r / dr
double rhs_r_slope(const SpaceForm& space, double K, double C, double r);

Residual ode_residual(const CaseParams& params, double s);

struct Window {
    double lo, hi;
    double period;  // profile period in s, or 0 if not periodic
};

// Sampling window: one period centred at s = 0, or a pole-free window for
// nc/sc/dc rows, or a fixed window for non-periodic rows.
Window natural_window(const CaseParams& params);

}  // namespace cgc::profile
