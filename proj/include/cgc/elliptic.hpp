#pragma once

#include <string_view>

namespace cgc::elliptic {

enum class ModulusRegime { standard, reciprocal, imaginary };

// Elliptic modulus. Real p in [0,1] is standard, real p > 1 is reciprocal, and an
// imaginary modulus i*p is stored by its magnitude. Sign of a real p is dropped
// (all functions are even in the modulus).
class Modulus {
public:
    explicit Modulus(double p);
    static Modulus imaginary(double magnitude);

    double p() const noexcept { return p_; }
    // complementary modulus; only meaningful for the standard regime
    double q() const noexcept { return q_; }
    ModulusRegime regime() const noexcept { return regime_; }

    // transformed moduli of the imaginary regime: p' = p/sqrt(1+p^2), q' = 1/sqrt(1+p^2)
    double p_prime() const noexcept;
    double q_prime() const noexcept;

private:
    Modulus(double p, ModulusRegime r);
    double p_;
    double q_;
    ModulusRegime regime_;
};

struct JacobiEval {
    double sn, cn, dn, am;
};

enum class Ratio { sn, cn, dn, sc, cd, dc, nc, nd, sd, ns, cs, ds };

Ratio parse_ratio(std::string_view name);
const char* to_string(Ratio r);

// sn, cn, dn, am at s for a standard modulus (p in [0,1]).
JacobiEval jacobi(double s, const Modulus& m);
JacobiEval jacobi(double s, double p);

// Any of the twelve ratios for any modulus regime.
double jacobi_general(double s, const Modulus& m, Ratio name);

// Value at the imaginary argument i*s. `imaginary` marks a purely imaginary result,
// in which case the result is i*value.
struct ImagValue {
    double value;
    bool imaginary;
};
ImagValue jacobi_imaginary_argument(double s, const Modulus& m, Ratio name);

double complete_F(double p);
double complete_E(double p);
double complete_Pi(double k, double p);

// Argument form: the upper limit s is a Jacobi argument, the angle is am_p(s).
double incomplete_F(double s, double p);
double incomplete_E(double s, double p);
double incomplete_Pi(double k, double p, double s);

// Pi(k; 1/p | a s) for a reciprocal modulus P = 1/p > 1.
double pi_reciprocal_modulus(double k, double P, double a, double s);
// Pi(k; p | i a s); always purely imaginary.
ImagValue pi_imaginary_argument(double k, double p, double a, double s);
// Pi(k; i P | a s) for an imaginary modulus of magnitude P.
double pi_imaginary_modulus(double k, double P, double a, double s);

namespace detail {
// Legendre (angle) forms, used internally and by tests.
double F_angle(double phi, double p);
double E_angle(double phi, double p);
double Pi_angle(double k, double phi, double p);
}  // namespace detail

}  // namespace cgc::elliptic
