#pragma once

#include <functional>

// Reference evaluations that share no code path with the production special functions.
namespace cgc::oracle {

struct Triple {
    double sn, cn, dn;
};

// RK4 integration of sn' = cn dn, cn' = -sn dn, dn' = -m2 sn cn from (0, 1, 1).
// m2 is the squared modulus and may be negative or exceed 1.
Triple jacobi_rk4(double m2, double s, double h = 1e-3);

// Real parts of (-i sn, cn, dn) at the imaginary argument i*s, integrated along the
// imaginary axis: S' = C D, C' = S D, D' = p^2 S C.
Triple jacobi_imag_rk4(double p, double s, double h = 1e-3);

// Adaptive Gauss-Kronrod (15 point) quadrature of f over [a, b].
double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-13);

// Complete integrals by quadrature over the angle.
double complete_F_quad(double p);
double complete_E_quad(double p);
double complete_Pi_quad(double k, double p);

}  // namespace cgc::oracle
