#include "cgc/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

namespace cgc::oracle {

namespace {

using State = std::array<double, 3>;

template <class Rhs>
State integrate(Rhs rhs, State x, double s, double h)
{
    boost::numeric::odeint::runge_kutta4<State> stepper;
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s) / h)));
    const double dt = s / n;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        stepper.do_step(rhs, x, t, dt);
        t = (i + 1) * dt;
    }
    return x;
}

}  // namespace

Triple jacobi_rk4(double m2, double s, double h)
{
    auto rhs = [m2](const State& x, State& dx, double) {
        dx[0] = x[1] * x[2];
        dx[1] = -x[0] * x[2];
        dx[2] = -m2 * x[0] * x[1];
    };
    const State x = integrate(rhs, {0.0, 1.0, 1.0}, s, h);
    return {x[0], x[1], x[2]};
}

Triple jacobi_imag_rk4(double p, double s, double h)
{
    const double m2 = p * p;
    auto rhs = [m2](const State& x, State& dx, double) {
        dx[0] = x[1] * x[2];
        dx[1] = x[0] * x[2];
        dx[2] = m2 * x[0] * x[1];
    };
    const State x = integrate(rhs, {0.0, 1.0, 1.0}, s, h);
    return {x[0], x[1], x[2]};
}

double quad(const std::function<double(double)>& f, double a, double b, double tol)
{
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 12, tol);
}

double complete_F_quad(double p)
{
    return quad([p](double u) { return 1.0 / std::sqrt(1.0 - p * p * std::sin(u) * std::sin(u)); },
                0.0, std::numbers::pi / 2);
}

double complete_E_quad(double p)
{
    return quad([p](double u) { return std::sqrt(1.0 - p * p * std::sin(u) * std::sin(u)); }, 0.0,
                std::numbers::pi / 2);
}

double complete_Pi_quad(double k, double p)
{
    return quad(
        [k, p](double u) {
            const double s2 = std::sin(u) * std::sin(u);
            return 1.0 / ((1.0 - k * s2) * std::sqrt(1.0 - p * p * s2));
        },
        0.0, std::numbers::pi / 2);
}

}  // namespace cgc::oracle
