#include "cgc/ode.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>

#include "cgc/error.hpp"
#include "cgc/format.hpp"

namespace cgc::profile {

namespace {

using State = std::array<double, 3>;  // r, r', psi

}  // namespace

OdePath integrate_ode(const SpaceForm& space, double K, double C, double r0, double s_end,
                      const OdeOptions& opt)
{
    if (space.isotropic() && space.kappa() == 0)
        throw DomainError("no profile ODE for parabolic rotation in R^3");
    if (!std::isfinite(r0) || !std::isfinite(C) || !std::isfinite(K) || !std::isfinite(s_end))
        throw DomainError("integrate_ode needs finite data");
    if (!(opt.step > 0))
        throw DomainError("integrate_ode needs a positive step");
    const double q0 = rhs_r(space, K, C, r0);
    if (q0 < -1e-12 * (1 + std::abs(r0)))
        throw DomainError("right-hand side negative at r0 = " + format_double(r0) +
                          " (no real profile through this radius)");

    auto Q = [&](double r) { return rhs_r(space, K, C, r); };
    auto rhs = [&](const State& x, State& dx, double) {
        dx[0] = x[1];
        dx[1] = 0.5 * rhs_r_slope(space, K, C, x[0]);
        dx[2] = rhs_psi(space, K, C, x[0]);
    };
    boost::numeric::odeint::runge_kutta4<State> stepper;
    auto step = [&](State x, double t, double h) {
        stepper.do_step(rhs, x, t, h);
        return x;
    };

    OdePath path;
    State x{r0, std::copysign(std::sqrt(std::max(0.0, q0)), opt.dr0_sign), 0.0};
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s_end) / opt.step)));
    const double h = s_end / n;
    path.s.reserve(n + 1);
    auto record = [&](double t, const State& y) {
        path.s.push_back(t);
        path.r.push_back(y[0]);
        path.dr.push_back(y[1]);
        path.psi.push_back(y[2]);
    };
    record(0.0, x);
    if (std::abs(q0) <= 1e-12 * (1 + std::abs(r0))) {
        // starting on a turning point; the second-order form picks the direction
        x[1] = 0;
        path.dr[0] = 0;
        path.turning_points.push_back({0.0, r0});
    }

    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        State y = step(x, t, h);
        const double e0 = x[1] * x[1] - Q(x[0]);
        auto drift = [&](const State& z) {
            const double scale = 1 + std::abs(z[1] * z[1]) + std::abs(Q(z[0]));
            return std::abs(z[1] * z[1] - Q(z[0]) - e0) / scale;
        };
        if (drift(y) > opt.drift_tol) {
            int m = 2;
            for (int level = 1; level <= opt.max_refine; ++level, m *= 2) {
                State z = x;
                for (int j = 0; j < m; ++j)
                    z = step(z, t + j * h / m, h / m);
                y = z;
                if (drift(y) <= opt.drift_tol)
                    break;
            }
            path.warnings.push_back("refined step near s = " + format_double(t) + " (r = " +
                                    format_double(x[0]) + ")");
        }
        if (x[1] * y[1] < 0) {
            // bisect on the step length for r' = 0
            double a = 0, b = h;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                const State z = step(x, t, mid);
                if ((z[1] < 0) == (x[1] < 0))
                    a = mid;
                else
                    b = mid;
            }
            const State z = step(x, t, 0.5 * (a + b));
            path.turning_points.push_back({t + 0.5 * (a + b), z[0]});
        }
        x = y;
        record((i + 1) * h, x);
    }
    return path;
}

OdePath integrate_ode(const CaseId& id, double C, double r0, double s_end, const OdeOptions& opt)
{
    return integrate_ode(id.space, id.K, C, r0, s_end, opt);
}

}  // namespace cgc::profile
