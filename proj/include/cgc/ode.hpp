#pragma once

#include <string>
#include <vector>

#include "cgc/profile.hpp"

namespace cgc::profile {

struct OdeOptions {
    double step = 1e-4;      // fixed RK4 step in s
    double dr0_sign = 1;     // sign of r'(0) when the right-hand side is positive at r0
    double drift_tol = 1e-9; // per-step tolerance on the first integral r'^2 - Q(r)
    int max_refine = 6;      // a rejected step is retried with up to 2^max_refine substeps
};

struct TurningPoint {
    double s, r;
};

struct OdePath {
    std::vector<double> s, r, dr, psi;
    std::vector<TurningPoint> turning_points;
    std::vector<std::string> warnings;
};

// Integrates r'' = Q'(r)/2, psi' = Psi(r) from (r0, +-sqrt(Q(r0)), 0) over [0, s_end]
// (s_end may be negative). Q and Psi are the right-hand sides of the profile ODEs.
// The second-order form passes through turning points of r without branch switching;
// turning points are located by bisection and reported.
OdePath integrate_ode(const SpaceForm& space, double K, double C, double r0, double s_end,
                      const OdeOptions& opt = {});
OdePath integrate_ode(const CaseId& id, double C, double r0, double s_end,
                      const OdeOptions& opt = {});

}  // namespace cgc::profile
