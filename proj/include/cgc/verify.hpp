#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgc/geometry.hpp"
#include "cgc/profile.hpp"

namespace cgc::verify {

// Polar coordinates of the Moutard lift along the profile, with derivatives in the
// profile parameter. R = 1/(kappa r) and D^2 = (kappa R^2 - kappa1)/kappa2 in the
// non-isotropic case; D = 1/r in R^3; R = 1/(kappa r) for parabolic rotation.
struct MoutardPolarData {
    double R = 0, dR = 0, ddR = 0;
    double D = 0, dD = 0, ddD = 0;
    double dpsi = 0, ddpsi = 0;
    int kappa = 1, kappa1 = 1, kappa2 = 1;
    bool parabolic = false;
    bool euclidean = false;
};

MoutardPolarData moutard_from_profile(const profile::SpaceForm& space, double r, double dr,
                                      double ddr, double dpsi, double ddpsi);
MoutardPolarData moutard_from_sample(const profile::CaseParams& params, double s);

// Gauss curvature of the rotational surface with the given lift data. Throws
// SingularPoint on the rotation axis and where the profile speed vanishes. Rounding
// error grows like eps R^2 as the profile approaches the axis.
double gauss_from_moutard(const MoutardPolarData& m, double t = 0);

geometry::CurvatureEstimate curvature_fd(const geometry::Sampler& f, geometry::Signature sig,
                                         double s, double theta, double h = 1e-4,
                                         const geometry::Vec4& orient = {});

// lw_fit of the offset at distance t from finite-difference curvature along the profile.
// Samples near focal points and singular collars are dropped; throws SingularPoint when
// fewer than three remain.
geometry::LwFit offset_fit(const profile::CaseParams& params, double t, int n_samples = 40);

// Parallel offsets of a CGC surface that are themselves CGC, found from sign changes
// of the fitted b(t) of a K + 2 b H + c = 0.
struct BonnetScan {
    std::vector<double> t;         // in [0, 2 pi) for S^3
    double max_pair_error = 0;     // | t_{i+2} - t_i - pi | over the pairs
    double max_fit_residual = 0;   // lw_fit residual at the located offsets
};

BonnetScan bonnet_scan(const profile::CaseParams& params, int n_scan = 72, int n_samples = 24);

struct Check {
    std::string name;
    double max_residual = 0;
    double tolerance = 0;
    bool pass = false;
    long n_samples = 0;
};

struct VerificationReport {
    std::vector<Check> checks;
    bool all_pass() const;
};

struct Mutation {
    std::string field;  // amp, A, psi_lin or psi_coef
    double relative = 0;
};

// Check groups run by run_suite, in report order.
inline const std::vector<std::string> kCheckGroups = {
    "elliptic", "ode_residual", "rk4_oracle", "quadric", "curvature",
    "lemma",    "flat_fronts",  "lw_fit",     "bonnet",  "period",
};

struct SuiteConfig {
    std::vector<std::string> checks;  // subset of kCheckGroups
    std::vector<profile::Row> rows;   // rows for the per-row groups
    int p_grid = 11;
    int s_samples = 200;
    int mesh_ns = 400, mesh_ntheta = 120;
    int curvature_ns = 60, curvature_ntheta = 12;
    int elliptic_pairs = 120;
    unsigned long long seed = 1;
    std::map<std::string, double> tolerances;  // overrides by check group
    std::optional<Mutation> mutation;
};

// Default tolerance of a check group.
double default_tolerance(const std::string& group);
// All groups over the rows of S^3.
SuiteConfig default_suite();
// All groups over every row.
SuiteConfig full_suite();

// Deterministic given the config. Failures of individual oracles are recorded as
// failing checks and never propagate.
VerificationReport run_suite(const SuiteConfig& config);

}  // namespace cgc::verify
