#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "cgc/elliptic.hpp"
#include "cgc/profile.hpp"

namespace cgc::geometry {

using Vec4 = std::array<double, 4>;
using Vec3 = std::array<double, 3>;

enum class Signature {
    euclidean4,           // S^3 in R^4
    lorentz_orthonormal,  // -x0^2 + x1^2 + x2^2 + x3^2
    lorentz_pseudo,       // -2 x0 x1 + x2^2 + x3^2
};

const char* to_string(Signature s);
Signature signature_of(const profile::SpaceForm& space);

double inner(const Vec4& a, const Vec4& b, Signature sig);
// +1 for S^3, -1 for H^3
double quadric_target(Signature sig);

struct AmbientPoint {
    Vec4 x{};
    Signature signature = Signature::euclidean4;

    double quadric() const { return inner(x, x, signature); }
    double quadric_violation() const;
};

// Surface of rotation through a profile: point, tangents and unit normal.
class RotationalSurface {
public:
    explicit RotationalSurface(const profile::CaseParams& params);

    const profile::CaseParams& params() const noexcept { return params_; }
    Signature signature() const noexcept { return sig_; }

    AmbientPoint point(double s, double theta) const;
    // analytic partial derivatives in s and theta
    std::array<Vec4, 2> tangents(double s, double theta) const;
    // Throws SingularPoint where the tangents and the point are linearly dependent.
    Vec4 normal(double s, double theta) const;
    AmbientPoint offset(double t, double s, double theta) const;
    // unit normal of the offset surface at distance t
    Vec4 offset_normal(double t, double s, double theta) const;
    // Rotation rho_1(alpha) acting on ambient points; point(s, th + a) = rotate(a, point(s, th)).
    Vec4 rotate(double alpha, const Vec4& x) const;

    // Number of tangent evaluations that fell back to central differences.
    long fd_fallbacks() const noexcept { return fd_fallbacks_; }

private:
    Vec4 raw_normal(double s, double theta) const;
    std::array<Vec4, 2> fd_tangents(double s, double theta) const;
    Vec4 embed(const profile::ProfileSample& ps, double theta) const;

    profile::CaseParams params_;
    Signature sig_;
    double orientation_ = 1;
    mutable long fd_fallbacks_ = 0;
};

AmbientPoint embed(const profile::CaseParams& params, double s, double theta);
Vec4 unit_normal(const profile::CaseParams& params, double s, double theta);
AmbientPoint parallel_offset(const profile::CaseParams& params, double t, double s, double theta);

enum class Model { stereographic, poincare_ball, half_space, raw4 };

const char* to_string(Model m);
Model parse_model(const std::string& s);
// Throws ProjectionError for an incompatible model or near the projection pole.
Vec3 project(const AmbientPoint& pt, Model model);
// Pseudo-orthonormal coordinates to the orthonormal hyperboloid basis.
Vec4 to_orthonormal(const Vec4& x);

// Curvature estimate from finite differences of a parametrisation.
using Sampler = std::function<Vec4(double s, double theta)>;

struct CurvatureEstimate {
    double K, H;          // Richardson-combined
    double K_err, H_err;  // step-halving error estimates
    double K_h, K_h2;     // raw estimates at steps h and h/2
};

// Central differences with steps h and h/2, Richardson-combined. The normal sign is
// aligned with `orient` when it is non-zero. Throws SingularPoint when the first
// fundamental form is ill-conditioned.
CurvatureEstimate fd_curvature(const Sampler& f, Signature sig, double s, double theta,
                               double h = 1e-4, const Vec4& orient = {});

struct LwFit {
    double a = 0, b = 0, c = 0;
    double residual = 0;  // smallest singular value / sqrt(N)
    double tubularity = 0;  // ac - b^2
    bool degenerate = false;
    std::vector<std::array<double, 3>> family;  // basis of the solution space when degenerate
    std::string note;
};

// Least-squares fit of a K + 2 b H + c = 0 to (K, H) samples.
LwFit lw_fit(const std::vector<std::array<double, 2>>& samples);

// Rotation of psi over n periods of the dn profile of the K < 0 hyperbolic-rotation
// branch, halved: P(n, p) = n |K| (Pi^k_p - F_p) / A with k = 1/(1-K).
double period_function(double K, int n, double p);
// Upper end sqrt(1/(1-K)) of the admissible p-interval.
double period_p_max(double K);

struct PeriodSolution {
    double p;
    double residual;       // |P(n, p) - 2 pi|
    int sign_changes;      // of P - 2 pi on a uniform scan of the bracket
    double profile_period; // 2 F_p / A
};

// Throws NoClosedCurve when P(n, 0) < 2 pi.
PeriodSolution period_solve(double K, int n);

struct MeshOptions {
    int ns = 400, ntheta = 120;
    double s_lo = 0, s_hi = 0;  // both zero: natural window of the profile
    double theta_lo = 0, theta_hi = 0;  // both zero: full turn or [-1, 1]
    Model model = Model::raw4;
    double offset = 0;  // parallel offset distance
    bool curvature = true;
    double fd_step = 1e-4;
};

struct MeshQuality {
    double max_quadric_violation = 0;
    double max_K_error = 0;  // against the target over estimated vertices
    double K_target = 0;
    long singular_vertices = 0;
    long skipped_vertices = 0;
    long estimated_vertices = 0;
    long fd_fallbacks = 0;
};

struct SurfaceMesh {
    int ns = 0, ntheta = 0;
    Model model = Model::raw4;
    std::vector<AmbientPoint> ambient;
    std::vector<Vec4> vertices;  // projected (fourth entry 0) or raw
    std::vector<double> K_est, H_est;  // NaN where skipped
    std::vector<char> singular;
    std::vector<std::array<int, 4>> faces;
    MeshQuality quality;

    int index(int i, int j) const { return i * ntheta + j; }
};

SurfaceMesh build_mesh(const profile::CaseParams& params, const MeshOptions& opt = {});

}  // namespace cgc::geometry
