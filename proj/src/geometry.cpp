#include "cgc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "cgc/error.hpp"
#include "cgc/format.hpp"

namespace cgc::geometry {

using profile::CaseParams;
using profile::ProfileSample;
using profile::Rotation;
using profile::SpaceForm;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec4 add(const Vec4& a, const Vec4& b, double ca = 1, double cb = 1)
{
    return {ca * a[0] + cb * b[0], ca * a[1] + cb * b[1], ca * a[2] + cb * b[2],
            ca * a[3] + cb * b[3]};
}

Vec4 scale(const Vec4& a, double c) { return {c * a[0], c * a[1], c * a[2], c * a[3]}; }

double norm_e(const Vec4& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]); }

bool finite(const Vec4& a)
{
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]) && std::isfinite(a[3]);
}

double det3(double a, double b, double c, double d, double e, double f, double g, double h, double i)
{
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// Euclidean generalized cross product: orthogonal to a, b, c.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c)
{
    return {
        det3(a[1], a[2], a[3], b[1], b[2], b[3], c[1], c[2], c[3]),
        -det3(a[0], a[2], a[3], b[0], b[2], b[3], c[0], c[2], c[3]),
        det3(a[0], a[1], a[3], b[0], b[1], b[3], c[0], c[1], c[3]),
        -det3(a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]),
    };
}

// G^{-1} w; each metric is its own inverse.
Vec4 raise(const Vec4& w, Signature sig)
{
    switch (sig) {
    case Signature::euclidean4: return w;
    case Signature::lorentz_orthonormal: return {-w[0], w[1], w[2], w[3]};
    case Signature::lorentz_pseudo: return {-w[1], -w[0], w[2], w[3]};
    }
    return w;
}

// Unit normal of the frame (f, a, b), or a zero vector when rank deficient.
Vec4 frame_normal(const Vec4& f, const Vec4& a, const Vec4& b, Signature sig)
{
    const Vec4 n = raise(cross4(f, a, b), sig);
    const double nn = inner(n, n, sig);
    const double ref = norm_e(f) * norm_e(a) * norm_e(b);
    if (!(nn > 1e-20 * ref * ref) || !std::isfinite(nn))
        return {0, 0, 0, 0};
    return scale(n, 1 / std::sqrt(nn));
}

bool is_zero(const Vec4& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0 && a[3] == 0; }

}  // namespace

const char* to_string(Signature s)
{
    switch (s) {
    case Signature::euclidean4: return "euclidean4";
    case Signature::lorentz_orthonormal: return "lorentz_orthonormal";
    case Signature::lorentz_pseudo: return "lorentz_pseudo";
    }
    return "?";
}

Signature signature_of(const SpaceForm& space)
{
    if (space.kappa() == 1)
        return Signature::euclidean4;
    if (space.kappa() == -1)
        return space.isotropic() ? Signature::lorentz_pseudo : Signature::lorentz_orthonormal;
    throw DomainError("no ambient embedding for " + space.name());
}

double inner(const Vec4& a, const Vec4& b, Signature sig)
{
    switch (sig) {
    case Signature::euclidean4: return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    case Signature::lorentz_orthonormal: return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    case Signature::lorentz_pseudo: return -a[0] * b[1] - a[1] * b[0] + a[2] * b[2] + a[3] * b[3];
    }
    return kNaN;
}

double quadric_target(Signature sig) { return sig == Signature::euclidean4 ? 1.0 : -1.0; }

double AmbientPoint::quadric_violation() const
{
    return std::abs(quadric() - quadric_target(signature));
}

RotationalSurface::RotationalSurface(const CaseParams& params)
    : params_(params), sig_(signature_of(params.id.space))
{
    // orientation: at the first regular profile point near s = 0, the normal points
    // toward increasing d
    const profile::Window w = profile::natural_window(params_);
    const double span = w.hi - w.lo;
    for (int k = 0; k <= 40; ++k) {
        const double s = (k % 2 ? -1 : 1) * ((k + 1) / 2) * 0.005 * span;
        Vec4 n;
        try {
            n = raw_normal(s, 0.0);
        } catch (const Error&) {
            continue;
        }
        if (is_zero(n))
            continue;
        const ProfileSample ps = profile::profile(params_, s);
        const double c = std::cos(ps.psi), sn = std::sin(ps.psi);
        Vec4 ref;
        if (sig_ == Signature::lorentz_pseudo) {
            const double t2 = ps.psi * ps.psi;
            ref = {-(t2 / 2 - 1 / (2 * ps.r * ps.r)), -1, 0, -ps.psi};
        } else if (params_.id.space.rotation() == Rotation::elliptic && params_.id.space.kappa() == -1) {
            ref = {std::cosh(ps.psi), std::sinh(ps.psi), 0, 0};
        } else {
            ref = {0, 0, c, sn};
        }
        const double dot = inner(n, ref, sig_);
        if (std::abs(dot) < 1e-9)
            continue;
        orientation_ = dot > 0 ? 1 : -1;
        return;
    }
}

Vec4 RotationalSurface::embed(const ProfileSample& ps, double theta) const
{
    const double r = ps.r, d = ps.d, psi = ps.psi;
    const SpaceForm& sf = params_.id.space;
    switch (sig_) {
    case Signature::euclidean4:
        return {r * std::cos(theta), r * std::sin(theta), d * std::cos(psi), d * std::sin(psi)};
    case Signature::lorentz_orthonormal:
        if (sf.rotation() == Rotation::elliptic)
            return {d * std::cosh(psi), d * std::sinh(psi), r * std::cos(theta), r * std::sin(theta)};
        return {r * std::cosh(theta), r * std::sinh(theta), d * std::cos(psi), d * std::sin(psi)};
    case Signature::lorentz_pseudo:
        return {(r * r * (theta * theta + psi * psi) + 1) / (2 * r), r, r * theta, r * psi};
    }
    return {};
}

AmbientPoint RotationalSurface::point(double s, double theta) const
{
    AmbientPoint pt{embed(profile::profile(params_, s), theta), sig_};
    const double v = pt.quadric_violation();
    if (!(v <= 1e-9 * std::max(1.0, norm_e(pt.x) * norm_e(pt.x))))
        throw ConstraintViolation("embedded point violates the quadric by " + format_double(v) +
                                  " at s = " + format_double(s));
    return pt;
}

std::array<Vec4, 2> RotationalSurface::fd_tangents(double s, double theta) const
{
    ++fd_fallbacks_;
    const double h = 1e-5;
    const Vec4 a = embed(profile::profile(params_, s + h), theta);
    const Vec4 b = embed(profile::profile(params_, s - h), theta);
    const ProfileSample ps = profile::profile(params_, s);
    const Vec4 c = embed(ps, theta + h);
    const Vec4 e = embed(ps, theta - h);
    return {scale(add(a, b, 1, -1), 0.5 / h), scale(add(c, e, 1, -1), 0.5 / h)};
}

std::array<Vec4, 2> RotationalSurface::tangents(double s, double theta) const
{
    const ProfileSample ps = profile::profile(params_, s);
    const double r = ps.r, d = ps.d, psi = ps.psi, dr = ps.dr, dpsi = ps.dpsi;
    const double ct = std::cos(theta), st = std::sin(theta);
    const SpaceForm& sf = params_.id.space;
    std::array<Vec4, 2> t;
    switch (sig_) {
    case Signature::euclidean4: {
        const double dd = -r * dr / d;
        const double c = std::cos(psi), sn = std::sin(psi);
        t[0] = {dr * ct, dr * st, dd * c - d * dpsi * sn, dd * sn + d * dpsi * c};
        t[1] = {-r * st, r * ct, 0, 0};
        break;
    }
    case Signature::lorentz_orthonormal: {
        const double dd = r * dr / d;
        if (sf.rotation() == Rotation::elliptic) {
            const double ch = std::cosh(psi), sh = std::sinh(psi);
            t[0] = {dd * ch + d * dpsi * sh, dd * sh + d * dpsi * ch, dr * ct, dr * st};
            t[1] = {0, 0, -r * st, r * ct};
        } else {
            const double c = std::cos(psi), sn = std::sin(psi);
            const double ch = std::cosh(theta), sh = std::sinh(theta);
            t[0] = {dr * ch, dr * sh, dd * c - d * dpsi * sn, dd * sn + d * dpsi * c};
            t[1] = {r * sh, r * ch, 0, 0};
        }
        break;
    }
    case Signature::lorentz_pseudo: {
        const double q = theta * theta + psi * psi;
        t[0] = {dr * q / 2 + r * psi * dpsi - dr / (2 * r * r), dr, dr * theta, dr * psi + r * dpsi};
        t[1] = {r * theta, 0, r, 0};
        break;
    }
    }
    if (!finite(t[0]) || !finite(t[1]))
        return fd_tangents(s, theta);
    return t;
}

Vec4 RotationalSurface::raw_normal(double s, double theta) const
{
    const Vec4 f = embed(profile::profile(params_, s), theta);
    const auto t = tangents(s, theta);
    return frame_normal(f, t[0], t[1], sig_);
}

Vec4 RotationalSurface::normal(double s, double theta) const
{
    const Vec4 n = raw_normal(s, theta);
    if (is_zero(n))
        throw SingularPoint("singular point of " + std::string(profile::row_name(params_.id.row)) +
                                " at s = " + format_double(s),
                            s, theta);
    return scale(n, orientation_);
}

AmbientPoint RotationalSurface::offset(double t, double s, double theta) const
{
    const Vec4 f = point(s, theta).x;
    const Vec4 n = normal(s, theta);
    AmbientPoint pt;
    pt.signature = sig_;
    if (sig_ == Signature::euclidean4) {
        const double tr = std::remainder(t, 2 * std::numbers::pi);
        pt.x = add(f, n, std::cos(tr), std::sin(tr));
    } else {
        pt.x = add(f, n, std::cosh(t), std::sinh(t));
    }
    return pt;
}

Vec4 RotationalSurface::offset_normal(double t, double s, double theta) const
{
    const Vec4 f = point(s, theta).x;
    const Vec4 n = normal(s, theta);
    if (sig_ == Signature::euclidean4)
        return add(f, n, -std::sin(t), std::cos(t));
    return add(f, n, std::sinh(t), std::cosh(t));
}

Vec4 RotationalSurface::rotate(double alpha, const Vec4& x) const
{
    const double c = std::cos(alpha), s = std::sin(alpha);
    switch (sig_) {
    case Signature::euclidean4: return {c * x[0] - s * x[1], s * x[0] + c * x[1], x[2], x[3]};
    case Signature::lorentz_orthonormal:
        if (params_.id.space.rotation() == Rotation::elliptic)
            return {x[0], x[1], c * x[2] - s * x[3], s * x[2] + c * x[3]};
        else {
            const double ch = std::cosh(alpha), sh = std::sinh(alpha);
            return {ch * x[0] + sh * x[1], sh * x[0] + ch * x[1], x[2], x[3]};
        }
    case Signature::lorentz_pseudo:
        return {x[0] + alpha * x[2] + alpha * alpha * x[1] / 2, x[1], x[2] + alpha * x[1], x[3]};
    }
    return x;
}

AmbientPoint embed(const CaseParams& params, double s, double theta)
{
    return RotationalSurface(params).point(s, theta);
}

Vec4 unit_normal(const CaseParams& params, double s, double theta)
{
    return RotationalSurface(params).normal(s, theta);
}

AmbientPoint parallel_offset(const CaseParams& params, double t, double s, double theta)
{
    return RotationalSurface(params).offset(t, s, theta);
}

const char* to_string(Model m)
{
    switch (m) {
    case Model::stereographic: return "stereo";
    case Model::poincare_ball: return "ball";
    case Model::half_space: return "halfspace";
    case Model::raw4: return "raw4";
    }
    return "?";
}

Model parse_model(const std::string& s)
{
    if (s == "stereo" || s == "stereographic")
        return Model::stereographic;
    if (s == "ball")
        return Model::poincare_ball;
    if (s == "halfspace" || s == "half_space")
        return Model::half_space;
    if (s == "raw4")
        return Model::raw4;
    throw DomainError("unknown model '" + s + "' (expected stereo, ball, halfspace or raw4)");
}

Vec4 to_orthonormal(const Vec4& x)
{
    const double r2 = std::numbers::sqrt2;
    return {(x[0] + x[1]) / r2, (x[0] - x[1]) / r2, x[2], x[3]};
}

Vec3 project(const AmbientPoint& pt, Model model)
{
    const Signature sig = pt.signature;
    if (model == Model::raw4)
        throw ProjectionError("raw4 is not a 3D model");
    if ((model == Model::stereographic) != (sig == Signature::euclidean4))
        throw ProjectionError(std::string("model ") + to_string(model) + " does not apply to " +
                              to_string(sig) + " points");
    Vec4 x = sig == Signature::lorentz_pseudo ? to_orthonormal(pt.x) : pt.x;
    const double den = model == Model::half_space ? x[0] + x[1] : 1 + x[0];
    if (!(den >= 1e-9))
        throw ProjectionError("projection pole: denominator " + format_double(den));
    if (model == Model::half_space)
        return {x[2] / den, x[3] / den, 1 / den};
    return {x[1] / den, x[2] / den, x[3] / den};
}

namespace {

struct RawCurvature {
    double K, H;
};

RawCurvature fd_forms(const Sampler& f, Signature sig, double s, double th, double h,
                      const Vec4& orient)
{
    const Vec4 c = f(s, th);
    const Vec4 sp = f(s + h, th), sm = f(s - h, th);
    const Vec4 tp = f(s, th + h), tm = f(s, th - h);
    const Vec4 pp = f(s + h, th + h), pm = f(s + h, th - h);
    const Vec4 mp = f(s - h, th + h), mm = f(s - h, th - h);
    Vec4 fs, ft, fss, ftt, fst;
    for (int i = 0; i < 4; ++i) {
        fs[i] = (sp[i] - sm[i]) / (2 * h);
        ft[i] = (tp[i] - tm[i]) / (2 * h);
        fss[i] = (sp[i] - 2 * c[i] + sm[i]) / (h * h);
        ftt[i] = (tp[i] - 2 * c[i] + tm[i]) / (h * h);
        fst[i] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4 * h * h);
    }
    const double E = inner(fs, fs, sig), F = inner(fs, ft, sig), G = inner(ft, ft, sig);
    const double det = E * G - F * F;
    if (!(det > 1e-10 * std::max(E * E, G * G)))
        throw SingularPoint("ill-conditioned first fundamental form at s = " + format_double(s), s, th);
    Vec4 n = frame_normal(c, fs, ft, sig);
    if (is_zero(n))
        throw SingularPoint("no normal at s = " + format_double(s), s, th);
    if (!is_zero(orient) && inner(n, orient, sig) < 0)
        n = scale(n, -1);
    const double L = inner(fss, n, sig), M = inner(fst, n, sig), N = inner(ftt, n, sig);
    return {(L * N - M * M) / det, (E * N - 2 * F * M + G * L) / (2 * det)};
}

}  // namespace

CurvatureEstimate fd_curvature(const Sampler& f, Signature sig, double s, double theta, double h,
                               const Vec4& orient)
{
    const RawCurvature a = fd_forms(f, sig, s, theta, h, orient);
    const RawCurvature b = fd_forms(f, sig, s, theta, h / 2, orient);
    CurvatureEstimate e;
    e.K = (4 * b.K - a.K) / 3;
    e.H = (4 * b.H - a.H) / 3;
    e.K_err = std::abs(b.K - a.K) / 3;
    e.H_err = std::abs(b.H - a.H) / 3;
    e.K_h = a.K;
    e.K_h2 = b.K;
    return e;
}

LwFit lw_fit(const std::vector<std::array<double, 2>>& samples)
{
    const auto n = static_cast<Eigen::Index>(samples.size());
    if (n < 3)
        throw DomainError("lw_fit needs at least 3 samples");
    Eigen::MatrixXd M(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& kh = samples[static_cast<std::size_t>(i)];
        if (!std::isfinite(kh[0]) || !std::isfinite(kh[1]))
            throw DomainError("lw_fit sample is not finite");
        M(i, 0) = kh[0];
        M(i, 1) = 2 * kh[1];
        M(i, 2) = 1;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinV);
    const Eigen::Vector3d sv = svd.singularValues();
    const Eigen::Matrix3d V = svd.matrixV();

    auto normalized = [](Eigen::Vector3d v) {
        v.normalize();
        for (int i = 0; i < 3; ++i) {
            if (std::abs(v(i)) > 1e-9) {
                if (v(i) < 0)
                    v = -v;
                break;
            }
        }
        return std::array<double, 3>{v(0), v(1), v(2)};
    };

    LwFit fit;
    const auto abc = normalized(V.col(2));
    fit.a = abc[0];
    fit.b = abc[1];
    fit.c = abc[2];
    fit.residual = sv(2) / std::sqrt(static_cast<double>(n));
    fit.tubularity = fit.a * fit.c - fit.b * fit.b;
    if (sv(1) <= 1e-9 * sv(0)) {
        fit.degenerate = true;
        fit.family = {normalized(V.col(1)), normalized(V.col(2))};
        fit.note = "samples have constant K and H; every (a,b,c) in the span of the family fits";
    }
    return fit;
}

double period_p_max(double K) { return std::sqrt(1 / (1 - K)); }

double period_function(double K, int n, double p)
{
    if (!(K < 0))
        throw DomainError("period equation needs K < 0");
    if (!(p >= 0 && p <= period_p_max(K)))
        throw BoundsError("p = " + format_double(p) + " outside [0," + format_double(period_p_max(K)) +
                          "]");
    const double k = 1 / (1 - K);
    const double gap = elliptic::complete_Pi(k, p) - elliptic::complete_F(p);
    const double invA = std::sqrt(std::max(0.0, 1 + (K - 1) * p * p) / (K * (K - 1)));
    return n * std::abs(K) * gap * invA;
}

PeriodSolution period_solve(double K, int n)
{
    if (!(K < 0))
        throw DomainError("period equation needs K < 0");
    if (n < 1)
        throw DomainError("period equation needs n >= 1");
    const double two_pi = 2 * std::numbers::pi;
    const double pmax = period_p_max(K);
    auto g = [&](double p) { return period_function(K, n, p) - two_pi; };
    const double g0 = g(0.0);
    if (g0 < 0)
        throw NoClosedCurve("no closed profile for n = " + std::to_string(n) + ": P(n,0) = " +
                            format_double(g0 + two_pi) + " < 2 pi");

    PeriodSolution sol{};
    const int scan = 256;
    double prev = g0;
    for (int i = 1; i <= scan; ++i) {
        const double cur = g(pmax * i / scan);
        if ((prev > 0) != (cur > 0))
            ++sol.sign_changes;
        prev = cur;
    }

    double lo = 0, hi = pmax;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (g(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    sol.p = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
    sol.residual = std::abs(g(sol.p));
    const double A = std::sqrt(K * (K - 1) / (1 + (K - 1) * sol.p * sol.p));
    sol.profile_period = 2 * elliptic::complete_F(sol.p) / A;
    return sol;
}

SurfaceMesh build_mesh(const CaseParams& params, const MeshOptions& opt)
{
    if (opt.ns < 2 || opt.ntheta < 2)
        throw DomainError("mesh needs at least 2 x 2 samples");
    const RotationalSurface surf(params);
    const Signature sig = surf.signature();
    const bool offset = opt.offset != 0;

    double s_lo = opt.s_lo, s_hi = opt.s_hi;
    if (s_lo == 0 && s_hi == 0) {
        const profile::Window w = profile::natural_window(params);
        s_lo = w.lo;
        s_hi = w.hi;
    }
    double t_lo = opt.theta_lo, t_hi = opt.theta_hi;
    if (t_lo == 0 && t_hi == 0) {
        if (params.id.space.rotation() == Rotation::elliptic)
            t_hi = 2 * std::numbers::pi;
        else
            t_lo = -1, t_hi = 1;
    }

    SurfaceMesh mesh;
    mesh.ns = opt.ns;
    mesh.ntheta = opt.ntheta;
    mesh.model = opt.model;
    const std::size_t nv = static_cast<std::size_t>(opt.ns) * opt.ntheta;
    mesh.ambient.resize(nv);
    mesh.vertices.resize(nv);
    mesh.K_est.assign(nv, kNaN);
    mesh.H_est.assign(nv, kNaN);
    mesh.singular.assign(nv, 0);
    mesh.quality.K_target = offset ? kNaN : params.id.K;

    auto s_at = [&](int i) { return s_lo + (s_hi - s_lo) * i / (opt.ns - 1); };
    auto t_at = [&](int j) { return t_lo + (t_hi - t_lo) * j / (opt.ntheta - 1); };

    std::vector<Vec4> normals(nv);
    for (int i = 0; i < opt.ns; ++i) {
        for (int j = 0; j < opt.ntheta; ++j) {
            const int v = mesh.index(i, j);
            const double s = s_at(i), th = t_at(j);
            try {
                normals[v] = surf.normal(s, th);
            } catch (const SingularPoint&) {
                normals[v] = {0, 0, 0, 0};
                mesh.singular[v] = 1;
            }
            // without a normal the offset is undefined; the base point is kept
            if (offset && !mesh.singular[v])
                mesh.ambient[v] = surf.offset(opt.offset, s, th);
            else
                mesh.ambient[v] = surf.point(s, th);
            mesh.quality.max_quadric_violation =
                std::max(mesh.quality.max_quadric_violation, mesh.ambient[v].quadric_violation());
            if (opt.model == Model::raw4) {
                mesh.vertices[v] = mesh.ambient[v].x;
            } else {
                const Vec3 y = project(mesh.ambient[v], opt.model);
                mesh.vertices[v] = {y[0], y[1], y[2], 0};
            }
        }
    }
    // the normalized cofactor normal reverses across a cuspidal edge
    for (int i = 0; i + 1 < opt.ns; ++i) {
        for (int j = 0; j < opt.ntheta; ++j) {
            const int a = mesh.index(i, j), b = mesh.index(i + 1, j);
            if (!mesh.singular[a] && !mesh.singular[b] && inner(normals[a], normals[b], sig) < 0)
                mesh.singular[a] = mesh.singular[b] = 1;
        }
    }
    for (char c : mesh.singular)
        mesh.quality.singular_vertices += c;

    for (int i = 0; i + 1 < opt.ns; ++i)
        for (int j = 0; j + 1 < opt.ntheta; ++j)
            mesh.faces.push_back({mesh.index(i, j), mesh.index(i + 1, j), mesh.index(i + 1, j + 1),
                                  mesh.index(i, j + 1)});

    if (opt.curvature) {
        std::vector<char> skip(mesh.singular);
        const int collar = 2;
        for (int i = 0; i < opt.ns; ++i)
            for (int j = 0; j < opt.ntheta; ++j) {
                if (!mesh.singular[mesh.index(i, j)])
                    continue;
                for (int di = -collar; di <= collar; ++di)
                    for (int dj = -collar; dj <= collar; ++dj) {
                        const int ii = i + di, jj = j + dj;
                        if (ii >= 0 && ii < opt.ns && jj >= 0 && jj < opt.ntheta)
                            skip[mesh.index(ii, jj)] = 1;
                    }
            }
        const Sampler sampler = [&](double s, double th) {
            return offset ? surf.offset(opt.offset, s, th).x : surf.point(s, th).x;
        };
        for (int i = 0; i < opt.ns; ++i) {
            for (int j = 0; j < opt.ntheta; ++j) {
                const int v = mesh.index(i, j);
                if (skip[v]) {
                    ++mesh.quality.skipped_vertices;
                    continue;
                }
                const Vec4 orient = offset ? surf.offset_normal(opt.offset, s_at(i), t_at(j)) : normals[v];
                try {
                    const CurvatureEstimate e = fd_curvature(sampler, sig, s_at(i), t_at(j), opt.fd_step, orient);
                    mesh.K_est[v] = e.K;
                    mesh.H_est[v] = e.H;
                    ++mesh.quality.estimated_vertices;
                    if (!offset)
                        mesh.quality.max_K_error =
                            std::max(mesh.quality.max_K_error, std::abs(e.K - params.id.K));
                } catch (const Error&) {
                    ++mesh.quality.skipped_vertices;
                }
            }
        }
    }
    mesh.quality.fd_fallbacks = surf.fd_fallbacks();
    return mesh;
}

}  // namespace cgc::geometry
