#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "cgc/error.hpp"
#include "cgc/geometry.hpp"
#include "cgc/profile.hpp"

using namespace cgc::geometry;
using cgc::profile::CaseParams;
using cgc::profile::Row;
using cgc::profile::branch_of;
using cgc::profile::make_params;
using doctest::Approx;

namespace {

CaseParams params(Row row, double K, double x)
{
    return make_params(branch_of(row, K).id, x);
}

double dist(const Vec4& a, const Vec4& b)
{
    double m = 0;
    for (int i = 0; i < 4; ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// curvature samples of a parallel offset along the profile
std::vector<std::array<double, 2>> offset_samples(const CaseParams& cp, double t, int n)
{
    const RotationalSurface surf(cp);
    const auto w = cgc::profile::natural_window(cp);
    const Sampler f = [&](double s, double th) { return surf.offset(t, s, th).x; };
    std::vector<std::array<double, 2>> out;
    for (int i = 0; i < n; ++i) {
        const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / n;
        const auto e = fd_curvature(f, surf.signature(), s, 0.3, 1e-3, surf.offset_normal(t, s, 0.3));
        out.push_back({e.K, e.H});
    }
    return out;
}

}  // namespace

TEST_CASE("embedding satisfies the quadric")
{
    // parabolic formula is an algebraic identity
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3), pos(0.05, 4);
    for (int i = 0; i < 1000; ++i) {
        const double r = pos(rng), th = u(rng), psi = u(rng);
        const Vec4 x{(r * r * (th * th + psi * psi) + 1) / (2 * r), r, r * th, r * psi};
        CHECK(std::abs(inner(x, x, Signature::lorentz_pseudo) + 1) < 1e-12 * (1 + x[0] * x[0]));
    }

    const AmbientPoint p = embed(params(Row::s3_flat, -1, 0.6), 0, 0);
    CHECK(p.x[0] == Approx(0.8).epsilon(1e-15));
    CHECK(p.x[1] == 0.0);
    CHECK(p.x[2] == Approx(0.6).epsilon(1e-15));
    CHECK(p.x[3] == 0.0);

    const auto cp = params(Row::h3e_pos_cn, 2, 0.5);
    const auto w = cgc::profile::natural_window(cp);
    const RotationalSurface surf(cp);
    double worst = 0;
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 30; ++j) {
            const auto q = surf.point(w.lo + (w.hi - w.lo) * i / 59, 2 * std::numbers::pi * j / 29);
            CHECK(q.signature == Signature::lorentz_orthonormal);
            CHECK(q.x[0] > 0);
            worst = std::max(worst, q.quadric_violation());
        }
    CHECK(worst < 1e-12);

    CHECK_THROWS_AS(signature_of(cgc::profile::kR3), cgc::DomainError);
}

TEST_CASE("rotation commutes with the embedding")
{
    const CaseParams cases[] = {params(Row::s3_pos_cn, 1, 0.5), params(Row::h3e_pos_cn, 2, 0.5),
                                params(Row::h3h_pos_dn, 2, 0.4), params(Row::h3p_pos_dn, 2, 0.7)};
    for (const auto& cp : cases) {
        const RotationalSurface surf(cp);
        for (double s : {-0.3, 0.2, 0.7})
            for (double th : {-0.4, 0.0, 0.5})
                for (double a : {0.25, -0.6}) {
                    const Vec4 lhs = surf.point(s, th + a).x;
                    const Vec4 rhs = surf.rotate(a, surf.point(s, th).x);
                    CHECK(dist(lhs, rhs) < 1e-12 * (1 + std::abs(lhs[0])));
                }
    }
}

TEST_CASE("projections")
{
    const AmbientPoint apex{{1, 0, 0, 0}, Signature::lorentz_orthonormal};
    const Vec3 o = project(apex, Model::poincare_ball);
    CHECK(o[0] == 0.0);
    CHECK(o[1] == 0.0);
    CHECK(o[2] == 0.0);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0, 1.5);
    for (int i = 0; i < 10000; ++i) {
        const double a = g(rng), b = g(rng), c = g(rng);
        const AmbientPoint pt{{std::sqrt(1 + a * a + b * b + c * c), a, b, c}, Signature::lorentz_orthonormal};
        const Vec3 y = project(pt, Model::poincare_ball);
        CHECK(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] < 1);
        CHECK(project(pt, Model::half_space)[2] > 0);
        // the same point in pseudo-orthonormal coordinates
        const double r2 = std::numbers::sqrt2;
        const AmbientPoint ps{{(pt.x[0] + pt.x[1]) / r2, (pt.x[0] - pt.x[1]) / r2, b, c},
                              Signature::lorentz_pseudo};
        CHECK(std::abs(ps.quadric() + 1) < 1e-9 * (1 + pt.x[0] * pt.x[0]));
        const Vec3 z = project(ps, Model::poincare_ball);
        CHECK(std::abs(z[0] - y[0]) + std::abs(z[1] - y[1]) + std::abs(z[2] - y[2]) < 1e-12);
    }

    const AmbientPoint sp{{0.6, 0, 0.8, 0}, Signature::euclidean4};
    const Vec3 st = project(sp, Model::stereographic);
    CHECK(st[1] == Approx(0.5));
    CHECK_THROWS_AS(project(AmbientPoint{{-1, 0, 0, 0}, Signature::euclidean4}, Model::stereographic),
                    cgc::ProjectionError);
    CHECK_THROWS_AS(project(sp, Model::poincare_ball), cgc::ProjectionError);
    CHECK_THROWS_AS(project(apex, Model::stereographic), cgc::ProjectionError);
    CHECK(parse_model("halfspace") == Model::half_space);
    CHECK_THROWS_AS(parse_model("klein"), cgc::DomainError);
}

TEST_CASE("unit normal")
{
    const auto cp = params(Row::h3e_pos_cn, 2, 0.5);
    const RotationalSurface surf(cp);
    const auto w = cgc::profile::natural_window(cp);
    double worst = 0;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / 50, th = 2 * std::numbers::pi * j / 50;
            const Vec4 n = surf.normal(s, th);
            const Vec4 f = surf.point(s, th).x;
            const auto t = surf.tangents(s, th);
            const auto sig = surf.signature();
            worst = std::max({worst, std::abs(inner(n, n, sig) - 1), std::abs(inner(n, f, sig)),
                              std::abs(inner(n, t[0], sig)) / (1 + std::abs(t[0][0])),
                              std::abs(inner(n, t[1], sig)) / (1 + std::abs(t[1][0]))});
        }
    CHECK(worst < 1e-9);

    // Clifford torus: normal of the parallel circles
    const auto cl = params(Row::s3_clifford, -1, 0.6);
    const RotationalSurface torus(cl);
    for (double s : {0.0, 1.1, 2.5})
        for (double th : {0.0, 0.9}) {
            const Vec4 n = torus.normal(s, th);
            const double psi = cgc::profile::profile(cl, s).psi, d = 0.8, r = 0.6;
            const Vec4 expect{-d * std::cos(th), -d * std::sin(th), r * std::cos(psi), r * std::sin(psi)};
            CHECK(dist(n, expect) < 1e-12);
            CHECK(inner(n, n, Signature::euclidean4) == Approx(1.0));
        }

    // theta -> -theta: the normal follows the reflection x1 -> -x1 with one sign
    const auto s3 = params(Row::s3_pos_dn, 1, 0.5);
    const RotationalSurface ss(s3);
    int agree = 0, total = 0;
    for (double s : {-0.8, -0.1, 0.4, 1.0})
        for (double th : {0.3, 1.2, 2.9}) {
            Vec4 a = ss.normal(s, th);
            a[1] = -a[1];
            const Vec4 b = ss.normal(s, -th);
            const double dot = inner(a, b, Signature::euclidean4);
            CHECK(std::abs(std::abs(dot) - 1) < 1e-12);
            agree += dot > 0;
            ++total;
        }
    CHECK((agree == 0 || agree == total));

    // orientation: toward increasing d at s = 0
    const Vec4 n0 = ss.normal(0, 0);
    const double psi0 = cgc::profile::profile(s3, 0).psi;
    CHECK(n0[2] * std::cos(psi0) + n0[3] * std::sin(psi0) > 0);
}

TEST_CASE("singular points are reported")
{
    // the s3 K < -1 cn profile has r' = psi' = 0 at s = 0
    const auto cp = params(Row::s3_neg_cn, -2.5, 0.5);
    const auto ps = cgc::profile::profile(cp, 0);
    REQUIRE(std::abs(ps.dr) < 1e-14);
    REQUIRE(std::abs(ps.dpsi) < 1e-14);
    try {
        unit_normal(cp, 0, 0.3);
        FAIL("expected singular point");
    } catch (const cgc::SingularPoint& e) {
        CHECK(e.s() == 0.0);
        CHECK(e.theta() == 0.3);
    }
}

TEST_CASE("parallel offsets")
{
    const auto cp = params(Row::s3_pos_dn, 1, 0.5);
    const RotationalSurface surf(cp);
    for (double s : {-0.5, 0.3})
        for (double th : {0.1, 2.0}) {
            const Vec4 f = surf.point(s, th).x;
            CHECK(dist(surf.offset(0, s, th).x, f) == 0.0);
            const Vec4 n = surf.normal(s, th);
            CHECK(dist(surf.offset(std::numbers::pi, s, th).x, Vec4{-f[0], -f[1], -f[2], -f[3]}) < 1e-15);
            CHECK(dist(surf.offset(std::numbers::pi / 2, s, th).x, n) < 1e-15);
            for (double t : {0.4, 2.2, -1.3, 7.0})
                CHECK(surf.offset(t, s, th).quadric_violation() < 1e-11);
        }
    const auto h = params(Row::h3e_pos_cn, 2, 0.5);
    const RotationalSurface hs(h);
    for (double t : {0.3, -0.7, 1.5})
        CHECK(hs.offset(t, 0.4, 1.0).quadric_violation() < 1e-11);

    const auto fit = lw_fit(offset_samples(cp, 0.4, 40));
    CHECK(fit.residual < 1e-6);
    CHECK_FALSE(fit.degenerate);

    const auto fh = lw_fit(offset_samples(h, 0.3, 40));
    CHECK(fh.residual < 1e-6);
    CHECK(std::abs(fh.tubularity) > 1e-3);
    CHECK(std::abs(fh.a * fh.a + fh.b * fh.b + fh.c * fh.c - 1) < 1e-14);
}

TEST_CASE("lw_fit")
{
    std::vector<std::array<double, 2>> cgc_samples;
    for (int i = 0; i < 30; ++i)
        cgc_samples.push_back({2.0, 0.1 * i - 1});
    auto fit = lw_fit(cgc_samples);
    CHECK(fit.residual < 1e-8);
    CHECK(fit.a == Approx(1 / std::sqrt(5.0)));
    CHECK(std::abs(fit.b) < 1e-12);
    CHECK(fit.c == Approx(-2 / std::sqrt(5.0)));

    const std::vector<std::array<double, 2>> same(10, {1.5, 0.5});
    fit = lw_fit(same);
    CHECK(fit.degenerate);
    REQUIRE(fit.family.size() == 2);
    for (const auto& v : fit.family)
        CHECK(std::abs(1.5 * v[0] + 2 * 0.5 * v[1] + v[2]) < 1e-12);

    CHECK_THROWS_AS(lw_fit({{1, 2}, {3, 4}}), cgc::DomainError);

    // residual grows linearly with the noise level
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 1);
    std::vector<double> noise(60);
    for (auto& x : noise)
        x = g(rng);
    double res[2];
    const double amp[2] = {1e-4, 1e-3};
    for (int k = 0; k < 2; ++k) {
        std::vector<std::array<double, 2>> smp;
        for (int i = 0; i < 30; ++i) {
            const double H = 0.1 * i - 1;
            // K + 2 * 0.3 H - 0.5 = 0
            smp.push_back({0.5 - 0.6 * H + amp[k] * noise[2 * i], H + amp[k] * noise[2 * i + 1]});
        }
        res[k] = lw_fit(smp).residual;
    }
    CHECK(res[1] / res[0] == Approx(10).epsilon(0.05));
}

TEST_CASE("finite-difference curvature")
{
    const auto cp = params(Row::s3_pos_cn, 1, 0.5);
    const RotationalSurface surf(cp);
    const Sampler f = [&](double s, double th) { return surf.point(s, th).x; };
    for (double s : {0.3, 0.9}) {
        const auto e = fd_curvature(f, surf.signature(), s, 0.2, 1e-2, surf.normal(s, 0.2));
        CHECK(std::abs(e.K - 1) < 1e-6);
        // second-order stencil: halving the step divides the error by about 4
        const double ratio = std::abs(e.K_h - 1) / std::abs(e.K_h2 - 1);
        CHECK(ratio == Approx(4).epsilon(0.05));
    }

    // Clifford torus in S^3: principal curvatures r/d and -d/r
    const auto cl = params(Row::s3_clifford, -1, 0.6);
    const RotationalSurface torus(cl);
    const Sampler g = [&](double s, double th) { return torus.point(s, th).x; };
    const auto e = fd_curvature(g, Signature::euclidean4, 0.4, 0.7, 1e-3, torus.normal(0.4, 0.7));
    CHECK(e.K == Approx(-1).epsilon(1e-8));
    CHECK(std::abs(e.H) == Approx(0.5 * (0.8 / 0.6 - 0.6 / 0.8)).epsilon(1e-8));
}

TEST_CASE("meshes")
{
    MeshOptions opt;
    opt.ns = 2;
    opt.ntheta = 2;
    opt.curvature = false;
    auto mesh = build_mesh(params(Row::s3_pos_cn, 1, 0.5), opt);
    CHECK(mesh.vertices.size() == 4);
    CHECK(mesh.faces.size() == 1);

    struct Case {
        CaseParams cp;
        Model model;
    };
    const Case cases[] = {
        {params(Row::s3_pos_cn, 1, 0.5), Model::stereographic},
        {params(Row::h3e_pos_cn, 2, 0.5), Model::poincare_ball},
        {params(Row::h3h_pos_dn, 2, 0.4), Model::half_space},
        {make_params(branch_of(Row::h3p_pos_dn, 2).id, 0.7), Model::poincare_ball},
        {params(Row::s3_clifford, -1, 0.6), Model::stereographic},
        {params(Row::h3h_peach, 1, 0.8), Model::poincare_ball},
        {params(Row::h3e_snowman, 1, 0.7), Model::poincare_ball},
        {params(Row::h3e_hourglass, 1, 0.7), Model::half_space},
    };
    for (const auto& c : cases) {
        CAPTURE(cgc::profile::row_name(c.cp.id.row));
        opt.ns = 41;
        opt.ntheta = 9;
        opt.model = c.model;
        opt.curvature = true;
        mesh = build_mesh(c.cp, opt);
        CHECK(mesh.quality.max_quadric_violation <= 1e-11);
        CHECK(mesh.quality.estimated_vertices > 0);
        CHECK(mesh.quality.max_K_error <= 5e-4);
        CHECK(mesh.quality.fd_fallbacks == 0);
        for (const auto& q : mesh.faces)
            for (int v : q)
                CHECK((v >= 0 && v < static_cast<int>(mesh.vertices.size())));
    }
}

TEST_CASE("period equation")
{
    const double two_pi = 2 * std::numbers::pi;
    for (int n : {1, 10, 40, 100})
        CHECK(std::abs(period_function(-1, n, std::sqrt(0.5))) < 1e-10);
    CHECK(period_p_max(-1) == Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(period_solve(-1, 13), cgc::NoClosedCurve);
    CHECK_THROWS_AS(period_solve(1, 20), cgc::DomainError);

    const auto s14 = period_solve(-1, 14);
    CHECK(s14.residual < 1e-10);
    CHECK(s14.sign_changes == 1);

    const auto sol = period_solve(-1, 40);
    CHECK(sol.sign_changes == 1);
    CHECK(sol.residual < 1e-10);
    CHECK(std::abs(period_function(-1, 40, sol.p) - two_pi) < 1e-10);

    // the profile closes after n periods
    for (auto [n, s] : {std::pair{14, s14}, std::pair{40, sol}}) {
        const auto cp = params(Row::h3h_neg_dn, -1, s.p);
        REQUIRE(s.profile_period == Approx(2 * cgc::elliptic::complete_F(s.p) / cp.A).epsilon(1e-14));
        const double X = n * s.profile_period;
        for (double t : {0.0, 0.37, 1.9}) {
            const auto a = cgc::profile::profile(cp, t), b = cgc::profile::profile(cp, t + X);
            CHECK(std::abs(a.r - b.r) < 1e-8);
            CHECK(std::abs(std::cos(a.psi) - std::cos(b.psi)) < 1e-7);
            CHECK(std::abs(std::sin(a.psi) - std::sin(b.psi)) < 1e-7);
        }
    }
}
