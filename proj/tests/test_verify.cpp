#include <cmath>

#include <doctest.h>

#include "cgc/cases.hpp"
#include "cgc/error.hpp"
#include "cgc/geometry.hpp"
#include "cgc/profile.hpp"
#include "cgc/verify.hpp"

using namespace cgc::verify;
using cgc::DomainError;
using cgc::SingularPoint;
using cgc::geometry::RotationalSurface;
using cgc::geometry::Sampler;
using cgc::profile::CaseParams;
using cgc::profile::Row;
using cgc::profile::branch_of;
using cgc::profile::make_params;

namespace {

CaseParams params(Row row, double K, double x)
{
    return make_params(branch_of(row, K).id, x);
}

const Check* find(const VerificationReport& r, const std::string& name)
{
    for (const auto& c : r.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("lemma on the Clifford torus")
{
    const auto cp = params(Row::s3_clifford, -1, 0.6);
    for (double s : {-1.0, 0.0, 0.4, 2.5})
        CHECK(std::abs(gauss_from_moutard(moutard_from_sample(cp, s), s) + 1) < 1e-12);
}

TEST_CASE("lemma on the cn family of S^3 with K = 1")
{
    double worst = 0;
    int used = 0;
    for (double p = 0.1; p < 0.95; p += 0.1) {
        const auto cp = params(Row::s3_pos_cn, 1, p);
        const auto w = cgc::profile::natural_window(cp);
        for (int i = 0; i < 40; ++i) {
            const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / 40;
            const auto m = moutard_from_sample(cp, s);
            if (std::abs(m.R) > 1e3)
                continue;
            worst = std::max(worst, std::abs(gauss_from_moutard(m, s) - 1));
            ++used;
        }
    }
    CHECK(used > 300);
    CHECK(worst < 1e-7);
}

TEST_CASE("lemma in R^3")
{
    // cylinder: constant radius, unit speed along the axis
    const auto m = moutard_from_profile(cgc::profile::kR3, 0.7, 0, 0, 1.3, 0);
    CHECK(m.euclidean);
    CHECK(m.D == doctest::Approx(1 / 0.7));
    CHECK(std::abs(gauss_from_moutard(m)) < 1e-14);
}

TEST_CASE("lemma singular points")
{
    // on the rotation axis
    CHECK_THROWS_AS(gauss_from_moutard(moutard_from_profile(cgc::profile::kS3, 0, 1, 0, 1, 0)),
                    SingularPoint);
    // zero profile speed
    CHECK_THROWS_AS(gauss_from_moutard(moutard_from_profile(cgc::profile::kS3, 0.5, 0, 0, 0, 0)),
                    SingularPoint);
}

TEST_CASE("lemma against finite differences on H^3 with hyperbolic rotation")
{
    const auto cp = params(Row::h3h_neg_dn, -1, 0.5);
    const RotationalSurface surf(cp);
    const Sampler f = [&](double s, double th) { return surf.point(s, th).x; };
    for (double s : {-0.7, 0.3, 1.1}) {
        const auto e = curvature_fd(f, surf.signature(), s, 0.2, 1e-4, surf.normal(s, 0.2));
        CHECK(std::abs(e.K + 1) < 1e-4);
        CHECK(std::abs(gauss_from_moutard(moutard_from_sample(cp, s), s) + 1) < 1e-10);
    }
}

TEST_CASE("finite difference error drops with the step")
{
    const auto cp = params(Row::s3_pos_dn, 2, 0.5);
    const RotationalSurface surf(cp);
    const Sampler f = [&](double s, double th) { return surf.point(s, th).x; };
    const double e1 = std::abs(curvature_fd(f, surf.signature(), 0.3, 0.1, 4e-3).K - 2);
    const double e2 = std::abs(curvature_fd(f, surf.signature(), 0.3, 0.1, 2e-3).K - 2);
    CHECK(e2 < e1);
}

TEST_CASE("Bonnet offsets of a positive dn surface")
{
    const auto cp = case_grid(Row::s3_pos_dn, 1).front();
    const auto b = bonnet_scan(cp);
    REQUIRE(b.t.size() == 4);
    CHECK(b.max_pair_error < 1e-3);
    CHECK(b.max_fit_residual < 1e-6);
    for (std::size_t i = 1; i < b.t.size(); ++i)
        CHECK(b.t[i] > b.t[i - 1]);
}

TEST_CASE("tolerances")
{
    CHECK(default_tolerance("quadric/s3-pos-cn") == 1e-11);
    CHECK(default_tolerance("period/closure") == 1e-7);
    CHECK(default_tolerance("period/root") == 1e-10);
    CHECK_THROWS_AS(default_tolerance("nonsense"), DomainError);
}

TEST_CASE("empty suite")
{
    const auto r = run_suite(SuiteConfig{});
    CHECK(r.checks.empty());
    CHECK(r.all_pass());
}

TEST_CASE("default suite passes")
{
    const auto r = run_suite(default_suite());
    CHECK(r.checks.size() > 50);
    for (const auto& c : r.checks) {
        INFO(c.name << " " << c.max_residual << " > " << c.tolerance);
        CHECK(c.pass);
    }
    CHECK(r.all_pass());
}

TEST_CASE("a perturbed amplitude is caught")
{
    SuiteConfig cfg;
    cfg.checks = {"ode_residual"};
    cfg.rows = {Row::s3_pos_cn, Row::h3e_neg_dn};
    const auto clean = run_suite(cfg);
    CHECK(clean.all_pass());
    cfg.mutation = Mutation{"amp", 1e-3};
    const auto r = run_suite(cfg);
    REQUIRE(r.checks.size() == 2);
    for (const auto& c : r.checks)
        CHECK_FALSE(c.pass);
}

TEST_CASE("tolerance overrides")
{
    SuiteConfig cfg;
    cfg.checks = {"quadric"};
    cfg.rows = {Row::s3_pos_dn};
    cfg.mesh_ns = 20;
    cfg.mesh_ntheta = 8;
    cfg.tolerances["quadric"] = -1;
    const auto r = run_suite(cfg);
    REQUIRE(r.checks.size() == 1);
    CHECK_FALSE(r.checks[0].pass);
    cfg.tolerances = {{"quadric/s3-pos-dn", 1}};
    CHECK(run_suite(cfg).all_pass());
}

TEST_CASE("suite output is deterministic")
{
    SuiteConfig cfg;
    cfg.checks = {"elliptic", "lemma", "period"};
    cfg.rows = {Row::s3_pos_cn, Row::h3p_flat};
    const auto a = run_suite(cfg), b = run_suite(cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].name == b.checks[i].name);
        CHECK(a.checks[i].max_residual == b.checks[i].max_residual);
        CHECK(a.checks[i].n_samples == b.checks[i].n_samples);
    }
    REQUIRE(find(a, "lemma/h3p-flat"));
    CHECK(find(a, "lemma/h3p-flat")->pass);
    cfg.seed = 2;
    const auto c = run_suite(cfg);
    CHECK(find(c, "elliptic/pythagorean")->max_residual <= 1e-14);
}
