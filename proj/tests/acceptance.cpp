// Acceptance harness: one PASS/FAIL line per criterion. Tolerances are fixed here and
// override the suite defaults, so loosening a default cannot loosen a criterion.
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <string>

#include "cgc/cli_io.hpp"
#include "cgc/format.hpp"
#include "cgc/profile.hpp"
#include "cgc/verify.hpp"

using namespace cgc;
using verify::Check;
using verify::SuiteConfig;
using verify::VerificationReport;

namespace {

const std::map<std::string, double> kPinned = {
    {"elliptic/pythagorean", 1e-12},
    {"elliptic/derivatives", 1e-6},
    {"elliptic/periodicity", 1e-10},
    {"elliptic/rk4", 1e-9},
    {"elliptic/reciprocal_modulus", 1e-10},
    {"elliptic/imaginary_modulus", 1e-10},
    {"elliptic/imaginary_argument", 1e-10},
    {"elliptic/complete_integrals", 1e-11},
    {"elliptic/incomplete_integrals", 1e-11},
    {"elliptic/pi_quasi_periodicity", 1e-10},
    {"elliptic/pi_transforms", 1e-10},
    {"ode_residual", 1e-8},
    {"rk4_oracle", 1e-6},
    {"curvature", 5e-4},
    {"lemma", 1e-7},
    {"lemma_vs_fd", 5e-4},
    {"quadric", 1e-11},
    {"period/zero_at_pole", 1e-10},
    {"period/root", 1e-10},
    {"period/closure", 1e-7},
    {"lw_fit", 1e-6},
    {"bonnet", 1e-3},
    {"flat_fronts", 5e-4},
};

constexpr double kNoLimit = 1e9;

struct Outcome {
    bool pass = true;
    std::string detail;
};

SuiteConfig suite(std::vector<std::string> groups)
{
    SuiteConfig c;
    c.checks = std::move(groups);
    c.rows = profile::all_rows();
    c.tolerances = kPinned;
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs the suite and summarizes: every check passes, and the worst residual/tolerance.
Outcome run(const SuiteConfig& cfg, double time_limit, VerificationReport* out = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = verify::run_suite(cfg);
    const double dt = seconds_since(t0);
    Outcome o;
    const Check* worst = nullptr;
    double ratio = -1;
    int failed = 0;
    for (const auto& c : r.checks) {
        if (!c.pass)
            ++failed;
        const double q = c.tolerance > 0 ? c.max_residual / c.tolerance : c.max_residual;
        if (!(q <= ratio)) {
            ratio = q;
            worst = &c;
        }
    }
    o.pass = !r.checks.empty() && failed == 0 && dt < time_limit;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu checks, %d failed, %.2f s", r.checks.size(), failed, dt);
    o.detail = buf;
    if (time_limit < kNoLimit) {
        std::snprintf(buf, sizeof buf, " (limit %.0f s)", time_limit);
        o.detail += buf;
    }
    if (worst)
        o.detail += "; worst " + worst->name + " " + format_double(worst->max_residual) + " / " +
                    format_double(worst->tolerance);
    if (out)
        *out = r;
    return o;
}

void line(int n, const char* title, const Outcome& o, bool& all)
{
    std::printf("%s  %d  %s: %s\n", o.pass ? "PASS" : "FAIL", n, title, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
}

}  // namespace

int main()
{
    bool all = true;

    {
        auto cfg = suite({"elliptic"});
        cfg.elliptic_pairs = 120;
        VerificationReport r;
        auto o = run(cfg, 10, &r);
        for (const auto& c : r.checks)
            if (c.n_samples < 100) {
                o.pass = false;
                o.detail += "; " + c.name + " has only " + std::to_string(c.n_samples) + " pairs";
            }
        line(1, "elliptic identities", o, all);
    }
    {
        auto cfg = suite({"ode_residual"});
        cfg.p_grid = 11;
        cfg.s_samples = 200;
        line(2, "ODE residuals over every row", run(cfg, 60), all);
    }
    {
        VerificationReport r;
        auto o = run(suite({"rk4_oracle"}), kNoLimit, &r);
        long cases = 0;
        std::set<std::string> kinds;
        for (const auto& c : r.checks) {
            cases += c.n_samples / 2;  // forward and backward per case
            const auto row = profile::parse_row(c.name.substr(c.name.find('/') + 1));
            kinds.insert(profile::to_string(profile::fn_type(row)));
        }
        for (const char* k : {"cn", "dn", "cd", "sc", "nc", "dc", "trig", "hyperbolic"})
            if (!kinds.count(k)) {
                o.pass = false;
                o.detail += std::string("; no ") + k + " case";
            }
        if (cases < 20)
            o.pass = false;
        o.detail += "; " + std::to_string(cases) + " cases";
        line(3, "RK4 oracle equivalence", o, all);
    }
    {
        VerificationReport r;
        auto o = run(suite({"curvature", "lemma"}), kNoLimit, &r);
        std::set<std::string> spaces;
        for (const auto& c : r.checks)
            if (c.name.rfind("curvature/", 0) == 0 && c.pass)
                spaces.insert(c.name.substr(10, 3));
        if (spaces != std::set<std::string>{"s3-", "h3e", "h3h", "h3p"}) {
            o.pass = false;
            o.detail += "; not every space form has a passing mesh";
        }
        line(4, "curvature reproduction and lemma agreement", o, all);
    }
    {
        auto cfg = suite({"quadric"});
        cfg.mesh_ns = 400;
        cfg.mesh_ntheta = 120;
        line(5, "quadric constraints on 400 x 120 grids", run(cfg, kNoLimit), all);
    }
    line(6, "period equation", run(suite({"period"}), kNoLimit), all);
    line(7, "parallel family and Bonnet offsets", run(suite({"lw_fit", "bonnet"}), kNoLimit), all);
    line(8, "flat fronts", run(suite({"flat_fronts"}), kNoLimit), all);
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto a = cli_io::report_json(verify::run_suite(verify::default_suite()));
        const auto b = cli_io::report_json(verify::run_suite(verify::default_suite()));
        Outcome o;
        o.pass = a == b && !a.empty();
        char buf[128];
        std::snprintf(buf, sizeof buf, "two default reports of %zu bytes %s, %.2f s", a.size(),
                      a == b ? "identical" : "differ", seconds_since(t0));
        o.detail = buf;
        line(9, "determinism", o, all);
    }
    return all ? 0 : 1;
}
