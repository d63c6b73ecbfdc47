#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgc/cli_io.hpp"
#include "cgc/error.hpp"
#include "cgc/format.hpp"
#include "cgc/geometry.hpp"
#include "cgc/profile.hpp"
#include "cgc/verify.hpp"

namespace {

using namespace cgc;
using nlohmann::json;

std::string read_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw cli_io::IoError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string rows_help()
{
    std::string s = "Rows (use --row NAME, or --space/--rotation/--branch TAG):\n";
    for (auto r : profile::all_rows())
        s += "  " + profile::row_summary(r) + "\n";
    s += "\nBranch parameters: modulus rows take --p, or the integration constant --C;\n"
         "flat fronts take their rate p; the Clifford torus takes its radius r0 as --p.";
    return s;
}

// Flags describing one case. They are folded into a job description and validated by
// parse_config, so the CLI and job files share one set of rules.
struct CaseFlags {
    std::string config;
    std::optional<std::string> row, space, rotation, branch;
    std::optional<double> K, p, C;

    void add(CLI::App* app)
    {
        app->add_option("--config", config, "job description (JSON); flags override its keys");
        app->add_option("--row", row, "row name, e.g. s3-pos-dn");
        app->add_option("--space", space, "s3 or h3");
        app->add_option("--rotation", rotation, "elliptic, hyperbolic or parabolic");
        app->add_option("--branch", branch, "branch tag, e.g. cn, dn, cd1, peach");
        app->add_option("--K", K, "Gauss curvature");
        app->add_option("--p", p, "branch parameter");
        app->add_option("--C", C, "integration constant (instead of --p)");
    }

    json job(const std::string& subcommand) const
    {
        json j = json::object();
        if (!config.empty()) {
            try {
                j = json::parse(read_file(config));
            } catch (const json::parse_error& e) {
                throw cli_io::ConfigError(config + ": " + e.what());
            }
            if (!j.is_object())
                throw cli_io::ConfigError(config + ": expected an object");
        }
        j["subcommand"] = subcommand;
        if (row)
            j["row"] = *row;
        if (space)
            j["space"] = *space;
        if (rotation)
            j["rotation"] = *rotation;
        if (branch)
            j["branch"] = *branch;
        if (K)
            j["K"] = *K;
        // a flag replaces either parameter from the file
        if (p) {
            j.erase("C");
            j["p"] = *p;
        }
        if (C) {
            j.erase("p");
            j["C"] = *C;
        }
        return j;
    }
};

struct MeshFlags {
    std::optional<int> ns, ntheta;
    std::optional<std::string> model, format;
    std::string out = "-";
    bool no_curvature = false;

    void add(CLI::App* app)
    {
        app->add_option("--ns", ns, "profile samples (default 400)");
        app->add_option("--ntheta", ntheta, "rotation samples (default 120)");
        app->add_option("--model", model, "stereo, ball, halfspace or raw4 (default raw4)");
        app->add_option("--format", format, "obj or ply (default: from --out)");
        app->add_flag("--no-curvature", no_curvature, "skip finite-difference curvature");
    }

    void fold(json& j) const
    {
        if (ns)
            j["samples"] = *ns;
        if (ntheta)
            j["ntheta"] = *ntheta;
        if (model)
            j["model"] = *model;
        if (format)
            j["format"] = *format;
    }
};

geometry::MeshOptions mesh_options(const cli_io::JobConfig& job, bool curvature)
{
    geometry::MeshOptions opt;
    opt.ns = job.samples;
    opt.ntheta = job.ntheta;
    opt.model = job.model;
    opt.offset = job.offset;
    opt.curvature = curvature;
    return opt;
}

cli_io::MeshFormat mesh_format(const cli_io::JobConfig& job, const std::string& out)
{
    if (!job.format.empty())
        return cli_io::parse_mesh_format(job.format);
    return cli_io::mesh_format_for(out);
}

void print_quality(const geometry::SurfaceMesh& mesh)
{
    const auto& q = mesh.quality;
    std::cerr << "vertices " << mesh.vertices.size() << ", faces " << mesh.faces.size()
              << ", singular " << q.singular_vertices << ", skipped " << q.skipped_vertices
              << ", fd fallbacks " << q.fd_fallbacks << "\n"
              << "max quadric violation " << format_double(q.max_quadric_violation);
    if (q.estimated_vertices > 0 && std::isfinite(q.K_target))
        std::cerr << ", max |K_est - K| " << format_double(q.max_K_error) << " over "
                  << q.estimated_vertices << " vertices";
    std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rotational surfaces of constant Gauss curvature in S^3 and H^3"};
    app.footer(rows_help());
    app.require_subcommand(1);

    // special
    auto* special = app.add_subcommand("special", "Jacobi elliptic functions and elliptic integrals");
    special->require_subcommand(1);
    auto* eval = special->add_subcommand("eval", "print values, one per line");
    std::vector<std::string> fns;
    double sp_p = 0, sp_s = 0;
    std::optional<double> sp_k;
    eval->add_option("--fn", fns,
                     "sn cn dn sc cd dc nc nd sd ns cs ds am F E Pi K E_c Pi_c (repeatable)")
        ->required();
    eval->add_option("--p", sp_p, "modulus")->required();
    eval->add_option("--s", sp_s, "argument")->required();
    eval->add_option("--k", sp_k, "characteristic for Pi and Pi_c");
    auto* table = special->add_subcommand("table", "CSV of s, sn, cn, dn, am");
    double tb_p = 0.5, tb_lo = 0, tb_hi = 0;
    int tb_n = 101;
    std::string tb_out = "-";
    table->add_option("--p", tb_p, "modulus")->required();
    table->add_option("--lo", tb_lo, "first s (default 0)");
    table->add_option("--hi", tb_hi, "last s (default 4 F_p)");
    table->add_option("--samples", tb_n, "rows")->capture_default_str();
    table->add_option("--out", tb_out, "CSV path, - for stdout");

    // profile
    auto* prof = app.add_subcommand("profile", "profile curve with ODE residuals as CSV");
    CaseFlags pf;
    pf.add(prof);
    std::optional<int> pf_samples;
    std::optional<double> pf_mult;
    std::string pf_out = "-";
    prof->add_option("--samples", pf_samples, "s samples (default 400)");
    prof->add_option("--period-multiples", pf_mult, "periods to cover (default 1)");
    prof->add_option("--out", pf_out, "CSV path, - for stdout");

    // surface
    auto* surf = app.add_subcommand("surface", "mesh of the rotational surface as OBJ or PLY");
    CaseFlags sf;
    sf.add(surf);
    MeshFlags sm;
    sm.add(surf);
    surf->add_option("--out", sm.out, "mesh path, - for stdout");

    // parallel
    auto* par = app.add_subcommand(
        "parallel", "parallel offset at distance t; prints the fitted a K + 2 b H + c = 0 as JSON");
    CaseFlags pl;
    pl.add(par);
    MeshFlags pm;
    pm.add(par);
    double pl_t = 0;
    std::string pl_mesh;
    par->add_option("--t", pl_t, "offset distance")->required();
    par->add_option("--out", pl_mesh, "also write the offset mesh here");

    // period
    auto* per = app.add_subcommand("period", "solve P(n, p) = 2 pi for a closed K < 0 profile");
    double pr_K = -1;
    int pr_n = 1;
    std::string pr_out = "-";
    per->add_option("--K", pr_K, "negative Gauss curvature")->required();
    per->add_option("--n", pr_n, "number of profile periods")->required();
    per->add_option("--out", pr_out, "JSON path, - for stdout");

    // verify
    auto* ver = app.add_subcommand("verify", "run the verification suite");
    std::string vr_config = "default", vr_out = "-";
    ver->add_option("--config", vr_config, "suite JSON path, or default, or full")->capture_default_str();
    ver->add_option("--out", vr_out, "report path, - for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (special->parsed()) {
            if (eval->parsed()) {
                for (const auto& fn : fns)
                    std::cout << format_double(cli_io::special_value(fn, sp_p, sp_s, sp_k)) << "\n";
            } else {
                double hi = tb_hi;
                if (tb_lo == 0 && tb_hi == 0)
                    hi = 4 * elliptic::complete_F(tb_p);
                cli_io::emit_csv(cli_io::special_table(tb_p, tb_lo, hi, tb_n), tb_out);
            }
        } else if (prof->parsed()) {
            json j = pf.job("profile");
            if (pf_samples)
                j["samples"] = *pf_samples;
            if (pf_mult)
                j["period_multiples"] = *pf_mult;
            const auto job = cli_io::parse_config(j.dump());
            cli_io::emit_csv(cli_io::profile_table(job.case_params(), job.samples, job.period_multiples),
                             pf_out);
        } else if (surf->parsed()) {
            json j = sf.job("surface");
            sm.fold(j);
            const auto job = cli_io::parse_config(j.dump());
            const auto mesh = geometry::build_mesh(job.case_params(), mesh_options(job, !sm.no_curvature));
            cli_io::emit_mesh(mesh, mesh_format(job, sm.out), sm.out);
            print_quality(mesh);
        } else if (par->parsed()) {
            json j = pl.job("parallel");
            pm.fold(j);
            j["offset"] = pl_t;
            const auto job = cli_io::parse_config(j.dump());
            const auto fit = verify::offset_fit(job.case_params(), pl_t);
            nlohmann::ordered_json o;
            o["t"] = pl_t;
            o["a"] = fit.a;
            o["b"] = fit.b;
            o["c"] = fit.c;
            o["residual"] = fit.residual;
            o["tubularity"] = fit.tubularity;
            o["degenerate"] = fit.degenerate;
            std::cout << o.dump(2) << "\n";
            if (!pl_mesh.empty()) {
                const auto mesh = geometry::build_mesh(job.case_params(), mesh_options(job, !pm.no_curvature));
                cli_io::emit_mesh(mesh, mesh_format(job, pl_mesh), pl_mesh);
                print_quality(mesh);
            }
        } else if (per->parsed()) {
            const auto sol = geometry::period_solve(pr_K, pr_n);
            cli_io::emit_text(cli_io::period_json(pr_K, pr_n, sol), pr_out);
        } else if (ver->parsed()) {
            const bool named = vr_config == "default" || vr_config == "full";
            const auto cfg = cli_io::parse_suite(named ? vr_config : read_file(vr_config));
            const auto report = verify::run_suite(cfg);
            cli_io::emit_report(report, vr_out);
            long failed = 0;
            for (const auto& c : report.checks)
                if (!c.pass) {
                    ++failed;
                    std::cerr << "FAIL " << c.name << " " << format_double(c.max_residual) << " > "
                              << format_double(c.tolerance) << "\n";
                }
            std::cerr << report.checks.size() << " checks, " << failed << " failed\n";
            return failed == 0 ? 0 : 2;
        }
    } catch (const cgc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
