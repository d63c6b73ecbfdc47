#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgc/error.hpp"
#include "cgc/geometry.hpp"
#include "cgc/profile.hpp"
#include "cgc/verify.hpp"

namespace cgc::cli_io {

// Schema violation in a job or suite description. The message names the field.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

struct JobConfig {
    std::string subcommand = "surface";  // profile, surface, parallel, period or verify
    profile::SpaceForm space = profile::kS3;
    double K = 1;
    std::string branch;
    std::optional<double> p, C;  // exactly one for profile, surface and parallel
    int samples = 400;           // s samples
    int ntheta = 120;
    double period_multiples = 1;
    geometry::Model model = geometry::Model::raw4;
    double offset = 0;
    int n = 0;  // profile periods, for period
    std::string out;
    std::string format;  // empty: from the extension of out
    std::map<std::string, double> tolerances;
    unsigned long long seed = 1;

    // The resolved branch; throws ConfigError for a missing branch or parameter.
    profile::CaseParams case_params() const;
};

// Accepted keys: subcommand, row, space, rotation, K, branch, p, C, samples, ntheta,
// period_multiples, model, offset, n, out, format, tolerances, seed. "row" is a
// shorthand for space, rotation and branch.
JobConfig parse_config(std::string_view text);

// Either the string "default" or "full", or an object with optional keys base
// ("default", "full" or "none"), checks, rows, p_grid, s_samples, mesh_ns, mesh_ntheta,
// curvature_ns, curvature_ntheta, elliptic_pairs, seed, tolerances, mutation.
verify::SuiteConfig parse_suite(std::string_view text);

profile::SpaceForm parse_space(std::string_view space, std::string_view rotation);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// s, r, psi, d, res_r, res_psi over period_multiples natural windows.
Table profile_table(const profile::CaseParams& params, int samples, double period_multiples = 1);
// s, sn, cn, dn, am on [lo, hi].
Table special_table(double p, double lo, double hi, int samples);

// fn is a Jacobi ratio name, am, F, E, Pi (incomplete, in s) or K, Kc, E_c, Pi_c for the
// complete integrals. Pi and Pi_c need k.
double special_value(std::string_view fn, double p, double s, std::optional<double> k = {});

void write_csv(const Table& t, std::ostream& os);
Table read_csv(std::istream& is);
void emit_csv(const Table& t, const std::string& path);

enum class MeshFormat { obj, ply };

MeshFormat parse_mesh_format(std::string_view s);
// From the extension of path; obj when there is none.
MeshFormat mesh_format_for(const std::string& path);

// Throws ConstraintViolation if the mesh was built from points off their quadric.
void write_mesh(const geometry::SurfaceMesh& mesh, MeshFormat format, std::ostream& os);
void emit_mesh(const geometry::SurfaceMesh& mesh, MeshFormat format, const std::string& path);

// {"checks":[{"name", "max_residual", "tolerance", "pass", "n_samples"}]}; non-finite
// residuals are written as null.
std::string report_json(const verify::VerificationReport& report);
void emit_report(const verify::VerificationReport& report, const std::string& path);

std::string period_json(double K, int n, const geometry::PeriodSolution& sol);

// Writes text to path, or to stdout for an empty path or "-".
void emit_text(const std::string& text, const std::string& path);

}  // namespace cgc::cli_io
