#include "cgc/cli_io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cgc/elliptic.hpp"
#include "cgc/format.hpp"

namespace cgc::cli_io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& keys, const std::string& where)
{
    for (const auto& [k, v] : j.items()) {
        if (keys.count(k))
            continue;
        std::string all;
        for (const auto& a : keys)
            all += (all.empty() ? "" : ", ") + a;
        throw ConfigError(where + ": unknown key '" + k + "' (accepted: " + all + ")");
    }
}

double get_number(const json& j, const std::string& key)
{
    const json& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(key + ": expected a finite number");
    return x;
}

int get_int(const json& j, const std::string& key, int min)
{
    const json& v = j.at(key);
    if (!v.is_number_integer())
        throw ConfigError(key + ": expected an integer");
    const long long x = v.get<long long>();
    if (x < min || x > 1000000)
        throw ConfigError(key + ": expected an integer in [" + std::to_string(min) + ", 1000000]");
    return static_cast<int>(x);
}

std::string get_string(const json& j, const std::string& key)
{
    const json& v = j.at(key);
    if (!v.is_string())
        throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
}

unsigned long long get_seed(const json& j)
{
    const json& v = j.at("seed");
    if (!v.is_number_unsigned())
        throw ConfigError("seed: expected a non-negative integer");
    return v.get<unsigned long long>();
}

std::map<std::string, double> get_tolerances(const json& j)
{
    const json& v = j.at("tolerances");
    if (!v.is_object())
        throw ConfigError("tolerances: expected an object of check name to number");
    std::map<std::string, double> out;
    for (const auto& [k, t] : v.items()) {
        if (!t.is_number() || !(t.get<double>() >= 0))
            throw ConfigError("tolerances." + k + ": expected a non-negative number");
        try {
            verify::default_tolerance(k);
        } catch (const DomainError&) {
            throw ConfigError("tolerances." + k + ": no such check");
        }
        out[k] = t.get<double>();
    }
    return out;
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path + " for writing: " + std::strerror(errno));
    return os;
}

void finish(std::ofstream& os, const std::string& path)
{
    os.flush();
    if (!os)
        throw IoError("write to " + path + " failed");
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

ojson number_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

profile::SpaceForm parse_space(std::string_view space, std::string_view rotation)
{
    profile::Rotation rot;
    try {
        rot = profile::parse_rotation(rotation);
    } catch (const Error&) {
        throw ConfigError("rotation: '" + std::string(rotation) +
                          "' (admissible: elliptic, hyperbolic, parabolic)");
    }
    if (space == "s3") {
        if (rot != profile::Rotation::elliptic)
            throw ConfigError("rotation: S^3 admits only elliptic rotation");
        return profile::kS3;
    }
    if (space == "h3")
        return profile::SpaceForm(-1, rot);
    throw ConfigError("space: '" + std::string(space) + "' (admissible: s3, h3)");
}

profile::CaseParams JobConfig::case_params() const
{
    if (branch.empty()) {
        std::string tags;
        try {
            for (const auto& b : profile::classify(space, K))
                tags += (tags.empty() ? "" : ", ") + std::string(profile::branch_tag(b.id.row));
        } catch (const Error&) {
        }
        throw ConfigError("branch: required (available: " + tags + ")");
    }
    profile::Branch b;
    try {
        b = profile::find_branch(space, K, branch);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("branch: ") + e.what());
    }
    if (p && C)
        throw ConfigError("p, C: give exactly one");
    try {
        if (p)
            return profile::make_params(b.id, *p);
        if (C)
            return profile::make_params_from_C(b.id, *C);
    } catch (const BoundsError& e) {
        throw ConfigError(std::string(p ? "p: " : "C: ") + e.what());
    } catch (const DegenerateCase& e) {
        throw ConfigError(std::string(p ? "p: " : "C: ") + e.what() + " (limit: " +
                          to_string(e.limit()) + ")");
    }
    throw ConfigError("p, C: one is required (p in " + b.interval.str() + ")");
}

JobConfig parse_config(std::string_view text)
{
    const json j = parse_json(text);
    if (!j.is_object())
        throw ConfigError("config: expected an object");
    reject_unknown(j,
                   {"subcommand", "row", "space", "rotation", "K", "branch", "p", "C", "samples",
                    "ntheta", "period_multiples", "model", "offset", "n", "out", "format",
                    "tolerances", "seed"},
                   "config");
    JobConfig c;
    try {
        if (j.contains("subcommand")) {
            c.subcommand = get_string(j, "subcommand");
            static const std::set<std::string> subs = {"profile", "surface", "parallel", "period",
                                                       "verify"};
            if (!subs.count(c.subcommand))
                throw ConfigError("subcommand: '" + c.subcommand +
                                  "' (admissible: profile, surface, parallel, period, verify)");
        }
        if (j.contains("row")) {
            if (j.contains("space") || j.contains("rotation") || j.contains("branch"))
                throw ConfigError("row: not combinable with space, rotation or branch");
            profile::Row row;
            try {
                row = profile::parse_row(get_string(j, "row"));
            } catch (const DomainError& e) {
                throw ConfigError(std::string("row: ") + e.what());
            }
            c.space = profile::row_space(row);
            c.branch = profile::branch_tag(row);
        } else {
            const std::string space = j.contains("space") ? get_string(j, "space") : "s3";
            const std::string rot = j.contains("rotation") ? get_string(j, "rotation") : "elliptic";
            c.space = parse_space(space, rot);
            if (j.contains("branch"))
                c.branch = get_string(j, "branch");
        }
        if (j.contains("K"))
            c.K = get_number(j, "K");
        if (j.contains("p"))
            c.p = get_number(j, "p");
        if (j.contains("C"))
            c.C = get_number(j, "C");
        if (c.p && c.C)
            throw ConfigError("p, C: give exactly one");
        if (j.contains("samples"))
            c.samples = get_int(j, "samples", 2);
        if (j.contains("ntheta"))
            c.ntheta = get_int(j, "ntheta", 2);
        if (j.contains("period_multiples")) {
            c.period_multiples = get_number(j, "period_multiples");
            if (!(c.period_multiples > 0))
                throw ConfigError("period_multiples: expected a positive number");
        }
        if (j.contains("model")) {
            const std::string m = get_string(j, "model");
            try {
                c.model = geometry::parse_model(m);
            } catch (const Error&) {
                throw ConfigError("model: '" + m + "' (admissible: stereo, ball, halfspace, raw4)");
            }
        }
        if (j.contains("offset"))
            c.offset = get_number(j, "offset");
        if (j.contains("n"))
            c.n = get_int(j, "n", 1);
        if (j.contains("out"))
            c.out = get_string(j, "out");
        if (j.contains("format")) {
            c.format = get_string(j, "format");
            if (c.format != "obj" && c.format != "ply" && c.format != "csv" && c.format != "json")
                throw ConfigError("format: '" + c.format + "' (admissible: obj, ply, csv, json)");
        }
        if (j.contains("tolerances"))
            c.tolerances = get_tolerances(j);
        if (j.contains("seed"))
            c.seed = get_seed(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.subcommand == "profile" || c.subcommand == "surface" || c.subcommand == "parallel")
        c.case_params();
    if (c.subcommand == "period" && c.n == 0)
        throw ConfigError("n: required for period");
    return c;
}

verify::SuiteConfig parse_suite(std::string_view text)
{
    const std::string_view trimmed = [&] {
        auto b = text.find_first_not_of(" \t\r\n");
        auto e = text.find_last_not_of(" \t\r\n");
        return b == std::string_view::npos ? std::string_view{} : text.substr(b, e - b + 1);
    }();
    if (trimmed == "default")
        return verify::default_suite();
    if (trimmed == "full")
        return verify::full_suite();

    const json j = parse_json(text);
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "default")
            return verify::default_suite();
        if (s == "full")
            return verify::full_suite();
        throw ConfigError("suite: '" + s + "' (admissible: default, full, or an object)");
    }
    if (!j.is_object())
        throw ConfigError("suite: expected \"default\", \"full\" or an object");
    reject_unknown(j,
                   {"base", "checks", "rows", "p_grid", "s_samples", "mesh_ns", "mesh_ntheta",
                    "curvature_ns", "curvature_ntheta", "elliptic_pairs", "seed", "tolerances",
                    "mutation"},
                   "suite");
    verify::SuiteConfig c = verify::default_suite();
    try {
        const std::string base = j.contains("base") ? get_string(j, "base") : "default";
        if (base == "full")
            c = verify::full_suite();
        else if (base == "none")
            c = verify::SuiteConfig{};
        else if (base != "default")
            throw ConfigError("base: '" + base + "' (admissible: default, full, none)");

        if (j.contains("checks")) {
            if (!j["checks"].is_array())
                throw ConfigError("checks: expected an array");
            c.checks.clear();
            for (const auto& x : j["checks"]) {
                if (!x.is_string())
                    throw ConfigError("checks: expected strings");
                const auto g = x.get<std::string>();
                if (std::find(verify::kCheckGroups.begin(), verify::kCheckGroups.end(), g) ==
                    verify::kCheckGroups.end()) {
                    std::string all;
                    for (const auto& a : verify::kCheckGroups)
                        all += (all.empty() ? "" : ", ") + a;
                    throw ConfigError("checks: unknown group '" + g + "' (admissible: " + all + ")");
                }
                c.checks.push_back(g);
            }
        }
        if (j.contains("rows")) {
            if (!j["rows"].is_array())
                throw ConfigError("rows: expected an array");
            c.rows.clear();
            for (const auto& x : j["rows"]) {
                if (!x.is_string())
                    throw ConfigError("rows: expected strings");
                try {
                    c.rows.push_back(profile::parse_row(x.get<std::string>()));
                } catch (const DomainError& e) {
                    throw ConfigError(std::string("rows: ") + e.what());
                }
            }
        }
        if (j.contains("p_grid"))
            c.p_grid = get_int(j, "p_grid", 1);
        if (j.contains("s_samples"))
            c.s_samples = get_int(j, "s_samples", 2);
        if (j.contains("mesh_ns"))
            c.mesh_ns = get_int(j, "mesh_ns", 2);
        if (j.contains("mesh_ntheta"))
            c.mesh_ntheta = get_int(j, "mesh_ntheta", 2);
        if (j.contains("curvature_ns"))
            c.curvature_ns = get_int(j, "curvature_ns", 2);
        if (j.contains("curvature_ntheta"))
            c.curvature_ntheta = get_int(j, "curvature_ntheta", 2);
        if (j.contains("elliptic_pairs"))
            c.elliptic_pairs = get_int(j, "elliptic_pairs", 2);
        if (j.contains("seed"))
            c.seed = get_seed(j);
        if (j.contains("tolerances"))
            c.tolerances = get_tolerances(j);
        if (j.contains("mutation")) {
            const json& m = j["mutation"];
            if (!m.is_object())
                throw ConfigError("mutation: expected an object {field, relative}");
            reject_unknown(m, {"field", "relative"}, "mutation");
            verify::Mutation mu;
            mu.field = get_string(m, "field");
            if (mu.field != "amp" && mu.field != "A" && mu.field != "psi_lin" && mu.field != "psi_coef")
                throw ConfigError("mutation.field: '" + mu.field +
                                  "' (admissible: amp, A, psi_lin, psi_coef)");
            mu.relative = get_number(m, "relative");
            c.mutation = mu;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("suite: ") + e.what());
    }
    return c;
}

Table profile_table(const profile::CaseParams& params, int samples, double period_multiples)
{
    if (samples < 2)
        throw DomainError("profile_table needs at least 2 samples");
    if (!(period_multiples > 0))
        throw DomainError("period multiples must be positive");
    const auto w = profile::natural_window(params);
    // windows of non-periodic rows are already pole-free and are not extended
    const double len = w.period > 0 ? w.period * period_multiples : w.hi - w.lo;
    Table t{{"s", "r", "psi", "d", "res_r", "res_psi"}, {}};
    t.rows.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double s = w.lo + len * i / (samples - 1);
        const auto ps = profile::profile(params, s);
        const auto res = profile::ode_residual(params, s);
        t.rows.push_back({s, ps.r, ps.psi, ps.d, res.res_r, res.res_psi});
    }
    return t;
}

Table special_table(double p, double lo, double hi, int samples)
{
    if (samples < 2)
        throw DomainError("special_table needs at least 2 samples");
    const elliptic::Modulus m(p);
    Table t{{"s", "sn", "cn", "dn", "am"}, {}};
    for (int i = 0; i < samples; ++i) {
        const double s = lo + (hi - lo) * i / (samples - 1);
        const auto e = elliptic::jacobi(s, m);
        t.rows.push_back({s, e.sn, e.cn, e.dn, e.am});
    }
    return t;
}

double special_value(std::string_view fn, double p, double s, std::optional<double> k)
{
    using namespace elliptic;
    auto need_k = [&] {
        if (!k)
            throw DomainError(std::string(fn) + " needs --k");
        return *k;
    };
    if (fn == "am")
        return jacobi(s, p).am;
    if (fn == "F")
        return incomplete_F(s, p);
    if (fn == "E")
        return incomplete_E(s, p);
    if (fn == "Pi")
        return incomplete_Pi(need_k(), p, s);
    if (fn == "K" || fn == "F_c")
        return complete_F(p);
    if (fn == "E_c")
        return complete_E(p);
    if (fn == "Pi_c")
        return complete_Pi(need_k(), p);
    Ratio r;
    try {
        r = parse_ratio(fn);
    } catch (const Error&) {
        throw DomainError("unknown function '" + std::string(fn) +
                          "' (admissible: sn cn dn sc cd dc nc nd sd ns cs ds am F E Pi K E_c Pi_c)");
    }
    return jacobi_general(s, Modulus(p), r);
}

void write_csv(const Table& t, std::ostream& os)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    auto split = [](const std::string& l) {
        std::vector<std::string> out;
        std::stringstream ss(l);
        std::string cell;
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        return out;
    };
    if (!std::getline(is, line))
        throw IoError("csv: missing header");
    t.columns = split(line);
    long lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != t.columns.size())
            throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                          std::to_string(t.columns.size()) + " fields");
        std::vector<double> row;
        for (const auto& c : cells) {
            if (c == "nan" || c == "inf" || c == "-inf") {
                row.push_back(c == "nan" ? NAN : (c == "inf" ? INFINITY : -INFINITY));
                continue;
            }
            double v;
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size())
                throw IoError("csv line " + std::to_string(lineno) + ": bad number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void emit_csv(const Table& t, const std::string& path)
{
    if (to_stdout(path)) {
        write_csv(t, std::cout);
        return;
    }
    auto os = open_out(path);
    write_csv(t, os);
    finish(os, path);
}

MeshFormat parse_mesh_format(std::string_view s)
{
    if (s == "obj")
        return MeshFormat::obj;
    if (s == "ply")
        return MeshFormat::ply;
    throw DomainError("mesh format '" + std::string(s) + "' (admissible: obj, ply)");
}

MeshFormat mesh_format_for(const std::string& path)
{
    const auto dot = path.rfind('.');
    if (dot == std::string::npos)
        return MeshFormat::obj;
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return ext == "ply" ? MeshFormat::ply : MeshFormat::obj;
}

void write_mesh(const geometry::SurfaceMesh& mesh, MeshFormat format, std::ostream& os)
{
    if (!(mesh.quality.max_quadric_violation <= 1e-9))
        throw ConstraintViolation("mesh points leave their quadric by " +
                                  format_double(mesh.quality.max_quadric_violation));
    const bool raw = mesh.model == geometry::Model::raw4;
    const int dim = raw ? 4 : 3;
    if (format == MeshFormat::obj) {
        os << "# " << mesh.ns << " x " << mesh.ntheta << " " << geometry::to_string(mesh.model) << '\n';
        for (const auto& v : mesh.vertices) {
            os << 'v';
            for (int i = 0; i < dim; ++i)
                os << ' ' << format_double(v[i]);
            os << '\n';
        }
        for (const auto& f : mesh.faces)
            os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
        return;
    }
    const bool has_k = mesh.K_est.size() == mesh.vertices.size();
    os << "ply\nformat ascii 1.0\n";
    os << "comment " << mesh.ns << " x " << mesh.ntheta << " " << geometry::to_string(mesh.model) << '\n';
    os << "element vertex " << mesh.vertices.size() << '\n';
    const char* names[] = {"x", "y", "z", "w"};
    for (int i = 0; i < dim; ++i)
        os << "property float " << names[i] << '\n';
    os << "property float K_est\nproperty float H_est\n";
    os << "element face " << mesh.faces.size() << '\n';
    os << "property list uchar int vertex_indices\nend_header\n";
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        for (int i = 0; i < dim; ++i)
            os << format_double(mesh.vertices[k][i]) << ' ';
        os << format_double(has_k ? mesh.K_est[k] : NAN) << ' '
           << format_double(has_k ? mesh.H_est[k] : NAN) << '\n';
    }
    for (const auto& f : mesh.faces)
        os << "4 " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
}

void emit_mesh(const geometry::SurfaceMesh& mesh, MeshFormat format, const std::string& path)
{
    if (to_stdout(path)) {
        write_mesh(mesh, format, std::cout);
        return;
    }
    auto os = open_out(path);
    write_mesh(mesh, format, os);
    finish(os, path);
}

std::string report_json(const verify::VerificationReport& report)
{
    ojson checks = ojson::array();
    for (const auto& c : report.checks) {
        ojson o;
        o["name"] = c.name;
        o["max_residual"] = number_or_null(c.max_residual);
        o["tolerance"] = c.tolerance;
        o["pass"] = c.pass;
        o["n_samples"] = c.n_samples;
        checks.push_back(std::move(o));
    }
    ojson root;
    root["checks"] = std::move(checks);
    return root.dump(2) + "\n";
}

void emit_report(const verify::VerificationReport& report, const std::string& path)
{
    emit_text(report_json(report), path);
}

std::string period_json(double K, int n, const geometry::PeriodSolution& sol)
{
    ojson o;
    o["K"] = K;
    o["n"] = n;
    o["p"] = sol.p;
    o["residual"] = sol.residual;
    o["sign_changes"] = sol.sign_changes;
    o["profile_period"] = number_or_null(sol.profile_period);
    return o.dump(2) + "\n";
}

void emit_text(const std::string& text, const std::string& path)
{
    if (to_stdout(path)) {
        std::cout << text;
        return;
    }
    auto os = open_out(path);
    os << text;
    finish(os, path);
}

}  // namespace cgc::cli_io
