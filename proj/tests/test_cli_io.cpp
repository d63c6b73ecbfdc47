#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "cgc/cli_io.hpp"
#include "cgc/error.hpp"

using namespace cgc::cli_io;
using cgc::profile::Row;

namespace {

int count_prefix(const std::string& text, const std::string& prefix)
{
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line))
        if (line.rfind(prefix, 0) == 0)
            ++n;
    return n;
}

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal job gets defaults")
{
    const auto c = parse_config(R"({"branch": "dn", "K": 2, "p": 0.5})");
    CHECK(c.subcommand == "surface");
    CHECK(c.space == cgc::profile::kS3);
    CHECK(c.samples == 400);
    CHECK(c.ntheta == 120);
    CHECK(c.model == cgc::geometry::Model::raw4);
    CHECK(c.seed == 1);
    const auto cp = c.case_params();
    CHECK(cp.id.row == Row::s3_pos_dn);
    CHECK(cp.param == 0.5);
}

TEST_CASE("row shorthand and C")
{
    const auto c = parse_config(R"({"subcommand": "profile", "row": "h3h-neg-dn", "K": -1, "p": 0.5})");
    CHECK(c.space == cgc::profile::kH3Hyperbolic);
    const auto byp = c.case_params();
    auto d = c;
    d.p.reset();
    d.C = byp.C;
    const auto byc = d.case_params();
    CHECK(byc.p == doctest::Approx(byp.p).epsilon(1e-12));
}

TEST_CASE("config rejections")
{
    // H^3 with elliptic rotation, modulus branches use p in [0,1]
    const auto msg = error_of(R"({"space": "h3", "rotation": "elliptic", "K": -2, "branch": "cn", "p": 1.5})");
    CHECK(msg.find("p:") == 0);
    CHECK(msg.find("[0,1]") != std::string::npos);

    CHECK(error_of(R"({"branch": "dn", "K": 2, "p": 0.5, "C": 0.1})").find("exactly one") !=
          std::string::npos);
    CHECK(error_of(R"({"branch": "dn", "K": 2, "p": 0.5, "colour": 1})").find("unknown key 'colour'") !=
          std::string::npos);
    CHECK(error_of(R"({"space": "s3", "rotation": "hyperbolic"})").find("rotation") == 0);
    CHECK(error_of(R"({"space": "e3"})").find("space") == 0);
    CHECK(error_of(R"({"branch": "nope", "K": 2, "p": 0.5})").find("available") != std::string::npos);
    CHECK(error_of(R"({"branch": "dn", "K": 2})").find("one is required") != std::string::npos);
    CHECK(error_of(R"({"branch": "dn", "K": 2, "p": 0.5, "model": "globe"})").find("model") == 0);
    CHECK(error_of(R"({"branch": "dn", "K": "2", "p": 0.5})").find("K") == 0);
    CHECK(error_of(R"({"subcommand": "period", "K": -1})").find("n:") == 0);
    CHECK(error_of("{").find("config") == 0);
    CHECK(error_of(R"({"subcommand": "verify", "tolerances": {"quadric": -1}})").find("tolerances") == 0);
}

TEST_CASE("suite configs")
{
    CHECK(parse_suite("default").rows == cgc::verify::default_suite().rows);
    CHECK(parse_suite("\"full\"").rows.size() == 30);
    const auto s = parse_suite(
        R"({"base": "none", "checks": ["quadric"], "rows": ["s3-pos-dn"], "mesh_ns": 10,
            "tolerances": {"quadric": 1e-10}, "mutation": {"field": "amp", "relative": 0.001}})");
    CHECK(s.checks == std::vector<std::string>{"quadric"});
    CHECK(s.rows == std::vector<Row>{Row::s3_pos_dn});
    CHECK(s.mesh_ns == 10);
    CHECK(s.tolerances.at("quadric") == 1e-10);
    REQUIRE(s.mutation);
    CHECK(s.mutation->field == "amp");
    CHECK_THROWS_AS(parse_suite(R"({"checks": ["everything"]})"), ConfigError);
    CHECK_THROWS_AS(parse_suite(R"({"rows": ["s4-pos-dn"]})"), ConfigError);
    CHECK_THROWS_AS(parse_suite(R"({"mutation": {"field": "K", "relative": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_suite(R"({"speed": 3})"), ConfigError);
}

TEST_CASE("2 x 2 mesh as OBJ and PLY")
{
    const auto c = parse_config(R"({"branch": "dn", "K": 2, "p": 0.5})");
    cgc::geometry::MeshOptions opt;
    opt.ns = 2;
    opt.ntheta = 2;
    opt.curvature = false;
    const auto mesh = cgc::geometry::build_mesh(c.case_params(), opt);
    std::ostringstream obj;
    write_mesh(mesh, MeshFormat::obj, obj);
    CHECK(count_prefix(obj.str(), "v ") == 4);
    CHECK(count_prefix(obj.str(), "f ") == 1);
    CHECK(obj.str().find("\nf 1 ") != std::string::npos);

    std::ostringstream ply;
    write_mesh(mesh, MeshFormat::ply, ply);
    CHECK(ply.str().find("element vertex 4\n") != std::string::npos);
    CHECK(ply.str().find("property float K_est\nproperty float H_est\n") != std::string::npos);
    CHECK(ply.str().find("element face 1\n") != std::string::npos);

    auto bad = mesh;
    bad.quality.max_quadric_violation = 1e-3;
    std::ostringstream sink;
    CHECK_THROWS_AS(write_mesh(bad, MeshFormat::obj, sink), cgc::ConstraintViolation);

    CHECK(mesh_format_for("a/b.PLY") == MeshFormat::ply);
    CHECK(mesh_format_for("mesh.obj") == MeshFormat::obj);
    CHECK(mesh_format_for("mesh") == MeshFormat::obj);
}

TEST_CASE("OBJ vertices round-trip at full precision")
{
    const auto c = parse_config(R"({"row": "h3e-pos-cn", "K": 2, "p": 0.4, "model": "ball"})");
    cgc::geometry::MeshOptions opt;
    opt.ns = 5;
    opt.ntheta = 4;
    opt.model = c.model;
    opt.curvature = false;
    const auto mesh = cgc::geometry::build_mesh(c.case_params(), opt);
    std::ostringstream os;
    write_mesh(mesh, MeshFormat::obj, os);
    std::istringstream is(os.str());
    std::string line;
    std::size_t k = 0;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) != 0)
            continue;
        std::istringstream ls(line.substr(2));
        for (int i = 0; i < 3; ++i) {
            double x;
            ls >> x;
            CHECK(x == mesh.vertices[k][i]);
        }
        ++k;
    }
    CHECK(k == mesh.vertices.size());
}

TEST_CASE("CSV round trip has no drift")
{
    const auto c = parse_config(R"({"subcommand": "profile", "row": "s3-neg-cn", "K": -2.5, "p": 0.3})");
    const auto t = profile_table(c.case_params(), 101, 2);
    CHECK(t.columns == std::vector<std::string>{"s", "r", "psi", "d", "res_r", "res_psi"});
    REQUIRE(t.rows.size() == 101);
    std::stringstream ss;
    write_csv(t, ss);
    const auto back = read_csv(ss);
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.columns.size(); ++j)
            CHECK(back.rows[i][j] == t.rows[i][j]);
    // two periods of a periodic profile
    const auto w = cgc::profile::natural_window(c.case_params());
    CHECK(t.rows.back()[0] - t.rows.front()[0] == doctest::Approx(2 * w.period));
    CHECK(t.rows.back()[1] == doctest::Approx(t.rows.front()[1]));

    std::istringstream bad("a,b\n1,x\n");
    CHECK_THROWS_AS(read_csv(bad), IoError);
}

TEST_CASE("special values")
{
    CHECK(special_value("sn", 0, 0.7) == doctest::Approx(std::sin(0.7)));
    CHECK(special_value("dn", 1, 0.7) == doctest::Approx(1 / std::cosh(0.7)));
    CHECK(special_value("am", 0.5, 0.3) == doctest::Approx(cgc::elliptic::jacobi(0.3, 0.5).am));
    CHECK(special_value("K", 0, 0) == doctest::Approx(M_PI / 2));
    CHECK(special_value("Pi_c", 0.5, 0, 0) == doctest::Approx(special_value("K", 0.5, 0)));
    CHECK_THROWS_AS(special_value("Pi", 0.5, 0.3), cgc::DomainError);
    CHECK_THROWS_AS(special_value("zn", 0.5, 0.3), cgc::DomainError);
    const auto t = special_table(0.5, -1, 1, 5);
    CHECK(t.columns == std::vector<std::string>{"s", "sn", "cn", "dn", "am"});
    CHECK(t.rows[2][1] == 0);
}

TEST_CASE("report JSON schema")
{
    cgc::verify::VerificationReport r;
    r.checks.push_back({"quadric/s3-pos-dn", 4e-16, 1e-11, true, 100});
    r.checks.push_back({"lemma/s3-flat", INFINITY, 1e-7, false, 0});
    const auto text = report_json(r);
    const auto j = nlohmann::json::parse(text);
    REQUIRE(j.is_object());
    CHECK(j.size() == 1);
    REQUIRE(j["checks"].is_array());
    REQUIRE(j["checks"].size() == 2);
    for (const auto& c : j["checks"]) {
        CHECK(c.size() == 5);
        CHECK(c["name"].is_string());
        CHECK((c["max_residual"].is_number() || c["max_residual"].is_null()));
        CHECK(c["tolerance"].is_number());
        CHECK(c["pass"].is_boolean());
        CHECK(c["n_samples"].is_number_integer());
    }
    CHECK(j["checks"][1]["max_residual"].is_null());
    CHECK(j["checks"][0]["max_residual"].get<double>() == 4e-16);
    // key order is fixed
    CHECK(text.find("\"name\"") < text.find("\"max_residual\""));
    CHECK(text.find("\"pass\"") < text.find("\"n_samples\""));
    CHECK(report_json(r) == text);
}

TEST_CASE("period JSON")
{
    const auto sol = cgc::geometry::period_solve(-1, 14);
    const auto j = nlohmann::json::parse(period_json(-1, 14, sol));
    CHECK(j["p"].get<double>() == sol.p);
    CHECK(j["residual"].get<double>() < 1e-10);
}

TEST_CASE("write errors name the path")
{
    try {
        emit_text("x", "/nonexistent-dir/out.json");
        FAIL("no error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/out.json") != std::string::npos);
    }
}
