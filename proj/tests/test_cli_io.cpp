#include "doctest.h"

#include "cli.hpp"
#include "sphcover/constellation.hpp"
#include "sphcover/errors.hpp"
#include "sphcover/io.hpp"
#include "sphcover/recursive_cover.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace sphcover;

namespace {

const std::string kData = TEST_DATA_DIR;
const std::string kFourD = REPO_DATA_DIR "/four_D_85.txt";

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::size_t parse_error_line(const std::string& text)
{
    std::istringstream in(text);
    try {
        read_constellation_file(in);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("constellation files")
{
    {
        std::istringstream in("# comment\n\ndim 3\n0 0 1\n1, 0, 0, 0.25\n");
        // Mixed column counts are rejected.
        CHECK_THROWS_AS(read_constellation_file(in), ParseError);
    }
    {
        std::istringstream in("# comment\n\ndim 3\n0 0 1 0.1\n1, 0, 0, 0.25\n");
        const auto f = read_constellation_file(in);
        CHECK(f.dim == 3);
        REQUIRE(f.axes.size() == 2);
        CHECK(*f.thresholds[1] == 0.25);
        const auto cst = to_constellation(f, 0.9);
        CHECK(cst[0].threshold() == 0.1);
    }
    {
        // Without a header every column is a coordinate.
        std::istringstream in("0.6 0.8\n0 1\n");
        const auto f = read_constellation_file(in);
        CHECK(f.dim == 2);
        CHECK_FALSE(f.thresholds[0].has_value());
        CHECK_THROWS_AS(to_constellation(f, std::nullopt), InvalidArgument);
        CHECK(to_constellation(f, 0.5).size() == 2);
    }
    {
        // Near-unit axes are normalized, others rejected.
        std::istringstream ok("dim 2\n1.0004 0\n");
        CHECK(read_constellation_file(ok).axes[0][0] == 1.0);
        std::istringstream bad("dim 2\n1.1 0\n");
        CHECK_THROWS_AS(read_constellation_file(bad), ParseError);
    }
    CHECK(parse_error_line("dim 2\n1 0\n0.5 abc\n") == 3);
    CHECK(parse_error_line("# c\ndim 3\n0 0 1\n0 1\n") == 4);
    CHECK(parse_error_line("dim x\n") == 1);
    CHECK(parse_error_line("dim 2\n1 0 1.5\n") == 2);
    CHECK(parse_error_line("") == 0);
}

TEST_CASE("parse_theta")
{
    CHECK(parse_theta("sqrt3/2") == std::sqrt(3.0) / 2.0);
    CHECK(parse_theta("0.4") == 0.4);
    CHECK(parse_theta("-0.25") == -0.25);
    CHECK_THROWS(parse_theta("half"));
    CHECK_THROWS(parse_theta("0.4x"));
}

TEST_CASE("qp and graph files")
{
    std::istringstream q("# c\nqp 2 2 4\n1 0 2\n0 1 -1\n");
    const QpInstance inst = read_qp(q);
    CHECK(inst.rows() == 2);
    CHECK(inst.dim() == 2);
    CHECK(inst.c == 4.0);
    CHECK(inst.b[1] == -1.0);

    std::istringstream short_q("qp 2 2 1\n1 0 2\n");
    CHECK_THROWS_AS(read_qp(short_q), ParseError);

    std::istringstream g("graph 3\n1 2\n2 3\n");
    const Graph graph = read_graph(g);
    CHECK(graph.size() == 3);
    CHECK(graph.adjacent(0, 1));
    CHECK_FALSE(graph.adjacent(0, 2));

    std::istringstream bad_g("graph 3\n1 4\n");
    CHECK_THROWS_AS(read_graph(bad_g), ParseError);
}

TEST_CASE("write then read reproduces the constellation")
{
    RelaxConfig rc;
    rc.n = 14;
    rc.d = 3;
    rc.seed = 21;
    const auto r = relax(rc);
    std::stringstream buf;
    write_constellation(buf, 3, r.points, 0.8);
    const auto f = read_constellation_file(buf);
    const Constellation back = to_constellation(f, std::nullopt);
    const Constellation direct = Constellation::uniform(3, r.points, 0.8);
    REQUIRE(back.size() == direct.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK((back[i].axis() - direct[i].axis()).norm() <= 1e-15);
        CHECK(back[i].threshold() == 0.8);
    }
    CHECK(cover(back).covered == cover(direct).covered);
}

TEST_CASE("cli verify")
{
    auto big = run_cli({"verify", kFourD, "--theta", "sqrt3/2", "--witness"});
    CHECK(big.code == 1);
    CHECK(big.out.rfind("NOT_COVERED", 0) == 0);
    CHECK(big.out.find("witness: ") != std::string::npos);

    auto tri = run_cli({"verify", kData + "/tri_d2.csv", "--theta", "0.4"});
    CHECK(tri.code == 0);
    CHECK(tri.out.rfind("COVERED", 0) == 0);

    auto single = run_cli({"verify", kData + "/single_cap.csv"});
    CHECK(single.code == 1);
    CHECK(single.out.rfind("NOT_COVERED", 0) == 0);

    auto js = run_cli({"verify", kFourD, "--theta", "sqrt3/2", "--witness", "--json"});
    CHECK(js.code == 1);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["verdict"] == "NOT_COVERED");
    CHECK(j["margin"].get<double>() < 0.0);
    CHECK(j["witness"].size() == 4);
    CHECK(j.contains("stats"));
}

TEST_CASE("cli errors exit with 2")
{
    auto missing = run_cli({"verify", kData + "/does_not_exist.csv", "--theta", "0.5"});
    CHECK(missing.code == 2);
    auto cols = run_cli({"verify", kData + "/bad_columns.csv", "--theta", "0.5"});
    CHECK(cols.code == 2);
    CHECK(cols.err.find("line 3") != std::string::npos);
    auto num = run_cli({"verify", kData + "/bad_number.csv", "--theta", "0.5"});
    CHECK(num.code == 2);
    CHECK(num.err.find("line 3") != std::string::npos);
    CHECK(run_cli({"verify", kData + "/tri_d2.csv"}).code == 2);
    CHECK(run_cli({"verify", kData + "/tri_d2.csv", "--theta", "2"}).code == 2);
    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"mc", kData + "/tri_d2.csv", "--theta", "0.4"}).code == 2);
}

TEST_CASE("cli mc, qp, qpreduce")
{
    auto mc = run_cli({"mc", kData + "/tri_d2.csv", "--theta", "0.6", "--samples", "10000", "--seed", "3"});
    CHECK(mc.code == 1);
    auto mc_ok = run_cli({"mc", kData + "/tri_d2.csv", "--theta", "0.4", "--samples", "10000", "--seed", "3"});
    CHECK(mc_ok.code == 0);
    CHECK(mc_ok.out.rfind("NO_COUNTEREXAMPLE", 0) == 0);

    auto qp = run_cli({"qp", kFourD, "--theta", "sqrt3/2"});
    CHECK(qp.code == 0);
    CHECK(qp.out.find("HEURISTIC — false positives possible") != std::string::npos);
    auto qp_hit = run_cli({"qp", kFourD, "--theta", "sqrt3/2", "--start",
                           "0.134335,0.4576476,-0.7915343,-0.3826162"});
    CHECK(qp_hit.code == 1);
    CHECK(qp_hit.out.find("HEURISTIC") == std::string::npos);

    auto no = run_cli({"qpreduce", "--clique", kData + "/path3.graph", "--k", "3"});
    CHECK(no.code == 1);
    CHECK(no.out == "NO\n");
    auto yes = run_cli({"qpreduce", "--clique", kData + "/k3.graph", "--k", "3"});
    CHECK(yes.code == 0);
    CHECK(yes.out == "YES\n");
    CHECK(run_cli({"qpreduce", kData + "/far_halfspace.qp"}).code == 0);
    CHECK(run_cli({"qpreduce", kData + "/small_box.qp"}).code == 1);
    CHECK(run_cli({"qpreduce"}).code == 2);
}

TEST_CASE("cli generate round trip")
{
    const auto path = std::filesystem::temp_directory_path() / "sphcover_generate_test.txt";
    auto gen = run_cli({"generate", "--dim", "3", "--count", "24", "--seed", "5", "--out",
                        path.string(), "--theta", "sqrt3/2"});
    REQUIRE(gen.code == 0);
    auto verify = run_cli({"verify", path.string()});

    RelaxConfig rc;
    rc.n = 24;
    rc.d = 3;
    rc.seed = 5;
    const bool direct = cover(Constellation::uniform(3, relax(rc).points, std::sqrt(3.0) / 2.0)).covered;
    CHECK(verify.code == (direct ? 0 : 1));
    std::filesystem::remove(path);

    auto to_stdout = run_cli({"generate", "--dim", "2", "--count", "3", "--seed", "1"});
    CHECK(to_stdout.code == 0);
    CHECK(to_stdout.out.find("dim 2") != std::string::npos);
}

TEST_CASE("cli bound")
{
    auto r = run_cli({"bound", "--dim", "2", "--theta", "0.5", "--seed", "1", "--restarts", "5",
                      "--nstart", "5", "--json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["m_u"] == 3);
    CHECK(j["covering"].size() == 3);
}
