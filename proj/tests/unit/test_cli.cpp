#include "../../tools/cli.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using json = nlohmann::json;
using tvgap::cplx;
namespace cli = tvgap::cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("complex, grid and csv helpers") {
    CHECK(cli::parse_complex("0+1.2i") == cplx(0, 1.2));
    CHECK(cli::parse_complex("1.2i") == cplx(0, 1.2));
    CHECK(cli::parse_complex("i") == cplx(0, 1));
    CHECK(cli::parse_complex("-0.5-1e-3i") == cplx(-0.5, -1e-3));
    CHECK(cli::parse_complex("2e-1+3E+0i") == cplx(0.2, 3.0));
    CHECK(cli::parse_complex("7") == cplx(7, 0));
    CHECK_THROWS_AS(cli::parse_complex("abc"), tvgap::DomainError);
    CHECK_THROWS_AS(cli::parse_complex(""), tvgap::DomainError);

    const cli::Grid g = cli::parse_grid("-8:4:4001");
    CHECK(g.lo == -8.0);
    CHECK(g.hi == 4.0);
    CHECK(g.count == 4001);
    CHECK(g.at(4000) == 4.0);
    CHECK_THROWS_AS(cli::parse_grid("1:2"), tvgap::DomainError);
    CHECK_THROWS_AS(cli::parse_grid("2:1:5"), tvgap::DomainError);
    CHECK_THROWS_AS(cli::parse_grid("0:1:2.5"), tvgap::DomainError);

    for (cplx z : {cplx(1.0 / 3.0, -2.0 / 7.0), cplx(-1e-300, 5e20), cplx(0.1, 0.0)})
        CHECK(cli::parse_complex(cli::format_complex(z)) == z);
    CHECK(cli::format_complex(cplx(1, -2)) == "1-2i");

    CHECK(cli::csv_field("plain") == "plain");
    CHECK(cli::csv_field("a,b") == "\"a,b\"");
    CHECK(cli::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("qpoly") {
    const Run a = run({"qpoly", "--n", "1,0,0,1", "--tau", "0+1.2i"});
    REQUIRE(a.code == 0);
    const json j = json::parse(a.out);
    CHECK(j["command"] == "qpoly");
    CHECK(j["roots"].size() == 3);
    CHECK(j["classification"] == "has_complex");
    CHECK(j["genus"] == 1);
    CHECK(j["tolerances"]["tol_gap"] == 1e-6);

    const Run b = run({"qpoly", "--n", "2,0,0,0", "--tau", "0+1i"});
    REQUIRE(b.code == 0);
    const json k = json::parse(b.out);
    CHECK(k["roots"].size() == 5);
    CHECK(k["classification"] == "real_distinct");
    CHECK(k["root_source"] == "factors");
}

TEST_CASE("exit codes") {
    const Run a = run({"qpoly", "--n", "0,0,0,0", "--tau", "0+1i"});
    CHECK(a.code == 1);
    CHECK(json::parse(a.err)["exit_code"] == 1);
    CHECK(run({"qpoly", "--n", "1,0,0", "--tau", "0+1i"}).code == 1);
    CHECK(run({"qpoly", "--n", "1,0,0,0", "--tau", "0-1i"}).code == 1);
    CHECK(run({"qpoly", "--n", "1,0,0,0", "--tol-gap", "-1"}).code == 1);
    CHECK(run({"nosuch"}).code == 1);
    CHECK(run({}).code == 1);
    // a route tolerance nobody can meet is an assertion failure
    CHECK(run({"qpoly", "--n", "2,0,0,0", "--route-tol", "1e-300"}).code == 2);
    // the band window misses e1 = 6.875..., so edges cannot match the roots
    CHECK(run({"bands", "--n", "1,0,0,0", "--E", "-8:4:401"}).code == 2);
}

TEST_CASE("scan csv is deterministic and carries tolerances") {
    const Run a = run({"scan", "--n", "2,0,0,0", "--b", "0.5:2:31", "--format", "csv", "--threads", "1"});
    const Run b = run({"scan", "--n", "2,0,0,0", "--b", "0.5:2:31", "--format", "csv", "--threads", "3"});
    REQUIRE(a.code == 0);
    std::istringstream in(a.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# generated ", 0) == 0);
    int tol_lines = 0, rows = 0, real = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.rfind("# tol ", 0) == 0) ++tol_lines;
        else if (line.rfind("b,classification", 0) == 0) header = true;
        else if (line[0] != '#') ++rows, real += line.find(",real_distinct,") != std::string::npos;
    }
    CHECK(header);
    CHECK(tol_lines >= 13);
    CHECK(rows == 31);
    CHECK(real == 31);
    // identical after the timestamp line
    CHECK(a.out.substr(a.out.find('\n')) == b.out.substr(b.out.find('\n')));

    const Run c = run({"scan", "--n", "2,0,0,0", "--b", "0.5:2:5", "--format", "csv", "--no-timestamp"});
    CHECK(c.out.rfind("# command scan", 0) == 0);
    const Run d = run({"scan", "--n", "2,0,0,0", "--b", "0.5:2:5"});
    const Run e = run({"scan", "--n", "2,0,0,0", "--b", "0.5:2:5"});
    CHECK(d.out == e.out);
    CHECK(json::parse(d.out)["all_real_distinct"] == true);
}

TEST_CASE("bands, dual and unitary") {
    const Run a = run({"bands", "--n", "1,0,0,0", "--tau", "0+1i", "--E", "-8:8:1601"});
    REQUIRE(a.code == 0);
    const json j = json::parse(a.out);
    CHECK(j["bands"].size() == 2);
    CHECK(j["bands"][0]["lo"].is_null());
    CHECK(j["edges_match"] == true);

    const std::string plot = "tvgap_test_plot.txt";
    CHECK(run({"bands", "--n", "1,0,0,0", "--E", "-8:8:161", "--plot", plot}).code == 0);
    CHECK(slurp(plot).rfind("# E re_delta1\n", 0) == 0);
    std::remove(plot.c_str());

    const Run d = run({"dual", "--n", "1,0,0,0", "--tau", "0+1.5i", "--E", "-15:15:1501"});
    CHECK(d.code == 0);
    CHECK(json::parse(d.out)["pass"] == true);

    const Run u = run({"unitary", "--n", "2,0,0,0", "--E", "-12:12:5", "--E-im", "-6:6:3", "--format", "csv",
                       "--no-timestamp"});
    REQUIRE(u.code == 0);
    CHECK(u.out.find("E,delta1,delta2,at_root,unitary,error") != std::string::npos);
    const Run v = run({"unitary", "--n", "2,0,0,0", "--E", "-12:12:5", "--E-im", "-6:6:3"});
    CHECK(json::parse(v.out)["unitary_count"] == 0);
    CHECK(json::parse(v.out)["points_total"] == 15);
}

TEST_CASE("premodular ops") {
    const Run a = run({"premodular", "--op", "eval", "--n", "2", "--r", "0.5", "--s", "0", "--tau", "0+1i"});
    REQUIRE(a.code == 0);
    const json j = json::parse(a.out);
    CHECK(j["half_lattice"] == true);
    CHECK(std::abs(j["value"]["re"].get<double>()) < 1e-10);

    const Run b = run({"premodular", "--op", "boundary-scan", "--n", "2", "--nr", "6", "--ns", "6", "--per-piece", "6"});
    CHECK(b.code == 0);
    CHECK(json::parse(b.out)["pass"] == true);

    const Run c = run({"premodular", "--op", "zero-find", "--n", "2", "--r", "0.15", "--s", "0.15"});
    REQUIRE(c.code == 0);
    const json k = json::parse(c.out);
    CHECK(k["triangle"] == "T3");
    CHECK(k["found"]["location"] == "interior");

    const std::vector<std::string> seeded = {"premodular", "--op",           "zero-find", "--n",    "1",
                                             "--r",        "0.3",            "--s",       "0.3",    "--seed-tau",
                                             "0.5+0.9i",   "--random-seeds", "4",         "--seed", "42"};
    CHECK(run(seeded).out == run(seeded).out);

    const Run h = run({"premodular", "--op", "heatmap", "--n", "2", "--tau-re", "0:1:3", "--tau-im", "0.5:1:2",
                       "--format", "csv", "--no-timestamp"});
    REQUIRE(h.code == 0);
    CHECK(h.out.find("re_tau,im_tau,abs_z") != std::string::npos);
    CHECK(run({"premodular", "--op", "eval", "--n", "7"}).code == 1);
}

TEST_CASE("output file and summary") {
    const std::string out = "tvgap_test_out.csv", sum = "tvgap_test_sum.json";
    const Run a = run({"qpoly", "--n", "1,1,0,0", "--format", "csv", "--out", out, "--summary", sum});
    REQUIRE(a.code == 0);
    CHECK(a.out.empty());
    CHECK(slurp(out).find("index,root,residual,residual_bound") != std::string::npos);
    CHECK(json::parse(slurp(sum))["command"] == "qpoly");
    std::remove(out.c_str());
    std::remove(sum.c_str());
}
