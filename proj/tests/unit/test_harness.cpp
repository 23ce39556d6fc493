#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "contagion/harness.hpp"

using namespace contagion;
namespace fs = std::filesystem;

namespace {

const std::string kCli = CONTAGION_CLI;
const std::string kData = CONTAGION_TEST_DATA;

json base_config() {
    return json::parse(R"({
      "model": {"degree": {"kind": "poisson", "lambda": 5.0},
                "threshold": {"kind": "proportional", "q": 0.15},
                "activation": {"kind": "pivotal_pair"}},
      "n": 1000, "replicas": 3, "seed": 3})");
}

std::string field_of(const json& j) {
    try {
        config_from_json(j);
    } catch (const FieldError& e) {
        return e.path();
    }
    return "<accepted>";
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "contagion_test_harness";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Exit status of the CLI with stdout and stderr captured to files.
int cli(const std::string& args, const std::string& tag) {
    const std::string cmd = kCli + " " + args + " > " + scratch(tag + ".stdout").string() + " 2> " +
                            scratch(tag + ".stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config: defaults and round trip") {
    const auto c = config_from_json(base_config());
    CHECK(c.n == 1000);
    CHECK(c.replicas == 3);
    CHECK(c.model.pi == 1.0);
    CHECK(c.dynamics == Dynamics::Monotone);
    CHECK(c.points().size() == 1);

    const auto again = config_from_json(to_json(c));
    CHECK(to_json(again) == to_json(c));
}

TEST_CASE("config: errors name the offending field") {
    auto j = base_config();
    j["bogus"] = 1;
    CHECK(field_of(j) == "/bogus");

    j = base_config();
    j["model"]["degree"]["kind"] = "lognormal";
    CHECK(field_of(j) == "/model/degree/kind");

    j = base_config();
    j["model"]["pi"] = 1.5;
    CHECK(field_of(j) == "/model/pi");

    j = base_config();
    j["n"] = -4;
    CHECK(field_of(j) == "/n");

    j = base_config();
    j["sweep"] = {{"parameter", "gamma"}, {"lo", 1}, {"hi", 2}, {"steps", 3}};
    CHECK(field_of(j) == "/sweep/parameter");

    j = base_config();
    j["model"]["degree"] = {{"kind", "regular"}, {"r", 4}};
    j["sweep"] = {{"parameter", "lambda"}, {"lo", 1}, {"hi", 2}, {"steps", 3}};
    CHECK(field_of(j) == "/sweep/parameter");

    j = base_config();
    j["sweep"] = {{"parameter", "q"}, {"lo", 0.1}, {"hi", 1.4}, {"steps", 3}};
    CHECK(field_of(j) == "/sweep");

    j = base_config();
    j["dynamics"] = "fast";
    CHECK(field_of(j) == "/dynamics");
}

TEST_CASE("sweep grid") {
    SweepSpec s{"lambda", 1.0, 2.0, 20};
    const auto v = s.values();
    REQUIRE(v.size() == 20);
    CHECK(v.front() == 1.0);
    CHECK(v.back() == 2.0);

    auto j = base_config();
    j["sweep"] = {{"parameter", "lambda"}, {"lo", 2.0}, {"hi", 4.0}, {"steps", 5}};
    const auto c = config_from_json(j);
    CHECK(c.model_at(3.0).p.mean() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK_THROWS_AS(c.model.with("q", 1.5), FieldError);
}

TEST_CASE("summary statistics") {
    const std::vector<double> xs{1, 2, 3, 4};
    const auto s = summarize(xs);
    CHECK(s.count == 4);
    CHECK(s.mean == 2.5);
    // sample sd sqrt(5/3), stderr that over 2
    CHECK(s.stderr_mean == doctest::Approx(std::sqrt(5.0 / 3.0) / 2));
    CHECK(s.ci_half_width() == doctest::Approx(1.96 * s.stderr_mean));
    CHECK(summarize(std::vector<double>{7}).stderr_mean == 0.0);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(12345678901234.0) == "1.23456789012e+13");
}

TEST_CASE("csv round trip") {
    CsvTable t;
    t.header = {"a", "b"};
    t.add_row({"1", "2.5"});
    t.add_row({"3", "nan"});
    CHECK_THROWS(t.add_row({"1"}));
    std::stringstream ss;
    t.write(ss);
    CHECK(ss.str() == "a,b\n1,2.5\n3,nan\n");
    const auto back = CsvTable::parse(ss);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.number(0, 1) == 2.5);
    CHECK(std::isnan(back.number(1, 1)));
    CHECK(back.column("b") == 1u);
    CHECK_FALSE(back.column("c").has_value());
}

TEST_CASE("replica streams do not depend on the thread count") {
    auto j = base_config();
    j["replicas"] = 6;
    j["sweep"] = {{"parameter", "lambda"}, {"lo", 3.0}, {"hi", 5.0}, {"steps", 2}};
    auto c = config_from_json(j);
    c.threads = 1;
    const auto one = run_experiment(c);
    c.threads = 4;
    const auto four = run_experiment(c);
    std::stringstream a, b;
    replica_table(c, one).write(a);
    replica_table(c, four).write(b);
    CHECK(a.str() == b.str());
    CHECK(one.failed() == 0);

    auto s0 = replica_stream(c, 1, 2);
    auto s1 = RandomStream(c.seed).split(1 * c.replicas + 2);
    CHECK(s0() == s1());
}

TEST_CASE("parallel_for runs every job once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) REQUIRE(h == 1);
}

TEST_CASE("table schemas") {
    auto c = config_from_json(base_config());
    const auto r = run_experiment(c);
    const auto summary = summary_table(c, r);
    CHECK(summary.header == std::vector<std::string>{"point", "n", "replicas", "failed", "final_mean", "final_se",
                                                     "final_ci", "pivotal_mean", "pivotal_se", "inactive_mean",
                                                     "inactive_se", "rounds_mean", "cascade_freq", "cutoff",
                                                     "attempts_mean", "attempts_se", "censored"});
    REQUIRE(summary.rows.size() == 1);
    CHECK(summary.number(0, 6) == doctest::Approx(1.96 * summary.number(0, 5)).epsilon(1e-9));

    const auto at = analytic_table(c);
    CHECK(at.header == std::vector<std::string>{"point", "cascade_condition", "zhat", "final_fraction",
                                                "zhat_verified", "residual", "xi", "s", "xibar", "gamma"});
    CHECK(at.number(0, *at.column("gamma")) <= at.number(0, *at.column("s")) + 1e-12);

    auto j = base_config();
    j["replicas"] = 1;
    j["n"] = 300;
    j["sweep"] = {{"parameter", "lambda"}, {"lo", 1.0}, {"hi", 8.0}, {"steps", 20}};
    c = config_from_json(j);
    const auto sweep = sweep_table(c, run_experiment(c));
    CHECK(sweep.rows.size() == 20);
    CHECK(sweep.header.front() == "lambda");
    CHECK(sweep.column("analytic_final").has_value());
    CHECK(sweep.column("deviation_final").has_value());
}

TEST_CASE("compare") {
    CsvTable a;
    a.header = {"lambda", "x"};
    a.add_row({"1", "0.5"});
    a.add_row({"2", "0.6"});
    CsvTable b = a;
    const auto same = compare(a, b);
    CHECK(same.pass);
    CHECK(same.max_deviation == 0.0);

    b.rows[1][1] = "0.7";
    const auto off = compare(a, b);
    CHECK_FALSE(off.pass);
    CHECK(off.max_deviation == doctest::Approx(0.1));
    CompareOptions loose;
    loose.tolerance = 0.2;
    CHECK(compare(a, b, loose).pass);

    b.header.push_back("tolerance");
    b.rows[0].push_back("0.01");
    b.rows[1].push_back("0.5");
    CHECK(compare(a, b).pass);

    CsvTable c = a;
    c.rows[1][0] = "2.5";
    CHECK_THROWS_AS(compare(a, c), GridMismatch);
    c.rows.pop_back();
    CHECK_THROWS_AS(compare(a, c), GridMismatch);
}

TEST_CASE("figures") {
    auto c = config_from_json(base_config());
    const auto q = figure("qc_curve", c);
    CHECK(q.header == std::vector<std::string>{"lambda", "qc", "cut", "defined"});
    CHECK(q.rows.size() > 5);

    const auto w = figure("cascade_window", c);
    const auto gi = *w.column("gamma");
    const auto si = *w.column("s");
    for (std::size_t i = 0; i < w.rows.size(); ++i) {
        REQUIRE(w.number(i, gi) <= w.number(i, si) + 1e-12);
    }
    CHECK(figure("seed_response", c).rows.size() == 201);

    // short lambda grid for the slow ones
    auto j = base_config();
    j["sweep"] = {{"parameter", "lambda"}, {"lo", 1.5}, {"hi", 4.5}, {"steps", 4}};
    const auto cs = config_from_json(j);
    for (const auto& name : {"coexistence", "alpha_c"}) {
        CAPTURE(name);
        CHECK(figure(name, cs).rows.size() == 4);
    }
    CHECK_THROWS_AS(figure("seed_response", cs), FieldError);
    CHECK_THROWS_AS(figure("nope", c), UnknownFigure);
}

TEST_CASE("cli: exit codes and diagnostics") {
    CHECK(cli("analytic --config " + kData + "/small.json", "ok") == 0);
    CHECK(slurp(scratch("ok.stdout")).rfind("point,cascade_condition,", 0) == 0);

    CHECK(cli("analytic --config " + kData + "/bad_field.json", "field") == 2);
    CHECK(slurp(scratch("field.stderr")).find("/sweep/parameter") != std::string::npos);

    CHECK(cli("analytic --config " + kData + "/bad_syntax.json", "syntax") == 2);
    CHECK(slurp(scratch("syntax.stderr")).find("bad_syntax.json:3:") != std::string::npos);

    CHECK(cli("analytic --config /nonexistent.json", "missing") == 2);
    CHECK(cli("figure nope --config " + kData + "/small.json", "fig") == 2);
    CHECK(cli("simulate --bogus-flag", "flag") == 2);
}

TEST_CASE("cli: byte-identical reruns") {
    const std::string args = "simulate --config " + kData + "/small.json --replicas 1 --n 10 --seed 5";
    const auto a = scratch("det_a.csv");
    const auto b = scratch("det_b.csv");
    const auto t = scratch("det_t.csv");
    REQUIRE(cli(args + " --out " + a.string(), "det_a") == 0);
    REQUIRE(cli(args + " --out " + b.string(), "det_b") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(fs::exists(a.string() + ".meta.json"));

    const std::string many = "simulate --config " + kData + "/small.json --replicas 6 --n 500 --seed 5";
    REQUIRE(cli(many + " --threads 1 --out " + a.string(), "thr1") == 0);
    REQUIRE(cli(many + " --threads 3 --out " + t.string(), "thr3") == 0);
    CHECK(slurp(a) == slurp(t));

    CHECK(cli("compare " + a.string() + " " + t.string(), "cmp_same") == 0);
}
