#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "yule/cli.hpp"

using namespace yule::cli;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Table table(const Run& r) { return parse_csv(r.out); }

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("CSV round trip") {
  Table t{{"x", "y"}, {{0.1, 1.0 / 3.0}, {1e-300, -2.5e17}, {5e-324, 12345678901234567.0}}};
  CHECK(parse_csv(format_csv(t)) == t);
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK_THROWS(parse_csv("a,b\n1,x\n"));
  CHECK_THROWS(parse_csv("a,b\n1\n"));
}

TEST_CASE("eval") {
  auto r = run_cli({"eval", "mittag-leffler", "--alpha", "1", "--beta", "1", "--z", "1"});
  CHECK(r.code == 0);
  CHECK(table(r).rows[0][0] == doctest::Approx(2.718281828459045).epsilon(1e-15));
  r = run_cli({"eval", "prabhakar", "--nu", "0.7", "--beta", "1.5", "--gamma", "3", "--z", "0"});
  CHECK(table(r).rows[0][0] == doctest::Approx(1.128379167095513).epsilon(1e-15));
  r = run_cli({"eval", "gauss_2f1", "--a", "1", "--b", "1", "--c", "2", "--z", "-1", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)["value"].get<double>() == doctest::Approx(0.6931471805599453));
  r = run_cli({"eval", "mittag-leffler", "--alpha", "1.5", "--z", "1"});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("alpha") != std::string::npos);
  CHECK(run_cli({"eval", "wright-phi", "--alpha", "-0.5", "--z", "-1", "--nu", "2"}).code == kExitValidation);
  CHECK(run_cli({"eval", "zeta", "--z", "2"}).code == kExitValidation);
  CHECK(run_cli({"eval", "gamma"}).code == kExitValidation);
}

TEST_CASE("pmf and moments") {
  auto r = run_cli({"pmf", "--model", "critical", "--lambda", "1", "--nu", "0.5", "--t", "5", "--kmax", "50"});
  CHECK(r.code == 0);
  const Table t = table(r);
  CHECK(t.columns == std::vector<std::string>{"k", "probability", "cumulative"});
  CHECK(t.rows.size() == 51);
  for (const auto& row : t.rows) CHECK(row[2] <= 1.0);

  r = run_cli({"moments", "--model", "critical", "--lambda", "1", "--nu", "1", "--t", "3"});
  CHECK(table(r).rows[0][column(table(r), "variance")] == doctest::Approx(3.0));

  r = run_cli({"pmf", "--model", "tfpp", "--alpha", "1", "--lambda", "1", "--t", "1"});
  const Table p = table(r);
  CHECK(p.rows[0][1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(p.rows[3][1] == doctest::Approx(std::exp(-1.0) / 6.0).epsilon(1e-12));

  r = run_cli({"pmf", "--model", "nonlinear", "--rates", "1,2.5,4", "--nu", "0.6", "--beta", "0.8", "--t", "1.5",
               "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["rows"].size() == 3);

  CHECK(run_cli({"pmf", "--model", "linear", "--rates", "1,2"}).code == kExitValidation);
  CHECK(run_cli({"pmf", "--model", "yule", "--beta", "0.5"}).code == kExitValidation);
  CHECK(run_cli({"pmf", "--model", "critical", "--beta", "0.5"}).code == kExitValidation);
  CHECK(run_cli({"pmf", "--model", "linear", "--colour", "red"}).code == kExitValidation);
  CHECK(run_cli({"moments", "--model", "nonlinear", "--rates", "1,2", "--t", "5"}).code == kExitNumerical);
}

TEST_CASE("simulate and compare") {
  auto a = run_cli({"compare", "--target", "YULE_EXAMPLE", "--samples", "100000"});
  CHECK(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["schema_version"] == 1);
  auto b = run_cli({"compare", "--target", "YULE_EXAMPLE", "--samples", "100000"});
  CHECK(a.out == b.out);
  auto w = run_cli({"compare", "--target", "YULE_EXAMPLE", "--samples", "100000", "--workers", "4"});
  CHECK(w.code == 0);
  auto f = run_cli({"compare", "--target", "YULE_EXAMPLE", "--samples", "100", "--tv-threshold", "0.001"});
  CHECK(f.code == kExitThreshold);
  CHECK(run_cli({"simulate", "--target", "CRITICAL_BD"}).code == kExitValidation);
  CHECK(run_cli({"simulate", "--target", "NOPE"}).code == kExitValidation);

  auto s = run_cli({"simulate", "--target", "SYSTEM", "--emit-snapshot", "--t", "2", "--nu", "0.5", "--seed", "3"});
  CHECK(s.code == 0);
  const auto snap = nlohmann::json::parse(s.out)["snapshot"];
  CHECK(snap["genus_birth_times"].size() == snap["species_counts"].size());
  CHECK(run_cli({"simulate", "--target", "SYSTEM"}).code == kExitValidation);
}

TEST_CASE("default seed from the environment") {
  ::setenv(kSeedEnv, "17", 1);
  auto a = run_cli({"simulate", "--target", "TN", "--samples", "200"});
  auto b = run_cli({"simulate", "--target", "TN", "--samples", "200", "--seed", "17"});
  CHECK(nlohmann::json::parse(a.out)["config"]["seed"] == 17);
  CHECK(a.out == b.out);
  ::setenv(kSeedEnv, "abc", 1);
  CHECK(run_cli({"simulate", "--samples", "10"}).code == kExitValidation);
  ::unsetenv(kSeedEnv);
  CHECK(nlohmann::json::parse(run_cli({"simulate", "--samples", "10"}).out)["config"]["seed"] == 1);
}

TEST_CASE("figures") {
  SUBCASE("figure 1: nu = 1 is uniform") {
    const Table t = table(run_cli({"figure", "--figure", "1"}));
    const auto cdf = column(t, "cdf_nu_1");
    for (const auto& row : t.rows) CHECK(row[cdf] == doctest::Approx(row[0]).epsilon(1e-15));
    CHECK(parse_csv(format_csv(t)) == t);
  }
  SUBCASE("figure 2: bottom to top in nu at k = 1") {
    const Table t = table(run_cli({"figure", "--figure", "2", "--kmax", "20"}));
    CHECK(t.rows.size() == 20);
    CHECK(t.rows[0][1] < t.rows[0][2]);
    CHECK(t.rows[0][2] < t.rows[0][3]);
    CHECK(t.rows[0][3] < t.rows[0][4]);
  }
  SUBCASE("figure 4: extinction probability grows in t") {
    const Table t = table(run_cli({"figure", "--figure", "4", "--points", "40"}));
    for (std::size_t c = 1; c <= 3; ++c)
      for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][c] > t.rows[i - 1][c]);
  }
  SUBCASE("figure 5 columns") {
    const Table t = table(run_cli({"figure", "--figure", "5", "--nu", "0.5", "--kmax", "10"}));
    CHECK(t.columns == std::vector<std::string>{"k", "nu_0.5"});
    CHECK(t.rows.size() == 11);
  }
  CHECK(run_cli({"figure", "--figure", "3"}).code == kExitValidation);
}
