#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "survband/dataset.hpp"
#include "survband/report.hpp"

using namespace survband;
using nlohmann::json;

namespace {

const std::string kVeteran = std::string(SURVBAND_DATA_DIR) + "/veteran.csv";
const std::string kCli = SURVBAND_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  RunResult r;
  std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/survband_test_" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("parse_dataset: veteran fixture shape and pinned checksum") {
  Dataset ds = parse_dataset(kVeteran);
  CHECK(ds.reference.label == "1");
  CHECK(ds.test.label == "2");
  CHECK(ds.reference.size() == 69);
  CHECK(ds.test.size() == 68);
  CHECK(ds.reference.n_censored() == 5);
  CHECK(ds.test.n_censored() == 4);
  CHECK(ds.reference_defaulted);

  // Fixture identity is pinned; regenerating the file must preserve it.
  CHECK(file_checksum(kVeteran) == "5df70263eb6bbb93");

  Dataset swapped = parse_dataset(kVeteran, std::string("2"));
  CHECK(swapped.reference.label == "2");
  CHECK_FALSE(swapped.reference_defaulted);
  CHECK_THROWS_AS(parse_dataset(kVeteran, std::string("3")), dataset_error);
}

TEST_CASE("parse_dataset: schema violations carry line numbers") {
  std::string bad = write_temp("bad.csv", "time,status,group\n1.5,1,a\n0,1,b\n2.5,2,a\n");
  try {
    parse_dataset(bad);
    FAIL("expected dataset_error");
  } catch (const dataset_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("line 4") != std::string::npos);
  }

  std::string one_group = write_temp("one.csv", "time,status,group\n1,1,a\n2,0,a\n");
  CHECK_THROWS_WITH_AS(parse_dataset(one_group),
                       "expected exactly two groups, found 1", dataset_error);

  std::string no_col = write_temp("nocol.csv", "time,event,group\n1,1,a\n");
  CHECK_THROWS_AS(parse_dataset(no_col), dataset_error);

  // tab-delimited variant parses too
  std::string tsv = write_temp("ok.tsv", "time\tstatus\tgroup\n1.5\t1\ta\n2\t0\tb\n");
  Dataset ds = parse_dataset(tsv);
  CHECK(ds.reference.size() == 1);
  CHECK(ds.test.size() == 1);
}

TEST_CASE("FitResult JSON round-trips and reproduces the AIC identity") {
  Dataset ds = parse_dataset(kVeteran);
  FitResult fit = fit_joint(ds.reference, Family::weibull, Family::exponential);
  json j = to_json(fit);
  FitResult back = fit_from_json(j);
  CHECK(back.loglik == fit.loglik);
  CHECK(back.aic == fit.aic);
  CHECK(back.aic == 2.0 * 2.0 - 2.0 * back.loglik);  // recomputed exactly
  CHECK(back.theta[0] == fit.theta[0]);
  CHECK(back.theta[1] == fit.theta[1]);
  CHECK(back.observed_info.at(0, 1) == fit.observed_info.at(0, 1));
  REQUIRE(back.censor_fit);
  CHECK(back.censor_fit->theta[0] == fit.censor_fit->theta[0]);
}

TEST_CASE("cli: test subcommand exit codes follow the contract") {
  // fail-to-reject at day 80 with margin 0.15
  auto r1 = run_cli("test --input " + kVeteran +
                    " --kind equiv --target diff --margin 0.15 --alpha 0.05 --at 80");
  CHECK(r1.exit_code == 1);
  json d = json::parse(r1.out);
  CHECK(d["decision"]["reject"] == false);
  CHECK(d["decision"]["critical_bounds"]["lower_min"].get<double>() ==
        doctest::Approx(-0.068).epsilon(0.01));
  CHECK(d["decision"]["critical_bounds"]["upper_max"].get<double>() ==
        doctest::Approx(0.163).epsilon(0.01));

  // margin 0.2 over [40,600]: equivalence claimed
  auto r2 = run_cli("test --input " + kVeteran +
                    " --kind equiv --target diff --margin 0.2 --interval 40:600");
  CHECK(r2.exit_code == 0);

  // usage error
  auto r3 = run_cli("test --input " + kVeteran + " --kind equiv --margin 0.15");
  CHECK(r3.exit_code == 2);
  auto r4 = run_cli("test --input /nonexistent.csv --kind equiv --margin 0.15 --at 80");
  CHECK(r4.exit_code == 2);
  auto r5 = run_cli("nonsense-subcommand");
  CHECK(r5.exit_code == 2);
}

TEST_CASE("cli: bands CSV is byte-identical across runs with the same seed") {
  std::string args = "bands --input " + kVeteran +
                     " --target diff --method bootstrap --alpha 0.05 --grid 40:600:5 "
                     "--n-boot 60 --seed 11";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("t,estimate,lower,upper,sigma") != std::string::npos);
  CHECK(a.out.find("# seed: 11") != std::string::npos);

  auto c = run_cli("bands --input " + kVeteran +
                   " --target diff --method bootstrap --alpha 0.05 --grid 40:600:5 "
                   "--n-boot 60 --seed 12");
  CHECK(c.out != a.out);
}

TEST_CASE("cli: km and logrank emit the nonparametric outputs") {
  auto km = run_cli("km --input " + kVeteran);
  CHECK(km.exit_code == 0);
  CHECK(km.out.find("group,time,survival") != std::string::npos);

  auto kmb = run_cli("km --input " + kVeteran + " --band --alpha 0.05 --grid 40:600:8");
  CHECK(kmb.exit_code == 0);
  CHECK(kmb.out.find("t,estimate,lower,upper,sigma") != std::string::npos);

  auto lr = run_cli("logrank --input " + kVeteran);
  CHECK(lr.exit_code == 0);
  json j = json::parse(lr.out);
  CHECK(j["p_value"].get<double>() == doctest::Approx(0.928).epsilon(0.01));
}

TEST_CASE("cli: simulate runs a small study from flags and from a config file") {
  auto r = run_cli("simulate --scenario scen1a_null --n1 30 --n2 30 --n-sim 40 "
                   "--study rejection --seed 5 "
                   "--test kind=equiv,target=diff,t0=2.3,margin=0.3,ref=2 --threads 2");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["rows"].size() == 1);
  double rate = j["result"]["rows"][0]["rate"].get<double>();
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);

  std::string cfg = write_temp("study.cfg",
                               "# tiny study\n"
                               "scenario = scen1a_null\n"
                               "study = rejection\n"
                               "n1 = 30\nn2 = 30\nn_sim = 40\nseed = 5\n"
                               "test = kind=equiv,target=diff,t0=2.3,margin=0.3,ref=2\n");
  auto rc = run_cli("simulate --config " + cfg + " --threads 2");
  CHECK(rc.exit_code == 0);
  json jc = json::parse(rc.out);
  CHECK(jc["result"]["rows"][0]["rate"].get<double>() == rate);  // same seed, same study

  // unknown scenario -> input error
  auto bad = run_cli("simulate --scenario scen9 --study rejection "
                     "--test kind=equiv,target=diff,t0=1,margin=0.1");
  CHECK(bad.exit_code == 2);
}
