// survband: parametric survival bands and equivalence testing from the
// command line. See README.md for the output schemas.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "survband/dataset.hpp"
#include "survband/report.hpp"
#include "survband/version.hpp"

using json = nlohmann::json;
using namespace survband;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoReject = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

json make_manifest(const std::string& command, const json& options,
                   std::optional<std::uint64_t> seed, const std::string& input_path) {
  json m;
  m["command"] = command;
  m["options"] = options;
  if (seed) m["seed"] = *seed;
  m["version"] = kVersion;
  m["input_checksum"] = input_path.empty() ? "none" : file_checksum(input_path);
  m["timestamp"] = iso_timestamp();
  return m;
}

// CSV outputs stay byte-deterministic: the embedded manifest comment skips
// the timestamp.
std::string manifest_comment(const json& manifest) {
  std::ostringstream out;
  out << "# survband " << kVersion << "\n";
  out << "# command: " << manifest["command"].get<std::string>() << "\n";
  out << "# options: " << manifest["options"].dump() << "\n";
  if (manifest.contains("seed")) out << "# seed: " << manifest["seed"].dump() << "\n";
  out << "# input_checksum: " << manifest["input_checksum"].get<std::string>() << "\n";
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw dataset_error("cannot open output file: " + path);
  f << text;
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

Family parse_family(const std::string& name) {
  auto f = family_from_name(name);
  if (!f) throw dataset_error("unknown family: " + name);
  return *f;
}

BandTarget parse_target(const std::string& name) {
  if (name == "diff" || name == "survival_difference") return BandTarget::survival_difference;
  if (name == "loghr" || name == "log_hazard_ratio") return BandTarget::log_hazard_ratio;
  throw dataset_error("unknown target: " + name + " (expected diff or loghr)");
}

BandMethod parse_method(const std::string& name) {
  if (name == "asymptotic") return BandMethod::asymptotic;
  if (name == "bootstrap") return BandMethod::bootstrap;
  if (name == "bootstrap-np" || name == "bootstrap_nonparametric")
    return BandMethod::bootstrap_nonparametric;
  throw dataset_error("unknown method: " + name);
}

// "t1:t2:n" -> n equispaced points inclusive of both endpoints.
std::vector<double> parse_grid(const std::string& spec) {
  double t1 = 0, t2 = 0;
  int n = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &t1, &t2, &n) != 3 || n < 1 ||
      !(t1 > 0) || (n > 1 && !(t2 > t1)))
    throw dataset_error("bad grid spec '" + spec + "' (expected t1:t2:n)");
  if (n == 1) return {t1};
  return TimeSpec{t1, t2, n}.grid();
}

Dataset load(const std::string& input, const std::optional<std::string>& reference) {
  Dataset ds = parse_dataset(input, reference);
  if (ds.reference_defaulted)
    std::cerr << "note: reference group defaulted to '" << ds.reference.label
              << "' (lexicographically first); use --reference to override\n";
  return ds;
}

struct CommonOpts {
  std::string input;
  std::string reference;
  std::string event_family = "weibull";
  std::string censoring_family = "exponential";
  std::string time_unit;
  std::string out;

  std::optional<std::string> ref_opt() const {
    return reference.empty() ? std::nullopt : std::optional<std::string>(reference);
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_families = true) {
  cmd->add_option("--input", o.input, "dataset file (time,status,group)")->required();
  cmd->add_option("--reference", o.reference, "label of the reference group");
  if (with_families) {
    cmd->add_option("--family", o.event_family, "event-time family")
        ->default_val("weibull");
    cmd->add_option("--censoring-family", o.censoring_family, "censoring-time family")
        ->default_val("exponential");
  }
  cmd->add_option("--time-unit", o.time_unit, "unit label echoed into outputs");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
}

json common_options_json(const CommonOpts& o) {
  json j{{"input", o.input},
         {"reference", o.reference},
         {"family", o.event_family},
         {"censoring_family", o.censoring_family}};
  if (!o.time_unit.empty()) j["time_unit"] = o.time_unit;
  return j;
}

void cmd_fit(const CommonOpts& o) {
  Dataset ds = load(o.input, o.ref_opt());
  Family ef = parse_family(o.event_family);
  Family cf = parse_family(o.censoring_family);
  json out;
  out["manifest"] = make_manifest("fit", common_options_json(o), std::nullopt, o.input);
  out["reference"] = to_json(fit_joint(ds.reference, ef, cf));
  out["test"] = to_json(fit_joint(ds.test, ef, cf));
  write_json(o.out, out);
}

void cmd_select(const CommonOpts& o) {
  Dataset ds = load(o.input, o.ref_opt());
  json out;
  out["manifest"] = make_manifest("select", common_options_json(o), std::nullopt, o.input);
  for (const auto* s : {&ds.reference, &ds.test}) {
    json ranked = json::array();
    for (const FitResult& fit : select_model(*s)) ranked.push_back(to_json(fit));
    out[s == &ds.reference ? "reference" : "test"] = ranked;
  }
  write_json(o.out, out);
}

void cmd_bands(CLI::App* cmd) {
  auto o = std::make_shared<CommonOpts>();
  auto target = std::make_shared<std::string>("diff");
  auto method = std::make_shared<std::string>("asymptotic");
  auto alpha = std::make_shared<double>(0.05);
  auto grid_spec = std::make_shared<std::string>();
  auto n_boot = std::make_shared<int>(500);
  auto seed = std::make_shared<std::uint64_t>(1);
  add_common(cmd, *o);
  cmd->add_option("--target", *target, "diff or loghr")->required();
  cmd->add_option("--method", *method, "asymptotic, bootstrap or bootstrap-np");
  cmd->add_option("--alpha", *alpha, "one-sided level of each bound")->default_val(0.05);
  cmd->add_option("--grid", *grid_spec, "t1:t2:n inclusive grid")->required();
  cmd->add_option("--n-boot", *n_boot, "bootstrap replicates")->default_val(500);
  cmd->add_option("--seed", *seed, "rng seed")->default_val(1);

  cmd->callback([=]() {
    Dataset ds = load(o->input, o->ref_opt());
    Family ef = parse_family(o->event_family);
    Family cf = parse_family(o->censoring_family);
    BandMethod m = parse_method(*method);
    FitResult f1 = fit_joint(ds.reference, ef, cf);
    FitResult f2 = fit_joint(ds.test, ef, cf);
    BootstrapOptions bo;
    bo.n_boot = *n_boot;
    bo.sample1 = &ds.reference;
    bo.sample2 = &ds.test;
    ConfidenceBand band = pointwise_band(f1, f2, parse_grid(*grid_spec),
                                         parse_target(*target), m, *alpha, Rng(*seed), bo);
    json opts = common_options_json(*o);
    opts["target"] = *target;
    opts["method"] = *method;
    opts["alpha"] = *alpha;
    opts["grid"] = *grid_spec;
    opts["n_boot"] = *n_boot;
    json manifest = make_manifest("bands", opts, *seed, o->input);
    write_text(o->out, manifest_comment(manifest) + band_csv(band));
  });
}

int g_test_exit = kExitOk;

void cmd_test(CLI::App* cmd) {
  auto o = std::make_shared<CommonOpts>();
  auto kind = std::make_shared<std::string>();
  auto target = std::make_shared<std::string>("diff");
  auto method = std::make_shared<std::string>("asymptotic");
  auto margin = std::make_shared<double>(0.0);
  auto alpha = std::make_shared<double>(0.05);
  auto at = std::make_shared<double>(0.0);
  auto interval = std::make_shared<std::string>();
  auto grid_n = std::make_shared<int>(102);
  auto n_boot = std::make_shared<int>(500);
  auto seed = std::make_shared<std::uint64_t>(1);
  add_common(cmd, *o);
  cmd->add_option("--kind", *kind, "noninf or equiv")->required();
  cmd->add_option("--target", *target, "diff or loghr");
  cmd->add_option("--method", *method, "asymptotic, bootstrap or bootstrap-np");
  cmd->add_option("--margin", *margin, "equivalence margin (> 0)")->required();
  cmd->add_option("--alpha", *alpha, "one-sided level")->default_val(0.05);
  auto* at_opt = cmd->add_option("--at", *at, "single time point t0");
  auto* iv_opt = cmd->add_option("--interval", *interval, "t1:t2 time interval");
  cmd->add_option("--grid-n", *grid_n, "points in the interval grid")->default_val(102);
  cmd->add_option("--n-boot", *n_boot, "bootstrap replicates")->default_val(500);
  cmd->add_option("--seed", *seed, "rng seed")->default_val(1);
  at_opt->excludes(iv_opt);

  cmd->callback([=]() {
    if (at_opt->count() == 0 && iv_opt->count() == 0)
      throw dataset_error("test: one of --at or --interval is required");
    Dataset ds = load(o->input, o->ref_opt());
    Family ef = parse_family(o->event_family);
    Family cf = parse_family(o->censoring_family);
    TestKind k;
    if (*kind == "noninf" || *kind == "noninferiority")
      k = TestKind::noninferiority;
    else if (*kind == "equiv" || *kind == "equivalence")
      k = TestKind::equivalence;
    else
      throw dataset_error("unknown test kind: " + *kind);
    Margin m{*margin, parse_target(*target)};
    BandMethod bm = parse_method(*method);
    FitResult f1 = fit_joint(ds.reference, ef, cf);
    FitResult f2 = fit_joint(ds.test, ef, cf);
    BootstrapOptions bo;
    bo.n_boot = *n_boot;
    bo.sample1 = &ds.reference;
    bo.sample2 = &ds.test;

    TestDecision d;
    if (at_opt->count() > 0) {
      d = k == TestKind::equivalence
              ? equivalence_test(f1, f2, *at, m, *alpha, bm, Rng(*seed), bo)
              : noninferiority_test(f1, f2, *at, m, *alpha, bm, Rng(*seed), bo);
    } else {
      double t1 = 0, t2 = 0;
      if (std::sscanf(interval->c_str(), "%lf:%lf", &t1, &t2) != 2)
        throw dataset_error("bad interval spec '" + *interval + "' (expected t1:t2)");
      d = interval_test(f1, f2, t1, t2, *grid_n, m, *alpha, k, bm, Rng(*seed), bo);
    }

    json opts = common_options_json(*o);
    opts["kind"] = *kind;
    opts["target"] = *target;
    opts["method"] = *method;
    opts["margin"] = *margin;
    opts["alpha"] = *alpha;
    if (at_opt->count() > 0)
      opts["at"] = *at;
    else
      opts["interval"] = *interval;
    json out;
    out["manifest"] = make_manifest("test", opts, *seed, o->input);
    out["decision"] = to_json(d);
    write_json(o->out, out);
    g_test_exit = d.reject ? kExitOk : kExitNoReject;
  });
}

void cmd_km(CLI::App* cmd) {
  auto o = std::make_shared<CommonOpts>();
  auto band = std::make_shared<bool>(false);
  auto alpha = std::make_shared<double>(0.05);
  auto grid_spec = std::make_shared<std::string>();
  add_common(cmd, *o, /*with_families=*/false);
  cmd->add_flag("--band", *band, "emit the nonparametric difference band");
  cmd->add_option("--alpha", *alpha, "one-sided level of each bound")->default_val(0.05);
  cmd->add_option("--grid", *grid_spec, "t1:t2:n grid for the band");

  cmd->callback([=]() {
    Dataset ds = load(o->input, o->ref_opt());
    KMEstimate km1 = kaplan_meier(ds.reference);
    KMEstimate km2 = kaplan_meier(ds.test);
    json opts = common_options_json(*o);
    opts["band"] = *band;
    if (*band) {
      if (grid_spec->empty()) throw dataset_error("km --band requires --grid");
      opts["alpha"] = *alpha;
      opts["grid"] = *grid_spec;
      json manifest = make_manifest("km", opts, std::nullopt, o->input);
      ConfidenceBand b = km_difference_band(km1, km2, parse_grid(*grid_spec), *alpha);
      write_text(o->out, manifest_comment(manifest) + band_csv(b));
    } else {
      json manifest = make_manifest("km", opts, std::nullopt, o->input);
      write_text(o->out, manifest_comment(manifest) + km_csv(km1, ds.reference.label) +
                             km_csv(km2, ds.test.label, /*with_header=*/false));
    }
  });
}

void cmd_logrank(const CommonOpts& o) {
  Dataset ds = load(o.input, o.ref_opt());
  LogrankResult r = logrank_test(ds.reference, ds.test);
  json out;
  out["manifest"] = make_manifest("logrank", common_options_json(o), std::nullopt, o.input);
  out["statistic"] = r.statistic;
  out["p_value"] = r.p_value;
  write_json(o.out, out);
}

// "key=value,key=value" items of a --test spec.
RejectionSpec parse_test_spec(const std::string& spec) {
  RejectionSpec rs;
  bool have_kind = false, have_margin = false, have_time = false;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw dataset_error("bad --test item '" + item + "' (expected key=value)");
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "kind") {
      if (val != "noninf" && val != "equiv")
        throw dataset_error("bad test kind: " + val);
      rs.kind = val == "noninf" ? TestKind::noninferiority : TestKind::equivalence;
      have_kind = true;
    } else if (key == "target") {
      rs.target = parse_target(val);
    } else if (key == "t0") {
      rs.t0 = std::stod(val);
      have_time = true;
    } else if (key == "margin" || key == "delta") {
      rs.margin = std::stod(val);
      have_margin = true;
    } else if (key == "ref") {
      rs.ref_group = std::stoi(val);
      if (rs.ref_group != 1 && rs.ref_group != 2)
        throw dataset_error("ref must be 1 or 2");
    } else if (key == "interval") {
      double t1 = 0, t2 = 0;
      if (std::sscanf(val.c_str(), "%lf:%lf", &t1, &t2) != 2)
        throw dataset_error("bad interval '" + val + "'");
      rs.interval = std::make_pair(t1, t2);
      have_time = true;
    } else if (key == "grid_n") {
      rs.grid_n = std::stoi(val);
    } else {
      throw dataset_error("unknown --test key: " + key);
    }
  }
  if (!have_kind || !have_margin || !have_time)
    throw dataset_error("--test needs at least kind=, margin= and t0= (or interval=)");
  return rs;
}

// Plain-text key=value study config; '#' starts a comment, repeated `test`
// keys accumulate.
void apply_config_file(const std::string& path, std::string& scenario_name,
                       std::size_t& n1, std::size_t& n2, int& n_sim, int& n_boot,
                       double& alpha, std::string& study, std::string& method,
                       std::uint64_t& seed, std::vector<std::string>& tests,
                       std::string& grid_spec) {
  std::ifstream f(path);
  if (!f) throw dataset_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t;
    for (char c : line)
      if (c != ' ' && c != '\t' && c != '\r') t.push_back(c);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw dataset_error("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = t.substr(0, eq), val = t.substr(eq + 1);
    if (key == "scenario") scenario_name = val;
    else if (key == "n1") n1 = std::stoul(val);
    else if (key == "n2") n2 = std::stoul(val);
    else if (key == "n_sim") n_sim = std::stoi(val);
    else if (key == "n_boot") n_boot = std::stoi(val);
    else if (key == "alpha") alpha = std::stod(val);
    else if (key == "study") study = val;
    else if (key == "method") method = val;
    else if (key == "seed") seed = std::stoull(val);
    else if (key == "test") tests.push_back(val);
    else if (key == "grid") grid_spec = val;
    else throw dataset_error("config line " + std::to_string(lineno) + ": unknown key " + key);
  }
}

void cmd_simulate(CLI::App* cmd) {
  auto scenario_name = std::make_shared<std::string>();
  auto n1 = std::make_shared<std::size_t>(100);
  auto n2 = std::make_shared<std::size_t>(100);
  auto n_sim = std::make_shared<int>(1000);
  auto n_boot = std::make_shared<int>(500);
  auto alpha = std::make_shared<double>(0.05);
  auto study = std::make_shared<std::string>();
  auto method = std::make_shared<std::string>("asymptotic");
  auto seed = std::make_shared<std::uint64_t>(1);
  auto tests = std::make_shared<std::vector<std::string>>();
  auto grid_spec = std::make_shared<std::string>();
  auto threads = std::make_shared<int>(0);
  auto config_path = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--config", *config_path, "key=value study config file");
  cmd->add_option("--scenario", *scenario_name, "scenario name");
  cmd->add_option("--n1", *n1, "group 1 sample size");
  cmd->add_option("--n2", *n2, "group 2 sample size");
  cmd->add_option("--n-sim", *n_sim, "simulation runs")->default_val(1000);
  cmd->add_option("--n-boot", *n_boot, "bootstrap replicates")->default_val(500);
  cmd->add_option("--alpha", *alpha, "one-sided level")->default_val(0.05);
  cmd->add_option("--study", *study, "coverage or rejection");
  cmd->add_option("--method", *method, "asymptotic, bootstrap, or both (coverage)");
  cmd->add_option("--seed", *seed, "rng seed")->default_val(1);
  cmd->add_option("--test", *tests,
                  "rejection cell, e.g. kind=equiv,target=diff,t0=2.3,margin=0.15,ref=2");
  cmd->add_option("--grid", *grid_spec, "coverage grid t1:t2:n (default: scenario grid)");
  cmd->add_option("--threads", *threads, "worker threads (0 = all cores)");
  cmd->add_option("--out", *out, "output path prefix (writes .json and .csv)");

  cmd->callback([=]() {
    if (!config_path->empty())
      apply_config_file(*config_path, *scenario_name, *n1, *n2, *n_sim, *n_boot, *alpha,
                        *study, *method, *seed, *tests, *grid_spec);
    if (scenario_name->empty() || study->empty())
      throw dataset_error("simulate: --scenario and --study are required");
    ScenarioConfig cfg = scenario(*scenario_name);
    json opts{{"scenario", *scenario_name}, {"n1", *n1},         {"n2", *n2},
              {"n_sim", *n_sim},            {"n_boot", *n_boot}, {"alpha", *alpha},
              {"study", *study},            {"method", *method}};
    json manifest = make_manifest("simulate", opts, *seed, "");

    json result;
    std::string csv, table;
    if (*study == "coverage") {
      std::optional<std::vector<double>> grid;
      if (!grid_spec->empty()) grid = parse_grid(*grid_spec);
      std::vector<BandMethod> methods;
      if (*method == "both")
        methods = {BandMethod::asymptotic, BandMethod::bootstrap};
      else
        methods = {parse_method(*method)};
      auto res = coverage_study(cfg, *n1, *n2, *n_sim, methods,
                                {BandTarget::survival_difference, BandTarget::log_hazard_ratio},
                                {*alpha}, *n_boot, Rng(*seed), grid, *threads);
      result = to_json(res);
      csv = coverage_csv(res);
    } else if (*study == "rejection") {
      if (tests->empty()) throw dataset_error("simulate --study rejection needs --test");
      std::vector<RejectionSpec> specs;
      for (const auto& t : *tests) specs.push_back(parse_test_spec(t));
      auto res = rejection_study(cfg, *n1, *n2, *n_sim, specs, *alpha,
                                 parse_method(*method), *n_boot, Rng(*seed), *threads);
      result = to_json(res);
      csv = rejection_csv(res);
      table = rejection_table_csv(res);
    } else {
      throw dataset_error("unknown study: " + *study);
    }

    json bundle;
    bundle["manifest"] = manifest;
    bundle["result"] = result;
    if (out->empty()) {
      write_json("", bundle);
    } else {
      write_json(*out + ".json", bundle);
      write_text(*out + ".csv", manifest_comment(manifest) + csv);
      if (!table.empty())
        write_text(*out + "_table.csv", manifest_comment(manifest) + table);
      std::cout << "wrote " << *out << ".json and " << *out << ".csv\n";
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric survival bands and equivalence tests"};
  app.require_subcommand(1);

  CommonOpts fit_o, select_o, logrank_o;
  auto* fit = app.add_subcommand("fit", "censored MLE per group");
  add_common(fit, fit_o);
  fit->callback([&]() { cmd_fit(fit_o); });

  auto* select = app.add_subcommand("select", "AIC model ranking per group");
  add_common(select, select_o, /*with_families=*/false);
  select->callback([&]() { cmd_select(select_o); });

  cmd_bands(app.add_subcommand("bands", "pointwise confidence band (CSV)"));
  cmd_test(app.add_subcommand("test", "non-inferiority / equivalence decision"));
  cmd_km(app.add_subcommand("km", "Kaplan-Meier estimate or difference band"));

  auto* lr = app.add_subcommand("logrank", "two-group log-rank test");
  add_common(lr, logrank_o, /*with_families=*/false);
  lr->callback([&]() { cmd_logrank(logrank_o); });

  cmd_simulate(app.add_subcommand("simulate", "Monte-Carlo coverage / rejection study"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  } catch (const dataset_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return g_test_exit;
}
