// Python bindings for the survband core: distribution primitives, censored
// MLE, confidence bands, equivalence tests, Kaplan-Meier tools and the
// simulation harness.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "survband/dataset.hpp"
#include "survband/report.hpp"
#include "survband/version.hpp"

namespace py = pybind11;
using namespace survband;

namespace {

SurvivalSample make_sample(const std::vector<double>& times,
                           const std::vector<int>& status, const std::string& label) {
  if (times.size() != status.size())
    throw std::invalid_argument("times and status must have the same length");
  SurvivalSample s;
  s.label = label;
  s.records.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (status[i] != 0 && status[i] != 1)
      throw std::invalid_argument("status entries must be 0 or 1");
    s.records.push_back({times[i], status[i] == 1});
  }
  return s;
}

Params to_params(const std::vector<double>& v) {
  if (v.size() == 1) return Params::of(v[0]);
  if (v.size() == 2) return Params::of(v[0], v[1]);
  throw std::invalid_argument("theta must have 1 or 2 entries");
}

std::vector<double> from_params(const Params& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i];
  return out;
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "parametric survival bands and equivalence tests";
  m.attr("__version__") = kVersion;

  py::enum_<Family>(m, "Family")
      .value("weibull", Family::weibull)
      .value("exponential", Family::exponential)
      .value("log_logistic", Family::log_logistic)
      .value("log_normal", Family::log_normal);

  py::enum_<BandTarget>(m, "BandTarget")
      .value("survival_difference", BandTarget::survival_difference)
      .value("log_hazard_ratio", BandTarget::log_hazard_ratio);

  py::enum_<BandMethod>(m, "BandMethod")
      .value("asymptotic", BandMethod::asymptotic)
      .value("bootstrap", BandMethod::bootstrap)
      .value("bootstrap_nonparametric", BandMethod::bootstrap_nonparametric);

  py::enum_<TestKind>(m, "TestKind")
      .value("noninferiority", TestKind::noninferiority)
      .value("equivalence", TestKind::equivalence);

  py::class_<CurveValues>(m, "CurveValues")
      .def_readonly("pdf", &CurveValues::pdf)
      .def_readonly("cdf", &CurveValues::cdf)
      .def_readonly("survival", &CurveValues::survival)
      .def_readonly("hazard", &CurveValues::hazard)
      .def_readonly("cum_hazard", &CurveValues::cum_hazard);

  py::class_<SurvivalSample>(m, "SurvivalSample")
      .def(py::init(&make_sample), py::arg("times"), py::arg("status"),
           py::arg("label") = "")
      .def_property_readonly("n", [](const SurvivalSample& s) { return s.size(); })
      .def_property_readonly("n_events", &SurvivalSample::n_events)
      .def_property_readonly("n_censored", &SurvivalSample::n_censored)
      .def_readonly("label", &SurvivalSample::label)
      .def_property_readonly("times",
                             [](const SurvivalSample& s) {
                               std::vector<double> t;
                               for (const auto& r : s.records) t.push_back(r.time);
                               return t;
                             })
      .def_property_readonly("status", [](const SurvivalSample& s) {
        std::vector<int> d;
        for (const auto& r : s.records) d.push_back(r.event ? 1 : 0);
        return d;
      });

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("substream", &Rng::substream)
      .def("uniform01", &Rng::uniform01);

  m.def(
      "eval",
      [](Family f, const std::vector<double>& th, double t) {
        return eval(f, to_params(th), t);
      },
      py::arg("family"), py::arg("theta"), py::arg("t"));
  m.def(
      "quantile",
      [](Family f, const std::vector<double>& th, double p) {
        return quantile(f, to_params(th), p);
      },
      py::arg("family"), py::arg("theta"), py::arg("p"));
  m.def(
      "sample",
      [](Family f, const std::vector<double>& th, std::size_t n, Rng& rng) {
        return sample(f, to_params(th), n, rng);
      },
      py::arg("family"), py::arg("theta"), py::arg("n"), py::arg("rng"));
  m.def(
      "grad_survival",
      [](Family f, const std::vector<double>& th, double t) {
        return from_params(grad_survival(f, to_params(th), t));
      },
      py::arg("family"), py::arg("theta"), py::arg("t"));
  m.def(
      "grad_log_hazard",
      [](Family f, const std::vector<double>& th, double t) {
        return from_params(grad_log_hazard(f, to_params(th), t));
      },
      py::arg("family"), py::arg("theta"), py::arg("t"));
  m.def("standard_normal_quantile", &standard_normal_quantile, py::arg("p"));

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("family", &FitResult::family)
      .def_property_readonly("theta",
                             [](const FitResult& f) { return from_params(f.theta); })
      .def_readonly("loglik", &FitResult::loglik)
      .def_readonly("aic", &FitResult::aic)
      .def_readonly("n", &FitResult::n)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("degenerate", &FitResult::degenerate)
      .def_readonly("label", &FitResult::label)
      .def_property_readonly("observed_info",
                             [](const FitResult& f) {
                               std::vector<std::vector<double>> mat;
                               for (std::size_t r = 0; r < f.observed_info.n; ++r) {
                                 std::vector<double> row;
                                 for (std::size_t c = 0; c < f.observed_info.n; ++c)
                                   row.push_back(f.observed_info.at(r, c));
                                 mat.push_back(row);
                               }
                               return mat;
                             })
      .def_property_readonly("censor_fit",
                             [](const FitResult& f) -> py::object {
                               if (!f.censor_fit) return py::none();
                               return py::cast(*f.censor_fit);
                             })
      .def("to_dict", [](const FitResult& f) { return json_to_py(to_json(f)); });

  m.def(
      "log_likelihood",
      [](const SurvivalSample& s, Family f, const std::vector<double>& th) {
        return log_likelihood(s, f, to_params(th));
      },
      py::arg("sample"), py::arg("family"), py::arg("theta"));
  m.def(
      "censoring_log_likelihood",
      [](const SurvivalSample& s, Family f, const std::vector<double>& th) {
        return censoring_log_likelihood(s, f, to_params(th));
      },
      py::arg("sample"), py::arg("family"), py::arg("psi"));
  m.def(
      "fit_mle",
      [](const SurvivalSample& s, Family f, std::optional<std::vector<double>> start,
         int max_iter, double tol) {
        FitOptions o;
        if (start) o.start = to_params(*start);
        o.max_iter = max_iter;
        o.tol = tol;
        return fit_mle(s, f, o);
      },
      py::arg("sample"), py::arg("family"), py::arg("start") = py::none(),
      py::arg("max_iter") = 2000, py::arg("tol") = 1e-3);
  m.def("fit_censoring", &fit_censoring, py::arg("sample"), py::arg("family"));
  m.def(
      "fit_joint",
      [](const SurvivalSample& s, Family ef, Family cf) { return fit_joint(s, ef, cf); },
      py::arg("sample"), py::arg("event_family"),
      py::arg("censoring_family") = Family::exponential);
  m.def(
      "select_model", [](const SurvivalSample& s) { return select_model(s); },
      py::arg("sample"));

  py::class_<ConfidenceBand>(m, "ConfidenceBand")
      .def_readonly("target", &ConfidenceBand::target)
      .def_readonly("method", &ConfidenceBand::method)
      .def_readonly("alpha", &ConfidenceBand::alpha)
      .def_readonly("grid", &ConfidenceBand::grid)
      .def_readonly("estimate", &ConfidenceBand::estimate)
      .def_readonly("lower", &ConfidenceBand::lower)
      .def_readonly("upper", &ConfidenceBand::upper)
      .def_readonly("sigma", &ConfidenceBand::sigma)
      .def("to_dict", [](const ConfidenceBand& b) { return json_to_py(to_json(b)); });

  m.def("survival_difference", &survival_difference, py::arg("fit1"), py::arg("fit2"),
        py::arg("t"));
  m.def("log_hazard_ratio", &log_hazard_ratio, py::arg("fit1"), py::arg("fit2"),
        py::arg("t"));
  m.def("delta_variance", &delta_variance, py::arg("fit1"), py::arg("fit2"),
        py::arg("t"), py::arg("target"));
  m.def(
      "bootstrap_variance",
      [](const FitResult& f1, const FitResult& f2, double t, BandTarget target,
         int n_boot, std::uint64_t seed, std::optional<double> t_max) {
        BootstrapOptions o;
        o.t_max = t_max;
        return bootstrap_variance(f1, f2, t, target, n_boot, Rng(seed), o);
      },
      py::arg("fit1"), py::arg("fit2"), py::arg("t"), py::arg("target"),
      py::arg("n_boot") = 500, py::arg("seed") = 1, py::arg("t_max") = py::none());
  m.def(
      "pointwise_band",
      [](const FitResult& f1, const FitResult& f2, std::vector<double> grid,
         BandTarget target, BandMethod method, double alpha, int n_boot,
         std::uint64_t seed, std::optional<double> t_max) {
        BootstrapOptions o;
        o.n_boot = n_boot;
        o.t_max = t_max;
        return pointwise_band(f1, f2, std::move(grid), target, method, alpha, Rng(seed), o);
      },
      py::arg("fit1"), py::arg("fit2"), py::arg("grid"), py::arg("target"),
      py::arg("method") = BandMethod::asymptotic, py::arg("alpha") = 0.05,
      py::arg("n_boot") = 500, py::arg("seed") = 1, py::arg("t_max") = py::none());

  py::class_<TestDecision>(m, "TestDecision")
      .def_readonly("kind", &TestDecision::kind)
      .def_readonly("target", &TestDecision::target)
      .def_readonly("method", &TestDecision::method)
      .def_readonly("margin", &TestDecision::margin)
      .def_readonly("alpha", &TestDecision::alpha)
      .def_readonly("reject", &TestDecision::reject)
      .def_readonly("upper_max", &TestDecision::upper_max)
      .def_readonly("upper_argmax", &TestDecision::upper_argmax)
      .def_readonly("lower_min", &TestDecision::lower_min)
      .def_readonly("lower_argmin", &TestDecision::lower_argmin)
      .def("to_dict", [](const TestDecision& d) { return json_to_py(to_json(d)); });

  m.def(
      "noninferiority_test",
      [](const FitResult& ref, const FitResult& test, double t0, double margin,
         BandTarget target, double alpha, BandMethod method, int n_boot,
         std::uint64_t seed, std::optional<double> t_max) {
        BootstrapOptions o;
        o.n_boot = n_boot;
        o.t_max = t_max;
        return noninferiority_test(ref, test, t0, {margin, target}, alpha, method,
                                   Rng(seed), o);
      },
      py::arg("fit_ref"), py::arg("fit_test"), py::arg("t0"), py::arg("margin"),
      py::arg("target") = BandTarget::survival_difference, py::arg("alpha") = 0.05,
      py::arg("method") = BandMethod::asymptotic, py::arg("n_boot") = 500,
      py::arg("seed") = 1, py::arg("t_max") = py::none());
  m.def(
      "equivalence_test",
      [](const FitResult& ref, const FitResult& test, double t0, double margin,
         BandTarget target, double alpha, BandMethod method, int n_boot,
         std::uint64_t seed, std::optional<double> t_max) {
        BootstrapOptions o;
        o.n_boot = n_boot;
        o.t_max = t_max;
        return equivalence_test(ref, test, t0, {margin, target}, alpha, method,
                                Rng(seed), o);
      },
      py::arg("fit_ref"), py::arg("fit_test"), py::arg("t0"), py::arg("margin"),
      py::arg("target") = BandTarget::survival_difference, py::arg("alpha") = 0.05,
      py::arg("method") = BandMethod::asymptotic, py::arg("n_boot") = 500,
      py::arg("seed") = 1, py::arg("t_max") = py::none());
  m.def(
      "interval_test",
      [](const FitResult& ref, const FitResult& test, double t1, double t2, int grid_n,
         double margin, BandTarget target, double alpha, TestKind kind, BandMethod method,
         int n_boot, std::uint64_t seed, std::optional<double> t_max) {
        BootstrapOptions o;
        o.n_boot = n_boot;
        o.t_max = t_max;
        return interval_test(ref, test, t1, t2, grid_n, {margin, target}, alpha, kind,
                             method, Rng(seed), o);
      },
      py::arg("fit_ref"), py::arg("fit_test"), py::arg("t1"), py::arg("t2"),
      py::arg("grid_n") = 102, py::arg("margin") = 0.1,
      py::arg("target") = BandTarget::survival_difference, py::arg("alpha") = 0.05,
      py::arg("kind") = TestKind::equivalence, py::arg("method") = BandMethod::asymptotic,
      py::arg("n_boot") = 500, py::arg("seed") = 1, py::arg("t_max") = py::none());

  py::class_<KMEstimate>(m, "KMEstimate")
      .def_readonly("event_times", &KMEstimate::event_times)
      .def_readonly("survival", &KMEstimate::survival)
      .def_readonly("greenwood_var", &KMEstimate::greenwood_var)
      .def_readonly("at_risk", &KMEstimate::at_risk)
      .def_readonly("n_events", &KMEstimate::n_events)
      .def_readonly("n", &KMEstimate::n)
      .def_readonly("max_observed", &KMEstimate::max_observed)
      .def("survival_at", &KMEstimate::survival_at)
      .def("variance_at", &KMEstimate::variance_at);

  m.def("kaplan_meier", &kaplan_meier, py::arg("sample"));
  m.def(
      "km_difference_band",
      [](const KMEstimate& a, const KMEstimate& b, std::vector<double> grid,
         double alpha) { return km_difference_band(a, b, std::move(grid), alpha); },
      py::arg("km1"), py::arg("km2"), py::arg("grid"), py::arg("alpha") = 0.05);

  py::class_<LogrankResult>(m, "LogrankResult")
      .def_readonly("statistic", &LogrankResult::statistic)
      .def_readonly("p_value", &LogrankResult::p_value);
  m.def("logrank_test", &logrank_test, py::arg("sample1"), py::arg("sample2"));

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def_readonly("name", &ScenarioConfig::name)
      .def_readonly("t_max", &ScenarioConfig::t_max)
      .def_readonly("grid", &ScenarioConfig::grid)
      .def_readonly("fit_family", &ScenarioConfig::fit_family)
      .def("true_difference", &ScenarioConfig::true_difference)
      .def("true_log_hazard_ratio", &ScenarioConfig::true_log_hazard_ratio);

  m.def("scenario", &scenario, py::arg("name"));
  m.def("scenario_names", &scenario_names);
  m.def(
      "generate_pair",
      [](const ScenarioConfig& c, std::size_t n1, std::size_t n2, std::uint64_t seed) {
        return generate_pair(c, n1, n2, Rng(seed));
      },
      py::arg("config"), py::arg("n1"), py::arg("n2"), py::arg("seed"));
  m.def(
      "calibrate_uniform_censoring",
      [](Family f, const std::vector<double>& th, double t_max, double rate) {
        return calibrate_uniform_censoring(f, to_params(th), t_max, rate);
      },
      py::arg("family"), py::arg("theta"), py::arg("t_max"), py::arg("target_rate"));
  m.def(
      "coverage_study",
      [](const ScenarioConfig& c, std::size_t n1, std::size_t n2, int n_sim,
         const std::vector<BandMethod>& methods, const std::vector<BandTarget>& targets,
         const std::vector<double>& alphas, int n_boot, std::uint64_t seed,
         std::optional<std::vector<double>> grid, int threads) {
        return json_to_py(to_json(coverage_study(c, n1, n2, n_sim, methods, targets,
                                                 alphas, n_boot, Rng(seed), grid, threads)));
      },
      py::arg("config"), py::arg("n1"), py::arg("n2"), py::arg("n_sim"),
      py::arg("methods"), py::arg("targets"), py::arg("alphas"), py::arg("n_boot") = 500,
      py::arg("seed") = 1, py::arg("grid") = py::none(), py::arg("threads") = 0);
  m.def(
      "rejection_study",
      [](const ScenarioConfig& c, std::size_t n1, std::size_t n2, int n_sim,
         const std::vector<py::dict>& specs, double alpha, BandMethod method, int n_boot,
         std::uint64_t seed, int threads) {
        std::vector<RejectionSpec> rs;
        for (const auto& d : specs) {
          RejectionSpec r;
          r.kind = d["kind"].cast<TestKind>();
          if (d.contains("target")) r.target = d["target"].cast<BandTarget>();
          r.t0 = d.contains("t0") ? d["t0"].cast<double>() : 0.0;
          r.margin = d["margin"].cast<double>();
          if (d.contains("ref")) r.ref_group = d["ref"].cast<int>();
          if (d.contains("interval"))
            r.interval = d["interval"].cast<std::pair<double, double>>();
          rs.push_back(r);
        }
        return json_to_py(to_json(rejection_study(c, n1, n2, n_sim, rs, alpha, method,
                                                  n_boot, Rng(seed), threads)));
      },
      py::arg("config"), py::arg("n1"), py::arg("n2"), py::arg("n_sim"), py::arg("specs"),
      py::arg("alpha") = 0.05, py::arg("method") = BandMethod::asymptotic,
      py::arg("n_boot") = 500, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "parse_dataset",
      [](const std::string& path, std::optional<std::string> reference) {
        Dataset ds = parse_dataset(path, reference);
        return py::make_tuple(ds.reference, ds.test);
      },
      py::arg("path"), py::arg("reference") = py::none());

  py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);
}
