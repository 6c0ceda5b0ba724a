#include "survband/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace survband {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const FitResult& fit) {
  json j;
  j["family"] = std::string(family_name(fit.family));
  j["theta"] = json::array();
  for (std::size_t i = 0; i < fit.theta.size(); ++i) j["theta"].push_back(fit.theta[i]);
  j["loglik"] = fit.loglik;
  j["aic"] = fit.aic;
  j["n"] = fit.n;
  j["converged"] = fit.converged;
  j["degenerate"] = fit.degenerate;
  j["label"] = fit.label;
  json info = json::array();
  for (std::size_t r = 0; r < fit.observed_info.n; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < fit.observed_info.n; ++c)
      row.push_back(fit.observed_info.at(r, c));
    info.push_back(row);
  }
  j["observed_info"] = info;
  if (fit.censor_fit) j["censoring"] = to_json(*fit.censor_fit);
  return j;
}

FitResult fit_from_json(const json& j) {
  FitResult fit;
  auto fam = family_from_name(j.at("family").get<std::string>());
  if (!fam) throw std::invalid_argument("fit_from_json: unknown family");
  fit.family = *fam;
  auto th = j.at("theta");
  fit.theta = th.size() == 1 ? Params::of(th[0].get<double>())
                             : Params::of(th[0].get<double>(), th[1].get<double>());
  fit.loglik = j.at("loglik").get<double>();
  fit.aic = j.at("aic").get<double>();
  fit.n = j.at("n").get<std::size_t>();
  fit.converged = j.at("converged").get<bool>();
  fit.degenerate = j.value("degenerate", false);
  fit.label = j.value("label", "");
  const auto& info = j.at("observed_info");
  fit.observed_info.n = info.size();
  for (std::size_t r = 0; r < info.size(); ++r)
    for (std::size_t c = 0; c < info.size(); ++c)
      fit.observed_info.a[r * info.size() + c] = info[r][c].get<double>();
  if (j.contains("censoring"))
    fit.censor_fit = std::make_shared<const FitResult>(fit_from_json(j["censoring"]));
  return fit;
}

json to_json(const TestDecision& d) {
  json j;
  j["kind"] = std::string(test_kind_name(d.kind));
  j["target"] = std::string(band_target_name(d.target));
  j["method"] = std::string(band_method_name(d.method));
  j["margin"] = d.margin;
  j["alpha"] = d.alpha;
  j["reject"] = d.reject;
  if (d.time.is_point()) {
    j["time"] = {{"at", d.time.t1}};
  } else {
    j["time"] = {{"interval", {d.time.t1, d.time.t2}}, {"grid_n", d.time.grid_n}};
  }
  j["critical_bounds"] = {{"upper_max", d.upper_max},
                          {"upper_argmax", d.upper_argmax},
                          {"lower_min", d.lower_min},
                          {"lower_argmin", d.lower_argmin}};
  j["direction"] = {{"reference", d.ref_label}, {"test", d.test_label},
                    {"tested_quantity", "reference minus test"}};
  return j;
}

json to_json(const ConfidenceBand& band) {
  json j;
  j["target"] = std::string(band_target_name(band.target));
  j["method"] = std::string(band_method_name(band.method));
  j["alpha"] = band.alpha;
  j["grid"] = band.grid;
  j["estimate"] = band.estimate;
  j["lower"] = band.lower;
  j["upper"] = band.upper;
  j["sigma"] = band.sigma;
  return j;
}

json to_json(const KMEstimate& km) {
  json j;
  j["n"] = km.n;
  j["event_times"] = km.event_times;
  j["survival"] = km.survival;
  j["greenwood_var"] = km.greenwood_var;
  j["at_risk"] = km.at_risk;
  j["n_events"] = km.n_events;
  j["max_observed"] = km.max_observed;
  return j;
}

json to_json(const CoverageStudy& study) {
  json rows = json::array();
  for (const auto& r : study.rows) {
    rows.push_back({{"t", r.t},
                    {"target", std::string(band_target_name(r.target))},
                    {"method", std::string(band_method_name(r.method))},
                    {"alpha", r.alpha},
                    {"truth", r.truth},
                    {"cover_both", r.cover_both},
                    {"cover_lower", r.cover_lower},
                    {"cover_upper", r.cover_upper},
                    {"mc_se", r.mc_se},
                    {"n_sim", r.n_sim}});
  }
  return json{{"study", "coverage"},
              {"scenario", study.scenario},
              {"n1", study.n1},
              {"n2", study.n2},
              {"n_sim", study.n_sim},
              {"n_boot", study.n_boot},
              {"seed", study.seed},
              {"redraws", study.redraws},
              {"rows", rows}};
}

json to_json(const RejectionStudy& study) {
  json rows = json::array();
  for (const auto& r : study.rows) {
    json spec = {{"kind", std::string(test_kind_name(r.spec.kind))},
                 {"target", std::string(band_target_name(r.spec.target))},
                 {"margin", r.spec.margin},
                 {"ref_group", r.spec.ref_group}};
    if (r.spec.interval)
      spec["interval"] = {r.spec.interval->first, r.spec.interval->second};
    else
      spec["t0"] = r.spec.t0;
    rows.push_back({{"spec", spec},
                    {"truth", r.truth},
                    {"regime", r.under_null ? "type_I_error" : "power"},
                    {"rate", r.rate},
                    {"mc_se", r.mc_se},
                    {"n_sim", r.n_sim}});
  }
  return json{{"study", "rejection"},
              {"scenario", study.scenario},
              {"n1", study.n1},
              {"n2", study.n2},
              {"n_sim", study.n_sim},
              {"n_boot", study.n_boot},
              {"alpha", study.alpha},
              {"method", std::string(band_method_name(study.method))},
              {"seed", study.seed},
              {"redraws", study.redraws},
              {"rows", rows}};
}

std::string band_csv(const ConfidenceBand& band) {
  std::ostringstream out;
  out << "t,estimate,lower,upper,sigma\n";
  for (std::size_t i = 0; i < band.grid.size(); ++i)
    out << format_double(band.grid[i]) << ',' << format_double(band.estimate[i]) << ','
        << format_double(band.lower[i]) << ',' << format_double(band.upper[i]) << ','
        << format_double(band.sigma[i]) << '\n';
  return out.str();
}

std::string km_csv(const KMEstimate& km, const std::string& label, bool with_header) {
  std::ostringstream out;
  if (with_header) out << "group,time,survival,greenwood_var,at_risk,n_events\n";
  for (std::size_t i = 0; i < km.event_times.size(); ++i)
    out << label << ',' << format_double(km.event_times[i]) << ','
        << format_double(km.survival[i]) << ',' << format_double(km.greenwood_var[i])
        << ',' << km.at_risk[i] << ',' << km.n_events[i] << '\n';
  return out.str();
}

std::string coverage_csv(const CoverageStudy& study) {
  std::ostringstream out;
  out << "scenario,n1,n2,target,method,alpha,t,truth,cover_both,cover_lower,"
         "cover_upper,mc_se,n_sim,redraws\n";
  for (const auto& r : study.rows)
    out << study.scenario << ',' << study.n1 << ',' << study.n2 << ','
        << band_target_name(r.target) << ',' << band_method_name(r.method) << ','
        << format_double(r.alpha) << ',' << format_double(r.t) << ','
        << format_double(r.truth) << ',' << format_double(r.cover_both) << ','
        << format_double(r.cover_lower) << ',' << format_double(r.cover_upper) << ','
        << format_double(r.mc_se) << ',' << r.n_sim << ',' << study.redraws << '\n';
  return out.str();
}

std::string rejection_csv(const RejectionStudy& study) {
  std::ostringstream out;
  out << "scenario,n1,n2,kind,target,method,t0,t1,t2,margin,ref_group,truth,regime,"
         "rate,mc_se,n_sim,redraws\n";
  for (const auto& r : study.rows) {
    out << study.scenario << ',' << study.n1 << ',' << study.n2 << ','
        << test_kind_name(r.spec.kind) << ',' << band_target_name(r.spec.target) << ','
        << band_method_name(study.method) << ',';
    if (r.spec.interval)
      out << ',' << format_double(r.spec.interval->first) << ','
          << format_double(r.spec.interval->second) << ',';
    else
      out << format_double(r.spec.t0) << ",,,";
    out << format_double(r.spec.margin) << ',' << r.spec.ref_group << ','
        << format_double(r.truth) << ',' << (r.under_null ? "type_I_error" : "power")
        << ',' << format_double(r.rate) << ',' << format_double(r.mc_se) << ','
        << r.n_sim << ',' << study.redraws << '\n';
  }
  return out.str();
}

std::string rejection_table_csv(const RejectionStudy& study) {
  // Pivot: rows keyed by (t0, truth), one column per margin, cells
  // "equivalence (noninferiority)".
  std::vector<double> margins;
  for (const auto& r : study.rows)
    if (std::find(margins.begin(), margins.end(), r.spec.margin) == margins.end())
      margins.push_back(r.spec.margin);
  std::sort(margins.begin(), margins.end());

  struct Key {
    double t0, truth;
    bool operator<(const Key& o) const {
      return t0 != o.t0 ? t0 < o.t0 : truth < o.truth;
    }
  };
  std::map<Key, std::map<double, std::pair<std::string, std::string>>> cells;
  for (const auto& r : study.rows) {
    if (r.spec.interval) continue;  // point cells only in the pivot
    Key key{r.spec.t0, r.truth};
    auto& cell = cells[key][r.spec.margin];
    if (r.spec.kind == TestKind::equivalence)
      cell.first = format_double(r.rate);
    else
      cell.second = format_double(r.rate);
  }

  std::ostringstream out;
  out << "n1,n2,t0,true_diff";
  for (double m : margins) out << ",delta=" << format_double(m);
  out << '\n';
  for (const auto& [key, bymargin] : cells) {
    out << study.n1 << ',' << study.n2 << ',' << format_double(key.t0) << ','
        << format_double(key.truth);
    for (double m : margins) {
      out << ',';
      auto it = bymargin.find(m);
      if (it == bymargin.end()) {
        out << '-';
      } else {
        const auto& [eq, ni] = it->second;
        if (!eq.empty() && !ni.empty())
          out << eq << " (" << ni << ")";
        else
          out << (eq.empty() ? ni : eq);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace survband
