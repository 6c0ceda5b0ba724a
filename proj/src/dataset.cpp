#include "survband/dataset.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace survband {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == delim) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

char detect_delim(const std::string& header) {
  for (char d : {',', ';', '\t'})
    if (header.find(d) != std::string::npos) return d;
  return ',';
}

}  // namespace

Dataset parse_dataset_text(const std::string& text,
                           const std::optional<std::string>& reference_label) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw dataset_error("dataset is empty");

  const char delim = detect_delim(line);
  auto header = split(line, delim);
  int col_time = -1, col_status = -1, col_group = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = trim(header[i]);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name == "time") col_time = static_cast<int>(i);
    if (name == "status") col_status = static_cast<int>(i);
    if (name == "group") col_group = static_cast<int>(i);
  }
  if (col_time < 0 || col_status < 0 || col_group < 0)
    throw dataset_error("header must contain time, status and group columns");

  struct Row {
    double time;
    bool event;
    std::string group;
  };
  std::vector<Row> rows;
  std::vector<std::string> problems;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(line, delim);
    auto field = [&](int idx) -> std::string {
      return idx < static_cast<int>(fields.size()) ? trim(fields[static_cast<std::size_t>(idx)])
                                                   : std::string();
    };
    std::string ts = field(col_time), ss = field(col_status), gs = field(col_group);
    double t = 0.0;
    std::size_t pos = 0;
    bool ok = true;
    std::string why;
    try {
      t = std::stod(ts, &pos);
      ok = pos == ts.size();
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok || !(t > 0.0)) {
      why = "time must be a positive real";
      ok = false;
    }
    bool ev = false;
    if (ok) {
      if (ss == "0")
        ev = false;
      else if (ss == "1")
        ev = true;
      else {
        why = "status must be 0 or 1";
        ok = false;
      }
    }
    if (ok && gs.empty()) {
      why = "group must be nonempty";
      ok = false;
    }
    if (!ok) {
      problems.push_back("line " + std::to_string(lineno) + ": " + why);
      continue;
    }
    rows.push_back({t, ev, gs});
  }
  if (!problems.empty()) {
    std::string msg = "invalid rows in dataset:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw dataset_error(msg);
  }
  if (rows.empty()) throw dataset_error("dataset has no data rows");

  std::vector<std::string> groups;
  for (const auto& r : rows)
    if (std::find(groups.begin(), groups.end(), r.group) == groups.end())
      groups.push_back(r.group);
  if (groups.size() != 2)
    throw dataset_error("expected exactly two groups, found " +
                        std::to_string(groups.size()));
  std::sort(groups.begin(), groups.end());

  Dataset ds;
  std::string ref = groups[0];
  if (reference_label) {
    if (*reference_label != groups[0] && *reference_label != groups[1])
      throw dataset_error("reference group '" + *reference_label +
                          "' not present in dataset");
    ref = *reference_label;
  } else {
    ds.reference_defaulted = true;
  }
  ds.reference.label = ref;
  ds.test.label = ref == groups[0] ? groups[1] : groups[0];
  for (const auto& r : rows) {
    SurvivalSample& s = r.group == ref ? ds.reference : ds.test;
    s.records.push_back({r.time, r.event});
  }
  return ds;
}

Dataset parse_dataset(const std::string& path,
                      const std::optional<std::string>& reference_label) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dataset_error("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_dataset_text(ss.str(), reference_label);
}

std::string file_checksum(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw dataset_error("cannot open file for checksum: " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (f.read(buf, sizeof buf) || f.gcount() > 0) {
    for (std::streamsize i = 0; i < f.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!f) break;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return std::string(out);
}

}  // namespace survband
