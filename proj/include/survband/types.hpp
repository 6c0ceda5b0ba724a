#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace survband {

// Thrown when a computation fails numerically (singular information,
// exhausted retry budgets, ...). Input/domain problems use
// std::invalid_argument / std::domain_error instead.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg, double condition = 0.0)
      : std::runtime_error(msg), condition_(condition) {}
  // Condition-number estimate of the offending system, 0 if not applicable.
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Parameter vector of a distribution family. Families here have at most two
// parameters, so this is a fixed-capacity value type (hot loops fit millions
// of models; no heap traffic).
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<double> vals) {
    if (vals.size() > 2) throw std::invalid_argument("Params: at most 2 parameters");
    for (double v : vals) v_[n_++] = v;
  }
  static Params of(double a) { return Params{a}; }
  static Params of(double a, double b) { return Params{a, b}; }

  double operator[](std::size_t i) const { return v_[i]; }
  double& operator[](std::size_t i) { return v_[i]; }
  std::size_t size() const { return n_; }

  bool operator==(const Params& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      if (v_[i] != o.v_[i]) return false;
    return true;
  }

 private:
  std::array<double, 2> v_{};
  std::size_t n_ = 0;
};

// One right-censored observation: event=true means the event was observed at
// `time`, event=false means follow-up ended at `time` without an event.
struct Record {
  double time = 0.0;
  bool event = false;
};

// Right-censored observations for one group.
struct SurvivalSample {
  std::vector<Record> records;
  std::string label;

  std::size_t size() const { return records.size(); }
  std::size_t n_events() const {
    std::size_t k = 0;
    for (const auto& r : records) k += r.event ? 1 : 0;
    return k;
  }
  std::size_t n_censored() const { return size() - n_events(); }

  // All times strictly positive, at least one record.
  void validate() const {
    if (records.empty()) throw std::invalid_argument("sample is empty");
    for (const auto& r : records)
      if (!(r.time > 0.0))
        throw std::invalid_argument("sample contains a nonpositive time");
  }

  // Same times with event indicators inverted; the censoring likelihood of a
  // sample equals the event likelihood of its flipped counterpart.
  SurvivalSample flipped() const {
    SurvivalSample out{records, label};
    for (auto& r : out.records) r.event = !r.event;
    return out;
  }
};

}  // namespace survband
