#pragma once

#include <optional>
#include <string>
#include <utility>

#include "survband/types.hpp"

namespace survband {

// Schema violation in an input file; message carries 1-based line numbers.
class dataset_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Dataset {
  SurvivalSample reference, test;
  // Set when the reference group was picked by the lexicographic default
  // rather than an explicit request.
  bool reference_defaulted = false;
};

// Delimited text with a header; required columns time (positive real),
// status (0/1) and group (exactly two distinct values), optional id, other
// columns ignored. Delimiter is auto-detected among ',', ';', '\t'.
// Invalid rows are rejected with their line numbers, never dropped.
Dataset parse_dataset(const std::string& path,
                      const std::optional<std::string>& reference_label = {});

Dataset parse_dataset_text(const std::string& text,
                           const std::optional<std::string>& reference_label = {});

// FNV-1a 64-bit checksum of a file's bytes, hex-encoded; used to pin input
// identity in run manifests.
std::string file_checksum(const std::string& path);

}  // namespace survband
