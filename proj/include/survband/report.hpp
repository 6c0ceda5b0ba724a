#pragma once

#include <string>

#include <json.hpp>

#include "survband/bands.hpp"
#include "survband/equivtest.hpp"
#include "survband/inference.hpp"
#include "survband/nonparametric.hpp"
#include "survband/simulation.hpp"

namespace survband {

// Shortest-round-trip decimal rendering; parsing it back yields the same
// double, which keeps CSV outputs byte-deterministic.
std::string format_double(double v);

nlohmann::json to_json(const FitResult& fit);
FitResult fit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TestDecision& d);
nlohmann::json to_json(const ConfidenceBand& band);
nlohmann::json to_json(const KMEstimate& km);
nlohmann::json to_json(const CoverageStudy& study);
nlohmann::json to_json(const RejectionStudy& study);

// CSV renderings. Bands: one row per grid point (t, estimate, lower, upper,
// sigma). Studies: long format, one row per result cell. The rejection table
// variant pivots margins into columns with "equivalence (noninferiority)"
// cells, one row per (t0, true difference).
std::string band_csv(const ConfidenceBand& band);
std::string km_csv(const KMEstimate& km, const std::string& label,
                   bool with_header = true);
std::string coverage_csv(const CoverageStudy& study);
std::string rejection_csv(const RejectionStudy& study);
std::string rejection_table_csv(const RejectionStudy& study);

}  // namespace survband
