#pragma once

// JSON input/output and the SVG exporter. JSON dumps are canonical: object
// keys sorted, series terms in lexicographic exponent order, rationals as
// decimal strings, so identical runs produce identical bytes.

#include <nlohmann/json.hpp>
#include <string>

#include "scatterdt/correspond.hpp"

namespace scatterdt {

using json = nlohmann::ordered_json;

Quiver quiver_from_json(const json& j);
json quiver_to_json(const Quiver& q);
SymplecticSeed seed_from_json(const json& j);
json seed_to_json(const SymplecticSeed& s);
CompatibilityMap psi_from_json(const json& j);
json psi_to_json(const CompatibilityMap& p);
Preset preset_from_json(const json& j);
json preset_to_json(const Preset& p);

json series_to_json(const TruncatedSeries& s);
json diagram_to_json(const ScatteringDiagram& d);
json dt_record_to_json(const DTRecord& r);
json validation_to_json(const ValidationReport& r);
json verify_report_to_json(const VerifyReport& r);
json curve_class_to_json(const SymplecticSeed& s, const CurveClassRecord& r);
json consistency_to_json(const ConsistencyReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json parse_json_file(const std::string& path);

// Passive 2D render of a rank-2 diagram; label functions up to degree_cutoff.
std::string diagram_to_svg(const ScatteringDiagram& d, int degree_cutoff = 2);

}  // namespace scatterdt
