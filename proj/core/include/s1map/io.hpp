#pragma once

#include <optional>
#include <string>

#include "s1map/circle_map.hpp"
#include "s1map/config.hpp"
#include "s1map/diffeo.hpp"
#include "s1map/fields.hpp"
#include "s1map/orbit.hpp"

namespace s1map {

/// Parses {"degree": int, "constant": real, "cos": [...], "sin": [...]}.
/// Throws std::invalid_argument on malformed input.
CircleMap map_from_json(const std::string& text);

/// Serializes a Fourier map back to the spec format (17 significant digits).
std::string map_to_json(const CircleMap& f);

/// Parses a configuration, either a bare array of turns or
/// {"configuration": [...]}.
Configuration configuration_from_json(const std::string& text);
std::string configuration_to_json(const Configuration& c);

/// Parses a diffeomorphism spec: {"rotation": turns} or
/// {"knots": [targets...]} (monotone interpolant on |targets|+1 knots),
/// optionally composed as {"compose": [spec, spec, ...]} applied left to
/// right (outermost first).
CircleDiffeo diffeo_from_json(const std::string& text);

/// Optional "contract" field of a diffeomorphism spec, when present.
std::optional<double> contract_amount_from_json(const std::string& text);

std::string analysis_report_json(const MapAnalysis& analysis,
                                 const std::optional<SymmetryInfo>& symmetry);

std::string structure_report_json(
    const StructureReport& report,
    const std::vector<std::pair<int, double>>& witness_residuals);

std::string stabilizer_json(const StabilizerElement& element);

/// CSV sample table "t,L,dL" of the lift and its derivative.
std::string diffeo_csv(const CircleDiffeo& g, int resolution);

/// CSV table "x,V,dfV,patch,blend" of a compatible field.
std::string field_csv(const CompatibleField& field, int resolution);

}  // namespace s1map
