#include "s1map/io.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "internal/fmt.hpp"

namespace s1map {

namespace {

using nlohmann::json;
using internal::append_g17;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument("malformed JSON input");
  }
  return j;
}

void append_array(std::string& out, const std::vector<double>& v) {
  out += "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    append_g17(out, v[i]);
  }
  out += "]";
}

CircleDiffeo diffeo_from_spec(const json& j) {
  if (j.contains("compose")) {
    const json& parts = j.at("compose");
    if (!parts.is_array() || parts.empty()) {
      throw std::invalid_argument("diffeo spec: compose needs a nonempty array");
    }
    CircleDiffeo g = diffeo_from_spec(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
      g = CircleDiffeo::compose(g, diffeo_from_spec(parts[i]));
    }
    return g;
  }
  if (j.contains("rotation")) {
    return CircleDiffeo::rotation(Angle(j.at("rotation").get<double>()));
  }
  if (j.contains("knots")) {
    std::vector<double> targets = j.at("knots").get<std::vector<double>>();
    int n = static_cast<int>(targets.size()) + 1;
    return CircleDiffeo::monotone_lift(SimplexPoint(std::move(targets)), n);
  }
  throw std::invalid_argument(
      "diffeo spec: expected rotation, knots, or compose");
}

}  // namespace

CircleMap map_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("degree")) {
    throw std::invalid_argument("map spec: object with a degree field required");
  }
  FourierData data;
  try {
    data.degree = j.at("degree").get<int>();
    data.constant = j.value("constant", 0.0);
    data.cos_coeffs = j.value("cos", std::vector<double>{});
    data.sin_coeffs = j.value("sin", std::vector<double>{});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("map spec: ") + e.what());
  }
  return CircleMap::fourier(std::move(data));
}

std::string map_to_json(const CircleMap& f) {
  const FourierData* data = f.fourier_data();
  if (!data) {
    throw std::invalid_argument("map_to_json: not a Fourier map");
  }
  std::string out = "{\"degree\":" + std::to_string(data->degree);
  out += ",\"constant\":";
  append_g17(out, data->constant);
  out += ",\"cos\":";
  append_array(out, data->cos_coeffs);
  out += ",\"sin\":";
  append_array(out, data->sin_coeffs);
  out += "}";
  return out;
}

Configuration configuration_from_json(const std::string& text) {
  json j = parse(text);
  if (j.is_object() && j.contains("configuration")) j = j.at("configuration");
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("configuration: nonempty array of turns required");
  }
  std::vector<Angle> pts;
  pts.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number()) {
      throw std::invalid_argument("configuration: entries must be numbers");
    }
    pts.push_back(Angle(v.get<double>()));
  }
  return Configuration(std::move(pts));
}

std::string configuration_to_json(const Configuration& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    append_g17(out, c[i].turns());
  }
  out += "]";
  return out;
}

CircleDiffeo diffeo_from_json(const std::string& text) {
  return diffeo_from_spec(parse(text));
}

std::optional<double> contract_amount_from_json(const std::string& text) {
  json j = parse(text);
  if (j.is_object() && j.contains("contract")) {
    return j.at("contract").get<double>();
  }
  return std::nullopt;
}

std::string analysis_report_json(const MapAnalysis& analysis,
                                 const std::optional<SymmetryInfo>& symmetry) {
  std::string out = "{\"degree\":" + std::to_string(analysis.degree);
  out += ",\"morse\":";
  out += analysis.morse ? "true" : "false";
  out += ",\"n\":" + std::to_string(analysis.n());
  out += ",\"critical_points\":[";
  for (std::size_t i = 0; i < analysis.critical_points.size(); ++i) {
    const CriticalPoint& cp = analysis.critical_points[i];
    if (i) out += ",";
    out += "{\"t\":";
    append_g17(out, cp.point.turns());
    out += ",\"second_derivative\":";
    append_g17(out, cp.second_derivative);
    out += ",\"kind\":\"";
    out += cp.second_derivative < 0.0 ? "max" : "min";
    out += "\"}";
  }
  out += "],\"exceptional_values\":[";
  for (int a = 0; a < analysis.n(); ++a) {
    if (a) out += ",";
    append_g17(out, analysis.exceptional_values[a].turns());
  }
  out += "],\"levels\":[";
  for (int a = 0; a < analysis.n(); ++a) {
    if (a) out += ",";
    out += "[";
    for (std::size_t i = 0; i < analysis.levels[a].size(); ++i) {
      const LevelPoint& lp = analysis.levels[a][i];
      if (i) out += ",";
      out += "{\"t\":";
      append_g17(out, lp.point.turns());
      out += ",\"critical\":";
      out += lp.critical ? "true" : "false";
      out += "}";
    }
    out += "]";
  }
  out += "]";
  if (symmetry) {
    out += ",\"k\":" + std::to_string(symmetry->k);
    out += ",\"d\":" + std::to_string(symmetry->d);
    out += ",\"generator_shift\":" + std::to_string(symmetry->generator_shift);
    out += ",\"successful_shifts\":[";
    for (std::size_t i = 0; i < symmetry->successful_shifts.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(symmetry->successful_shifts[i]);
    }
    out += "]";
  }
  out += "}";
  return out;
}

std::string structure_report_json(
    const StructureReport& report,
    const std::vector<std::pair<int, double>>& witness_residuals) {
  std::string out = "{\"n\":" + std::to_string(report.n);
  out += ",\"k\":" + std::to_string(report.k);
  out += ",\"d\":" + std::to_string(report.d);
  out += ",\"twist\":\"";
  out += report.twist == TwistType::Twisted ? "twisted" : "trivial";
  out += "\",\"product_form\":\"" + report.product_form + "\"";
  out += ",\"k_is_lower_bound\":";
  out += report.k_is_lower_bound ? "true" : "false";
  out += ",\"note\":\"" + report.note + "\"";
  out += ",\"witnesses\":[";
  for (std::size_t i = 0; i < witness_residuals.size(); ++i) {
    if (i) out += ",";
    out += "{\"shift\":" + std::to_string(witness_residuals[i].first);
    out += ",\"residual\":";
    append_g17(out, witness_residuals[i].second);
    out += "}";
  }
  out += "]}";
  return out;
}

std::string stabilizer_json(const StabilizerElement& element) {
  std::string out = "{\"residual\":";
  append_g17(out, element.residual);
  out += ",\"domain_side\":" + element.domain_side.provenance();
  out += ",\"target_side\":" + element.target_side.provenance();
  out += "}";
  return out;
}

std::string diffeo_csv(const CircleDiffeo& g, int resolution) {
  std::string out = "t,L,dL\n";
  for (const DiffeoSample& row : sample_table(g, resolution)) {
    append_g17(out, row.t);
    out += ",";
    append_g17(out, row.value);
    out += ",";
    append_g17(out, row.deriv);
    out += "\n";
  }
  return out;
}

std::string field_csv(const CompatibleField& field, int resolution) {
  std::string out = "x,V,dfV,patch,blend\n";
  for (int i = 0; i < resolution; ++i) {
    Angle x(static_cast<double>(i) / resolution);
    append_g17(out, x.turns());
    out += ",";
    append_g17(out, field(x));
    out += ",";
    append_g17(out, field.df(x));
    out += ",";
    out += std::to_string(field.patch(x));
    out += ",";
    append_g17(out, field.blend_weight(x));
    out += "\n";
  }
  return out;
}

}  // namespace s1map
