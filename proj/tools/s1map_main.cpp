// Command line front end: analyze circle-valued maps, emit interpolating
// sections, lift target diffeomorphisms, export compatible fields, report
// orbit structure, and run the property suite.
//
// Exit codes: 0 success, 1 input error, 2 numerical failure, 3 property
// suite failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "s1map/circle_map.hpp"
#include "s1map/config.hpp"
#include "s1map/diffeo.hpp"
#include "s1map/errors.hpp"
#include "s1map/fields.hpp"
#include "s1map/io.hpp"
#include "s1map/orbit.hpp"
#include "s1map/selfcheck.hpp"

namespace {

using namespace s1map;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitSelfcheck = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open input file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  out << text;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    spill(*path, text);
  } else {
    std::cout << text << "\n";
  }
}

struct CommonOpts {
  std::string input;
  std::optional<std::string> output;
  int resolution = 2048;
  std::optional<double> tol;
  std::uint64_t seed = 20260810ULL;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input) {
  if (needs_input) {
    cmd->add_option("--input", opts.input, "input JSON file")->required();
  }
  cmd->add_option("--output", opts.output, "output path (stdout if omitted)");
  cmd->add_option("--resolution", opts.resolution, "sample grid resolution")
      ->check(CLI::Range(64, 1 << 22));
  cmd->add_option("--tol", opts.tol, "tolerance override");
  cmd->add_option("--seed", opts.seed, "seed for randomized checks");
}

int cmd_analyze(const CommonOpts& opts) {
  CircleMap f = map_from_json(slurp(opts.input));
  MapAnalysis analysis = analyze(f);
  std::optional<SymmetryInfo> symmetry;
  if (analysis.n() >= 1) {
    NormalizedMap normalized = normalize_exceptional(f, analysis);
    symmetry = symmetry_group(normalized.map, normalized.analysis);
  }
  emit(opts.output, analysis_report_json(analysis, symmetry));
  return kExitOk;
}

int cmd_section(const CommonOpts& opts) {
  Configuration target = configuration_from_json(slurp(opts.input));
  CircleDiffeo g = interpolating_diffeo(target);
  int n = static_cast<int>(target.size());
  Configuration image = evaluation_map(g, n);
  double residual = 0.0;
  for (int a = 0; a < n; ++a) {
    residual = std::max(residual, circle_dist(image[a], target[a]));
  }
  std::string header = "{\"configuration\":" + configuration_to_json(target);
  header += ",\"residual\":";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", residual);
  header += buf;
  header += ",\"provenance\":" + g.provenance() + "}";
  if (opts.output) {
    spill(*opts.output + ".json", header);
    spill(*opts.output + ".csv", diffeo_csv(g, opts.resolution));
  } else {
    std::cout << header << "\n";
  }
  return kExitOk;
}

// The target diffeomorphism of a lift request, built against the values of
// the normalized map.
CircleDiffeo lift_target(const std::string& spec, int n) {
  CircleDiffeo r = diffeo_from_json(spec);
  if (std::optional<double> s = contract_amount_from_json(spec)) {
    r = contract_toward_identity(r, *s, n);
  }
  return r;
}

int cmd_lift(const CommonOpts& opts, const std::string& target_path) {
  CircleMap f = map_from_json(slurp(opts.input));
  MapAnalysis analysis = analyze(f);
  CircleMap working = f;
  if (analysis.n() >= 1) {
    NormalizedMap normalized = normalize_exceptional(f, analysis);
    working = normalized.map;
    analysis = normalized.analysis;
  }
  CircleDiffeo r = lift_target(slurp(target_path), std::max(analysis.n(), 1));
  StabilizerElement element =
      stabilizer_section(working, analysis, r, opts.resolution);
  if (opts.tol && element.residual > *opts.tol) {
    throw NumericError("lift residual above requested tolerance");
  }
  if (opts.output) {
    spill(*opts.output + ".json", stabilizer_json(element));
    spill(*opts.output + "_target.csv",
          diffeo_csv(element.target_side, opts.resolution));
    spill(*opts.output + "_lift.csv",
          diffeo_csv(element.domain_side, opts.resolution));
  } else {
    std::cout << stabilizer_json(element) << "\n";
  }
  return kExitOk;
}

int cmd_field(const CommonOpts& opts) {
  CircleMap f = map_from_json(slurp(opts.input));
  MapAnalysis analysis = analyze(f);
  CircleMap working = f;
  if (analysis.n() >= 1) {
    NormalizedMap normalized = normalize_exceptional(f, analysis);
    working = normalized.map;
    analysis = normalized.analysis;
  }
  std::string header = "{\"n\":" + std::to_string(analysis.n());
  try {
    CompatibleField field = global_field(working, analysis);
    header += ",\"global_field\":true,\"level_classes\":[";
    const auto& classes = field.level_classes();
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (i) header += ",";
      header += classes[i] == LevelClass::Attractive ? "\"attractive\""
                                                     : "\"reflective\"";
    }
    header += "]}";
    if (opts.output) {
      spill(*opts.output + ".json", header);
      spill(*opts.output + ".csv", field_csv(field, opts.resolution));
    } else {
      std::cout << header << "\n";
    }
  } catch (const ParityObstruction& e) {
    header += ",\"global_field\":false,\"obstruction\":\"parity\"";
    header += ",\"message\":\"" + std::string(e.what()) + "\"}";
    emit(opts.output ? std::optional<std::string>(*opts.output + ".json")
                     : opts.output,
         header);
  }
  return kExitOk;
}

int cmd_orbit(const CommonOpts& opts) {
  CircleMap f = map_from_json(slurp(opts.input));
  MapAnalysis analysis = analyze(f);
  std::vector<std::pair<int, double>> witnesses;
  StructureReport report;
  if (analysis.n() == 0) {
    report = orbit_report(analysis, std::nullopt);
  } else {
    NormalizedMap normalized = normalize_exceptional(f, analysis);
    SymmetryInfo symmetry = symmetry_group(normalized.map, normalized.analysis);
    report = orbit_report(normalized.analysis, symmetry);
    for (int l : symmetry.successful_shifts) {
      if (l == 0) continue;
      CircleMap g = normalized.map.postcompose(
          CircleDiffeo::rotation(Angle(static_cast<double>(l) / symmetry.n)));
      std::optional<CircleDiffeo> h = right_equivalence(
          normalized.map, normalized.analysis, g, analyze(g));
      if (!h) continue;
      double residual = 0.0;
      for (int i = 0; i < opts.resolution; ++i) {
        Angle x(static_cast<double>(i) / opts.resolution);
        residual =
            std::max(residual, circle_dist(g(x), normalized.map((*h)(x))));
      }
      witnesses.emplace_back(l, residual);
    }
  }
  emit(opts.output, structure_report_json(report, witnesses));
  return kExitOk;
}

int cmd_selfcheck(const CommonOpts& opts) {
  selfcheck::Options options;
  options.seed = opts.seed;
  options.grid = opts.resolution;
  options.tolerance_override = opts.tol;
  std::vector<selfcheck::CriterionResult> results = selfcheck::run_all(options);
  bool all_passed = true;
  for (const auto& r : results) {
    std::cout << selfcheck::format_line(r) << "\n";
    all_passed = all_passed && r.passed;
  }
  if (opts.output) {
    spill(*opts.output, selfcheck::report_json(results, options));
  }
  return all_passed ? kExitOk : kExitSelfcheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circle-valued map toolkit: analysis, sections, lifts, "
               "fields, orbit structure"};
  app.require_subcommand(1);

  CommonOpts analyze_opts, section_opts, lift_opts, field_opts, orbit_opts,
      selfcheck_opts;
  std::string lift_target_path;

  add_common(app.add_subcommand("analyze", "critical data and symmetry of a map"),
             analyze_opts, true);
  add_common(app.add_subcommand("section",
                                "interpolating diffeomorphism of a configuration"),
             section_opts, true);
  CLI::App* lift_cmd = app.add_subcommand(
      "lift", "lift a value-fixing target diffeomorphism to the domain");
  add_common(lift_cmd, lift_opts, true);
  lift_cmd->add_option("--target", lift_target_path,
                       "target diffeomorphism spec JSON")
      ->required();
  add_common(app.add_subcommand("field", "global compatible vector field"),
             field_opts, true);
  add_common(app.add_subcommand("orbit", "orbit structure report"), orbit_opts,
             true);
  add_common(app.add_subcommand("selfcheck", "run the full property suite"),
             selfcheck_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("analyze")) return cmd_analyze(analyze_opts);
    if (app.got_subcommand("section")) return cmd_section(section_opts);
    if (app.got_subcommand("lift")) return cmd_lift(lift_opts, lift_target_path);
    if (app.got_subcommand("field")) return cmd_field(field_opts);
    if (app.got_subcommand("orbit")) return cmd_orbit(orbit_opts);
    if (app.got_subcommand("selfcheck")) return cmd_selfcheck(selfcheck_opts);
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
