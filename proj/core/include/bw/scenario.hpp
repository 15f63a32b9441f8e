#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bw/geometry.hpp"
#include "bw/initial_data.hpp"
#include "bw/sweep.hpp"

namespace bw {

/// A named initial-data setup plus its canonical evaluation diamond.
///
/// initial.kind:
///   "closed_form_example"  the worked-example data, parameter delta;
///   "spline_samples"       cubic splines through "x,phi0,phi1" samples,
///                          from samples_path or carried inline;
///   "builtin_smalldata", "builtin_degenerate"  parameterless closed forms.
struct Scenario {
    std::string name;
    std::string kind = "closed_form_example";
    double delta = 1e-3;
    std::string samples_path;
    std::vector<double> samples_x, samples_phi0, samples_phi1; // inline samples
    double support_radius = 10.0;
    double taper_width = 2.0;
    Diamond diamond{10.0, 10.0, 20.0};
    std::string notes;
};

bool is_builtin_scenario(const std::string& name);
/// "example13", "smalldata", "degenerate"; throws for unknown names.
Scenario builtin_scenario(const std::string& name);

/// Parses and validates a scenario file; error messages name the offending
/// key. Enforces the strict barrier condition sup|phi0| < 1 at parse time.
Scenario parse_scenario(const std::filesystem::path& path);
/// Resolves a CLI argument: builtin name or path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

void write_scenario(const Scenario& sc, const std::filesystem::path& path);
/// Canonical serialization (fixed key order); basis of hashing/round-trip.
std::string scenario_canonical_json(const Scenario& sc);

/// Builds evaluable data; loads/validates sample files for spline scenarios.
InitialData make_initial_data(const Scenario& sc);

SweepPlan parse_sweep_plan(const std::filesystem::path& path);
void write_sweep_plan(const SweepPlan& plan, const std::filesystem::path& path);

/// Reproducibility sidecar: command line, config hash, version, timestamp,
/// and the numeric tolerances in effect. One file per output directory.
void write_run_metadata(const std::filesystem::path& out_dir, const std::string& command_line,
                        const std::string& canonical_config);

} // namespace bw
