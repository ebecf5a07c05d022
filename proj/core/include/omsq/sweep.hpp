// Gridded parameter scans over PhysicalParams or EffectiveParams, with the
// bundled figure presets (fig2..fig7) and a long-format result table: one row
// per grid point carrying the resolved parameters, stability, covariance
// diagnostics and squeezing outputs.  Unstable points keep their squeezing
// columns empty; nothing is ever extrapolated into them.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "omsq/params.hpp"

namespace omsq {

enum class AxisScale { linear, log };

struct SweepAxis {
    std::string name;       // swept field (physical mode also accepts "P")
    double min = 0.0;
    double max = 0.0;
    int n_points = 0;
    AxisScale scale = AxisScale::linear;
    // Optional explicit grid; when non-empty it replaces the min/max/n_points
    // grid (used for non-uniform series such as a set of occupations).
    std::vector<double> values;

    std::vector<double> grid() const;
};

struct SweepSpec {
    std::string name = "sweep";
    std::variant<PhysicalParams, EffectiveParams> base;
    std::vector<SweepAxis> axes;        // 1 or 2
    std::vector<std::string> outputs;   // empty -> all available columns
    double oracle_fraction = 0.01;      // stable points re-checked by the ODE
                                        // route (at least 3)
    std::uint64_t seed = 0;

    bool physical_mode() const {
        return std::holds_alternative<PhysicalParams>(base);
    }
};

struct SweepRow {
    std::vector<double> axis_values;
    std::vector<std::optional<double>> outputs;
    bool stable = false;
    bool converged = true;
    bool oracle_checked = false;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<std::string> output_names;
    std::vector<SweepRow> rows;
    // provenance
    std::string spec_digest;  // git-style content hash of the rendered spec
    std::uint64_t seed = 0;
    std::string base_dump;    // full base parameters, key = value lines

    std::string to_csv() const;
    std::string meta_text() const;
};

struct SweepRunOptions {
    int threads = 1;
};

// Full pipeline per grid point; a sampled fraction of stable points is
// re-verified against the ODE covariance route and any disagreement beyond
// 1e-5 (entrywise, scale-floored) aborts with OracleMismatch.  Identical
// spec + seed give a byte-identical table, independent of thread count.
SweepResult run(const SweepSpec& spec, const SweepRunOptions& opts = {});

// Bundled figure presets.  Base names fig2..fig7 give the canonical panel;
// panel-qualified names (fig3a..fig3c, fig4a..fig4d, fig5a..fig5f,
// fig7a..fig7f) select variants.  Throws UnknownPreset.
SweepSpec preset(const std::string& name);

// All panels that make up one figure, in order.
std::vector<SweepSpec> figure_panels(const std::string& figure);

// Names all figures known to preset()/figure_panels().
std::vector<std::string> preset_names();

// Serialize a spec to the config text format (also the hashed provenance).
std::string render_spec(const SweepSpec& spec);

} // namespace omsq
