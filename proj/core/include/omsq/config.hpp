// Plain-text configuration files: `key = value` lines grouped under
// [physical], [effective] and [sweep] sections.  Keys match the parameter
// field names; a rate key with the `_si` suffix is given in rad/s and is
// divided by omega_m (which then must be provided as omega_m_si).  Unknown
// keys are hard errors, with the offending line number, so a typo can never
// silently fall back to a default.

#pragma once

#include <optional>
#include <string>

#include "omsq/params.hpp"
#include "omsq/sweep.hpp"

namespace omsq {

enum class ConfigMode { physical, effective };

struct Config {
    ConfigMode mode = ConfigMode::effective;
    PhysicalParams physical;
    EffectiveParams effective;
    std::optional<SweepSpec> sweep; // present when a [sweep] section was given
    std::string raw;                // file contents, hashed into provenance
};

Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

} // namespace omsq
