#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdsic/link_sim.hpp"

namespace fdsic {

/// Contents of one configuration file: a base trial configuration plus the
/// optional sweep axes and trial count.
struct RunConfig {
    TrialConfig trial;
    std::vector<SweepAxis> axes;
    std::int64_t trials = 200;

    SweepSpec sweep_spec() const { return {trial, axes, trials}; }
};

/// INI-style parser. Sections: [ofdm] [channel] [circuit] [quantizer] [pa]
/// [budget] [dsic] [sweep]. Lines are `key = value`; `#` and `;` start
/// comments; lists are comma separated. Missing keys keep the link-level
/// defaults of `link_preset`. Unknown sections or keys, malformed values and
/// failed validation throw ConfigError with the line number.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config(const std::string& path);

/// Writes every key explicitly; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace fdsic
