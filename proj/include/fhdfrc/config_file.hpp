// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "fhdfrc/config.hpp"
#include "fhdfrc/harness.hpp"

namespace fhdfrc {

/// Contents of a JSON config file with optional "radar", "channel" and "sweep" sections.
/// Missing keys keep their defaults; unknown keys are rejected.
struct FileConfig {
    RadarConfig radar;
    SweepSpec sweep;
};

FileConfig parse_config(const std::string& json_text);
FileConfig load_config(const std::string& path);

}  // namespace fhdfrc
