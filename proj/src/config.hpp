// Copyright 2026 the qbattery authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "ensemble.hpp"

namespace qb {

// A run is fully described by this struct; the CLI echoes it into the
// output directory. JSON keys mirror the field names (see docs/config.md).
struct RunConfig {
    SweepPlan plan;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | jsonl
    double tolerance = kDefaultExponentTolerance;
};

// Parses and validates; unknown keys are rejected. QB_WORKERS and
// QB_DENSE_CAP environment variables override those two fields only.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

std::string config_to_json(const RunConfig& cfg);

}  // namespace qb
