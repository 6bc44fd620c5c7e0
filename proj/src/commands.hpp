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

#include <ostream>

#include "config.hpp"

namespace qb {

// Each command echoes the config into the output directory, writes its
// tables there, and returns a process exit code: 0 success, 1 verification
// failure, 2 config error, 3 sweep failure. Infrastructure errors are
// thrown as typed qb::Error and mapped by the caller.

int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_charge(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_fit(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace qb
