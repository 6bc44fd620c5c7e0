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

// qb: quantum-battery charging sweeps, fits and verification.
// Talks to the simulation core only through the public C API.

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "qbattery.h"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config, "Path to the JSON run configuration")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "Output directory (overrides the config)");
    cmd->add_option("--seed", opt.seed, "Master seed (overrides the config)")
        ->each([&opt](const std::string&) { opt.seed_set = true; });
    cmd->add_option("--workers", opt.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
}

int execute(const std::string& command, const Options& opt) {
    std::unique_ptr<qb_run, decltype(&qb_run_destroy)> run(qb_run_create(), &qb_run_destroy);
    if (!run) {
        std::cerr << "error: out of memory\n";
        return 3;
    }
    int rc = 0;
    auto apply = [&rc, &run](int status) {
        if (rc == 0 && status != QB_OK) rc = status;
    };
    if (!opt.config.empty()) apply(qb_set_config_file(run.get(), opt.config.c_str()));
    if (!opt.out.empty()) apply(qb_set_out_dir(run.get(), opt.out.c_str()));
    if (!opt.format.empty()) apply(qb_set_format(run.get(), opt.format.c_str()));
    if (opt.seed_set) apply(qb_set_seed(run.get(), opt.seed));
    if (opt.workers > 0) apply(qb_set_workers(run.get(), opt.workers));
    if (rc == 0) rc = qb_exec(run.get(), command.c_str());

    std::cout << qb_last_output(run.get());
    if (rc != QB_OK) {
        std::cerr << "error: " << qb_last_error(run.get()) << '\n';
    }
    // Exit-code contract: 0 ok, 1 verification failure, 2 config error,
    // 3 sweep/pipeline failure. Internal statuses fold into 3.
    if (rc > 3) rc = 3;
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("qb ") + qb_version() +
                 " - quantum-battery charging simulations"};
    app.require_subcommand(1);

    Options opt;
    const char* names[] = {"spectrum", "charge", "sweep", "fit", "verify"};
    const char* descriptions[] = {
        "Per-realization spectral extremes and gaps",
        "Per-realization charging pipeline records",
        "Disorder-ensemble sweep with aggregation",
        "Sweep plus power-law exponent fits and verdicts",
        "Run the invariant battery",
    };
    for (int i = 0; i < 5; ++i) {
        add_common_flags(app.add_subcommand(names[i], descriptions[i]), opt);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Bad flags and missing files are configuration errors (exit 2);
        // --help and --version remain exit 0.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (const auto* sub : app.get_subcommands()) {
        return execute(sub->get_name(), opt);
    }
    return 2;
}
