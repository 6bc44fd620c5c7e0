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

#include "qbattery.h"

#include <optional>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "errors.hpp"

struct qb_run {
    std::optional<std::string> config_path;
    std::optional<std::string> config_json;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> dense_cap;
    std::string last_error;
    std::string last_output;
};

namespace {

int status_of(const qb::Error& e) {
    switch (e.code()) {
        case qb::ErrorCode::config:
            return QB_ERR_CONFIG;
        case qb::ErrorCode::verify:
            return QB_ERR_VERIFY;
        case qb::ErrorCode::sweep:
            return QB_ERR_SWEEP;
        default:
            return QB_ERR_INVALID_ARGUMENT;
    }
}

int guard_string(qb_run* run, const char* value, std::optional<std::string>& slot) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    if (value == nullptr) {
        run->last_error = "null argument";
        return QB_ERR_INVALID_ARGUMENT;
    }
    slot = value;
    run->last_error.clear();
    return QB_OK;
}

}  // namespace

extern "C" {

const char* qb_version(void) { return "0.1.0"; }

qb_run* qb_run_create(void) { return new (std::nothrow) qb_run; }

void qb_run_destroy(qb_run* run) { delete run; }

const char* qb_last_error(const qb_run* run) {
    return run != nullptr ? run->last_error.c_str() : "null handle";
}

const char* qb_last_output(const qb_run* run) {
    return run != nullptr ? run->last_output.c_str() : "";
}

int qb_set_config_file(qb_run* run, const char* path) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    const int rc = guard_string(run, path, run->config_path);
    if (rc == QB_OK) run->config_json.reset();
    return rc;
}

int qb_set_config_json(qb_run* run, const char* json_text) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    const int rc = guard_string(run, json_text, run->config_json);
    if (rc == QB_OK) run->config_path.reset();
    return rc;
}

int qb_set_out_dir(qb_run* run, const char* dir) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    return guard_string(run, dir, run->out_dir);
}

int qb_set_format(qb_run* run, const char* format) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    const std::string f = format != nullptr ? format : "";
    if (f != "csv" && f != "jsonl") {
        run->last_error = "format must be csv or jsonl";
        return QB_ERR_CONFIG;
    }
    run->format = f;
    run->last_error.clear();
    return QB_OK;
}

int qb_set_seed(qb_run* run, uint64_t seed) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    run->seed = seed;
    run->last_error.clear();
    return QB_OK;
}

int qb_set_workers(qb_run* run, int workers) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    if (workers < 1) {
        run->last_error = "workers must be >= 1";
        return QB_ERR_CONFIG;
    }
    run->workers = workers;
    run->last_error.clear();
    return QB_OK;
}

int qb_set_dense_cap(qb_run* run, int cap) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    if (cap < 1) {
        run->last_error = "dense cap must be >= 1";
        return QB_ERR_CONFIG;
    }
    run->dense_cap = cap;
    run->last_error.clear();
    return QB_OK;
}

int qb_exec(qb_run* run, const char* command) {
    if (run == nullptr) return QB_ERR_INVALID_ARGUMENT;
    run->last_error.clear();
    run->last_output.clear();
    if (command == nullptr) {
        run->last_error = "null command";
        return QB_ERR_INVALID_ARGUMENT;
    }
    try {
        qb::RunConfig cfg;
        if (run->config_path) {
            cfg = qb::load_config(*run->config_path);
        } else {
            cfg = qb::parse_config(run->config_json.value_or("{}"));
        }
        if (run->out_dir) cfg.out_dir = *run->out_dir;
        if (run->format) cfg.format = *run->format;
        if (run->seed) cfg.plan.master_seed = *run->seed;
        if (run->workers) cfg.plan.workers = *run->workers;
        if (run->dense_cap) cfg.plan.dense_cap = *run->dense_cap;
        try {
            qb::validate(cfg.plan);
        } catch (const qb::Error& e) {
            throw qb::ConfigError(e.what());
        }

        std::ostringstream log;
        const int rc = qb::run_command(command, cfg, log);
        run->last_output = log.str();
        if (rc != 0) run->last_error = "command reported failure";
        return rc;
    } catch (const qb::Error& e) {
        run->last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        run->last_error = e.what();
        return QB_ERR_INVALID_ARGUMENT;
    }
}

}  // extern "C"
