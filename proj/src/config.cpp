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

#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "errors.hpp"

namespace qb {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "family",       "q",         "alpha",     "eps0",           "lambda0",
    "j",            "geodesic_lambda",        "n_values",       "realizations",
    "master_seed",  "target_fraction",        "quantities",     "workers",
    "dense_cap",    "out_dir",   "format",    "tolerance",
};

int env_int(const char* name, int fallback) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return fallback;
    try {
        return std::stoi(v);
    } catch (const std::exception&) {
        throw ConfigError(std::string(name) + " is not an integer: " + v);
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad type for config key: " + key);
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid json: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key: " + key);
    }

    RunConfig cfg;
    try {
        cfg.plan.spec_template.family =
            family_from_name(get_or<std::string>(j, "family", "disordered_quadratic"));
    } catch (const InvalidArgumentError& e) {
        throw ConfigError(e.what());
    }
    cfg.plan.spec_template.q = get_or<int>(j, "q", 2);
    cfg.plan.spec_template.alpha = get_or<double>(j, "alpha", 0.0);
    cfg.plan.spec_template.eps0 = get_or<double>(j, "eps0", 1.0);
    cfg.plan.spec_template.lambda0 = get_or<double>(j, "lambda0", 1.0);
    cfg.plan.spec_template.j = get_or<double>(j, "j", 1.0);
    cfg.plan.spec_template.geodesic_lambda = get_or<double>(j, "geodesic_lambda", 1.0);
    cfg.plan.n_values = get_or<std::vector<int>>(j, "n_values", {2, 3, 4});
    cfg.plan.realizations = get_or<int>(j, "realizations", 1);
    cfg.plan.master_seed = get_or<std::uint64_t>(j, "master_seed", 0);
    cfg.plan.target_fraction = get_or<double>(j, "target_fraction", 1.0);
    cfg.plan.quantities = get_or<std::vector<std::string>>(j, "quantities", {});
    cfg.plan.workers = get_or<int>(j, "workers", 1);
    cfg.plan.dense_cap = get_or<int>(j, "dense_cap", kDenseCapDefault);
    cfg.out_dir = get_or<std::string>(j, "out_dir", "out");
    cfg.format = get_or<std::string>(j, "format", "csv");
    cfg.tolerance = get_or<double>(j, "tolerance", kDefaultExponentTolerance);

    cfg.plan.workers = env_int("QB_WORKERS", cfg.plan.workers);
    cfg.plan.dense_cap = env_int("QB_DENSE_CAP", cfg.plan.dense_cap);

    if (cfg.format != "csv" && cfg.format != "jsonl") {
        throw ConfigError("format must be csv or jsonl");
    }
    if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    try {
        validate(cfg.plan);
        cfg.plan.spec_template.n_cells = cfg.plan.n_values.front();
        validate(cfg.plan.spec_template);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& cfg) {
    const json j{{"family", family_name(cfg.plan.spec_template.family)},
                 {"q", cfg.plan.spec_template.q},
                 {"alpha", cfg.plan.spec_template.alpha},
                 {"eps0", cfg.plan.spec_template.eps0},
                 {"lambda0", cfg.plan.spec_template.lambda0},
                 {"j", cfg.plan.spec_template.j},
                 {"geodesic_lambda", cfg.plan.spec_template.geodesic_lambda},
                 {"n_values", cfg.plan.n_values},
                 {"realizations", cfg.plan.realizations},
                 {"master_seed", cfg.plan.master_seed},
                 {"target_fraction", cfg.plan.target_fraction},
                 {"quantities", cfg.plan.quantities},
                 {"workers", cfg.plan.workers},
                 {"dense_cap", cfg.plan.dense_cap},
                 {"out_dir", cfg.out_dir},
                 {"format", cfg.format},
                 {"tolerance", cfg.tolerance}};
    return j.dump(2);
}

}  // namespace qb
