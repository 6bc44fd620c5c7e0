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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "charging.hpp"
#include "models.hpp"
#include "scaling.hpp"

namespace qb {

inline constexpr int kRecordSchemaVersion = 1;

// Quantities an aggregate can report per N. "advantage" is the mean of
// per-realization ratios; a ratio-of-means column is emitted alongside it.
extern const std::vector<std::string> kAllQuantities;

struct SweepPlan {
    ModelSpec spec_template;       // n_cells is overridden per sweep point
    std::vector<int> n_values;     // strictly increasing
    int realizations = 1;          // R per N
    std::uint64_t master_seed = 0;
    double target_fraction = 1.0;
    std::vector<std::string> quantities;  // empty selects all
    int workers = 1;
    int dense_cap = kDenseCapDefault;
};

void validate(const SweepPlan& plan);

// One realization, flattened for line-delimited persistence.
struct Record {
    int schema = kRecordSchemaVersion;
    std::string family;
    int q = 2;
    double alpha = 0.0;
    int n = 0;
    int realization = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;
    bool failed = false;
    std::string error;
    double variance = 0.0;
    double gap = 0.0;
    double mu = 0.0;
    double bhatia_slack = 0.0;
    double tau = 0.0;
    double work = 0.0;
    double power = 0.0;
    double length = 0.0;
    double connection = 0.0;
    double lambda2 = 0.0;
    bool has_lambda2 = false;
    double gamma = 0.0;        // tau_parallel / tau, same work fraction
    bool has_gamma = false;
    double sandwich = 0.0;
    bool has_sandwich = false;

    bool operator==(const Record&) const = default;
};

struct AggregateRow {
    int n = 0;
    std::string quantity;
    double mean = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
    int degenerate = 0;
    int failed = 0;
};

struct EnsembleAggregate {
    std::vector<AggregateRow> rows;
};

struct SweepResult {
    std::vector<Record> records;  // index = n_index * R + realization
    EnsembleAggregate aggregate;
    std::map<int, ChargingReport> baselines;  // parallel drive, keyed by N
};

// Counter-based derivation: realization (N, r) is reproducible in isolation.
std::uint64_t derive_seed(std::uint64_t master_seed, int n, int realization);

// Builds every (N, r) realization, runs the charging pipeline, aggregates
// deterministically by realization index. Throws SweepError when more than
// 10% of realizations fail (degenerate draws are not failures).
SweepResult run_sweep(const SweepPlan& plan);

// Deterministic aggregation used by run_sweep; exposed for reloaded records.
EnsembleAggregate aggregate_records(const std::vector<Record>& records,
                                    const std::vector<std::string>& quantities);

// format is "jsonl" or "csv"; load detects the format from the content.
void persist_records(const std::vector<Record>& records, const std::string& path,
                     const std::string& format);
std::vector<Record> load_records(const std::string& path);

void persist_aggregate(const EnsembleAggregate& agg, const std::string& path,
                       const std::string& format);

// (N, mean, stderr) rows for one quantity, ready for fit_power_law. Signs are
// folded out (lambda2 means are negative); zero means are skipped.
std::vector<ScalingPoint> aggregate_points(const EnsembleAggregate& agg,
                                           const std::string& quantity);

}  // namespace qb
