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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "config.hpp"
#include "ensemble.hpp"

using namespace qb;

namespace {

SweepPlan small_plan() {
    SweepPlan plan;
    plan.spec_template.family = Family::disordered_quadratic;
    plan.n_values = {2, 3};
    plan.realizations = 4;
    plan.master_seed = 11;
    return plan;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("derive_seed determinism and collision scan") {
    CHECK(derive_seed(1, 4, 7) == derive_seed(1, 4, 7));
    CHECK(derive_seed(1, 4, 7) != derive_seed(1, 4, 8));
    CHECK(derive_seed(1, 4, 7) != derive_seed(2, 4, 7));

    std::unordered_set<std::uint64_t> seen;
    for (int n = 1; n <= 100; ++n) {
        for (int r = 0; r < 10000; ++r) {
            seen.insert(derive_seed(99, n, r));
        }
    }
    CHECK(seen.size() == 1000000);
}

TEST_CASE("derived-seed streams look equidistributed") {
    // Coarse chi-square on 16 buckets of the top nibble.
    int buckets[16] = {0};
    const int draws = 100000;
    for (int r = 0; r < draws; ++r) {
        ++buckets[derive_seed(5, 3, r) >> 60];
    }
    const double expected = draws / 16.0;
    double chi2 = 0.0;
    for (int b = 0; b < 16; ++b) {
        chi2 += (buckets[b] - expected) * (buckets[b] - expected) / expected;
    }
    // 15 degrees of freedom; 50 is far beyond any sane quantile.
    CHECK(chi2 < 50.0);
}

TEST_CASE("plan validation") {
    SweepPlan plan = small_plan();
    CHECK_NOTHROW(validate(plan));

    plan.realizations = 0;
    CHECK_THROWS_AS(validate(plan), ConfigError);

    plan = small_plan();
    plan.n_values = {3, 3};
    CHECK_THROWS_AS(validate(plan), ConfigError);

    plan = small_plan();
    plan.n_values = {2, 20};
    CHECK_THROWS_AS(validate(plan), ConfigError);

    plan = small_plan();
    plan.quantities = {"nonsense"};
    CHECK_THROWS_AS(validate(plan), ConfigError);
}

TEST_CASE("run_sweep determinism and worker independence") {
    SweepPlan plan = small_plan();
    const SweepResult a = run_sweep(plan);
    const SweepResult b = run_sweep(plan);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.records == b.records);

    plan.workers = 4;
    const SweepResult c = run_sweep(plan);
    CHECK(a.records == c.records);
}

TEST_CASE("single-realization aggregate equals the record") {
    SweepPlan plan = small_plan();
    plan.n_values = {3};
    plan.realizations = 1;
    plan.quantities = {"variance"};
    const SweepResult result = run_sweep(plan);
    REQUIRE(result.records.size() == 1);
    REQUIRE(result.aggregate.rows.size() == 1);
    CHECK(result.aggregate.rows[0].mean == doctest::Approx(result.records[0].variance));
    CHECK(result.aggregate.rows[0].samples == 1);
    CHECK(result.aggregate.rows[0].stderr_ == doctest::Approx(0.0));
}

TEST_CASE("degenerate draws do not abort a sweep") {
    SweepPlan plan;
    plan.spec_template.family = Family::sparse_syk;
    plan.spec_template.q = 4;
    plan.spec_template.alpha = 0.0;
    plan.n_values = {3};
    plan.realizations = 20;
    plan.master_seed = 3;
    const SweepResult result = run_sweep(plan);
    int degenerate = 0;
    for (const auto& rec : result.records) {
        CHECK_FALSE(rec.failed);
        if (rec.degenerate) ++degenerate;
    }
    CHECK(degenerate > 0);
    for (const auto& row : result.aggregate.rows) {
        if (row.quantity == "advantage") CHECK(row.samples + row.degenerate <= 20);
    }
}

TEST_CASE("record persistence round trips") {
    const SweepResult result = run_sweep(small_plan());

    for (const std::string format : {"jsonl", "csv"}) {
        const auto path = temp_file("qb_records_test." + format);
        persist_records(result.records, path.string(), format);
        const std::vector<Record> loaded = load_records(path.string());
        CHECK(loaded == result.records);
        std::filesystem::remove(path);
    }

    // Empty set round trips too.
    const auto path = temp_file("qb_records_empty.jsonl");
    persist_records({}, path.string(), "jsonl");
    CHECK(load_records(path.string()).empty());
    std::filesystem::remove(path);
}

TEST_CASE("malformed record files raise line-numbered errors") {
    const auto path = temp_file("qb_records_broken.jsonl");
    {
        std::ofstream out(path);
        out << "{\"schema\":1,\"family\":\"onsite\"}\n";
    }
    CHECK_THROWS_AS(load_records(path.string()), ParseError);
    try {
        load_records(path.string());
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    {
        std::ofstream out(path);
        out << "total garbage\n";
    }
    CHECK_THROWS_AS(load_records(path.string()), ParseError);
    {
        std::ofstream out(path);
        out << "{\"schema\":99}\n";
    }
    CHECK_THROWS_AS(load_records(path.string()), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("aggregate points fold signs and skip zeros") {
    EnsembleAggregate agg;
    agg.rows.push_back({3, "lambda2", -0.5, 0.1, 10, 0, 0});
    agg.rows.push_back({4, "lambda2", -0.25, 0.1, 10, 0, 0});
    agg.rows.push_back({5, "lambda2", 0.0, 0.0, 10, 0, 0});
    agg.rows.push_back({5, "variance", 1.0, 0.0, 10, 0, 0});
    const auto pts = aggregate_points(agg, "lambda2");
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].value == doctest::Approx(0.5));
    CHECK(pts[1].n == doctest::Approx(4.0));
}

TEST_CASE("config parsing") {
    const RunConfig cfg = parse_config(R"({
        "family": "sparse_syk", "q": 4, "alpha": 2.0,
        "n_values": [3, 4, 5], "realizations": 7,
        "master_seed": 123, "workers": 2, "format": "jsonl"
    })");
    CHECK(cfg.plan.spec_template.family == Family::sparse_syk);
    CHECK(cfg.plan.spec_template.q == 4);
    CHECK(cfg.plan.realizations == 7);
    CHECK(cfg.plan.master_seed == 123);
    CHECK(cfg.format == "jsonl");

    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"unknown_key": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"format": "xml"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n_values": [4, 3]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"family": "bogus"})"), ConfigError);

    // Round trip through the echo format.
    const RunConfig echoed = parse_config(config_to_json(cfg));
    CHECK(echoed.plan.master_seed == cfg.plan.master_seed);
    CHECK(echoed.plan.n_values == cfg.plan.n_values);
}
