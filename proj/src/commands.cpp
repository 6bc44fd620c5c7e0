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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "charging.hpp"
#include "errors.hpp"
#include "states.hpp"
#include "verify.hpp"

namespace qb {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& cfg, const std::string& stem) {
    return (fs::path(cfg.out_dir) / (stem + "." + cfg.format)).string();
}

void echo_config(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "config.json", std::ios::trunc);
    if (!out) throw ConfigError("cannot write config echo into " + cfg.out_dir);
    out << config_to_json(cfg) << '\n';
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Minimal row writer shared by the table emitters: csv gets one header plus
// comma rows, jsonl one object per row.
class TableWriter {
  public:
    TableWriter(const std::string& path, const std::string& format,
                const std::vector<std::string>& columns)
        : format_(format), columns_(columns), out_(path, std::ios::trunc) {
        if (!out_) throw InvalidArgumentError("cannot open for writing: " + path);
        if (format_ == "csv") {
            for (std::size_t i = 0; i < columns_.size(); ++i) {
                out_ << (i ? "," : "") << columns_[i];
            }
            out_ << '\n';
        }
    }

    void row(const std::vector<json>& values) {
        if (values.size() != columns_.size()) {
            throw InvalidArgumentError("row width does not match header");
        }
        if (format_ == "csv") {
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) out_ << ',';
                const json& v = values[i];
                if (v.is_number_float()) {
                    out_ << fmt_double(v.get<double>());
                } else if (v.is_string()) {
                    out_ << v.get<std::string>();
                } else {
                    out_ << v.dump();
                }
            }
            out_ << '\n';
        } else {
            json obj;
            for (std::size_t i = 0; i < values.size(); ++i) obj[columns_[i]] = values[i];
            out_ << obj.dump() << '\n';
        }
    }

  private:
    std::string format_;
    std::vector<std::string> columns_;
    std::ofstream out_;
};

struct FitRow {
    std::string quantity;
    ScalingFit fit;
    Prediction pred;
    bool has_pred = false;
    bool pass = false;
};

ScalingQuantity prediction_quantity(const std::string& name, bool& ok) {
    ok = true;
    if (name == "variance") return ScalingQuantity::variance_h1;
    if (name == "advantage" || name == "advantage_ratio_of_means") {
        return ScalingQuantity::advantage;
    }
    if (name == "connection_count") return ScalingQuantity::connection;
    if (name == "lambda2") return ScalingQuantity::lambda2;
    ok = false;
    return ScalingQuantity::advantage;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
    echo_config(cfg);
    TableWriter table(out_path(cfg, "spectrum"), cfg.format,
                      {"schema", "n", "realization", "seed", "degenerate", "e_min", "e_max",
                       "gap"});
    for (int n : cfg.plan.n_values) {
        ModelSpec spec = cfg.plan.spec_template;
        spec.n_cells = n;
        for (int r = 0; r < cfg.plan.realizations; ++r) {
            const std::uint64_t seed = derive_seed(cfg.plan.master_seed, n, r);
            BuiltModel bm = build_charging_hamiltonian(spec, seed, cfg.plan.dense_cap);
            double e_min = 0.0, e_max = 0.0, gap = 0.0;
            if (!bm.degenerate) {
                if (!bm.has_dense) bm.dense = to_dense(bm.op, cfg.plan.dense_cap);
                const Spectral s = diagonalize(bm.dense);
                e_min = s.evals.minCoeff();
                e_max = s.evals.maxCoeff();
                gap = e_max - e_min;
            }
            table.row({kRecordSchemaVersion, n, r, seed, bm.degenerate, e_min, e_max, gap});
        }
    }
    log << "spectrum table written to " << out_path(cfg, "spectrum") << '\n';
    return 0;
}

namespace {

SweepResult sweep_and_persist(const RunConfig& cfg, std::ostream& log) {
    const SweepResult result = run_sweep(cfg.plan);
    persist_records(result.records, out_path(cfg, "records"), cfg.format);
    persist_aggregate(result.aggregate, out_path(cfg, "aggregate"), cfg.format);
    log << result.records.size() << " records written to " << out_path(cfg, "records")
        << '\n';
    return result;
}

}  // namespace

int cmd_charge(const RunConfig& cfg, std::ostream& log) {
    echo_config(cfg);
    sweep_and_persist(cfg, log);
    return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) { return cmd_charge(cfg, log); }

int cmd_fit(const RunConfig& cfg, std::ostream& log) {
    echo_config(cfg);
    const SweepResult result = sweep_and_persist(cfg, log);

    std::vector<std::string> fitted_quantities;
    for (const auto& row : result.aggregate.rows) {
        if (std::find(fitted_quantities.begin(), fitted_quantities.end(), row.quantity) ==
            fitted_quantities.end()) {
            fitted_quantities.push_back(row.quantity);
        }
    }

    std::vector<FitRow> fits;
    for (const auto& quantity : fitted_quantities) {
        const auto points = aggregate_points(result.aggregate, quantity);
        if (points.size() < 3) continue;

        TableWriter plot(out_path(cfg, "points_" + quantity), cfg.format,
                         {"n", "mean", "stderr"});
        for (const auto& p : points) plot.row({p.n, p.value, p.stderr_});

        FitRow row;
        row.quantity = quantity;
        row.fit = fit_power_law(points);
        bool has_pred = false;
        const ScalingQuantity sq = prediction_quantity(quantity, has_pred);
        if (has_pred) {
            row.pred.quantity = sq;
            row.pred.q = cfg.plan.spec_template.q;
            row.pred.alpha = cfg.plan.spec_template.alpha;
            row.pred.exponent =
                predicted_exponent(sq, row.pred.q, row.pred.alpha);
            row.has_pred = true;
            row.pass = compare(row.fit, row.pred, cfg.tolerance).pass;
        }
        fits.push_back(row);
    }

    // The advantage verdict accepts either averaging convention.
    auto find_fit = [&fits](const std::string& q) -> FitRow* {
        for (auto& f : fits) {
            if (f.quantity == q) return &f;
        }
        return nullptr;
    };
    FitRow* mor = find_fit("advantage");
    FitRow* rom = find_fit("advantage_ratio_of_means");
    if (mor != nullptr && rom != nullptr) {
        const bool either = mor->pass || rom->pass;
        if (mor->pass != rom->pass) {
            log << "advantage conventions disagree: mean-of-ratios "
                << (mor->pass ? "pass" : "fail") << " (" << mor->fit.exponent
                << "), ratio-of-means " << (rom->pass ? "pass" : "fail") << " ("
                << rom->fit.exponent << ")\n";
        }
        mor->pass = either;
        rom->pass = either;
    }

    TableWriter verdicts(out_path(cfg, "verdicts"), cfg.format,
                         {"quantity", "q", "alpha", "fitted", "fitted_stderr", "r_squared",
                          "predicted", "tolerance", "pass"});
    for (const auto& f : fits) {
        verdicts.row({f.quantity, cfg.plan.spec_template.q, cfg.plan.spec_template.alpha,
                      f.fit.exponent, f.fit.exponent_stderr, f.fit.r_squared,
                      f.has_pred ? json(f.pred.exponent) : json(nullptr),
                      f.has_pred ? json(cfg.tolerance) : json(nullptr),
                      f.has_pred ? json(f.pass) : json(nullptr)});
        log << "fit " << f.quantity << ": exponent " << f.fit.exponent << " +- "
            << f.fit.exponent_stderr;
        if (f.has_pred) {
            log << " vs predicted " << f.pred.exponent << " -> "
                << (f.pass ? "pass" : "fail");
        }
        log << '\n';
    }
    log << "verdict table written to " << out_path(cfg, "verdicts") << '\n';
    return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    echo_config(cfg);
    const int n_max = std::min(4, cfg.plan.n_values.back());
    const auto results = run_verification(n_max, cfg.plan.master_seed,
                                          std::min(cfg.plan.realizations, 50));
    TableWriter table(out_path(cfg, "verify"), cfg.format, {"invariant", "pass", "detail"});
    int failures = 0;
    for (const auto& r : results) {
        table.row({r.name, r.pass, r.detail});
        log << (r.pass ? "pass" : "FAIL") << "  " << r.name << "  " << r.detail << '\n';
        if (!r.pass) ++failures;
    }
    if (failures > 0) {
        log << failures << " invariant(s) failed\n";
        return 1;
    }
    log << "all invariants hold\n";
    return 0;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
    if (name == "spectrum") return cmd_spectrum(cfg, log);
    if (name == "charge") return cmd_charge(cfg, log);
    if (name == "sweep") return cmd_sweep(cfg, log);
    if (name == "fit") return cmd_fit(cfg, log);
    if (name == "verify") return cmd_verify(cfg, log);
    throw ConfigError("unknown command: " + name);
}

}  // namespace qb
