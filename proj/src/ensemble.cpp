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

#include "ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "errors.hpp"
#include "rng.hpp"
#include "states.hpp"

namespace qb {

using nlohmann::json;

const std::vector<std::string> kAllQuantities = {
    "variance", "gap", "advantage", "connection_count", "lambda2", "sandwich_fraction",
};

void validate(const SweepPlan& plan) {
    if (plan.realizations < 1) throw ConfigError("realizations must be >= 1");
    if (plan.n_values.empty()) throw ConfigError("n_values must be non-empty");
    for (std::size_t i = 0; i < plan.n_values.size(); ++i) {
        if (plan.n_values[i] < 1) throw ConfigError("n_values must be positive");
        if (i > 0 && plan.n_values[i] <= plan.n_values[i - 1]) {
            throw ConfigError("n_values must be strictly increasing");
        }
        if (plan.n_values[i] > plan.dense_cap) {
            throw ConfigError("n_values exceed the dense cap");
        }
    }
    if (!(plan.target_fraction > 0.0) || plan.target_fraction > 1.0) {
        throw ConfigError("target_fraction must be in (0, 1]");
    }
    if (plan.workers < 1) throw ConfigError("workers must be >= 1");
    for (const auto& q : plan.quantities) {
        if (std::find(kAllQuantities.begin(), kAllQuantities.end(), q) == kAllQuantities.end()) {
            throw ConfigError("unknown quantity: " + q);
        }
    }
    // The template's n_cells is a placeholder; check it at the smallest
    // requested size so q-vs-N constraints see a real plan point.
    ModelSpec spec = plan.spec_template;
    spec.n_cells = plan.n_values.front();
    try {
        validate(spec);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

std::uint64_t derive_seed(std::uint64_t master_seed, int n, int realization) {
    // Three splitmix rounds over the mixed counter; each round is a bijection
    // of the state, so distinct (master, N, r) stay distinct per round input.
    std::uint64_t s = master_seed;
    splitmix64_step(s);
    s ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(static_cast<unsigned>(n));
    splitmix64_step(s);
    s ^= 0xbf58476d1ce4e5b9ULL * static_cast<std::uint64_t>(static_cast<unsigned>(realization));
    splitmix64_step(s);
    return s;
}

namespace {

Record run_realization(const SweepPlan& plan, int n, int r, const Eigen::MatrixXcd& h0_dense,
                       const Eigen::VectorXcd& psi0, const ChargingReport* baseline) {
    Record rec;
    rec.family = family_name(plan.spec_template.family);
    rec.q = plan.spec_template.q;
    rec.alpha = plan.spec_template.alpha;
    rec.n = n;
    rec.realization = r;
    rec.seed = derive_seed(plan.master_seed, n, r);

    ModelSpec spec = plan.spec_template;
    spec.n_cells = n;
    try {
        BuiltModel bm = build_charging_hamiltonian(spec, rec.seed, plan.dense_cap);
        rec.connection = static_cast<double>(connection_count(bm.realization));
        if (spec.family == Family::simplified_vk) {
            const Eigen::MatrixXd corr = correlation_matrix(psi0, n);
            rec.lambda2 = lambda_n(bm.realization, corr, 2);
            rec.has_lambda2 = true;
        }
        if (bm.degenerate) {
            rec.degenerate = true;
            return rec;
        }
        if (!bm.has_dense) {
            bm.dense = to_dense(bm.op, plan.dense_cap);
            bm.has_dense = true;
        }
        const ChargingReport rep =
            run_charging(h0_dense, bm.dense, psi0, plan.target_fraction);
        rec.variance = rep.variance;
        rec.gap = rep.gap;
        rec.mu = rep.mu;
        rec.bhatia_slack = rep.bhatia_slack;
        rec.tau = rep.tau;
        rec.work = rep.work;
        rec.power = rep.power;
        rec.length = rep.length;
        if (rep.degenerate) {
            rec.degenerate = true;
            return rec;
        }
        if (baseline != nullptr && rep.tau > 0.0) {
            rec.gamma = baseline->tau / rep.tau;
            rec.has_gamma = true;
        }
        if (bm.has_op) {
            rec.sandwich = sandwich_fraction(bm.op, spec.eps0, psi0);
            rec.has_sandwich = true;
        }
    } catch (const DegenerateError&) {
        rec.degenerate = true;
    } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    return rec;
}

struct Stats {
    double mean = 0.0;
    double stderr_ = 0.0;
    int count = 0;
};

Stats stats_of(const std::vector<double>& v) {
    Stats s;
    s.count = static_cast<int>(v.size());
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / s.count;
    if (s.count > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stderr_ = std::sqrt(ss / (s.count - 1) / s.count);
    }
    return s;
}

}  // namespace

EnsembleAggregate aggregate_records(const std::vector<Record>& records,
                                    const std::vector<std::string>& quantities) {
    const std::vector<std::string>& wanted = quantities.empty() ? kAllQuantities : quantities;
    std::vector<int> ns;
    for (const auto& rec : records) {
        if (std::find(ns.begin(), ns.end(), rec.n) == ns.end()) ns.push_back(rec.n);
    }
    std::sort(ns.begin(), ns.end());

    EnsembleAggregate agg;
    for (int n : ns) {
        int degenerate = 0, failed = 0;
        for (const auto& rec : records) {
            if (rec.n != n) continue;
            if (rec.failed) ++failed;
            else if (rec.degenerate) ++degenerate;
        }
        for (const auto& quantity : wanted) {
            std::vector<double> values;
            std::vector<double> taus;  // for the ratio-of-means column
            double tau_parallel = 0.0;
            for (const auto& rec : records) {
                if (rec.n != n || rec.failed) continue;
                if (quantity == "variance") {
                    values.push_back(rec.variance);
                } else if (quantity == "gap") {
                    if (!rec.degenerate) values.push_back(rec.gap);
                } else if (quantity == "advantage") {
                    if (rec.has_gamma && !rec.degenerate) {
                        values.push_back(rec.gamma);
                        taus.push_back(rec.tau);
                        tau_parallel = rec.gamma * rec.tau;
                    }
                } else if (quantity == "connection_count") {
                    values.push_back(rec.connection);
                } else if (quantity == "lambda2") {
                    if (rec.has_lambda2) values.push_back(rec.lambda2);
                } else if (quantity == "sandwich_fraction") {
                    if (rec.has_sandwich) values.push_back(rec.sandwich);
                }
            }
            const Stats s = stats_of(values);
            AggregateRow row;
            row.n = n;
            row.quantity = quantity;
            row.mean = s.mean;
            row.stderr_ = s.stderr_;
            row.samples = s.count;
            row.degenerate = degenerate;
            row.failed = failed;
            agg.rows.push_back(row);

            if (quantity == "advantage" && !taus.empty()) {
                const Stats ts = stats_of(taus);
                AggregateRow rom = row;
                rom.quantity = "advantage_ratio_of_means";
                rom.mean = ts.mean > 0 ? tau_parallel / ts.mean : 0.0;
                rom.stderr_ = ts.mean > 0 ? rom.mean * ts.stderr_ / ts.mean : 0.0;
                agg.rows.push_back(rom);
            }
        }
    }
    return agg;
}

SweepResult run_sweep(const SweepPlan& plan) {
    validate(plan);
    const int R = plan.realizations;
    const bool want_gamma =
        plan.quantities.empty() ||
        std::find(plan.quantities.begin(), plan.quantities.end(), "advantage") !=
            plan.quantities.end();

    SweepResult result;
    std::vector<Eigen::MatrixXcd> h0_dense(plan.n_values.size());
    std::vector<Eigen::VectorXcd> psi0s(plan.n_values.size());
    for (std::size_t ni = 0; ni < plan.n_values.size(); ++ni) {
        const int n = plan.n_values[ni];
        h0_dense[ni] = to_dense(build_h0(n, plan.spec_template.eps0), plan.dense_cap);
        psi0s[ni] = ground_state(n, plan.dense_cap);
        if (want_gamma && plan.spec_template.family != Family::parallel_drive) {
            const Eigen::MatrixXcd drive =
                to_dense(build_parallel_drive(n, plan.spec_template.lambda0), plan.dense_cap);
            result.baselines[n] =
                run_charging(h0_dense[ni], drive, psi0s[ni], plan.target_fraction);
        }
    }

    result.records.resize(plan.n_values.size() * static_cast<std::size_t>(R));
    std::atomic<std::size_t> next{0};
    const std::size_t total = result.records.size();
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            const std::size_t ni = idx / R;
            const int r = static_cast<int>(idx % R);
            const int n = plan.n_values[ni];
            const auto it = result.baselines.find(n);
            const ChargingReport* baseline =
                it != result.baselines.end() ? &it->second : nullptr;
            result.records[idx] =
                run_realization(plan, n, r, h0_dense[ni], psi0s[ni], baseline);
        }
    };
    const int k = std::min<int>(plan.workers, static_cast<int>(total));
    if (k <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(k);
        for (int i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::size_t failed = 0;
    for (const auto& rec : result.records) {
        if (rec.failed) ++failed;
    }
    if (failed * 10 > total) {
        throw SweepError("sweep aborted: " + std::to_string(failed) + " of " +
                         std::to_string(total) + " realizations failed");
    }
    result.aggregate = aggregate_records(result.records, plan.quantities);
    return result;
}

namespace {

json record_to_json(const Record& r) {
    return json{{"schema", r.schema},
                {"family", r.family},
                {"q", r.q},
                {"alpha", r.alpha},
                {"n", r.n},
                {"realization", r.realization},
                {"seed", r.seed},
                {"degenerate", r.degenerate},
                {"failed", r.failed},
                {"error", r.error},
                {"variance", r.variance},
                {"gap", r.gap},
                {"mu", r.mu},
                {"bhatia_slack", r.bhatia_slack},
                {"tau", r.tau},
                {"work", r.work},
                {"power", r.power},
                {"length", r.length},
                {"connection", r.connection},
                {"lambda2", r.lambda2},
                {"has_lambda2", r.has_lambda2},
                {"gamma", r.gamma},
                {"has_gamma", r.has_gamma},
                {"sandwich", r.sandwich},
                {"has_sandwich", r.has_sandwich}};
}

Record record_from_json(const json& j, long line) {
    Record r;
    try {
        r.schema = j.at("schema").get<int>();
        if (r.schema != kRecordSchemaVersion) {
            throw ParseError("unsupported record schema version " + std::to_string(r.schema),
                             line);
        }
        r.family = j.at("family").get<std::string>();
        r.q = j.at("q").get<int>();
        r.alpha = j.at("alpha").get<double>();
        r.n = j.at("n").get<int>();
        r.realization = j.at("realization").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.degenerate = j.at("degenerate").get<bool>();
        r.failed = j.at("failed").get<bool>();
        r.error = j.at("error").get<std::string>();
        r.variance = j.at("variance").get<double>();
        r.gap = j.at("gap").get<double>();
        r.mu = j.at("mu").get<double>();
        r.bhatia_slack = j.at("bhatia_slack").get<double>();
        r.tau = j.at("tau").get<double>();
        r.work = j.at("work").get<double>();
        r.power = j.at("power").get<double>();
        r.length = j.at("length").get<double>();
        r.connection = j.at("connection").get<double>();
        r.lambda2 = j.at("lambda2").get<double>();
        r.has_lambda2 = j.at("has_lambda2").get<bool>();
        r.gamma = j.at("gamma").get<double>();
        r.has_gamma = j.at("has_gamma").get<bool>();
        r.sandwich = j.at("sandwich").get<double>();
        r.has_sandwich = j.at("has_sandwich").get<bool>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad record field: ") + e.what(), line);
    }
    return r;
}

// 17 significant digits round-trip any double through decimal text.
std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return out;
}

const char* kCsvHeader =
    "schema,family,q,alpha,n,realization,seed,degenerate,failed,error,variance,gap,mu,"
    "bhatia_slack,tau,work,power,length,connection,lambda2,has_lambda2,gamma,has_gamma,"
    "sandwich,has_sandwich";

std::string record_to_csv(const Record& r) {
    std::ostringstream os;
    os << r.schema << ',' << r.family << ',' << r.q << ',' << fmt_double(r.alpha) << ',' << r.n
       << ',' << r.realization << ',' << r.seed << ',' << int(r.degenerate) << ','
       << int(r.failed) << ',' << sanitize(r.error) << ',' << fmt_double(r.variance) << ','
       << fmt_double(r.gap) << ',' << fmt_double(r.mu) << ',' << fmt_double(r.bhatia_slack)
       << ',' << fmt_double(r.tau) << ',' << fmt_double(r.work) << ',' << fmt_double(r.power)
       << ',' << fmt_double(r.length) << ',' << fmt_double(r.connection) << ','
       << fmt_double(r.lambda2) << ',' << int(r.has_lambda2) << ',' << fmt_double(r.gamma)
       << ',' << int(r.has_gamma) << ',' << fmt_double(r.sandwich) << ','
       << int(r.has_sandwich);
    return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

Record record_from_csv(const std::string& line, long line_no) {
    const auto f = split_csv(line);
    if (f.size() != 25) {
        throw ParseError("expected 25 fields, got " + std::to_string(f.size()), line_no);
    }
    Record r;
    try {
        r.schema = std::stoi(f[0]);
        if (r.schema != kRecordSchemaVersion) {
            throw ParseError("unsupported record schema version " + f[0], line_no);
        }
        r.family = f[1];
        r.q = std::stoi(f[2]);
        r.alpha = std::stod(f[3]);
        r.n = std::stoi(f[4]);
        r.realization = std::stoi(f[5]);
        r.seed = std::stoull(f[6]);
        r.degenerate = f[7] == "1";
        r.failed = f[8] == "1";
        r.error = f[9];
        r.variance = std::stod(f[10]);
        r.gap = std::stod(f[11]);
        r.mu = std::stod(f[12]);
        r.bhatia_slack = std::stod(f[13]);
        r.tau = std::stod(f[14]);
        r.work = std::stod(f[15]);
        r.power = std::stod(f[16]);
        r.length = std::stod(f[17]);
        r.connection = std::stod(f[18]);
        r.lambda2 = std::stod(f[19]);
        r.has_lambda2 = f[20] == "1";
        r.gamma = std::stod(f[21]);
        r.has_gamma = f[22] == "1";
        r.sandwich = std::stod(f[23]);
        r.has_sandwich = f[24] == "1";
    } catch (const std::invalid_argument&) {
        throw ParseError("malformed numeric field", line_no);
    } catch (const std::out_of_range&) {
        throw ParseError("numeric field out of range", line_no);
    }
    return r;
}

}  // namespace

void persist_records(const std::vector<Record>& records, const std::string& path,
                     const std::string& format) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InvalidArgumentError("cannot open for writing: " + path);
    if (format == "jsonl") {
        for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    } else if (format == "csv") {
        out << kCsvHeader << '\n';
        for (const auto& r : records) out << record_to_csv(r) << '\n';
    } else {
        throw ConfigError("unknown record format: " + format);
    }
    if (!out) throw InvalidArgumentError("write failed: " + path);
}

std::vector<Record> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgumentError("cannot open for reading: " + path);
    std::vector<Record> records;
    std::string line;
    long line_no = 0;
    bool csv_header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '{') {
            json j;
            try {
                j = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("bad json record: ") + e.what(), line_no);
            }
            records.push_back(record_from_json(j, line_no));
        } else if (!csv_header_seen && line.rfind("schema,", 0) == 0) {
            if (line != kCsvHeader) {
                throw ParseError("csv header does not match record schema", line_no);
            }
            csv_header_seen = true;
        } else if (csv_header_seen) {
            records.push_back(record_from_csv(line, line_no));
        } else {
            throw ParseError("unrecognized record line", line_no);
        }
    }
    return records;
}

void persist_aggregate(const EnsembleAggregate& agg, const std::string& path,
                       const std::string& format) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InvalidArgumentError("cannot open for writing: " + path);
    if (format == "jsonl") {
        for (const auto& row : agg.rows) {
            out << json{{"schema", kRecordSchemaVersion}, {"n", row.n},
                        {"quantity", row.quantity},      {"mean", row.mean},
                        {"stderr", row.stderr_},         {"samples", row.samples},
                        {"degenerate", row.degenerate},  {"failed", row.failed}}
                       .dump()
                << '\n';
        }
    } else if (format == "csv") {
        out << "schema,n,quantity,mean,stderr,samples,degenerate,failed\n";
        for (const auto& row : agg.rows) {
            out << kRecordSchemaVersion << ',' << row.n << ',' << row.quantity << ','
                << fmt_double(row.mean) << ',' << fmt_double(row.stderr_) << ',' << row.samples
                << ',' << row.degenerate << ',' << row.failed << '\n';
        }
    } else {
        throw ConfigError("unknown record format: " + format);
    }
    if (!out) throw InvalidArgumentError("write failed: " + path);
}

std::vector<ScalingPoint> aggregate_points(const EnsembleAggregate& agg,
                                           const std::string& quantity) {
    std::vector<ScalingPoint> points;
    for (const auto& row : agg.rows) {
        if (row.quantity != quantity || row.samples == 0) continue;
        const double magnitude = std::abs(row.mean);
        if (magnitude <= 0.0) continue;
        points.push_back({static_cast<double>(row.n), magnitude, row.stderr_});
    }
    return points;
}

}  // namespace qb
