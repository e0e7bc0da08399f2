// Copyright 2026 The qadv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qadv/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "qadv/parallel.h"

#ifndef QADV_GIT_REV
#define QADV_GIT_REV "unknown"
#endif

namespace qadv {

double mean_of(const std::vector<double>& values) {
    if (values.empty()) {
        return 0.0;
    }
    double total = 0;
    for (double v : values) {
        total += v;
    }
    return total / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    size_t m = values.size() / 2;
    return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

Summary summarize(const std::vector<double>& values, uint64_t seed, size_t resamples, double level) {
    Summary s;
    s.n = values.size();
    if (values.empty()) {
        return s;
    }
    s.mean = mean_of(values);
    s.median = median_of(values);
    Rng rng = make_rng(seed, 0xB007);
    std::vector<double> means(resamples);
    const size_t n = values.size();
    for (size_t b = 0; b < resamples; b++) {
        double total = 0;
        for (size_t i = 0; i < n; i++) {
            total += values[uniform_index(rng, n)];
        }
        means[b] = total / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    double tail = (1.0 - level) / 2.0;
    auto pick = [&](double q) {
        size_t idx = static_cast<size_t>(std::floor(q * static_cast<double>(resamples - 1) + 0.5));
        return means[std::min(idx, resamples - 1)];
    };
    s.ci_low = pick(tail);
    s.ci_high = pick(1.0 - tail);
    return s;
}

bool cis_disjoint(const Summary& a, const Summary& b) { return a.ci_high < b.ci_low || b.ci_high < a.ci_low; }

std::string artifact_version() { return QADV_GIT_REV; }

void RunRecord::summarize_cells(uint64_t seed) {
    for (size_t i = 0; i < cells.size(); i++) {
        cells[i].summary = summarize(cells[i].lifetimes, derive_seed(seed, i));
    }
}

namespace {

nlohmann::json summary_json(const Summary& s) {
    return {{"n", s.n}, {"mean", s.mean}, {"median", s.median}, {"ci_low", s.ci_low}, {"ci_high", s.ci_high}};
}

Summary summary_from(const nlohmann::json& j) {
    Summary s;
    s.n = j.at("n").get<size_t>();
    s.mean = j.at("mean").get<double>();
    s.median = j.at("median").get<double>();
    s.ci_low = j.at("ci_low").get<double>();
    s.ci_high = j.at("ci_high").get<double>();
    return s;
}

std::string csv_value(const nlohmann::json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

}  // namespace

void to_json(nlohmann::json& out, const RunRecord& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const RunCell& c : r.cells) {
        cells.push_back(
            {{"key", c.key}, {"lifetimes", c.lifetimes}, {"seconds", c.seconds}, {"summary", summary_json(c.summary)}});
    }
    out = {
        {"id", r.id},           {"kind", r.kind},       {"version", r.version},
        {"created_at", r.created_at}, {"config", r.config}, {"key_columns", r.key_columns},
        {"cells", cells},       {"extra", r.extra},
    };
}

void from_json(const nlohmann::json& in, RunRecord& r) {
    r.id = in.at("id").get<std::string>();
    r.kind = in.at("kind").get<std::string>();
    r.version = in.at("version").get<std::string>();
    r.created_at = in.at("created_at").get<std::string>();
    r.config = in.at("config");
    r.key_columns = in.at("key_columns").get<std::vector<std::string>>();
    r.cells.clear();
    for (const auto& c : in.at("cells")) {
        r.cells.push_back({c.at("key"), c.at("lifetimes").get<std::vector<double>>(),
                           c.at("seconds").get<std::vector<double>>(), summary_from(c.at("summary"))});
    }
    r.extra = in.value("extra", nlohmann::json::object());
}

void write_summary_csv(std::ostream& out, const RunRecord& r) {
    out << "run_id";
    for (const std::string& k : r.key_columns) {
        out << ',' << k;
    }
    out << ",episodes,mean_lifetime,median_lifetime,ci_low,ci_high,mean_seconds\n";
    out << std::setprecision(10);
    for (const RunCell& c : r.cells) {
        out << r.id;
        for (const std::string& k : r.key_columns) {
            out << ',' << csv_value(c.key.at(k));
        }
        out << ',' << c.summary.n << ',' << c.summary.mean << ',' << c.summary.median << ',' << c.summary.ci_low << ','
            << c.summary.ci_high << ',' << mean_of(c.seconds) << '\n';
    }
}

void write_lifetimes_csv(std::ostream& out, const RunRecord& r) {
    out << "run_id";
    for (const std::string& k : r.key_columns) {
        out << ',' << k;
    }
    out << ",episode,lifetime\n";
    out << std::setprecision(17);
    for (const RunCell& c : r.cells) {
        for (size_t e = 0; e < c.lifetimes.size(); e++) {
            out << r.id;
            for (const std::string& k : r.key_columns) {
                out << ',' << csv_value(c.key.at(k));
            }
            out << ',' << e << ',' << c.lifetimes[e] << '\n';
        }
    }
}

ResultStore::ResultStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
        throw std::runtime_error("cannot create result directory " + dir_.string());
    }
}

bool ResultStore::contains(const std::string& id) const { return std::filesystem::exists(dir_ / (id + ".json")); }

void ResultStore::write(const RunRecord& record) const {
    if (record.id.empty() || record.id.find('/') != std::string::npos) {
        throw std::invalid_argument("invalid run id '" + record.id + "'");
    }
    if (contains(record.id)) {
        throw std::invalid_argument("run id '" + record.id + "' already exists in " + dir_.string());
    }
    auto open = [&](const std::filesystem::path& p, std::ios::openmode mode) {
        std::ofstream out(p, mode);
        if (!out) {
            throw std::runtime_error("cannot write " + p.string());
        }
        return out;
    };
    {
        auto out = open(dir_ / (record.id + ".json"), std::ios::out);
        out << nlohmann::json(record).dump(2) << '\n';
    }
    {
        auto out = open(dir_ / (record.id + "_summary.csv"), std::ios::out);
        write_summary_csv(out, record);
    }
    {
        auto out = open(dir_ / (record.id + "_lifetimes.csv"), std::ios::out);
        write_lifetimes_csv(out, record);
    }
    auto index = open(dir_ / "index.jsonl", std::ios::app);
    index << nlohmann::json{{"id", record.id}, {"kind", record.kind}, {"created_at", record.created_at},
                            {"version", record.version}}
                 .dump()
          << '\n';
}

RunRecord ResultStore::read(const std::string& id) const {
    std::ifstream in(dir_ / (id + ".json"));
    if (!in) {
        throw std::runtime_error("no run '" + id + "' in " + dir_.string());
    }
    return nlohmann::json::parse(in).get<RunRecord>();
}

std::vector<std::string> ResultStore::ids() const {
    std::vector<std::string> out;
    std::ifstream in(dir_ / "index.jsonl");
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(nlohmann::json::parse(line).at("id").get<std::string>());
        }
    }
    return out;
}

std::string make_run_id(const std::string& kind, uint64_t seed) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream id;
    uint64_t tag = splitmix64(seed ^ static_cast<uint64_t>(
                                         std::chrono::steady_clock::now().time_since_epoch().count()));
    id << kind << '-' << std::put_time(&tm, "%Y%m%dT%H%M%S") << '-' << std::hex << (tag & 0xFFFFFF);
    return id.str();
}

namespace {

std::string timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

RunRecord new_record(const std::string& kind, uint64_t seed, nlohmann::json config,
                     std::vector<std::string> key_columns) {
    RunRecord r;
    r.id = make_run_id(kind, seed);
    r.kind = kind;
    r.version = artifact_version();
    r.created_at = timestamp();
    r.config = std::move(config);
    r.key_columns = std::move(key_columns);
    return r;
}

}  // namespace

void decode_round(MemoryEnv& env, CachedQ* q) {
    if (q != nullptr) {
        decode_phase(env, *q);
        return;
    }
    for (const Correction& c : env.referee().decode(env.observation().last_slice())) {
        if (env.budget_exhausted()) {
            break;
        }
        env.apply_correction(c.qubit, c.pauli);
    }
}

EpisodeStats run_decoder_episode(MemoryEnv& env, CachedQ* q) {
    env.reset();
    while (true) {
        decode_round(env, q);
        env.finish_round();
        if (env.done()) {
            return env.stats();
        }
        env.begin_round(env.sample_round());
    }
}

std::vector<double> SweepConfig::default_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 13; k++) {
        grid.push_back(0.001 * k);
    }
    return grid;
}

void SweepConfig::validate() const {
    if (error_rates.empty()) {
        throw std::invalid_argument("sweep needs at least one error rate");
    }
    if (!std::is_sorted(error_rates.begin(), error_rates.end())) {
        throw std::invalid_argument("error-rate grid must be increasing");
    }
    if (episodes_per_rate == 0 || resample_interval == 0) {
        throw std::invalid_argument("episode counts must be positive");
    }
}

namespace {

nlohmann::json noise_label(const NoiseSpec& spec) {
    switch (spec.spatial) {
        case SpatialPattern::gaussian:
            return spec.sigma;
        case SpatialPattern::uniform:
            return 0.0;
        default:
            return spec.beta;
    }
}

struct CurveJob {
    size_t rate_index;
    bool reference;
};

}  // namespace

RunRecord robustness_sweep(const QNetwork* net, const SweepConfig& sweep, int workers) {
    sweep.validate();
    if (net != nullptr) {
        Checkpoint header;
        header.distance = sweep.env.distance;
        header.depth = sweep.env.resolved_depth();
        header.net = *net;
        check_compatible(header, sweep.env);
    }
    nlohmann::json config = {{"error_rates", sweep.error_rates},
                             {"episodes_per_rate", sweep.episodes_per_rate},
                             {"resample_interval", sweep.resample_interval},
                             {"noise", sweep.noise},
                             {"env", sweep.env},
                             {"seed", sweep.seed},
                             {"decoder", net ? "dqn" : "mwpm"}};
    RunRecord record = new_record("robustness", sweep.seed, config, {"curve", "pattern", "param", "p_phys"});

    std::vector<CurveJob> jobs;
    for (size_t i = 0; i < sweep.error_rates.size(); i++) {
        jobs.push_back({i, false});
        if (sweep.include_reference && sweep.noise.spatial != SpatialPattern::uniform) {
            jobs.push_back({i, true});
        }
    }
    const size_t blocks = (sweep.episodes_per_rate + sweep.resample_interval - 1) / sweep.resample_interval;
    const size_t total_blocks = jobs.size() * blocks;
    std::vector<std::vector<double>> lifetimes(jobs.size(), std::vector<double>(sweep.episodes_per_rate));
    std::vector<std::vector<double>> seconds(jobs.size(), std::vector<double>(sweep.episodes_per_rate));

    MemoryEnv prototype(sweep.env, sweep.seed);
    auto referee = prototype.shared_referee();
    int w = std::max(1, workers);
    std::vector<std::unique_ptr<CachedQ>> caches;
    for (int i = 0; i < w; i++) {
        caches.push_back(net ? std::make_unique<CachedQ>(*net) : nullptr);
    }
    parallel_for(total_blocks, w, [&](int worker, size_t task) {
        const CurveJob& job = jobs[task / blocks];
        size_t block = task % blocks;
        EnvConfig env_config = sweep.env;
        env_config.noise = sweep.noise;
        if (job.reference) {
            env_config.noise.spatial = SpatialPattern::uniform;
        }
        env_config.noise.p_phys = sweep.error_rates[job.rate_index];
        env_config.noise.distance = 0;  // instantiate afresh per block
        // The reference and treatment curves share seeds at equal (rate, block).
        MemoryEnv env(env_config, derive_seed(derive_seed(sweep.seed, job.rate_index), block), referee);
        size_t first = block * sweep.resample_interval;
        size_t last = std::min(first + sweep.resample_interval, sweep.episodes_per_rate);
        for (size_t e = first; e < last; e++) {
            auto start = std::chrono::steady_clock::now();
            EpisodeStats stats = run_decoder_episode(env, caches[worker].get());
            lifetimes[task / blocks][e] = static_cast<double>(stats.lifetime_cycles);
            seconds[task / blocks][e] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });
    for (size_t j = 0; j < jobs.size(); j++) {
        NoiseSpec label = sweep.noise;
        if (jobs[j].reference) {
            label.spatial = SpatialPattern::uniform;
        }
        RunCell cell;
        cell.key = {{"curve", jobs[j].reference ? "reference" : "treatment"},
                    {"pattern", to_string(label.spatial)},
                    {"param", noise_label(label)},
                    {"p_phys", sweep.error_rates[jobs[j].rate_index]}};
        cell.lifetimes = std::move(lifetimes[j]);
        cell.seconds = std::move(seconds[j]);
        record.cells.push_back(std::move(cell));
    }
    record.summarize_cells(sweep.seed);
    return record;
}

RunRecord attack_sweep(const QNetwork& net, const AttackSweepConfig& sweep, int workers) {
    Checkpoint header;
    header.distance = sweep.env.distance;
    header.depth = sweep.env.resolved_depth();
    header.net = net;
    check_compatible(header, sweep.env);
    std::vector<std::string> strategies;
    for (Strategy s : sweep.strategies) {
        strategies.push_back(to_string(s));
    }
    nlohmann::json config = {{"strategies", strategies},
                             {"n_values", sweep.n_values},
                             {"p_values", sweep.p_values},
                             {"repetitions", sweep.repetitions},
                             {"max_errors_per_round", sweep.max_errors_per_round
                                                          ? nlohmann::json(*sweep.max_errors_per_round)
                                                          : nlohmann::json(nullptr)},
                             {"single_action_round", sweep.single_action_round},
                             {"env", sweep.env},
                             {"seed", sweep.seed}};
    RunRecord record = new_record("attack", sweep.seed, config, {"strategy", "n_samples", "p_phys"});
    size_t cell_index = 0;
    nlohmann::json rejections = nlohmann::json::array();
    for (Strategy strategy : sweep.strategies) {
        for (double p : sweep.p_values) {
            for (size_t n : sweep.n_values) {
                EnvConfig env = sweep.env;
                env.noise.p_phys = p;
                AttackConfig ac;
                ac.n_samples = n;
                ac.strategy = strategy;
                ac.max_errors_per_round = sweep.max_errors_per_round;
                ac.repetitions = sweep.repetitions;
                ac.single_action_round = sweep.single_action_round;
                ac.record_chain = false;
                ac.seed = derive_seed(sweep.seed, cell_index++);
                auto results = run_attacks(net, env, ac, workers);
                RunCell cell;
                cell.key = {{"strategy", to_string(strategy)}, {"n_samples", n}, {"p_phys", p}};
                uint64_t drawn = 0, rejected = 0;
                for (const AttackResult& r : results) {
                    cell.lifetimes.push_back(static_cast<double>(r.lifetime_cycles));
                    cell.seconds.push_back(r.seconds);
                    drawn += r.candidates_drawn;
                    rejected += r.candidates_rejected;
                }
                rejections.push_back({{"strategy", to_string(strategy)},
                                      {"n_samples", n},
                                      {"p_phys", p},
                                      {"drawn", drawn},
                                      {"rejected", rejected}});
                record.cells.push_back(std::move(cell));
            }
        }
    }
    record.extra["candidates"] = rejections;
    record.summarize_cells(sweep.seed);
    return record;
}

RunRecord referee_sweep(const RefereeSweepConfig& sweep, int workers) {
    if (sweep.distances.empty() || sweep.sigmas.empty() || sweep.rates.empty() || sweep.steps == 0) {
        throw std::invalid_argument("referee sweep needs non-empty grids and a positive step count");
    }
    nlohmann::json config = {{"distances", sweep.distances}, {"sigmas", sweep.sigmas}, {"rates", sweep.rates},
                             {"steps", sweep.steps},         {"seed", sweep.seed},     {"noise", sweep.noise}};
    RunRecord record = new_record("referee", sweep.seed, config, {"distance", "sigma", "p_phys"});
    struct Job {
        int d;
        double sigma;
        double p;
    };
    std::vector<Job> jobs;
    for (int d : sweep.distances) {
        for (double s : sweep.sigmas) {
            for (double p : sweep.rates) {
                jobs.push_back({d, s, p});
            }
        }
    }
    std::vector<RunCell> cells(jobs.size());
    std::vector<uint64_t> censored(jobs.size(), 0);
    parallel_for(jobs.size(), workers, [&](int, size_t j) {
        const Job& job = jobs[j];
        EnvConfig env;
        env.distance = job.d;
        env.noise = sweep.noise;
        env.noise.distance = 0;
        env.noise.p_phys = job.p;
        env.referee_sigma = job.sigma;
        env.cycle_cap = UINT64_MAX;
        uint64_t used = 0;
        RunCell& cell = cells[j];
        for (uint64_t episode = 0; used < sweep.steps; episode++) {
            // Fresh miscalibrated weights for every episode.
            MemoryEnv e(env, derive_seed(derive_seed(sweep.seed, j), episode));
            e.reset();
            auto start = std::chrono::steady_clock::now();
            while (used < sweep.steps) {
                decode_round(e, nullptr);
                e.finish_round();
                used++;
                if (e.done()) {
                    break;
                }
                e.begin_round(e.sample_round());
            }
            if (e.done()) {
                cell.lifetimes.push_back(static_cast<double>(e.stats().lifetime_cycles));
                cell.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            } else if (cell.lifetimes.empty()) {
                // No failure inside the step budget: report the censored run length.
                cell.lifetimes.push_back(static_cast<double>(e.stats().lifetime_cycles));
                cell.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
                censored[j] = 1;
            }
        }
        cell.key = {{"distance", job.d}, {"sigma", job.sigma}, {"p_phys", job.p}};
    });
    nlohmann::json flags = nlohmann::json::array();
    for (size_t j = 0; j < jobs.size(); j++) {
        if (censored[j]) {
            flags.push_back(cells[j].key);
        }
        record.cells.push_back(std::move(cells[j]));
    }
    record.extra["censored_cells"] = flags;
    record.summarize_cells(sweep.seed);
    return record;
}

}  // namespace qadv
