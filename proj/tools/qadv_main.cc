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

// Command-line front end for training, attacks, verification and sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qadv/attack.h"
#include "qadv/dqn.h"
#include "qadv/experiments.h"
#include "qadv/lattice.h"
#include "qadv/memory_env.h"
#include "qadv/noise.h"
#include "qadv/verifier.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Globals {
    uint64_t seed = 1;
    std::string config_path;
    std::string out_dir = "results";
    int workers = 1;
    json config = json::object();

    json section(const std::string& name) const {
        return config.contains(name) ? config.at(name) : json::object();
    }
};

// Noise flags; unset flags leave the config value alone.
struct NoiseFlags {
    std::optional<std::string> kind;
    std::optional<double> p_phys;
    std::optional<double> p_meas;
    std::optional<std::string> spatial;
    std::optional<double> sigma;
    std::optional<double> beta;
    std::optional<double> temporal_amplitude;
    std::optional<double> temporal_omega;

    void add(CLI::App* app) {
        app->add_option("--noise", kind, "depolarizing | bit_flip | phase_flip");
        app->add_option("--p-phys", p_phys, "physical error rate per qubit and cycle");
        app->add_option("--p-meas", p_meas, "readout flip probability");
        app->add_option("--spatial", spatial, "uniform | gaussian | cross | quadrant | concentric");
        app->add_option("--sigma", sigma, "gaussian spatial spread");
        app->add_option("--beta", beta, "patterned spatial offset");
        app->add_option("--temporal-amplitude", temporal_amplitude, "sinusoidal drift amplitude");
        app->add_option("--temporal-omega", temporal_omega, "sinusoidal drift frequency");
    }

    void apply(qadv::NoiseSpec& spec) const {
        if (kind) spec.kind = qadv::parse_noise_kind(*kind);
        if (p_phys) spec.p_phys = *p_phys;
        if (p_meas) spec.p_meas = *p_meas;
        if (spatial) spec.spatial = qadv::parse_spatial_pattern(*spatial);
        if (sigma) spec.sigma = *sigma;
        if (beta) spec.beta = *beta;
        if (temporal_amplitude || temporal_omega) {
            qadv::TemporalNoise t = spec.temporal.value_or(qadv::TemporalNoise{});
            if (temporal_amplitude) t.amplitude = *temporal_amplitude;
            if (temporal_omega) t.omega = *temporal_omega;
            spec.temporal = t;
        }
    }
};

struct EnvFlags {
    std::optional<int> distance;
    std::optional<int> depth;
    std::optional<uint64_t> cycle_cap;
    NoiseFlags noise;

    void add(CLI::App* app, bool with_distance = true) {
        if (with_distance) app->add_option("--distance,-d", distance, "code distance (odd)");
        app->add_option("--depth", depth, "syndrome slices per volume (default d)");
        app->add_option("--cycle-cap", cycle_cap, "episode cycle cap");
        noise.add(app);
    }

    qadv::EnvConfig resolve(const Globals& g) const {
        qadv::EnvConfig env = g.section("env").get<qadv::EnvConfig>();
        if (distance) env.distance = *distance;
        if (depth) env.depth = *depth;
        if (cycle_cap) env.cycle_cap = *cycle_cap;
        noise.apply(env.noise);
        return env;
    }
};

void write_json(const fs::path& path, const json& value) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << value.dump(2) << '\n';
}

fs::path ensure_out_dir(const Globals& g) {
    fs::path dir(g.out_dir);
    fs::create_directories(dir);
    return dir;
}

qadv::Checkpoint load_for(const std::string& path, const qadv::EnvConfig& env) {
    qadv::Checkpoint ck = qadv::load_checkpoint(path);
    qadv::check_compatible(ck, env);
    return ck;
}

// Distance defaults to the checkpoint's when the user did not pass one.
qadv::EnvConfig env_for_checkpoint(const EnvFlags& flags, const Globals& g, const std::string& checkpoint) {
    qadv::EnvConfig env = flags.resolve(g);
    if (!flags.distance && !g.section("env").contains("distance")) {
        env.distance = qadv::load_checkpoint(checkpoint).distance;
    }
    return env;
}

void store_record(const Globals& g, qadv::RunRecord& record) {
    qadv::ResultStore store(ensure_out_dir(g));
    store.write(record);
    std::cout << "wrote " << (store.dir() / (record.id + ".json")).string() << '\n';
    qadv::write_summary_csv(std::cout, record);
}

qadv::RunRecord stamp(qadv::RunRecord record, const std::string& kind, const Globals& g) {
    record.kind = kind;
    record.id = qadv::make_run_id(kind, g.seed);
    return record;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface-code reinforcement-learning decoder and adversarial attack toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--config", g.config_path, "JSON config; flags override its fields");
    app.add_option("--out-dir", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--workers", g.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    // train
    CLI::App* train_cmd = app.add_subcommand("train", "train a DQN decoder");
    EnvFlags train_env;
    train_env.add(train_cmd);
    std::optional<uint64_t> train_steps, eval_interval;
    std::optional<size_t> eval_episodes;
    std::string train_out;
    bool keep_last = false;
    train_cmd->add_option("--steps", train_steps, "environment steps");
    train_cmd->add_option("--eval-interval", eval_interval, "steps between evaluations");
    train_cmd->add_option("--eval-episodes", eval_episodes, "episodes per evaluation");
    train_cmd->add_option("--checkpoint", train_out, "checkpoint output path");
    train_cmd->add_flag("--keep-last", keep_last, "save the final network instead of the best evaluated one");

    // attack run / sweep
    CLI::App* attack_cmd = app.add_subcommand("attack", "adversarial syndrome-volume attacks");
    attack_cmd->require_subcommand(1);
    CLI::App* attack_run = attack_cmd->add_subcommand("run", "repeat one attack configuration");
    CLI::App* attack_sweep_cmd = attack_cmd->add_subcommand("sweep", "factorial sweep over strategy, N and p");
    EnvFlags attack_env, sweep_env;
    attack_env.add(attack_run);
    sweep_env.add(attack_sweep_cmd);
    std::string attack_ck, strategy = "min";
    size_t attack_n = 1, attack_reps = 500;
    std::optional<size_t> max_errors;
    bool single_action = false, histogram = false;
    attack_run->add_option("--checkpoint", attack_ck, "decoder checkpoint")->required();
    attack_run->add_option("--strategy", strategy, "min | max | min_var | max_var")->capture_default_str();
    attack_run->add_option("--n", attack_n, "candidate volumes per round")->capture_default_str();
    attack_run->add_option("--reps", attack_reps, "attack repetitions")->capture_default_str();
    attack_run->add_option("--max-errors", max_errors, "distinct qubits allowed per round");
    attack_run->add_flag("--single-action", single_action, "decoder gets one action per round");
    attack_run->add_flag("--histogram", histogram, "also write the per-step error histogram");

    std::string sweep_ck;
    std::vector<std::string> sweep_strategies = {"min"};
    std::vector<size_t> sweep_n = {1, 8, 16, 32};
    std::vector<double> sweep_p = {0.001};
    size_t sweep_reps = 500;
    std::optional<size_t> sweep_max_errors;
    attack_sweep_cmd->add_option("--checkpoint", sweep_ck, "decoder checkpoint")->required();
    attack_sweep_cmd->add_option("--strategies", sweep_strategies, "strategies")->delimiter(',');
    attack_sweep_cmd->add_option("--n-values", sweep_n, "candidate counts")->delimiter(',');
    attack_sweep_cmd->add_option("--p-values", sweep_p, "physical error rates")->delimiter(',');
    attack_sweep_cmd->add_option("--reps", sweep_reps, "repetitions per cell")->capture_default_str();
    attack_sweep_cmd->add_option("--max-errors", sweep_max_errors, "distinct qubits allowed per round");

    // verify
    CLI::App* verify_cmd = app.add_subcommand("verify", "exhaustive low-weight error enumeration");
    int verify_d = 3, verify_max = 1;
    std::string verify_ck;
    verify_cmd->add_option("--distance,-d", verify_d, "code distance")->capture_default_str();
    verify_cmd->add_option("--max-errors", verify_max, "largest error weight enumerated")->capture_default_str();
    verify_cmd->add_option("--checkpoint", verify_ck, "decoder checkpoint; referee only when omitted");

    // threshold
    CLI::App* threshold_cmd = app.add_subcommand("threshold", "logical error rates and ansatz fit");
    EnvFlags threshold_env;
    threshold_env.add(threshold_cmd, false);
    std::vector<int> th_distances = {3, 5};
    std::vector<double> th_grid = {0.005, 0.01, 0.015, 0.02};
    uint64_t th_failures = 200, th_rounds = 2'000'000;
    double th_hint = 0.1;
    std::string th_ck;
    threshold_cmd->add_option("--distances", th_distances, "code distances")->delimiter(',');
    threshold_cmd->add_option("--p-grid", th_grid, "physical error rates")->delimiter(',');
    threshold_cmd->add_option("--target-failures", th_failures, "stop after this many failures")->capture_default_str();
    threshold_cmd->add_option("--max-rounds", th_rounds, "round budget per point")->capture_default_str();
    threshold_cmd->add_option("--p-th-hint", th_hint, "threshold used by single-distance fits")->capture_default_str();
    threshold_cmd->add_option("--checkpoint", th_ck, "decoder checkpoint (one distance only)");

    // robustness
    CLI::App* robust_cmd = app.add_subcommand("robustness", "spatial noise robustness sweep");
    EnvFlags robust_env;
    robust_env.add(robust_cmd);
    std::string robust_ck;
    std::vector<double> robust_rates;
    std::optional<size_t> robust_episodes, robust_interval;
    bool no_reference = false;
    robust_cmd->add_option("--checkpoint", robust_ck, "decoder checkpoint; MWPM when omitted");
    robust_cmd->add_option("--rates", robust_rates, "error-rate grid")->delimiter(',');
    robust_cmd->add_option("--episodes", robust_episodes, "episodes per rate");
    robust_cmd->add_option("--resample-interval", robust_interval, "episodes per noise instantiation");
    robust_cmd->add_flag("--no-reference", no_reference, "skip the uniform reference curve");

    // referee bench
    CLI::App* referee_cmd = app.add_subcommand("referee", "referee decoder tools");
    referee_cmd->require_subcommand(1);
    CLI::App* bench_cmd = referee_cmd->add_subcommand("bench", "lifetime vs error rate with miscalibrated weights");
    std::vector<int> bench_d;
    std::vector<double> bench_sigma, bench_rates;
    std::optional<uint64_t> bench_steps;
    bench_cmd->add_option("--distance,-d", bench_d, "code distances")->delimiter(',');
    bench_cmd->add_option("--sigma", bench_sigma, "weight spreads")->delimiter(',');
    bench_cmd->add_option("--rates", bench_rates, "error rates")->delimiter(',');
    bench_cmd->add_option("--steps", bench_steps, "rounds per cell");

    // lattice dump
    CLI::App* lattice_cmd = app.add_subcommand("lattice", "lattice inspection");
    lattice_cmd->require_subcommand(1);
    CLI::App* dump_cmd = lattice_cmd->add_subcommand("dump", "stabilizer and logical supports as JSON");
    int dump_d = 3;
    dump_cmd->add_option("--distance,-d", dump_d, "code distance")->capture_default_str();

    // baseline
    CLI::App* baseline_cmd = app.add_subcommand("baseline", "unprotected-qubit and random-policy lifetimes");
    EnvFlags baseline_env;
    baseline_env.add(baseline_cmd);
    uint64_t baseline_trials = 100'000;
    size_t baseline_episodes = 500;
    baseline_cmd->add_option("--trials", baseline_trials, "unprotected-qubit trials")->capture_default_str();
    baseline_cmd->add_option("--episodes", baseline_episodes, "random-policy episodes")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!g.config_path.empty()) {
            std::ifstream in(g.config_path);
            if (!in) throw std::runtime_error("cannot read config " + g.config_path);
            g.config = json::parse(in);
        }

        if (train_cmd->parsed()) {
            qadv::EnvConfig env = train_env.resolve(g);
            qadv::TrainConfig tc = g.section("train").get<qadv::TrainConfig>();
            tc.seed = g.seed;
            if (train_steps) tc.total_steps = *train_steps;
            if (eval_interval) tc.eval_interval = *eval_interval;
            if (eval_episodes) tc.eval_episodes = *eval_episodes;
            if (keep_last) tc.keep_best = false;
            fs::path dir = ensure_out_dir(g);
            qadv::TrainResult result = qadv::train(
                env, tc,
                [](const qadv::CurvePoint& p) {
                    std::cerr << "step " << p.step << " epsilon " << p.epsilon << " eval " << p.mean_eval_lifetime
                              << '\n';
                },
                g.workers);
            std::string path = train_out.empty()
                                   ? (dir / ("checkpoint_d" + std::to_string(env.distance) + ".json")).string()
                                   : train_out;
            qadv::save_checkpoint(result.checkpoint, path);
            std::ofstream curve(dir / "learning_curve.csv");
            qadv::write_learning_curve(curve, result.curve);
            std::cout << "checkpoint " << path << " (step " << result.selected_step << ")\n";
        } else if (attack_run->parsed()) {
            qadv::EnvConfig env = env_for_checkpoint(attack_env, g, attack_ck);
            qadv::Checkpoint ck = load_for(attack_ck, env);
            qadv::AttackConfig ac;
            ac.strategy = qadv::parse_strategy(strategy);
            ac.n_samples = attack_n;
            ac.repetitions = attack_reps;
            ac.max_errors_per_round = max_errors;
            ac.single_action_round = single_action;
            ac.seed = g.seed;
            ac.record_chain = histogram;
            std::vector<qadv::AttackResult> results = qadv::run_attacks(ck.net, env, ac, g.workers);

            qadv::RunRecord record;
            record.version = qadv::artifact_version();
            record.config = {{"env", env}, {"strategy", strategy}, {"n_samples", attack_n}, {"reps", attack_reps},
                             {"seed", g.seed}, {"checkpoint", attack_ck}};
            if (max_errors) record.config["max_errors_per_round"] = *max_errors;
            record.key_columns = {"strategy", "n_samples", "p_phys"};
            qadv::RunCell cell;
            cell.key = {{"strategy", strategy}, {"n_samples", attack_n}, {"p_phys", env.noise.p_phys}};
            uint64_t drawn = 0, rejected = 0;
            size_t longest = 0;
            for (const qadv::AttackResult& r : results) {
                cell.lifetimes.push_back(static_cast<double>(r.lifetime_cycles));
                cell.seconds.push_back(r.seconds);
                drawn += r.candidates_drawn;
                rejected += r.candidates_rejected;
                longest = std::max(longest, r.chain.size());
            }
            record.cells.push_back(std::move(cell));
            record.extra = {{"candidates_drawn", drawn}, {"candidates_rejected", rejected}};
            record = stamp(std::move(record), "attack", g);
            record.summarize_cells(g.seed);
            store_record(g, record);
            if (histogram) {
                qadv::ErrorHistogram h = qadv::error_histogram(results, longest, env.distance);
                write_json(ensure_out_dir(g) / (record.id + "_histogram.json"), qadv::to_json(h));
            }
        } else if (attack_sweep_cmd->parsed()) {
            qadv::EnvConfig env = env_for_checkpoint(sweep_env, g, sweep_ck);
            qadv::Checkpoint ck = load_for(sweep_ck, env);
            qadv::AttackSweepConfig sc;
            sc.strategies.clear();
            for (const std::string& s : sweep_strategies) sc.strategies.push_back(qadv::parse_strategy(s));
            sc.n_values = sweep_n;
            sc.p_values = sweep_p;
            sc.repetitions = sweep_reps;
            sc.max_errors_per_round = sweep_max_errors;
            sc.env = env;
            sc.seed = g.seed;
            qadv::RunRecord record = stamp(qadv::attack_sweep(ck.net, sc, g.workers), "attack_sweep", g);
            store_record(g, record);
        } else if (verify_cmd->parsed()) {
            std::optional<qadv::Checkpoint> ck;
            if (!verify_ck.empty()) {
                qadv::EnvConfig env;
                env.distance = verify_d;
                ck = load_for(verify_ck, env);
            }
            fs::path path = ensure_out_dir(g) / ("verify_d" + std::to_string(verify_d) + ".csv");
            std::ofstream out(path);
            qadv::write_table_header(out);
            qadv::write_table_header(std::cout);
            for (int n = 1; n <= verify_max; n++) {
                qadv::EnumerationReport r = qadv::verify_decoder(verify_d, n, ck ? &ck->net : nullptr, g.workers);
                qadv::write_table_row(out, r);
                qadv::write_table_row(std::cout, r);
            }
        } else if (threshold_cmd->parsed()) {
            std::optional<qadv::Checkpoint> ck;
            if (!th_ck.empty()) {
                if (th_distances.size() != 1) throw std::invalid_argument("a checkpoint fixes a single distance");
                qadv::EnvConfig env = threshold_env.resolve(g);
                env.distance = th_distances.front();
                ck = load_for(th_ck, env);
            }
            fs::path dir = ensure_out_dir(g);
            std::ofstream csv(dir / "threshold.csv");
            csv << "distance,p,logical_error_rate,failures,rounds\n";
            std::vector<qadv::AnsatzSample> samples;
            for (int d : th_distances) {
                for (double p : th_grid) {
                    qadv::EnvConfig env = threshold_env.resolve(g);
                    env.distance = d;
                    env.noise.p_phys = p;
                    qadv::LogicalErrorEstimate e = qadv::estimate_logical_error_rate(
                        env, ck ? &ck->net : nullptr, th_failures, th_rounds, qadv::derive_seed(g.seed, samples.size()));
                    csv << d << ',' << p << ',' << e.per_round() << ',' << e.failures << ',' << e.rounds << '\n';
                    std::cout << d << ',' << p << ',' << e.per_round() << ',' << e.failures << ',' << e.rounds << '\n';
                    samples.push_back({d, p, e.per_round()});
                }
            }
            qadv::AnsatzFit fit;
            if (th_distances.size() > 1) {
                fit = qadv::fit_ansatz_joint(samples);
            } else {
                std::vector<std::pair<double, double>> pts;
                for (const qadv::AnsatzSample& s : samples) pts.emplace_back(s.p, s.logical_error);
                fit = qadv::fit_ansatz(pts, th_distances.front(), th_hint);
            }
            write_json(dir / "ansatz_fit.json", qadv::to_json(fit));
            std::cout << qadv::to_json(fit).dump() << '\n';
        } else if (robust_cmd->parsed()) {
            qadv::SweepConfig sc;
            sc.env = robust_ck.empty() ? robust_env.resolve(g) : env_for_checkpoint(robust_env, g, robust_ck);
            sc.noise = sc.env.noise;
            sc.error_rates = robust_rates.empty() ? qadv::SweepConfig::default_grid() : robust_rates;
            if (robust_episodes) sc.episodes_per_rate = *robust_episodes;
            if (robust_interval) sc.resample_interval = *robust_interval;
            sc.include_reference = !no_reference;
            sc.seed = g.seed;
            std::optional<qadv::Checkpoint> ck;
            if (!robust_ck.empty()) ck = load_for(robust_ck, sc.env);
            qadv::RunRecord record =
                stamp(qadv::robustness_sweep(ck ? &ck->net : nullptr, sc, g.workers), "robustness", g);
            store_record(g, record);
        } else if (bench_cmd->parsed()) {
            qadv::RefereeSweepConfig rc;
            if (g.config.contains("noise")) rc.noise = g.config.at("noise").get<qadv::NoiseSpec>();
            if (!bench_d.empty()) rc.distances = bench_d;
            if (!bench_sigma.empty()) rc.sigmas = bench_sigma;
            if (!bench_rates.empty()) rc.rates = bench_rates;
            if (bench_steps) rc.steps = *bench_steps;
            rc.seed = g.seed;
            qadv::RunRecord record = stamp(qadv::referee_sweep(rc, g.workers), "referee_bench", g);
            store_record(g, record);
        } else if (dump_cmd->parsed()) {
            std::cout << qadv::Lattice::build(dump_d).to_json().dump(2) << '\n';
        } else if (baseline_cmd->parsed()) {
            qadv::EnvConfig env = baseline_env.resolve(g);
            qadv::Rng rng = qadv::make_rng(g.seed, 0);
            double unprotected = qadv::baseline_unprotected_lifetime(env.noise.p_phys, baseline_trials, rng);
            std::vector<qadv::EpisodeStats> random = qadv::evaluate_random(env, baseline_episodes, g.seed, g.workers);
            std::vector<double> lifetimes;
            for (const qadv::EpisodeStats& s : random) lifetimes.push_back(static_cast<double>(s.lifetime_cycles));
            qadv::Summary rs = qadv::summarize(lifetimes, g.seed);
            json out = {{"distance", env.distance},
                        {"p_phys", env.noise.p_phys},
                        {"unprotected_lifetime", unprotected},
                        {"random_policy", {{"mean", rs.mean}, {"median", rs.median}, {"ci_low", rs.ci_low},
                                           {"ci_high", rs.ci_high}, {"episodes", rs.n}}}};
            std::cout << out.dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
