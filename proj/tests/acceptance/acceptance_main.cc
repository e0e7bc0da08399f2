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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qadv/attack.h"
#include "qadv/dqn.h"
#include "qadv/experiments.h"
#include "qadv/lattice.h"
#include "qadv/matching.h"
#include "qadv/memory_env.h"
#include "qadv/noise.h"
#include "qadv/qnetwork.h"
#include "qadv/rng.h"
#include "qadv/verifier.h"

namespace qadv {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string detail;
    json data = json::object();
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

std::string fmt(const Summary& s) {
    return fmt(s.mean) + " [" + fmt(s.ci_low) + ", " + fmt(s.ci_high) + "]";
}

json to_json_summary(const Summary& s) {
    return {{"n", s.n}, {"mean", s.mean}, {"median", s.median}, {"ci_low", s.ci_low}, {"ci_high", s.ci_high}};
}

std::vector<double> lifetimes_of(const std::vector<EpisodeStats>& stats) {
    std::vector<double> out;
    for (const EpisodeStats& s : stats) out.push_back(static_cast<double>(s.lifetime_cycles));
    return out;
}

std::vector<double> lifetimes_of(const std::vector<AttackResult>& results) {
    std::vector<double> out;
    for (const AttackResult& r : results) out.push_back(static_cast<double>(r.lifetime_cycles));
    return out;
}

EnvConfig training_env() {
    EnvConfig env;
    env.distance = 3;
    env.noise.p_phys = 0.005;
    return env;
}

// 1
Outcome pattern_counts() {
    struct Row {
        int d, n;
        uint64_t expected;
    };
    const Row rows[] = {{3, 1, 18},  {3, 2, 144},  {3, 3, 672},    {5, 1, 50},    {5, 2, 1200},
                        {5, 3, 18400}, {7, 1, 98},  {7, 2, 4704},  {7, 3, 147392}};
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string bad;
    for (const Row& r : rows) {
        u128 got = count_patterns(r.d, r.n);
        if (got != r.expected) {
            ok = false;
            bad += " d=" + std::to_string(r.d) + ",n=" + std::to_string(r.n) + " got " + to_string_u128(got);
        }
    }
    double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    return {ok, "9/9 table counts " + std::string(bad.empty() ? "exact" : "mismatch:" + bad) + ", " + fmt(secs) + " s",
            {{"seconds", secs}}};
}

// 2
Outcome correction_radius(int workers) {
    bool ok = true;
    std::string detail;
    json data = json::array();
    for (int d : {3, 5, 7}) {
        for (int n = 1; n <= (d - 1) / 2; n++) {
            EnumerationReport r = verify_decoder(d, n, nullptr, workers);
            ok = ok && r.failures == 0;
            detail += " d" + std::to_string(d) + "n" + std::to_string(n) + ":" + std::to_string(r.failures) + "/" +
                      to_string_u128(r.pattern_count);
            data.push_back({{"distance", d}, {"n", n}, {"patterns", to_string_u128(r.pattern_count)},
                            {"failures", r.failures}});
        }
    }
    return {ok, "referee failures per enumeration" + detail, data};
}

// Independent oracle: recursion over every pairing or boundary assignment.
double brute_force_pairing(size_t k, const std::vector<double>& pair, const std::vector<double>& boundary) {
    std::vector<bool> used(k, false);
    std::function<double(size_t)> rec = [&](size_t i) -> double {
        while (i < k && used[i]) i++;
        if (i == k) return 0.0;
        used[i] = true;
        double best = boundary[i] + rec(i + 1);
        for (size_t j = i + 1; j < k; j++) {
            if (used[j]) continue;
            used[j] = true;
            best = std::min(best, pair[i * k + j] + rec(i + 1));
            used[j] = false;
        }
        used[i] = false;
        return best;
    };
    return rec(0);
}

// 3
Outcome matching_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng = make_rng(3, 0);
    size_t checked = 0, mismatches = 0;
    for (int d : {3, 5, 7}) {
        Lattice lattice = Lattice::build(d);
        MatchingGraphs graphs = build_matching_graphs(lattice);
        for (int trial = 0; trial < 1000; trial++) {
            const MatchingGraph& g = trial % 2 == 0 ? graphs.graph_x : graphs.graph_z;
            size_t limit = std::min<size_t>(8, g.num_detectors());
            size_t k = 1 + uniform_index(rng, limit);
            std::vector<size_t> nodes(g.num_detectors());
            for (size_t i = 0; i < nodes.size(); i++) nodes[i] = i;
            for (size_t i = 0; i < k; i++) std::swap(nodes[i], nodes[i + uniform_index(rng, nodes.size() - i)]);
            nodes.resize(k);
            std::vector<double> pair(k * k, 0.0), boundary(k);
            for (size_t a = 0; a < k; a++) {
                boundary[a] = g.boundary_distance(nodes[a]);
                for (size_t b = 0; b < k; b++) pair[a * k + b] = g.distance(nodes[a], nodes[b]);
            }
            double oracle = brute_force_pairing(k, pair, boundary);
            for (MatchingAlgorithm alg : {MatchingAlgorithm::automatic, MatchingAlgorithm::blossom}) {
                DefectMatching m = match_defects(k, pair, boundary, alg);
                if (std::abs(m.weight - oracle) > 1e-9) mismatches++;
            }
            checked++;
        }
    }
    double secs = seconds_since(t0);
    bool ok = mismatches == 0 && secs < 60.0;
    return {ok,
            std::to_string(checked) + " defect sets, " + std::to_string(mismatches) + " mismatches (dp and blossom), " +
                fmt(secs) + " s",
            {{"checked", checked}, {"mismatches", mismatches}}};
}

// 4
double gradient_relative_error(Rng& rng) {
    int in = 3 + static_cast<int>(uniform_index(rng, 6));
    int h1 = 2 + static_cast<int>(uniform_index(rng, 8));
    int h2 = 2 + static_cast<int>(uniform_index(rng, 8));
    int out = 2 + static_cast<int>(uniform_index(rng, 5));
    QNetwork net = QNetwork::random({in, h1, h2, out}, rng);
    std::vector<double> params = net.parameters();
    for (double& p : params) p += normal(rng, 0.0, 0.1);
    net.set_parameters(params);
    size_t batch = 1 + uniform_index(rng, 8);
    Eigen::MatrixXd x(in, static_cast<Eigen::Index>(batch));
    for (Eigen::Index c = 0; c < x.cols(); c++) {
        for (Eigen::Index r = 0; r < x.rows(); r++) x(r, c) = bernoulli(rng, 0.5) ? 1.0 : 0.0;
    }
    std::vector<size_t> actions(batch);
    std::vector<double> targets(batch);
    for (size_t i = 0; i < batch; i++) {
        actions[i] = uniform_index(rng, out);
        targets[i] = normal(rng, 0.0, 2.0);
    }
    NetworkGradients grads;
    net.td_loss(x, actions, targets, &grads);
    std::vector<double> analytic = flatten(grads);
    const double h = 1e-5;
    double diff2 = 0, norm_a = 0, norm_n = 0;
    QNetwork probe = net;
    for (size_t k = 0; k < params.size(); k++) {
        std::vector<double> shifted = params;
        shifted[k] = params[k] + h;
        probe.set_parameters(shifted);
        double up = probe.td_loss(x, actions, targets, nullptr);
        shifted[k] = params[k] - h;
        probe.set_parameters(shifted);
        double down = probe.td_loss(x, actions, targets, nullptr);
        double numeric = (up - down) / (2 * h);
        diff2 += (numeric - analytic[k]) * (numeric - analytic[k]);
        norm_a += analytic[k] * analytic[k];
        norm_n += numeric * numeric;
    }
    double scale = std::max(std::sqrt(norm_a), std::sqrt(norm_n));
    return scale == 0 ? 0.0 : std::sqrt(diff2) / scale;
}

Outcome gradient_check() {
    Rng rng = make_rng(4, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; trial++) worst = std::max(worst, gradient_relative_error(rng));
    return {worst <= 1e-4, "50 networks, worst relative error " + fmt(worst, 3) + " (limit 1e-4)", {{"worst", worst}}};
}

// 5
Outcome training_efficacy(const QNetwork& net, int workers, const std::string& provenance) {
    EnvConfig env = training_env();
    Summary trained = summarize(lifetimes_of(evaluate_policy(net, env, 500, 5001, workers)), 5);
    Summary random = summarize(lifetimes_of(evaluate_random(env, 500, 5002, workers)), 5);
    double ratio = trained.mean / random.mean;
    bool ok = ratio >= 5.0 && cis_disjoint(trained, random);
    return {ok,
            "trained " + fmt(trained) + " vs random " + fmt(random) + ", ratio " + fmt(ratio) + " (need >= 5, disjoint CIs)" +
                provenance,
            {{"trained", to_json_summary(trained)}, {"random", to_json_summary(random)}, {"ratio", ratio}}};
}

Summary attack_summary(const QNetwork& net, double p, Strategy strategy, size_t n, int workers, uint64_t seed) {
    EnvConfig env = training_env();
    env.noise.p_phys = p;
    AttackConfig ac;
    ac.strategy = strategy;
    ac.n_samples = n;
    ac.repetitions = 500;
    ac.seed = seed;
    ac.record_chain = false;
    return summarize(lifetimes_of(run_attacks(net, env, ac, workers)), seed);
}

// 6
Outcome min_attack(const QNetwork& net, int workers) {
    std::vector<size_t> ns = {1, 8, 16, 32};
    std::vector<Summary> s;
    json data = json::object();
    std::string detail;
    for (size_t n : ns) {
        s.push_back(attack_summary(net, 0.001, Strategy::min, n, workers, 600 + n));
        data["N" + std::to_string(n)] = to_json_summary(s.back());
        detail += " N=" + std::to_string(n) + ": " + fmt(s.back());
    }
    bool monotone = true;
    for (size_t i = 1; i < s.size(); i++) monotone = monotone && s[i].mean <= s[i - 1].mean;
    double ratio = s[0].mean / s[2].mean;
    bool ok = ratio >= 10.0 && cis_disjoint(s[0], s[2]) && monotone;
    return {ok,
            "MIN at p=0.001;" + detail + "; N=1/N=16 = " + fmt(ratio) + " (need >= 10), monotone " +
                (monotone ? "yes" : "no"),
            data};
}

// 7
Outcome max_attack(const QNetwork& net, int workers) {
    Summary one = attack_summary(net, 0.006, Strategy::max, 1, workers, 701);
    Summary four = attack_summary(net, 0.006, Strategy::max, 4, workers, 704);
    double ratio = four.mean / one.mean;
    bool ok = ratio >= 1.5 && cis_disjoint(one, four);
    return {ok,
            "MAX at p=0.006; N=1: " + fmt(one) + " N=4: " + fmt(four) + ", ratio " + fmt(ratio) +
                " (need >= 1.5, disjoint CIs)",
            {{"N1", to_json_summary(one)}, {"N4", to_json_summary(four)}, {"ratio", ratio}}};
}

// 8
Outcome constrained_filter(const QNetwork& net, int workers) {
    EnvConfig env = training_env();
    env.noise.p_phys = 0.01;
    AttackConfig ac;
    ac.strategy = Strategy::min;
    ac.n_samples = 8;
    ac.repetitions = 200;
    ac.max_errors_per_round = 2;
    ac.seed = 801;
    ac.record_chain = true;
    std::vector<AttackResult> results = run_attacks(net, env, ac, workers);
    size_t rounds = 0, violations = 0;
    uint64_t drawn = 0, rejected = 0;
    for (const AttackResult& r : results) {
        for (const RoundSample& round : r.chain) {
            rounds++;
            if (round.distinct_qubits() > 2) violations++;
        }
        drawn += r.candidates_drawn;
        rejected += r.candidates_rejected;
    }
    MemoryEnv probe(env, 0);
    double q = analytic_rejection_rate(0.01, probe.depth(), probe.num_qubits(), 2);
    double observed = static_cast<double>(rejected) / static_cast<double>(drawn);
    double se = std::sqrt(q * (1 - q) / static_cast<double>(drawn));
    double z = (observed - q) / se;
    bool ok = violations == 0 && rounds > 0 && std::abs(z) <= 3.0;
    return {ok,
            std::to_string(rounds) + " committed rounds, " + std::to_string(violations) + " over budget; rejection " +
                fmt(observed, 5) + " vs analytic " + fmt(q, 5) + " over " + std::to_string(drawn) + " draws, z = " +
                fmt(z, 3),
            {{"rounds", rounds}, {"violations", violations}, {"observed", observed}, {"analytic", q},
             {"draws", drawn}, {"z", z}}};
}

// 9
Outcome temporal_mean() {
    double worst = 0.0;
    Rng rng = make_rng(9, 0);
    for (double p : {0.001, 0.005, 0.01}) {
        for (double beta_frac : {0.0, 0.3, 1.0}) {
            for (uint64_t period : {100u, 1000u, 4096u}) {
                NoiseSpec spec;
                spec.p_phys = p;
                spec.temporal = TemporalNoise{beta_frac * p, 1.0 / static_cast<double>(period), true};
                NoiseSpec inst = instantiate(spec, 3, rng);
                uint64_t offset = uniform_index(rng, 100000);
                for (size_t qubit = 0; qubit < inst.num_qubits(); qubit++) {
                    double sum = 0.0;
                    for (uint64_t t = 0; t < period; t++) sum += error_prob(inst, qubit, offset + t);
                    worst = std::max(worst, std::abs(sum / static_cast<double>(period) - p));
                }
            }
        }
    }
    return {worst <= 1e-10, "worst |period mean - base| = " + fmt(worst, 3) + " (limit 1e-10)", {{"worst", worst}}};
}

// 10
Outcome ansatz_recovery() {
    const double alpha = 0.07, pth = 0.0103;
    std::vector<AnsatzSample> joint;
    double worst_single = 0.0;
    for (int d : {3, 5, 7}) {
        std::vector<std::pair<double, double>> pts;
        for (double p : {0.0008, 0.0015, 0.003, 0.005, 0.007}) {
            double pl = alpha * std::pow(p / pth, ansatz_exponent(d));
            pts.push_back({p, pl});
            joint.push_back({d, p, pl});
        }
        AnsatzFit f = fit_ansatz(pts, d, pth);
        worst_single = std::max(worst_single, std::abs(f.alpha / alpha - 1));
    }
    AnsatzFit j = fit_ansatz_joint(joint);
    double ea = std::abs(j.alpha / alpha - 1), ep = std::abs(j.p_th / pth - 1);
    bool ok = ea <= 1e-6 && ep <= 1e-6 && worst_single <= 1e-6;
    return {ok,
            "joint fit over d=3,5,7: alpha err " + fmt(ea, 3) + ", p_th err " + fmt(ep, 3) +
                "; per-distance alpha err " + fmt(worst_single, 3) + " (limit 1e-6)",
            {{"alpha_error", ea}, {"p_th_error", ep}, {"single_alpha_error", worst_single}}};
}

// 11
std::string strip_last_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
    return out;
}

Outcome determinism(const QNetwork& net, int workers) {
    EnvConfig env = training_env();
    TrainConfig tc;
    tc.total_steps = 4000;
    tc.learning_starts = 500;
    tc.epsilon_decay_steps = 2000;
    tc.target_sync = 500;
    tc.hidden = {32, 32};
    tc.eval_interval = 2000;
    tc.eval_episodes = 5;
    tc.seed = 11;
    auto train_once = [&] { return checkpoint_to_json(train(env, tc, nullptr, workers).checkpoint).dump(); };
    bool ck_same = train_once() == train_once();

    EnvConfig atk_env = env;
    atk_env.noise.p_phys = 0.002;
    AttackConfig ac;
    ac.strategy = Strategy::min;
    ac.n_samples = 8;
    ac.repetitions = 30;
    ac.seed = 1101;
    auto chains_once = [&] {
        json out = json::array();
        for (const AttackResult& r : run_attacks(net, atk_env, ac, workers)) {
            json j = to_json(r);
            j.erase("seconds");
            out.push_back(j);
        }
        return out.dump();
    };
    bool chains_same = chains_once() == chains_once();

    SweepConfig sc;
    sc.error_rates = {0.004, 0.008};
    sc.episodes_per_rate = 30;
    sc.env = env;
    sc.noise = env.noise;
    sc.noise.spatial = SpatialPattern::gaussian;
    sc.noise.sigma = 0.0005;
    sc.seed = 1102;
    // wall-clock seconds are the one field that cannot repeat
    auto sweep_once = [&] {
        RunRecord r = robustness_sweep(&net, sc, workers);
        r.id = "determinism";
        std::ostringstream lifetimes, summary;
        write_lifetimes_csv(lifetimes, r);
        write_summary_csv(summary, r);
        return lifetimes.str() + strip_last_column(summary.str());
    };
    bool sweep_same = sweep_once() == sweep_once();
    bool ok = ck_same && chains_same && sweep_same;
    auto yn = [](bool b) { return b ? "identical" : "DIFFERENT"; };
    return {ok,
            std::string("checkpoints ") + yn(ck_same) + ", attack chains " + yn(chains_same) + ", sweep CSVs " +
                yn(sweep_same) + " (timing column excluded)",
            {{"checkpoints", ck_same}, {"chains", chains_same}, {"sweep", sweep_same}}};
}

// 12
Outcome robustness(const QNetwork& net, int workers) {
    double worst = 1.0;
    std::string worst_at;
    json data = json::array();
    std::vector<double> reference;
    for (double sigma : {0.0005, 0.0001}) {
        SweepConfig sc;
        sc.error_rates = SweepConfig::default_grid();
        sc.episodes_per_rate = 500;
        sc.env = training_env();
        sc.noise = sc.env.noise;
        sc.noise.spatial = SpatialPattern::gaussian;
        sc.noise.sigma = sigma;
        sc.seed = 1201;
        sc.include_reference = reference.empty();
        RunRecord r = robustness_sweep(&net, sc, workers);
        std::vector<double> treatment;
        for (const RunCell& c : r.cells) {
            if (c.key.at("curve") == "reference") {
                reference.push_back(c.summary.mean);
            } else {
                treatment.push_back(c.summary.mean);
            }
        }
        for (size_t i = 0; i < treatment.size(); i++) {
            double ratio = std::max(treatment[i] / reference[i], reference[i] / treatment[i]);
            data.push_back({{"sigma", sigma}, {"p", sc.error_rates[i]}, {"treatment", treatment[i]},
                            {"reference", reference[i]}, {"ratio", ratio}});
            if (ratio > worst) {
                worst = ratio;
                worst_at = "sigma=" + fmt(sigma) + ", p=" + fmt(sc.error_rates[i]);
            }
        }
    }
    return {worst < 2.0, "worst lifetime ratio " + fmt(worst) + " at " + worst_at + " over 13 rates x 2 sigmas (need < 2)",
            data};
}

}  // namespace
}  // namespace qadv

int main(int argc, char** argv) {
    using namespace qadv;
    CLI::App app{"qadv acceptance checks"};
    std::string workdir = "acceptance_work";
    std::string checkpoint_path;
    int workers = 1;
    std::vector<int> only;
    app.add_option("--workdir", workdir, "scratch and report directory");
    app.add_option("--checkpoint", checkpoint_path, "reuse a trained d=3 checkpoint instead of training");
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--criteria", only, "run only these criteria")->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(workdir);

    json report = json::object();
    std::ostringstream summary;
    {
        std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::localtime(&now));
        summary << "acceptance run started " << stamp << '\n';
    }
    int failed = 0;
    auto selected = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    auto run = [&](int id, const std::string& name, const std::function<Outcome()>& check) {
        if (!selected(id)) return;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = seconds_since(t0);
        failed += o.pass ? 0 : 1;
        std::ostringstream line;
        line << "criterion " << std::setw(2) << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": "
             << o.detail << " [" << fmt(secs) << " s]";
        std::cout << line.str() << std::endl;
        summary << line.str() << '\n';
        report[std::to_string(id)] = {{"name", name}, {"pass", o.pass}, {"detail", o.detail}, {"data", o.data},
                                      {"seconds", secs}};
    };

    run(1, "pattern-count exactness", [] { return pattern_counts(); });
    run(2, "MWPM correction radius", [&] { return correction_radius(workers); });
    run(3, "matching optimality oracle", [] { return matching_oracle(); });
    run(4, "gradient correctness", [] { return gradient_check(); });
    run(9, "temporal-noise mean", [] { return temporal_mean(); });
    run(10, "ansatz-fit recovery", [] { return ansatz_recovery(); });

    // The trained d=3 decoder backs criteria 5-8, 11 and 12.
    std::optional<QNetwork> net;
    std::string provenance;
    bool needs_net = false;
    for (int id : {5, 6, 7, 8, 11, 12}) needs_net = needs_net || selected(id);
    try {
        auto t0 = std::chrono::steady_clock::now();
        if (!needs_net) {
        } else if (!checkpoint_path.empty()) {
            Checkpoint ck = load_checkpoint(checkpoint_path);
            check_compatible(ck, training_env());
            net = ck.net;
            provenance = "; checkpoint " + checkpoint_path;
        } else {
            TrainConfig tc;
            TrainResult result = train(training_env(), tc, nullptr, workers);
            fs::path path = fs::path(workdir) / "checkpoint_d3.json";
            save_checkpoint(result.checkpoint, path.string());
            std::ofstream curve(fs::path(workdir) / "learning_curve.csv");
            write_learning_curve(curve, result.curve);
            net = result.checkpoint.net;
            provenance = "; trained " + std::to_string(tc.total_steps) + " steps in " + fmt(seconds_since(t0)) +
                         " s, snapshot from step " + std::to_string(result.selected_step);
        }
    } catch (const std::exception& e) {
        provenance = std::string("; training failed: ") + e.what();
    }
    auto with_net = [&](const std::function<Outcome(const QNetwork&)>& f) {
        return [&, f] {
            if (!net) return Outcome{false, "no trained decoder" + provenance};
            return f(*net);
        };
    };
    run(5, "training efficacy", with_net([&](const QNetwork& n) { return training_efficacy(n, workers, provenance); }));
    run(6, "attack efficacy (MIN)", with_net([&](const QNetwork& n) { return min_attack(n, workers); }));
    run(7, "MAX anti-attack direction", with_net([&](const QNetwork& n) { return max_attack(n, workers); }));
    run(8, "constrained-attack filter", with_net([&](const QNetwork& n) { return constrained_filter(n, workers); }));
    run(11, "determinism", with_net([&](const QNetwork& n) { return determinism(n, workers); }));
    run(12, "robustness sanity", with_net([&](const QNetwork& n) { return robustness(n, workers); }));

    std::ofstream(fs::path(workdir) / "acceptance_report.json") << report.dump(2) << '\n';
    std::string verdict = failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed";
    std::cout << verdict << std::endl;
    summary << verdict << '\n';
    std::ofstream(fs::path(workdir) / "acceptance_summary.txt") << summary.str();
    return failed == 0 ? 0 : 1;
}
