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

#include "qadv/verifier.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "qadv/dqn.h"
#include "qadv/parallel.h"

namespace qadv {

u128 count_patterns(int distance, int n) {
    if (distance < 1) {
        throw std::invalid_argument("distance must be positive");
    }
    int q = distance * distance;
    if (n < 0 || n > q) {
        throw std::invalid_argument("need 0 <= n <= d*d");
    }
    u128 c = 1;
    for (int k = 1; k <= n; k++) {
        c = c * static_cast<u128>(q - n + k) / static_cast<u128>(k);
    }
    return c << n;
}

std::string to_string_u128(u128 value) {
    if (value == 0) {
        return "0";
    }
    std::string s;
    while (value > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

PatternEnumerator::PatternEnumerator(int distance, int n) {
    if (distance < 1 || n < 0 || n > distance * distance || n > 63) {
        throw std::invalid_argument("invalid pattern enumeration size");
    }
    num_qubits_ = static_cast<size_t>(distance) * distance;
    n_ = static_cast<size_t>(n);
    combo_.resize(n_);
    for (size_t i = 0; i < n_; i++) {
        combo_[i] = i;
    }
}

bool PatternEnumerator::advance_combination() {
    size_t i = n_;
    while (i > 0) {
        i--;
        if (combo_[i] < num_qubits_ - n_ + i) {
            combo_[i]++;
            for (size_t j = i + 1; j < n_; j++) {
                combo_[j] = combo_[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

bool PatternEnumerator::next(PauliFrame& frame) {
    if (exhausted_) {
        return false;
    }
    if (!started_) {
        started_ = true;
    } else if (++assignment_ == (uint64_t{1} << n_)) {
        assignment_ = 0;
        if (n_ == 0 || !advance_combination()) {
            exhausted_ = true;
            return false;
        }
        combo_index_++;
    }
    frame = PauliFrame(num_qubits_);
    for (size_t i = 0; i < n_; i++) {
        bool z = (assignment_ >> (n_ - 1 - i)) & 1;
        frame.apply(combo_[i], z ? Pauli::Z : Pauli::X);
    }
    return true;
}

namespace {

struct Tally {
    uint64_t patterns = 0;
    uint64_t failures = 0;
    uint64_t referee_required = 0;
    uint64_t remaining = 0;
};

}  // namespace

EnumerationReport verify_decoder(int distance, int n, const QNetwork* net, int workers) {
    EnvConfig config;
    config.distance = distance;
    config.noise.p_phys = 0.0;
    config.noise.p_meas = 0.0;
    if (net != nullptr) {
        Checkpoint header;
        header.distance = distance;
        header.depth = config.resolved_depth();
        header.net = *net;
        check_compatible(header, config);
    }
    const u128 total = count_patterns(distance, n);
    MemoryEnv prototype(config, 0);
    auto referee = prototype.shared_referee();

    int w = std::max(1, workers);
    std::vector<Tally> tallies(static_cast<size_t>(w));
    parallel_for(static_cast<size_t>(w), w, [&](int, size_t part) {
        MemoryEnv env(config, 0, referee);
        std::unique_ptr<CachedQ> q;
        if (net != nullptr) {
            q = std::make_unique<CachedQ>(*net);
        }
        Tally& t = tallies[part];
        PatternEnumerator patterns(distance, n);
        PauliFrame frame;
        while (patterns.next(frame)) {
            // Combinations are dealt round-robin so every partition is a fixed set.
            if (patterns.combination_index() % static_cast<uint64_t>(w) != part) {
                continue;
            }
            env.reset_clean();
            env.inject_frame(frame);
            if (q) {
                decode_phase(env, *q);
            }
            size_t remaining = defect_count(env.true_syndrome());
            bool flipped = logical_flipped(env.hidden_frame(), env.lattice()).any();
            t.patterns++;
            t.remaining += remaining;
            t.referee_required += (remaining > 0 || flipped) ? 1 : 0;
            env.finish_round();
            t.failures += env.stats().terminated_by == Termination::referee_failure ? 1 : 0;
        }
    });

    EnumerationReport report;
    report.distance = distance;
    report.n_errors = n;
    report.pattern_count = total;
    report.decoder = net ? "dqn+referee" : "referee";
    uint64_t seen = 0;
    for (const Tally& t : tallies) {
        seen += t.patterns;
        report.failures += t.failures;
        report.referee_required_count += t.referee_required;
        report.remaining_syndromes_sum += t.remaining;
    }
    if (static_cast<u128>(seen) != total) {
        throw std::logic_error("enumeration visited " + std::to_string(seen) + " patterns, expected " +
                               to_string_u128(total));
    }
    report.failure_rate_percent = seen == 0 ? 0.0 : 100.0 * static_cast<double>(report.failures) / static_cast<double>(seen);
    return report;
}

void write_table_header(std::ostream& out) {
    out << "distance,n_errors,patterns,failure_rate_percent,referee_required,remaining_syndromes_sum,decoder\n";
}

void write_table_row(std::ostream& out, const EnumerationReport& r) {
    out << r.distance << ',' << r.n_errors << ',' << to_string_u128(r.pattern_count) << ',' << r.failure_rate_percent
        << ',' << r.referee_required_count << ',' << r.remaining_syndromes_sum << ',' << r.decoder << '\n';
}

LogicalErrorEstimate estimate_logical_error_rate(const EnvConfig& env_config, const QNetwork* net,
                                                 uint64_t target_failures, uint64_t max_rounds, uint64_t seed) {
    EnvConfig config = env_config;
    config.cycle_cap = UINT64_MAX;
    MemoryEnv env(config, seed);
    std::unique_ptr<CachedQ> q;
    if (net != nullptr) {
        q = std::make_unique<CachedQ>(*net);
    }
    LogicalErrorEstimate est{config.distance, config.noise.p_phys, 0, 0};
    env.reset();
    while (est.failures < target_failures && est.rounds < max_rounds) {
        if (q) {
            decode_phase(env, *q);
        } else {
            for (const Correction& c : env.referee().decode(env.observation().last_slice())) {
                env.apply_correction(c.qubit, c.pauli);
            }
        }
        env.finish_round();
        est.rounds++;
        if (env.done()) {
            est.failures++;
            env.reset();
        } else {
            env.begin_round(env.sample_round());
        }
    }
    return est;
}

int ansatz_exponent(int distance) { return (distance + 1) / 2; }

namespace {

void check_sample(double p, double pl) {
    if (!(p > 0) || !(pl > 0)) {
        throw std::invalid_argument("ansatz fit needs positive p and P_L");
    }
}

}  // namespace

AnsatzFit fit_ansatz(const std::vector<std::pair<double, double>>& samples, int distance, double p_th_hint) {
    if (samples.size() < 2) {
        throw std::invalid_argument("ansatz fit needs at least two samples");
    }
    if (!(p_th_hint > 0)) {
        throw std::invalid_argument("threshold hint must be positive");
    }
    const int e = ansatz_exponent(distance);
    bool distinct = false;
    double intercept = 0;
    for (const auto& [p, pl] : samples) {
        check_sample(p, pl);
        distinct |= p != samples.front().first;
        intercept += std::log(pl) - e * std::log(p);
    }
    if (!distinct) {
        throw std::invalid_argument("ansatz fit needs at least two distinct error rates");
    }
    intercept /= static_cast<double>(samples.size());
    double ss = 0;
    for (const auto& [p, pl] : samples) {
        double r = std::log(pl) - (intercept + e * std::log(p));
        ss += r * r;
    }
    AnsatzFit fit;
    fit.exponent = e;
    fit.p_th = p_th_hint;
    fit.alpha = std::exp(intercept + e * std::log(p_th_hint));
    fit.residual = std::sqrt(ss / static_cast<double>(samples.size()));
    return fit;
}

AnsatzFit fit_ansatz_joint(const std::vector<AnsatzSample>& samples) {
    // log P_L - e log p = log(alpha) - e log(p_th): linear in (log alpha, log p_th).
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    bool distinct_e = false;
    for (const AnsatzSample& s : samples) {
        check_sample(s.p, s.logical_error);
        double e = ansatz_exponent(s.distance);
        distinct_e |= ansatz_exponent(s.distance) != ansatz_exponent(samples.front().distance);
        double y = std::log(s.logical_error) - e * std::log(s.p);
        s11 += 1;
        s12 += -e;
        s22 += e * e;
        b1 += y;
        b2 += -e * y;
    }
    if (samples.size() < 2 || !distinct_e) {
        throw std::invalid_argument("joint ansatz fit needs distances with different exponents");
    }
    double det = s11 * s22 - s12 * s12;
    double log_alpha = (b1 * s22 - s12 * b2) / det;
    double log_pth = (s11 * b2 - s12 * b1) / det;
    double ss = 0;
    for (const AnsatzSample& s : samples) {
        double e = ansatz_exponent(s.distance);
        double r = std::log(s.logical_error) - (log_alpha + e * (std::log(s.p) - log_pth));
        ss += r * r;
    }
    AnsatzFit fit;
    fit.alpha = std::exp(log_alpha);
    fit.p_th = std::exp(log_pth);
    fit.residual = std::sqrt(ss / static_cast<double>(samples.size()));
    return fit;
}

nlohmann::json to_json(const AnsatzFit& fit) {
    nlohmann::json j = {{"alpha", fit.alpha}, {"p_th", fit.p_th}, {"residual", fit.residual}};
    if (fit.exponent > 0) {
        j["exponent"] = fit.exponent;
    }
    return j;
}

}  // namespace qadv
