#include "debatelab/selfdebate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <string>

namespace debatelab {

namespace {

constexpr std::uint64_t kFirstRolloutSalt = 0;
constexpr std::uint64_t kPairingSalt = 1;
constexpr std::uint64_t kDebateRolloutSalt = 2;
// train_self_debate splits each step's stream into a step branch and a delta branch
constexpr std::uint64_t kStepBranch = 1;
constexpr std::uint64_t kDeltaBranch = 2;

std::vector<double> softmax(std::span<const double> logits) {
    const double hi = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        probs[k] = std::exp(logits[k] - hi);
        total += probs[k];
    }
    for (double& v : probs) {
        v /= total;
    }
    return probs;
}

double log_softmax_at(std::span<const double> logits, std::size_t idx) {
    const double hi = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double v : logits) {
        total += std::exp(v - hi);
    }
    return logits[idx] - hi - std::log(total);
}

}  // namespace

void ToyTask::validate() const {
    if (num_prompts < 1 || answer_count < 2) {
        throw ConfigError("task needs at least one prompt and two answers");
    }
    if (static_cast<int>(correct.size()) != num_prompts ||
        static_cast<int>(init_correct_prob.size()) != num_prompts) {
        throw ConfigError("task arrays must cover every prompt");
    }
    for (Label c : correct) {
        if (c < 1 || c > answer_count) {
            throw ConfigError("correct label outside the answer set");
        }
    }
    for (double p : init_correct_prob) {
        if (!(p > 0.0) || !(p < 1.0)) {
            throw ConfigError("initial correct probability must lie in (0,1)");
        }
    }
}

ToyTask make_task(int prompts, int answers, double prob_lo, double prob_hi, RngStream& rng) {
    if (!(prob_lo > 0.0) || !(prob_hi < 1.0) || prob_lo > prob_hi) {
        throw ConfigError("probability range must satisfy 0 < lo <= hi < 1");
    }
    ToyTask task;
    task.num_prompts = prompts;
    task.answer_count = answers;
    task.correct.resize(static_cast<std::size_t>(prompts));
    task.init_correct_prob.resize(static_cast<std::size_t>(prompts));
    for (int m = 0; m < prompts; ++m) {
        task.correct[static_cast<std::size_t>(m)] =
            static_cast<Label>(rng.below(static_cast<std::uint64_t>(answers))) + 1;
        task.init_correct_prob[static_cast<std::size_t>(m)] =
            prob_lo + (prob_hi - prob_lo) * rng.next_double();
    }
    task.validate();
    return task;
}

TabularPolicy::TabularPolicy(const ToyTask& task) : m_(task.num_prompts), k_(task.answer_count) {
    task.validate();
    first_.assign(static_cast<std::size_t>(m_) * k_, 0.0);
    second_.assign(static_cast<std::size_t>(m_) * k_ * k_ * k_, 0.0);
    for (int m = 0; m < m_; ++m) {
        // with the other logits at zero, logit b gives the correct answer
        // probability p = e^b / (e^b + K - 1)
        const double p = task.init_correct_prob[static_cast<std::size_t>(m)];
        const double b = std::log(p * (k_ - 1) / (1.0 - p));
        first_[first_index(m, task.correct[static_cast<std::size_t>(m)])] = b;
    }
}

TabularPolicy::TabularPolicy(int prompts, int answers, std::vector<double> first_logits,
                             std::vector<double> second_logits)
    : m_(prompts), k_(answers), first_(std::move(first_logits)), second_(std::move(second_logits)) {
    if (m_ < 1 || k_ < 2) {
        throw ConfigError("policy needs at least one prompt and two answers");
    }
    if (first_.size() != static_cast<std::size_t>(m_) * k_ ||
        second_.size() != static_cast<std::size_t>(m_) * k_ * k_ * k_) {
        throw DimensionMismatchError("policy tables have the wrong size");
    }
    for (double v : first_) {
        if (!std::isfinite(v)) {
            throw ConfigError("policy logits must be finite");
        }
    }
    for (double v : second_) {
        if (!std::isfinite(v)) {
            throw ConfigError("policy logits must be finite");
        }
    }
}

std::size_t TabularPolicy::first_index(int prompt, Label answer) const {
    if (prompt < 0 || prompt >= m_ || answer < 1 || answer > k_) {
        throw DimensionMismatchError("prompt or answer outside the policy tables");
    }
    return static_cast<std::size_t>(prompt) * k_ + (answer - 1);
}

std::size_t TabularPolicy::second_row(int prompt, Label a1, Label a2) const {
    if (prompt < 0 || prompt >= m_ || a1 < 1 || a1 > k_ || a2 < 1 || a2 > k_) {
        throw DimensionMismatchError("debate context outside the policy tables");
    }
    return ((static_cast<std::size_t>(prompt) * k_ + (a1 - 1)) * k_ + (a2 - 1)) * k_;
}

std::vector<double> TabularPolicy::first_turn_probs(int prompt) const {
    return softmax(std::span(first_).subspan(first_index(prompt, 1), k_));
}

std::vector<double> TabularPolicy::second_turn_probs(int prompt, Label a1, Label a2) const {
    return softmax(std::span(second_).subspan(second_row(prompt, a1, a2), k_));
}

double TabularPolicy::first_turn_logprob(int prompt, Label answer) const {
    return log_softmax_at(std::span(first_).subspan(first_index(prompt, 1), k_),
                          static_cast<std::size_t>(answer - 1));
}

double TabularPolicy::second_turn_logprob(int prompt, Label a1, Label a2, Label answer) const {
    if (answer < 1 || answer > k_) {
        throw DimensionMismatchError("answer outside the policy tables");
    }
    return log_softmax_at(std::span(second_).subspan(second_row(prompt, a1, a2), k_),
                          static_cast<std::size_t>(answer - 1));
}

Label TabularPolicy::sample_first(int prompt, RngStream& rng) const {
    return rng.categorical(first_turn_probs(prompt)) + 1;
}

Label TabularPolicy::sample_second(int prompt, Label a1, Label a2, RngStream& rng) const {
    return rng.categorical(second_turn_probs(prompt, a1, a2)) + 1;
}

double TabularPolicy::expected_first_turn_accuracy(const ToyTask& task) const {
    double acc = 0.0;
    for (int m = 0; m < m_; ++m) {
        acc += first_turn_probs(m)[static_cast<std::size_t>(
            task.correct[static_cast<std::size_t>(m)] - 1)];
    }
    return acc / m_;
}

void TabularPolicy::ascend(std::span<const double> grad_first, std::span<const double> grad_second,
                           double first_rate, double second_rate) {
    if (grad_first.size() != first_.size() || grad_second.size() != second_.size()) {
        throw DimensionMismatchError("gradient tables have the wrong size");
    }
    for (std::size_t i = 0; i < first_.size(); ++i) {
        first_[i] += first_rate * grad_first[i];
    }
    for (std::size_t i = 0; i < second_.size(); ++i) {
        second_[i] += second_rate * grad_second[i];
    }
}

std::pair<std::vector<double>, bool> grpo_advantages(std::span<const double> rewards) {
    const std::size_t g = rewards.size();
    if (g < 2) {
        throw Error("advantage groups need at least two rewards");
    }
    double mean = 0.0;
    for (double r : rewards) {
        mean += r;
    }
    mean /= static_cast<double>(g);
    double var = 0.0;
    for (double r : rewards) {
        var += (r - mean) * (r - mean);
    }
    var /= static_cast<double>(g);  // population std
    const double sd = std::sqrt(var);

    std::vector<double> adv(g, 0.0);
    if (sd == 0.0) {
        return {std::move(adv), true};
    }
    for (std::size_t i = 0; i < g; ++i) {
        adv[i] = (rewards[i] - mean) / sd;
    }
    return {std::move(adv), false};
}

bool dynamic_sampling_keep(std::span<const Label> answers, Label correct, int group_size) {
    if (static_cast<int>(answers.size()) != group_size) {
        throw DimensionMismatchError("answer list does not match the group size");
    }
    int hits = 0;
    for (Label y : answers) {
        hits += (y == correct);
    }
    return hits > 0 && hits < group_size;
}

DapoResult dapo_surrogate(std::span<const double> logp_new, std::span<const double> logp_old,
                          std::span<const double> advantages, std::span<const int> lengths,
                          const ClipConfig& clip) {
    if (!(clip.eps_low > 0.0) || !(clip.eps_low < 1.0) || !(clip.eps_high > 0.0) ||
        !(clip.eps_high < 1.0)) {
        throw Error("clip bounds must lie in (0,1)");
    }
    if (advantages.size() != lengths.size()) {
        throw DimensionMismatchError("one advantage per response is required");
    }
    std::size_t total_tokens = 0;
    for (int len : lengths) {
        if (len < 1) {
            throw Error("response lengths must be positive");
        }
        total_tokens += static_cast<std::size_t>(len);
    }
    if (logp_new.size() != total_tokens || logp_old.size() != total_tokens) {
        throw DimensionMismatchError("token log-probabilities must match the total length");
    }
    for (double v : logp_new) {
        if (!std::isfinite(v)) {
            throw Error("nonfinite log-probability");
        }
    }
    for (double v : logp_old) {
        if (!std::isfinite(v)) {
            throw Error("nonfinite log-probability");
        }
    }
    for (double v : advantages) {
        if (!std::isfinite(v)) {
            throw Error("nonfinite advantage");
        }
    }

    const double lo = 1.0 - clip.eps_low;
    const double hi = 1.0 + clip.eps_high;
    const double scale = 1.0 / static_cast<double>(total_tokens);

    DapoResult out;
    out.grad_logp_new.assign(total_tokens, 0.0);
    std::size_t tok = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double a = advantages[i];
        for (int t = 0; t < lengths[i]; ++t, ++tok) {
            const double r = std::exp(logp_new[tok] - logp_old[tok]);
            const double unclipped = r * a;
            const double clipped = std::clamp(r, lo, hi) * a;
            if (unclipped <= clipped) {  // ties resolve to the unclipped branch
                out.value += scale * unclipped;
                out.grad_logp_new[tok] = scale * r * a;  // d/dlogp exp(logp - old) = r
            } else {
                out.value += scale * clipped;
            }
        }
    }
    return out;
}

DebatePair build_debate_pair(int prompt_id, std::span<const Label> answers, PairingRule rule,
                             RngStream& rng) {
    const std::size_t n = answers.size();
    if (n < 2) {
        throw Error("debate pairs need at least two rollouts");
    }
    DebatePair pair;
    pair.prompt_id = prompt_id;
    pair.rule = rule;

    if (rule == PairingRule::Random) {
        const auto i = rng.below(n);
        auto j = rng.below(n - 1);
        if (j >= i) {
            ++j;
        }
        pair.first_index = static_cast<int>(i);
        pair.second_index = static_cast<int>(j);
        pair.first_answer = answers[i];
        pair.second_answer = answers[j];
        return pair;
    }

    // frequency rule: modal and second-modal answer labels
    const Label max_label = *std::max_element(answers.begin(), answers.end());
    std::vector<int> tally(static_cast<std::size_t>(max_label), 0);
    for (Label y : answers) {
        ++tally[static_cast<std::size_t>(y - 1)];
    }
    int modal = -1, runner = -1;
    for (int k = 0; k < max_label; ++k) {
        const int c = tally[static_cast<std::size_t>(k)];
        if (c == 0) {
            continue;
        }
        if (modal < 0 || c > tally[static_cast<std::size_t>(modal)]) {
            runner = modal;
            modal = k;
        } else if (runner < 0 || c > tally[static_cast<std::size_t>(runner)]) {
            runner = k;
        }
    }
    if (runner < 0) {
        throw PairingDegenerateError("frequency pairing needs two distinct answers");
    }

    auto pick_representative = [&](int label_idx) {
        const int count = tally[static_cast<std::size_t>(label_idx)];
        auto target = rng.below(static_cast<std::uint64_t>(count));
        for (std::size_t i = 0; i < n; ++i) {
            if (answers[i] == label_idx + 1 && target-- == 0) {
                return static_cast<int>(i);
            }
        }
        throw Error("representative lookup failed");
    };

    pair.first_index = pick_representative(modal);
    pair.second_index = pick_representative(runner);
    pair.first_answer = modal + 1;
    pair.second_answer = runner + 1;
    if (rng.bernoulli(0.5)) {
        std::swap(pair.first_index, pair.second_index);
        std::swap(pair.first_answer, pair.second_answer);
        pair.order_swapped = true;
    }
    return pair;
}

BatchEval eval_dapo_on_batch(const TabularPolicy& policy, const TrainBatch& batch,
                             const ClipConfig& clip) {
    const std::size_t n = batch.responses.size();
    std::vector<double> logp_new(n), logp_old(n), advantages(n);
    std::vector<int> lengths(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const BatchResponse& r = batch.responses[i];
        logp_new[i] = r.debate ? policy.second_turn_logprob(r.prompt, r.presented_first,
                                                            r.presented_second, r.answer)
                               : policy.first_turn_logprob(r.prompt, r.answer);
        logp_old[i] = r.logp_old;
        advantages[i] = r.advantage;
    }
    const DapoResult surrogate = dapo_surrogate(logp_new, logp_old, advantages, lengths, clip);

    BatchEval out;
    out.value = surrogate.value;
    out.grad_first.assign(policy.first_table().size(), 0.0);
    out.grad_second.assign(policy.second_table().size(), 0.0);
    const int K = policy.answers();
    for (std::size_t i = 0; i < n; ++i) {
        const double g = surrogate.grad_logp_new[i];
        if (g == 0.0) {
            continue;
        }
        const BatchResponse& r = batch.responses[i];
        // d logp(y)/d logit_k = 1{k==y} - pi_k
        if (r.debate) {
            const std::vector<double> probs =
                policy.second_turn_probs(r.prompt, r.presented_first, r.presented_second);
            const std::size_t row =
                ((static_cast<std::size_t>(r.prompt) * K + (r.presented_first - 1)) * K +
                 (r.presented_second - 1)) *
                K;
            for (int k = 0; k < K; ++k) {
                const double ind = (k + 1 == r.answer) ? 1.0 : 0.0;
                out.grad_second[row + static_cast<std::size_t>(k)] +=
                    g * (ind - probs[static_cast<std::size_t>(k)]);
            }
        } else {
            const std::vector<double> probs = policy.first_turn_probs(r.prompt);
            const std::size_t row = static_cast<std::size_t>(r.prompt) * K;
            for (int k = 0; k < K; ++k) {
                const double ind = (k + 1 == r.answer) ? 1.0 : 0.0;
                out.grad_first[row + static_cast<std::size_t>(k)] +=
                    g * (ind - probs[static_cast<std::size_t>(k)]);
            }
        }
    }
    return out;
}

RolloutGroup sample_first_turn_group(const TabularPolicy& policy, const ToyTask& task,
                                     int prompt, int n, RngStream& rng) {
    if (n < 2) {
        throw Error("rollout groups need at least two samples");
    }
    const Label correct = task.correct[static_cast<std::size_t>(prompt)];
    RolloutGroup group;
    group.prompt_id = prompt;
    group.answers.resize(static_cast<std::size_t>(n));
    group.rewards.resize(static_cast<std::size_t>(n));
    group.logp_old.resize(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < group.answers.size(); ++j) {
        group.answers[j] = policy.sample_first(prompt, rng);
        group.rewards[j] = (group.answers[j] == correct) ? 1.0 : -1.0;
        group.logp_old[j] = policy.first_turn_logprob(prompt, group.answers[j]);
    }
    std::tie(group.advantages, group.degenerate) = grpo_advantages(group.rewards);
    return group;
}

RolloutGroup sample_debate_group(const TabularPolicy& policy, const ToyTask& task,
                                 const DebatePair& pair, int n_d, RngStream& rng) {
    if (n_d < 2) {
        throw Error("rollout groups need at least two samples");
    }
    const Label correct = task.correct[static_cast<std::size_t>(pair.prompt_id)];
    RolloutGroup group;
    group.prompt_id = pair.prompt_id;
    group.answers.resize(static_cast<std::size_t>(n_d));
    group.rewards.resize(static_cast<std::size_t>(n_d));
    group.logp_old.resize(static_cast<std::size_t>(n_d));
    for (std::size_t j = 0; j < group.answers.size(); ++j) {
        group.answers[j] =
            policy.sample_second(pair.prompt_id, pair.first_answer, pair.second_answer, rng);
        group.rewards[j] = (group.answers[j] == correct) ? 1.0 : -1.0;
        group.logp_old[j] = policy.second_turn_logprob(pair.prompt_id, pair.first_answer,
                                                       pair.second_answer, group.answers[j]);
    }
    std::tie(group.advantages, group.degenerate) = grpo_advantages(group.rewards);
    return group;
}

StepStats self_debate_step(TabularPolicy& policy, const ToyTask& task,
                           std::span<const int> prompt_batch, const SelfDebateConfig& config,
                           const RngStream& step_rng) {
    task.validate();
    if (config.rollouts_per_prompt < 2 || config.debate_rollouts < 2) {
        throw ConfigError("need at least two rollouts per group");
    }

    StepStats stats;
    TrainBatch batch;
    int first_correct = 0, debate_correct = 0;

    for (int m : prompt_batch) {
        const Label correct = task.correct[static_cast<std::size_t>(m)];
        const RngStream prompt_rng = step_rng.child(static_cast<std::uint64_t>(m));

        RngStream rollout_rng = prompt_rng.child(kFirstRolloutSalt);
        const RolloutGroup first =
            sample_first_turn_group(policy, task, m, config.rollouts_per_prompt, rollout_rng);
        for (Label y : first.answers) {
            first_correct += (y == correct);
        }
        stats.first_turn_samples += config.rollouts_per_prompt;

        if (!dynamic_sampling_keep(first.answers, correct, config.rollouts_per_prompt)) {
            continue;
        }
        ++stats.kept_prompts;
        for (std::size_t j = 0; j < first.answers.size(); ++j) {
            batch.responses.push_back(BatchResponse{m, false, 1, 1, first.answers[j],
                                                    first.advantages[j], first.logp_old[j]});
        }

        RngStream pair_rng = prompt_rng.child(kPairingSalt);
        const DebatePair pair = build_debate_pair(m, first.answers, config.pairing, pair_rng);

        RngStream debate_rng = prompt_rng.child(kDebateRolloutSalt);
        const RolloutGroup debate =
            sample_debate_group(policy, task, pair, config.debate_rollouts, debate_rng);
        for (Label y : debate.answers) {
            debate_correct += (y == correct);
        }
        stats.debate_samples += config.debate_rollouts;

        int kept_here = 0;
        for (std::size_t j = 0; j < debate.answers.size(); ++j) {
            if (std::abs(debate.advantages[j]) <= 1e-12) {
                continue;  // zero-advantage debate responses carry no signal
            }
            batch.responses.push_back(BatchResponse{m, true, pair.first_answer,
                                                    pair.second_answer, debate.answers[j],
                                                    debate.advantages[j], debate.logp_old[j]});
            ++kept_here;
        }
        if (kept_here > 0) {
            ++stats.kept_debate_prompts;
            stats.kept_debate_samples += kept_here;
        }
    }

    stats.first_turn_acc = stats.first_turn_samples > 0
                               ? static_cast<double>(first_correct) / stats.first_turn_samples
                               : std::numeric_limits<double>::quiet_NaN();
    stats.debate_acc = stats.debate_samples > 0
                           ? static_cast<double>(debate_correct) / stats.debate_samples
                           : std::numeric_limits<double>::quiet_NaN();

    if (batch.responses.empty()) {
        stats.no_op = true;
        return stats;
    }
    const BatchEval eval = eval_dapo_on_batch(policy, batch, config.clip);
    policy.ascend(eval.grad_first, eval.grad_second, config.learning_rate,
                  config.learning_rate * config.debate_lr_scale);
    stats.surrogate = eval.value;
    return stats;
}

TrainingCurves train_self_debate(TabularPolicy& policy, const ToyTask& task, int steps,
                                 const SelfDebateConfig& config, const RngStream& rng) {
    if (steps < 0) {
        throw ConfigError("steps must be nonnegative");
    }
    std::vector<int> all_prompts(static_cast<std::size_t>(task.num_prompts));
    for (int m = 0; m < task.num_prompts; ++m) {
        all_prompts[static_cast<std::size_t>(m)] = m;
    }

    TrainingCurves curves;
    for (int step = 0; step < steps; ++step) {
        const RngStream step_root = rng.child(static_cast<std::uint64_t>(step));
        const StepStats stats =
            self_debate_step(policy, task, all_prompts, config, step_root.child(kStepBranch));
        const DeltaEstimate delta = estimate_delta_from_policy(
            policy, task, config.critique_mass, config.delta_samples,
            step_root.child(kDeltaBranch));
        curves.first_turn_acc.push_back(stats.first_turn_acc);
        curves.debate_acc.push_back(stats.debate_acc);
        curves.debate_gap.push_back(stats.debate_acc - stats.first_turn_acc);
        curves.delta_hat.push_back(delta.mean);
        curves.kept_debate_prompts.push_back(stats.kept_debate_prompts);
        curves.kept_debate_samples.push_back(stats.kept_debate_samples);
    }
    return curves;
}

DeltaEstimate estimate_delta_from_policy(const TabularPolicy& policy, const ToyTask& task,
                                         double m_beta, int samples, const RngStream& rng) {
    task.validate();
    if (samples < 100) {
        throw Error("delta estimation needs at least 100 samples");
    }

    // prompts where an incorrect answer is reachable under the policy
    std::vector<int> eligible;
    for (int m = 0; m < task.num_prompts; ++m) {
        const std::vector<double> probs = policy.first_turn_probs(m);
        const double p =
            probs[static_cast<std::size_t>(task.correct[static_cast<std::size_t>(m)] - 1)];
        if (1.0 - p > 1e-12) {
            eligible.push_back(m);
        }
    }
    if (eligible.empty()) {
        throw Error("no incorrect answers reachable: every prompt is saturated");
    }

    RngStream draw = rng.child(0);
    double mean = 0.0, m2 = 0.0;
    for (int s = 0; s < samples; ++s) {
        const int m = eligible[draw.below(eligible.size())];
        const Label correct = task.correct[static_cast<std::size_t>(m)];
        std::vector<double> probs = policy.first_turn_probs(m);
        const double p = probs[static_cast<std::size_t>(correct - 1)];

        probs[static_cast<std::size_t>(correct - 1)] = 0.0;  // condition on being wrong
        const Label wrong = draw.categorical(probs) + 1;

        Label a1 = correct, a2 = wrong;
        if (draw.bernoulli(0.5)) {
            std::swap(a1, a2);
        }
        const std::vector<double> q = policy.second_turn_probs(m, a1, a2);
        const double value = m_beta * (q[static_cast<std::size_t>(correct - 1)] - p);

        const double delta = value - mean;  // Welford running moments
        mean += delta / (s + 1);
        m2 += delta * (value - mean);
    }

    DeltaEstimate out;
    out.mean = mean;
    out.samples = samples;
    out.se = samples > 1 ? std::sqrt(m2 / (samples - 1) / samples) : 0.0;
    return out;
}

SecondTurnProvider make_second_turn_provider(std::shared_ptr<const TabularPolicy> policy) {
    if (!policy) {
        throw Error("provider needs a policy");
    }
    return [policy](const DebateContext& ctx) {
        return policy->second_turn_probs(ctx.prompt_id, ctx.first_answer, ctx.second_answer);
    };
}

}  // namespace debatelab
