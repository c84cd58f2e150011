#pragma once

// Desk-scale self-debate training on tabular softmax policies: group-
// normalized advantages, the asymmetric-clip token-level surrogate with
// analytic gradients, mixed-correctness filtering, debate-pair
// construction, and a bridge that turns the trained second-turn table into
// a debate-engine critique provider.

#include <memory>
#include <span>
#include <vector>

#include "debatelab/dcm.hpp"
#include "debatelab/rng.hpp"

namespace debatelab {

/// A bank of single-answer prompts. Every prompt has the same answer count
/// and exactly one correct label; init_correct_prob steers how often the
/// freshly initialized policy answers it correctly.
struct ToyTask {
    int num_prompts = 0;
    int answer_count = 0;  // K
    std::vector<Label> correct;
    std::vector<double> init_correct_prob;

    void validate() const;
};

/// Random task: correct labels uniform over 1..K, initial correct-answer
/// probabilities uniform in [prob_lo, prob_hi].
ToyTask make_task(int prompts, int answers, double prob_lo, double prob_hi, RngStream& rng);

/// Softmax policy over answers with a first-turn table (per prompt) and a
/// second-turn table (per prompt and ordered presented answer pair).
/// Rollouts are single answer tokens.
class TabularPolicy {
  public:
    /// Seeds the first-turn table from the task's init_correct_prob;
    /// second-turn starts uniform.
    explicit TabularPolicy(const ToyTask& task);

    /// Rebuilds a policy from raw logit tables (layout as first_table /
    /// second_table expose them).
    TabularPolicy(int prompts, int answers, std::vector<double> first_logits,
                  std::vector<double> second_logits);

    int prompts() const { return m_; }
    int answers() const { return k_; }

    std::vector<double> first_turn_probs(int prompt) const;
    std::vector<double> second_turn_probs(int prompt, Label a1, Label a2) const;
    double first_turn_logprob(int prompt, Label answer) const;
    double second_turn_logprob(int prompt, Label a1, Label a2, Label answer) const;
    Label sample_first(int prompt, RngStream& rng) const;
    Label sample_second(int prompt, Label a1, Label a2, RngStream& rng) const;

    /// Mean over prompts of the probability assigned to the correct answer.
    double expected_first_turn_accuracy(const ToyTask& task) const;

    std::span<const double> first_table() const { return first_; }
    std::span<const double> second_table() const { return second_; }

    void ascend(std::span<const double> grad_first, std::span<const double> grad_second,
                double first_rate, double second_rate);

  private:
    std::size_t first_index(int prompt, Label answer) const;
    std::size_t second_row(int prompt, Label a1, Label a2) const;

    int m_ = 0;
    int k_ = 0;
    std::vector<double> first_;   // m*k logits
    std::vector<double> second_;  // m*k*k*k logits
};

/// Group-normalized advantages (r - mean)/std with the population std
/// (divide by G). A zero-spread group is degenerate: all advantages are
/// zero and the group is meant to be filtered, not trained on.
std::pair<std::vector<double>, bool> grpo_advantages(std::span<const double> rewards);

/// One prompt's sampled rollouts with rewards, normalized advantages and
/// behaviour-policy log-probabilities.
struct RolloutGroup {
    int prompt_id = 0;
    std::vector<Label> answers;
    std::vector<double> rewards;  // +1 correct, -1 otherwise
    std::vector<double> advantages;
    std::vector<double> logp_old;
    bool degenerate = false;  // zero reward spread; filtered from training
};

/// Keep a rollout group only when its correct-answer count is strictly
/// between 0 and G.
bool dynamic_sampling_keep(std::span<const Label> answers, Label correct, int group_size);

struct ClipConfig {
    double eps_low = 0.2;
    double eps_high = 0.28;
};

struct DapoResult {
    double value = 0.0;
    std::vector<double> grad_logp_new;  // per token; zero where the clip is active
};

/// Token-level clipped surrogate
///   (1/sum|o_i|) sum_i sum_t min(r A_i, clip(r, 1-eps_low, 1+eps_high) A_i)
/// with r = exp(logp_new - logp_old). One advantage per response, broadcast
/// over its tokens; `lengths` gives tokens per response. Ties at the clip
/// boundary resolve to the unclipped branch so the gradient flows.
DapoResult dapo_surrogate(std::span<const double> logp_new, std::span<const double> logp_old,
                          std::span<const double> advantages, std::span<const int> lengths,
                          const ClipConfig& clip);

enum class PairingRule { Random, Frequency };

struct DebatePair {
    int prompt_id = 0;
    int first_index = 0;   // rollout indices in presentation order
    int second_index = 0;
    Label first_answer = 1;
    Label second_answer = 1;
    PairingRule rule = PairingRule::Random;
    bool order_swapped = false;  // frequency rule presented the modal answer second
};

/// Random rule: two distinct rollout indices uniformly without replacement.
/// Frequency rule: a uniformly random representative of the modal answer
/// and one of the second-modal answer (count ties toward the smaller
/// label), presentation order flipped with probability 1/2.
DebatePair build_debate_pair(int prompt_id, std::span<const Label> answers, PairingRule rule,
                             RngStream& rng);

/// n first-turn rollouts for one prompt, scored and group-normalized.
RolloutGroup sample_first_turn_group(const TabularPolicy& policy, const ToyTask& task,
                                     int prompt, int n, RngStream& rng);

/// n_d second-turn rollouts conditioned on a debate pair's presentation.
RolloutGroup sample_debate_group(const TabularPolicy& policy, const ToyTask& task,
                                 const DebatePair& pair, int n_d, RngStream& rng);

/// One single-token response entry of a training batch.
struct BatchResponse {
    int prompt = 0;
    bool debate = false;
    Label presented_first = 1;  // debate context, ignored for first-turn rows
    Label presented_second = 1;
    Label answer = 1;
    double advantage = 0.0;
    double logp_old = 0.0;
};

struct TrainBatch {
    std::vector<BatchResponse> responses;
};

struct BatchEval {
    double value = 0.0;
    std::vector<double> grad_first;   // same layout as the policy tables
    std::vector<double> grad_second;
};

/// Surrogate value and logit-table gradient of a frozen batch against the
/// current policy (logp_new recomputed from it, logp_old as recorded).
BatchEval eval_dapo_on_batch(const TabularPolicy& policy, const TrainBatch& batch,
                             const ClipConfig& clip);

struct SelfDebateConfig {
    int rollouts_per_prompt = 8;  // n
    int debate_rollouts = 4;      // n_d
    PairingRule pairing = PairingRule::Frequency;
    double learning_rate = 0.3;
    // fixed step-size multiplier for the second-turn table; the debate turn
    // sees roughly n_d kept samples spread over two ordered context rows per
    // prompt and step versus n on the single first-turn row, so equal rates
    // leave the debate table far behind the first turn
    double debate_lr_scale = 25.0;
    ClipConfig clip;
    double critique_mass = 1.0;  // m_beta used for the per-step delta estimate
    int delta_samples = 512;
};

struct StepStats {
    int kept_prompts = 0;
    int kept_debate_prompts = 0;
    int kept_debate_samples = 0;
    int first_turn_samples = 0;
    int debate_samples = 0;
    double first_turn_acc = 0.0;
    double debate_acc = 0.0;  // NaN when no debate rollouts were sampled
    double surrogate = 0.0;
    bool no_op = false;
};

/// One training step: sample n first-turn rollouts per prompt, filter to
/// mixed-correctness groups, build one debate pair per kept prompt, sample
/// n_d second-turn rollouts, drop zero-advantage debate responses, merge
/// everything into one batch and take one ascent step on the surrogate.
StepStats self_debate_step(TabularPolicy& policy, const ToyTask& task,
                           std::span<const int> prompt_batch, const SelfDebateConfig& config,
                           const RngStream& step_rng);

struct TrainingCurves {
    std::vector<double> first_turn_acc;
    std::vector<double> debate_acc;
    std::vector<double> debate_gap;  // debate_acc - first_turn_acc
    std::vector<double> delta_hat;
    std::vector<int> kept_debate_prompts;
    std::vector<int> kept_debate_samples;
};

/// Runs `steps` full-batch training steps and tracks the per-step curves.
TrainingCurves train_self_debate(TabularPolicy& policy, const ToyTask& task, int steps,
                                 const SelfDebateConfig& config, const RngStream& rng);

struct DeltaEstimate {
    double mean = 0.0;
    double se = 0.0;
    int samples = 0;
};

/// Monte-Carlo critique advantage of the policy: over sampled mixed debate
/// pairs (one correct, one incorrect answer; incorrect drawn from the
/// policy's own first-turn distribution, order randomized), the mean of
/// m_beta * (q_d(correct | context) - p_first(correct)).
DeltaEstimate estimate_delta_from_policy(const TabularPolicy& policy, const ToyTask& task,
                                         double m_beta, int samples, const RngStream& rng);

/// Critique provider backed by the policy's second-turn table, for use as
/// CritiqueModel::policy_backed in the debate engine.
SecondTurnProvider make_second_turn_provider(std::shared_ptr<const TabularPolicy> policy);

}  // namespace debatelab
