#pragma once

// T-round simultaneous-talk debate engine. Each round every agent samples an
// answer from its round-start belief; all belief updates are computed from
// those round-start answers only, so agent processing order never matters.
// The system answer is the plurality vote, except in centralized debates
// where rounds >= 1 report the center's answer.

#include <cstdint>
#include <functional>
#include <utility>
#include <variant>

#include "debatelab/dcm.hpp"

namespace debatelab {

struct Decentralized {
    bool include_self = true;
};

struct Sparse {
    std::vector<std::vector<int>> adjacency;  // per-agent neighbour ids
    bool include_self = true;                 // rows must then contain the owner
};

struct Centralized {
    int center = 0;  // observes everyone including itself; peers never update
};

struct Topology {
    std::variant<Decentralized, Sparse, Centralized> variant{Decentralized{}};

    void validate(int num_agents) const;
    std::vector<int> neighbors(int agent, int num_agents) const;
    bool is_centralized() const { return std::holds_alternative<Centralized>(variant); }
    int center() const;  // -1 unless centralized
};

struct Homogeneous {
    std::vector<double> alpha0;
};

struct PerAgent {
    std::vector<std::vector<double>> alphas;
    std::vector<double> social_weights;  // optional per-agent w override
};

using InitScheme = std::variant<Homogeneous, PerAgent>;

struct DebateConfig {
    int num_agents = 5;
    int rounds = 1;        // debate rounds T; a trajectory has T+1 records
    int answer_count = 4;  // K
    Topology topology{};
    double social_weight = 1.0;
    CritiqueModel critique = CritiqueModel::null_critique();
    InitScheme init = Homogeneous{};
    Label correct_label = 1;
    int prompt_id = 0;
    SampleMode sampling = SampleMode::Compound;
    std::uint64_t seed = 0;
    int replicates = 1;

    void validate() const;
    std::vector<BeliefState> initial_states() const;
    double agent_weight(int agent) const;
};

struct VoteResult {
    Label winner = 1;
    bool tie = false;
    std::vector<Label> argmax_set;
};

/// Plurality vote over 1..K labels; ties resolved deterministically toward
/// the smallest label in the argmax set.
VoteResult plurality_vote(std::span<const Label> answers, int K);

struct RoundRecord {
    int round = 0;
    std::vector<Label> answers;       // y_i sampled this round
    std::vector<CountVector> counts;  // per-agent tallies of this round's answers
    std::vector<double> p;            // per-agent belief in the correct label, round start
    std::vector<double> alpha_norm;   // per-agent ||alpha||_1, round start
    Label winner = 1;
    bool tie = false;
    Label system_answer = 1;
    double p_bar = 0.0;  // mean of p over agents
};

struct Trajectory {
    std::vector<RoundRecord> rounds;  // T+1 records, round 0 first
};

/// One simultaneous round. `round_rng` must be the per-round stream
/// (run_rng.child(round_index)); per-agent substreams are derived inside.
std::pair<std::vector<BeliefState>, RoundRecord> run_round(
    const std::vector<BeliefState>& states, const DebateConfig& config, int round_index,
    const RngStream& round_rng);

/// Like run_round but with a caller-supplied critique, for schedules that
/// vary the critique across rounds.
std::pair<std::vector<BeliefState>, RoundRecord> run_round_with_critique(
    const std::vector<BeliefState>& states, const DebateConfig& config,
    const CritiqueModel& critique, int round_index, const RngStream& round_rng);

/// Runs rounds 0..T and returns their records. `run_rng` is the root stream
/// of this run (one replicate).
Trajectory run_debate(const DebateConfig& config, const RngStream& run_rng);

struct ReplicateSummary {
    std::vector<double> mean;  // per metric coordinate (usually per round)
    std::vector<double> se;    // standard error of the mean (0 when R == 1)
    int replicates = 0;
};

using MetricExtractor = std::function<std::vector<double>(const Trajectory&)>;

/// Monte-Carlo means of a per-trajectory metric over config.replicates
/// independent runs. Replicate r uses RngStream(config.seed).child(r); the
/// result is bit-identical for any thread count (0 = hardware default).
ReplicateSummary replicate(const DebateConfig& config, const MetricExtractor& metric,
                           int threads = 0);

/// Metric: per-round indicator that the system answer equals the correct
/// label (1.0/0.0). Ties still report the deterministic winner.
std::vector<double> system_correct_metric(const Trajectory& trajectory, Label correct_label);

}  // namespace debatelab
