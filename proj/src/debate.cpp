#include "debatelab/debate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace debatelab {

namespace {

// Stream salts: one level per (round, agent, purpose).
constexpr std::uint64_t kAnswerSalt = 0;
constexpr std::uint64_t kCritiqueSalt = 1;
constexpr std::uint64_t kContextSalt = 2;

}  // namespace

void Topology::validate(int num_agents) const {
    if (const auto* sparse = std::get_if<Sparse>(&variant)) {
        if (static_cast<int>(sparse->adjacency.size()) != num_agents) {
            throw ConfigError("sparse adjacency must list every agent");
        }
        for (int i = 0; i < num_agents; ++i) {
            bool has_self = false;
            for (int j : sparse->adjacency[static_cast<std::size_t>(i)]) {
                if (j < 0 || j >= num_agents) {
                    throw ConfigError("sparse adjacency index out of range");
                }
                has_self |= (j == i);
            }
            if (sparse->include_self && !has_self) {
                throw ConfigError("include_self sparse adjacency must contain the owner");
            }
        }
    } else if (const auto* central = std::get_if<Centralized>(&variant)) {
        if (central->center < 0 || central->center >= num_agents) {
            throw ConfigError("centralized center index out of range");
        }
    }
}

std::vector<int> Topology::neighbors(int agent, int num_agents) const {
    if (const auto* dec = std::get_if<Decentralized>(&variant)) {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(num_agents));
        for (int j = 0; j < num_agents; ++j) {
            if (j != agent || dec->include_self) {
                out.push_back(j);
            }
        }
        return out;
    }
    if (const auto* sparse = std::get_if<Sparse>(&variant)) {
        return sparse->adjacency[static_cast<std::size_t>(agent)];
    }
    const auto& central = std::get<Centralized>(variant);
    if (agent != central.center) {
        return {};  // peers observe nothing and never update
    }
    std::vector<int> out(static_cast<std::size_t>(num_agents));
    for (int j = 0; j < num_agents; ++j) {
        out[static_cast<std::size_t>(j)] = j;
    }
    return out;
}

int Topology::center() const {
    if (const auto* central = std::get_if<Centralized>(&variant)) {
        return central->center;
    }
    return -1;
}

void DebateConfig::validate() const {
    if (num_agents < 1) {
        throw ConfigError("need at least one agent");
    }
    if (rounds < 0) {
        throw ConfigError("rounds must be nonnegative");
    }
    if (answer_count < 2) {
        throw ConfigError("need at least two answers");
    }
    if (social_weight < 0.0) {
        throw ConfigError("social weight must be nonnegative");
    }
    if (correct_label < 1 || correct_label > answer_count) {
        throw ConfigError("correct label outside the answer set");
    }
    if (replicates < 1) {
        throw ConfigError("replicates must be positive");
    }
    topology.validate(num_agents);
    critique.validate();

    if (const auto* homog = std::get_if<Homogeneous>(&init)) {
        if (static_cast<int>(homog->alpha0.size()) != answer_count) {
            throw ConfigError("alpha0 size must equal the answer count");
        }
    } else {
        const auto& per = std::get<PerAgent>(init);
        if (static_cast<int>(per.alphas.size()) != num_agents) {
            throw ConfigError("per-agent init must list every agent");
        }
        for (const auto& a : per.alphas) {
            if (static_cast<int>(a.size()) != answer_count) {
                throw ConfigError("per-agent alpha size must equal the answer count");
            }
        }
        if (!per.social_weights.empty() &&
            static_cast<int>(per.social_weights.size()) != num_agents) {
            throw ConfigError("per-agent weights must list every agent");
        }
    }
    // reject invalid pseudo-counts up front
    for (const auto& s : initial_states()) {
        (void)dirichlet_mean(s.alpha);
    }
}

std::vector<BeliefState> DebateConfig::initial_states() const {
    std::vector<BeliefState> states;
    states.reserve(static_cast<std::size_t>(num_agents));
    if (const auto* homog = std::get_if<Homogeneous>(&init)) {
        for (int i = 0; i < num_agents; ++i) {
            states.push_back(BeliefState{homog->alpha0, i});
        }
    } else {
        const auto& per = std::get<PerAgent>(init);
        for (int i = 0; i < num_agents; ++i) {
            states.push_back(BeliefState{per.alphas[static_cast<std::size_t>(i)], i});
        }
    }
    return states;
}

double DebateConfig::agent_weight(int agent) const {
    if (const auto* per = std::get_if<PerAgent>(&init)) {
        if (!per->social_weights.empty()) {
            return per->social_weights[static_cast<std::size_t>(agent)];
        }
    }
    return social_weight;
}

VoteResult plurality_vote(std::span<const Label> answers, int K) {
    if (answers.empty()) {
        throw Error("plurality vote over an empty answer list");
    }
    std::vector<int> tally(static_cast<std::size_t>(K), 0);
    for (Label y : answers) {
        if (y < 1 || y > K) {
            throw DimensionMismatchError("answer label outside 1..K");
        }
        ++tally[static_cast<std::size_t>(y - 1)];
    }
    const int best = *std::max_element(tally.begin(), tally.end());
    VoteResult out;
    for (int k = 0; k < K; ++k) {
        if (tally[static_cast<std::size_t>(k)] == best) {
            out.argmax_set.push_back(k + 1);
        }
    }
    out.winner = out.argmax_set.front();  // smallest label wins ties
    out.tie = out.argmax_set.size() > 1;
    return out;
}

namespace {

// Modal and second-modal label of the neighbourhood's answers, count ties
// broken toward the smaller label; presentation order randomized. With a
// single distinct answer the pair repeats it.
DebateContext make_round_context(const std::vector<int>& tally, const DebateConfig& config,
                                 RngStream ctx_rng) {
    const int K = config.answer_count;
    int first = -1, second = -1;
    for (int k = 0; k < K; ++k) {
        const int c = tally[static_cast<std::size_t>(k)];
        if (c == 0) {
            continue;
        }
        if (first < 0 || c > tally[static_cast<std::size_t>(first)]) {
            second = first;
            first = k;
        } else if (second < 0 || c > tally[static_cast<std::size_t>(second)]) {
            second = k;
        }
    }
    DebateContext ctx;
    ctx.prompt_id = config.prompt_id;
    ctx.correct_label = config.correct_label;
    if (first < 0) {
        return ctx;  // empty neighbourhood; placeholder pair
    }
    if (second < 0) {
        second = first;
    }
    ctx.first_answer = first + 1;
    ctx.second_answer = second + 1;
    if (ctx_rng.bernoulli(0.5)) {
        std::swap(ctx.first_answer, ctx.second_answer);
    }
    return ctx;
}

}  // namespace

std::pair<std::vector<BeliefState>, RoundRecord> run_round_with_critique(
    const std::vector<BeliefState>& states, const DebateConfig& config,
    const CritiqueModel& critique, int round_index, const RngStream& round_rng) {
    const int n = static_cast<int>(states.size());
    const int K = config.answer_count;

    RoundRecord rec;
    rec.round = round_index;
    rec.answers.resize(static_cast<std::size_t>(n));
    rec.counts.resize(static_cast<std::size_t>(n));
    rec.p.resize(static_cast<std::size_t>(n));
    rec.alpha_norm.resize(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const auto& s = states[static_cast<std::size_t>(i)];
        const std::vector<double> mean = dirichlet_mean(s.alpha);
        rec.p[static_cast<std::size_t>(i)] =
            mean[static_cast<std::size_t>(config.correct_label - 1)];
        rec.alpha_norm[static_cast<std::size_t>(i)] = s.alpha_norm();
        RngStream answer_rng = round_rng.child(static_cast<std::uint64_t>(i), kAnswerSalt);
        rec.answers[static_cast<std::size_t>(i)] = sample_answer(s, config.sampling, answer_rng);
    }
    rec.p_bar = std::accumulate(rec.p.begin(), rec.p.end(), 0.0) / n;

    const int center = config.topology.center();
    std::vector<BeliefState> next;
    next.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& s = states[static_cast<std::size_t>(i)];
        const std::vector<int> hood = config.topology.neighbors(i, n);
        rec.counts[static_cast<std::size_t>(i)] = neighbor_counts(rec.answers, hood, K);

        if (center >= 0 && i != center) {
            next.push_back(s);  // centralized peers keep their beliefs
            continue;
        }
        DebateContext ctx;
        if (critique.kind == CritiqueModel::Kind::PolicyBacked) {
            ctx = make_round_context(rec.counts[static_cast<std::size_t>(i)].counts, config,
                                     round_rng.child(static_cast<std::uint64_t>(i), kContextSalt));
        } else {
            ctx.prompt_id = config.prompt_id;
            ctx.correct_label = config.correct_label;
        }
        const std::vector<double> mean = dirichlet_mean(s.alpha);
        RngStream critique_rng = round_rng.child(static_cast<std::uint64_t>(i), kCritiqueSalt);
        const std::vector<double> beta = make_critique(critique, mean, ctx, critique_rng);
        next.push_back(update_belief(s, beta, rec.counts[static_cast<std::size_t>(i)],
                                     config.agent_weight(i)));
    }

    const VoteResult vote = plurality_vote(rec.answers, K);
    rec.winner = vote.winner;
    rec.tie = vote.tie;
    rec.system_answer = (center >= 0 && round_index >= 1)
                            ? rec.answers[static_cast<std::size_t>(center)]
                            : vote.winner;
    return {std::move(next), std::move(rec)};
}

std::pair<std::vector<BeliefState>, RoundRecord> run_round(
    const std::vector<BeliefState>& states, const DebateConfig& config, int round_index,
    const RngStream& round_rng) {
    return run_round_with_critique(states, config, config.critique, round_index, round_rng);
}

Trajectory run_debate(const DebateConfig& config, const RngStream& run_rng) {
    std::vector<BeliefState> states = config.initial_states();
    Trajectory traj;
    traj.rounds.reserve(static_cast<std::size_t>(config.rounds) + 1);
    for (int t = 0; t <= config.rounds; ++t) {
        auto [next, rec] = run_round(states, config, t, run_rng.child(static_cast<std::uint64_t>(t)));
        states = std::move(next);
        traj.rounds.push_back(std::move(rec));
    }
    return traj;
}

ReplicateSummary replicate(const DebateConfig& config, const MetricExtractor& metric,
                           int threads) {
    config.validate();
    const int R = config.replicates;
    std::vector<std::vector<double>> values(static_cast<std::size_t>(R));

    const RngStream master(config.seed);
    auto run_block = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            const Trajectory traj =
                run_debate(config, master.child(static_cast<std::uint64_t>(r)));
            values[static_cast<std::size_t>(r)] = metric(traj);
        }
    };

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, R);
    if (workers == 1) {
        run_block(0, R);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int lo = static_cast<int>(static_cast<long long>(R) * w / workers);
            const int hi = static_cast<int>(static_cast<long long>(R) * (w + 1) / workers);
            pool.emplace_back(run_block, lo, hi);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    const std::size_t dims = values.front().size();
    for (const auto& v : values) {
        if (v.size() != dims) {
            throw Error("metric extractor returned inconsistent lengths");
        }
    }

    ReplicateSummary out;
    out.replicates = R;
    out.mean.assign(dims, 0.0);
    out.se.assign(dims, 0.0);
    for (const auto& v : values) {  // fixed replicate order keeps sums bit-stable
        for (std::size_t d = 0; d < dims; ++d) {
            out.mean[d] += v[d];
        }
    }
    for (std::size_t d = 0; d < dims; ++d) {
        out.mean[d] /= R;
    }
    if (R > 1) {
        for (const auto& v : values) {
            for (std::size_t d = 0; d < dims; ++d) {
                const double diff = v[d] - out.mean[d];
                out.se[d] += diff * diff;
            }
        }
        for (std::size_t d = 0; d < dims; ++d) {
            out.se[d] = std::sqrt(out.se[d] / (R - 1) / R);
        }
    }
    return out;
}

std::vector<double> system_correct_metric(const Trajectory& trajectory, Label correct_label) {
    std::vector<double> out;
    out.reserve(trajectory.rounds.size());
    for (const auto& rec : trajectory.rounds) {
        out.push_back(rec.system_answer == correct_label ? 1.0 : 0.0);
    }
    return out;
}

}  // namespace debatelab
