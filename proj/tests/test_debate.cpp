#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "debatelab/debate.hpp"

using namespace debatelab;

namespace {

DebateConfig small_config() {
    DebateConfig config;
    config.num_agents = 5;
    config.rounds = 3;
    config.answer_count = 4;
    config.topology.variant = Decentralized{true};
    config.social_weight = 1.0;
    config.critique = CritiqueModel::proportional(1.0);
    config.init = Homogeneous{{2.0, 1.0, 1.0, 1.0}};
    config.seed = 99;
    config.replicates = 64;
    return config;
}

}  // namespace

TEST_CASE("plurality vote picks the strict winner") {
    const VoteResult v = plurality_vote(std::vector<Label>{1, 1, 2}, 3);
    CHECK(v.winner == 1);
    CHECK_FALSE(v.tie);
    CHECK(v.argmax_set == std::vector<Label>{1});
}

TEST_CASE("plurality vote breaks ties toward the smallest label") {
    const VoteResult two = plurality_vote(std::vector<Label>{1, 2}, 2);
    CHECK(two.winner == 1);
    CHECK(two.tie);

    const VoteResult multi = plurality_vote(std::vector<Label>{2, 2, 3, 3, 1}, 3);
    CHECK(multi.winner == 2);
    CHECK(multi.tie);
    CHECK(multi.argmax_set == std::vector<Label>{2, 3});
}

TEST_CASE("plurality vote rejects bad input") {
    CHECK_THROWS_AS(plurality_vote(std::vector<Label>{}, 3), Error);
    CHECK_THROWS_AS(plurality_vote(std::vector<Label>{5}, 3), DimensionMismatchError);
}

TEST_CASE("winner always sits in the argmax set") {
    RngStream rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int K = 2 + static_cast<int>(rng.below(5));
        const int n = 1 + static_cast<int>(rng.below(10));
        std::vector<Label> answers(n);
        for (auto& y : answers) {
            y = 1 + static_cast<Label>(rng.below(K));
        }
        const VoteResult v = plurality_vote(answers, K);
        CHECK(std::find(v.argmax_set.begin(), v.argmax_set.end(), v.winner) !=
              v.argmax_set.end());
        CHECK(v.tie == (v.argmax_set.size() > 1));
    }
}

TEST_CASE("null dynamics freeze beliefs") {
    DebateConfig config = small_config();
    config.social_weight = 0.0;
    config.critique = CritiqueModel::null_critique();
    const auto states = config.initial_states();
    const auto [next, rec] = run_round(states, config, 0, RngStream(5).child(0));
    for (int i = 0; i < config.num_agents; ++i) {
        CHECK(next[i].alpha == states[i].alpha);
    }
    CHECK(rec.p_bar == doctest::Approx(0.4));
}

TEST_CASE("single agent counts its own answer") {
    DebateConfig config = small_config();
    config.num_agents = 1;
    const auto [next, rec] = run_round(config.initial_states(), config, 0, RngStream(6).child(0));
    CHECK(rec.counts[0].total() == 1);
    CHECK(rec.counts[0].counts[rec.answers[0] - 1] == 1);
}

TEST_CASE("homogeneous init keeps all alpha norms equal") {
    const DebateConfig config = small_config();
    const Trajectory traj = run_debate(config, RngStream(7).child(0));
    for (const auto& rec : traj.rounds) {
        for (double norm : rec.alpha_norm) {
            CHECK(norm == doctest::Approx(rec.alpha_norm[0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("debate trajectories have T+1 rounds and replay bit-identically") {
    DebateConfig config = small_config();
    const Trajectory a = run_debate(config, RngStream(config.seed).child(0));
    const Trajectory b = run_debate(config, RngStream(config.seed).child(0));
    REQUIRE(a.rounds.size() == 4);
    for (std::size_t t = 0; t < a.rounds.size(); ++t) {
        CHECK(a.rounds[t].answers == b.rounds[t].answers);
        CHECK(a.rounds[t].p == b.rounds[t].p);
        CHECK(a.rounds[t].winner == b.rounds[t].winner);
    }

    config.rounds = 0;
    const Trajectory bare = run_debate(config, RngStream(config.seed).child(0));
    CHECK(bare.rounds.size() == 1);
}

TEST_CASE("simultaneity: per-agent streams pin the round outcome") {
    // updates depend only on round-start answers and per-agent streams, so
    // recomputing any agent out of order reproduces the recorded answer
    DebateConfig config = small_config();
    const auto states = config.initial_states();
    const RngStream round_rng = RngStream(8).child(0);
    const auto [next, rec] = run_round(states, config, 0, round_rng);

    for (int i = config.num_agents - 1; i >= 0; --i) {
        RngStream answer_rng = round_rng.child(static_cast<std::uint64_t>(i), 0);
        const Label y = sample_answer(states[i], config.sampling, answer_rng);
        CHECK(y == rec.answers[i]);
    }
}

TEST_CASE("centralized debates update only the center") {
    DebateConfig config = small_config();
    config.topology.variant = Centralized{2};
    const Trajectory traj = run_debate(config, RngStream(9).child(0));

    // peers' pseudo-counts stay bit-identical across rounds
    auto states = config.initial_states();
    for (int t = 0; t <= config.rounds; ++t) {
        auto [next, rec] = run_round(states, config, t, RngStream(9).child(0).child(t));
        for (int i = 0; i < config.num_agents; ++i) {
            if (i != 2) {
                CHECK(next[i].alpha == states[i].alpha);
            }
        }
        states = std::move(next);
    }

    for (const auto& rec : traj.rounds) {
        for (int i = 0; i < config.num_agents; ++i) {
            if (i == 2) {
                continue;
            }
            CHECK(rec.p[i] == doctest::Approx(0.4).epsilon(1e-12));
            CHECK(rec.alpha_norm[i] == doctest::Approx(5.0).epsilon(1e-12));
        }
        if (rec.round >= 1) {
            CHECK(rec.system_answer == rec.answers[2]);
        } else {
            CHECK(rec.system_answer == rec.winner);
        }
    }
    // the center sees everyone including itself
    CHECK(config.topology.neighbors(2, 5).size() == 5);
    CHECK(config.topology.neighbors(0, 5).empty());
}

TEST_CASE("sparse topology validates adjacency") {
    DebateConfig config = small_config();
    Sparse sparse;
    sparse.include_self = true;
    sparse.adjacency = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
    config.topology.variant = sparse;
    CHECK_NOTHROW(config.validate());

    sparse.adjacency[0] = {1};  // include_self demands the owner
    config.topology.variant = sparse;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    sparse.adjacency[0] = {0, 9};
    config.topology.variant = sparse;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("replicate computes binomial-scale errors") {
    DebateConfig config = small_config();
    config.rounds = 0;
    config.num_agents = 1;
    config.answer_count = 2;
    config.init = Homogeneous{{1.0, 1.0}};
    config.replicates = 1000;
    // metric: the single agent answers label 1 (a fair coin)
    const ReplicateSummary summary = replicate(
        config,
        [](const Trajectory& traj) {
            return std::vector<double>{traj.rounds[0].answers[0] == 1 ? 1.0 : 0.0};
        },
        2);
    CHECK(std::abs(summary.mean[0] - 0.5) < 3 * 0.0158 + 1e-12);
    CHECK(summary.se[0] == doctest::Approx(0.0158).epsilon(0.1));
}

TEST_CASE("replicate is independent of the thread count") {
    DebateConfig config = small_config();
    config.replicates = 37;
    const auto metric = [&config](const Trajectory& traj) {
        return system_correct_metric(traj, config.correct_label);
    };
    const ReplicateSummary one = replicate(config, metric, 1);
    const ReplicateSummary two = replicate(config, metric, 2);
    const ReplicateSummary four = replicate(config, metric, 4);
    CHECK(one.mean == two.mean);
    CHECK(one.mean == four.mean);
    CHECK(one.se == four.se);
}

TEST_CASE("null dynamics keep the belief metric flat across rounds") {
    DebateConfig config = small_config();
    config.social_weight = 0.0;
    config.critique = CritiqueModel::null_critique();
    config.rounds = 4;
    config.replicates = 50;
    const ReplicateSummary summary = replicate(
        config,
        [](const Trajectory& traj) {
            std::vector<double> out;
            for (const auto& rec : traj.rounds) {
                out.push_back(rec.p[0]);
            }
            return out;
        },
        2);
    for (std::size_t t = 0; t < summary.mean.size(); ++t) {
        CHECK(summary.mean[t] == doctest::Approx(0.4).epsilon(1e-12));
    }
}

TEST_CASE("config validation rejects bad documents") {
    DebateConfig config = small_config();
    config.num_agents = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = small_config();
    config.correct_label = 9;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = small_config();
    config.init = Homogeneous{{1.0, 1.0}};  // wrong K
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = small_config();
    config.init = Homogeneous{{1.0, 0.0, 1.0, 1.0}};  // nonpositive belief
    CHECK_THROWS_AS(config.validate(), InvalidBeliefError);
}

TEST_CASE("per-agent weight overrides change each agent's update mass") {
    DebateConfig config = small_config();
    config.num_agents = 3;
    config.answer_count = 2;
    config.critique = CritiqueModel::proportional(1.0);
    config.init = PerAgent{{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}}, {0.0, 0.5, 2.0}};
    config.validate();
    const auto [next, rec] = run_round(config.initial_states(), config, 0, RngStream(14).child(0));
    // alpha norm grows by mass + w_i * |N| with |N| = 3
    CHECK(next[0].alpha_norm() == doctest::Approx(2.0 + 1.0 + 0.0 * 3).epsilon(1e-12));
    CHECK(next[1].alpha_norm() == doctest::Approx(2.0 + 1.0 + 0.5 * 3).epsilon(1e-12));
    CHECK(next[2].alpha_norm() == doctest::Approx(2.0 + 1.0 + 2.0 * 3).epsilon(1e-12));
}
