#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "debatelab/harness.hpp"

using namespace debatelab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "debatelab_tests";
    fs::create_directories(dir);
    return dir / name;
}

Json simulate_doc() {
    return Json{{"num_agents", 5},
                {"rounds", 2},
                {"answers", 4},
                {"topology", Json{{"type", "decentralized"}}},
                {"social_weight", 1.0},
                {"critique", Json{{"type", "proportional"}, {"mass", 1.0}}},
                {"init", Json{{"type", "homogeneous"}, {"alpha0", {2.0, 1.0, 1.0, 1.0}}}},
                {"replicates", 50},
                {"seed", 11}};
}

Json train_doc() {
    return Json{{"task", Json{{"prompts", 6},
                              {"answers", 3},
                              {"prob_low", 0.2},
                              {"prob_high", 0.5},
                              {"seed", 3}}},
                {"steps", 5},
                {"rollouts", 4},
                {"debate_rollouts", 2},
                {"pairing", "frequency"},
                {"learning_rate", 0.5},
                {"seed", 17}};
}

}  // namespace

TEST_CASE("unknown config fields are rejected") {
    Json doc = simulate_doc();
    doc["typo_field"] = 1;
    CHECK_THROWS_AS(parse_debate_config(doc), ConfigError);

    doc = simulate_doc();
    doc["topology"]["centre"] = 1;
    CHECK_THROWS_AS(parse_debate_config(doc), ConfigError);

    doc = simulate_doc();
    doc.erase("replicates");
    CHECK_THROWS_AS(parse_debate_config(doc), ConfigError);

    doc = simulate_doc();
    doc["sampling"] = "exact";
    CHECK_THROWS_AS(parse_debate_config(doc), ConfigError);
}

TEST_CASE("simulate config parses into a validated engine config") {
    const DebateConfig config = parse_debate_config(simulate_doc());
    CHECK(config.num_agents == 5);
    CHECK(config.rounds == 2);
    CHECK(config.answer_count == 4);
    CHECK(config.critique.kind == CritiqueModel::Kind::Proportional);
    CHECK(config.seed == 11);
    CHECK(config.sampling == SampleMode::Compound);
}

TEST_CASE("config hash is canonical over key order") {
    const Json a = Json::parse(R"({"x": 1, "y": [1, 2]})");
    const Json b = Json::parse(R"({"y": [1, 2], "x": 1})");
    CHECK(config_hash_hex(a) == config_hash_hex(b));
    CHECK(config_hash_hex(a).size() == 16);
    CHECK(config_hash_hex(a) != config_hash_hex(Json::parse(R"({"x": 2, "y": [1, 2]})")));
}

TEST_CASE("policy JSON round-trips bit-exactly") {
    RngStream rng(1234);
    ToyTask task = make_task(3, 4, 0.2, 0.6, rng);
    TabularPolicy policy(task);
    SelfDebateConfig config;
    config.rollouts_per_prompt = 4;
    config.debate_rollouts = 2;
    train_self_debate(policy, task, 3, config, RngStream(5));

    const Json doc = policy_to_json(policy, task);
    const TabularPolicy restored = policy_from_json(doc);
    CHECK(std::equal(policy.first_table().begin(), policy.first_table().end(),
                     restored.first_table().begin()));
    CHECK(std::equal(policy.second_table().begin(), policy.second_table().end(),
                     restored.second_table().begin()));

    Json bad = doc;
    bad["first_turn_logits"][0][0] = "oops";
    CHECK_THROWS_AS(policy_from_json(bad), ConfigError);
}

TEST_CASE("simulate writes byte-identical results on replay") {
    const Json doc = simulate_doc();
    CliOptions options;
    options.format = "csv";

    options.out_path = scratch("replay_a.csv").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    options.out_path = scratch("replay_b.csv").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    CHECK(slurp(scratch("replay_a.csv")) == slurp(scratch("replay_b.csv")));

    options.format = "jsonl";
    options.out_path = scratch("replay_a.jsonl").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    options.out_path = scratch("replay_b.jsonl").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    const std::string jsonl = slurp(scratch("replay_a.jsonl"));
    CHECK(jsonl == slurp(scratch("replay_b.jsonl")));

    // one record per replicate per round, with the contract fields
    std::istringstream lines(jsonl);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const Json rec = Json::parse(line);
        for (const char* key : {"replicate", "round", "answers", "winner", "tie", "p", "p_bar"}) {
            CHECK(rec.contains(key));
        }
        ++count;
    }
    CHECK(count == 50 * 3);
}

TEST_CASE("simulate results carry metadata sidecars") {
    const Json doc = simulate_doc();
    CliOptions options;
    options.out_path = scratch("meta_run.csv").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    const Json meta = Json::parse(slurp(scratch("meta_run.csv.meta.json")));
    CHECK(meta["config_hash"] == config_hash_hex(doc));
    CHECK(meta["seed"] == 11);
    CHECK(meta["generator"] == RngStream::kGeneratorId);
    CHECK(meta.contains("build"));
    CHECK(meta.contains("duration_seconds"));
}

TEST_CASE("a zero-round simulation reports Debate equal to Maj") {
    Json doc = simulate_doc();
    doc["rounds"] = 0;
    CliOptions options;
    options.out_path = scratch("t0.csv").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    const std::string csv = slurp(scratch("t0.csv"));
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header ==
          "num_agents,rounds,round,maj_acc,maj_se,debate_acc,debate_se,delta");
    std::getline(lines, row);
    std::vector<std::string> cells;
    std::istringstream cs(row);
    for (std::string cell; std::getline(cs, cell, ',');) {
        cells.push_back(cell);
    }
    REQUIRE(cells.size() == 8);
    CHECK(cells[3] == cells[5]);
    CHECK(cells[7] == "0");
}

TEST_CASE("agent sweeps emit one block per value") {
    Json doc = simulate_doc();
    doc["sweep"] = Json{{"num_agents", {3, 5, 7}}};
    CliOptions options;
    options.out_path = scratch("sweep.csv").string();
    REQUIRE(cmd_simulate(doc, options) == 0);
    const std::string csv = slurp(scratch("sweep.csv"));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    std::map<std::string, int> block_rows;
    while (std::getline(lines, line)) {
        block_rows[line.substr(0, line.find(','))]++;
    }
    CHECK(block_rows == std::map<std::string, int>{{"3", 3}, {"5", 3}, {"7", 3}});
}

TEST_CASE("train writes curves, policy and delta report") {
    const Json doc = train_doc();
    CliOptions options;
    options.out_path = scratch("train.csv").string();
    REQUIRE(cmd_train(doc, options) == 0);

    const std::string csv = slurp(scratch("train.csv"));
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "step,first_turn_acc,debate_acc,kept_debate_prompts,kept_debate_samples,delta_hat");
    int rows = 0;
    for (std::string row; std::getline(lines, row);) {
        ++rows;
    }
    CHECK(rows == 5);

    const Json policy_doc = Json::parse(slurp(scratch("train.csv.policy.json")));
    CHECK(policy_doc["prompts"] == 6);
    CHECK_NOTHROW(policy_from_json(policy_doc));

    const Json delta = Json::parse(slurp(scratch("train.csv.delta.json")));
    CHECK(delta.contains("delta_hat_before"));
    CHECK(delta.contains("delta_hat_after"));
    CHECK(delta["first_turn_expected_accuracy"].contains("before"));

    // byte-identical replay
    options.out_path = scratch("train_b.csv").string();
    REQUIRE(cmd_train(doc, options) == 0);
    CHECK(csv == slurp(scratch("train_b.csv")));
}

TEST_CASE("train honors the --rule override for both rules") {
    const Json doc = train_doc();
    for (PairingRule rule : {PairingRule::Random, PairingRule::Frequency}) {
        CliOptions options;
        options.rule = rule;
        options.out_path =
            scratch(rule == PairingRule::Random ? "rule_r.csv" : "rule_f.csv").string();
        CHECK(cmd_train(doc, options) == 0);
    }
    CHECK(slurp(scratch("rule_r.csv")) != slurp(scratch("rule_f.csv")));
}

TEST_CASE("bounds command evaluates the calculators and rejects bad input") {
    CliOptions options;
    const Json accumulated{{"bound", "accumulated"}, {"p0", 0.5}, {"mu", 0.1},
                           {"s0", 4.0},              {"c", 4.0},  {"rounds", 3}};
    {
        std::ostringstream captured;
        auto* old = std::cout.rdbuf(captured.rdbuf());
        CHECK(cmd_bounds(accumulated, options) == 0);
        std::cout.rdbuf(old);
        CHECK(captured.str().find("0.527083") != std::string::npos);
        CHECK(captured.str().find("0.522907") != std::string::npos);
    }

    const Json vote{{"bound", "vote"}, {"answers", 2}, {"agents", 100}, {"rho", 0.0},
                    {"gap", 0.4}};
    {
        std::ostringstream captured;
        auto* old = std::cout.rdbuf(captured.rdbuf());
        CHECK(cmd_bounds(vote, options) == 0);
        std::cout.rdbuf(old);
        CHECK(captured.str().find("0.125") != std::string::npos);
    }

    const Json degenerate{{"bound", "vote"}, {"answers", 2}, {"agents", 100}, {"rho", 0.0},
                          {"gap", 0.0}};
    CHECK_THROWS_AS(cmd_bounds(degenerate, options), GapDegenerateError);

    const Json unknown{{"bound", "tightest"}};
    CHECK_THROWS_AS(cmd_bounds(unknown, options), ConfigError);
}

TEST_CASE("task documents accept explicit tables or generator ranges") {
    const Json generated{{"prompts", 4}, {"answers", 3}, {"prob_low", 0.2},
                         {"prob_high", 0.4}, {"seed", 9}};
    const ToyTask a = task_from_json(generated, 0);
    const ToyTask b = task_from_json(generated, 999);  // fallback unused: seed given
    CHECK(a.correct == b.correct);

    const Json explicit_doc{{"prompts", 2},
                            {"answers", 3},
                            {"correct", {1, 3}},
                            {"init_correct_prob", {0.25, 0.5}}};
    const ToyTask c = task_from_json(explicit_doc, 0);
    CHECK(c.correct == std::vector<Label>{1, 3});

    Json half = explicit_doc;
    half.erase("init_correct_prob");
    CHECK_THROWS_AS(task_from_json(half, 0), ConfigError);
}

TEST_CASE("policy-backed critiques load from a policy file") {
    // train a tiny policy, save it, reference it from a simulate document
    const Json tdoc = train_doc();
    CliOptions toptions;
    toptions.out_path = scratch("bridge_train.csv").string();
    REQUIRE(cmd_train(tdoc, toptions) == 0);

    Json doc = simulate_doc();
    doc["answers"] = 3;
    doc["init"] = Json{{"type", "homogeneous"}, {"alpha0", {1.5, 1.0, 1.0}}};
    doc["critique"] = Json{{"type", "policy_backed"},
                           {"mass", 1.0},
                           {"policy", scratch("bridge_train.csv.policy.json").string()}};
    doc["prompt"] = 2;
    doc["correct_label"] = 2;
    doc["replicates"] = 20;
    CliOptions options;
    options.out_path = scratch("bridge_sim.csv").string();
    CHECK(cmd_simulate(doc, options) == 0);
}

TEST_CASE("verify command writes a per-check report and proper exit codes") {
    CliOptions options;
    options.out_path = scratch("verify_report.json").string();
    options.verify_scale_percent = 1;
    {
        std::ostringstream captured;
        auto* old = std::cout.rdbuf(captured.rdbuf());
        const int code = cmd_verify({"norm", "l1"}, options);
        std::cout.rdbuf(old);
        CHECK(code == 0);
        CHECK(captured.str().find("[PASS] norm:") != std::string::npos);
    }
    const Json report = Json::parse(slurp(scratch("verify_report.json")));
    CHECK(report["pass"] == true);
    REQUIRE(report["suites"].size() == 2);
    CHECK(report["suites"][0]["suite"] == "norm");
    const Json& check = report["suites"][0]["checks"][0];
    for (const char* key : {"name", "predicted", "empirical", "se", "pass", "note"}) {
        CHECK(check.contains(key));
    }
    CHECK_THROWS_AS(cmd_verify({"no_such_suite"}, CliOptions{}), ConfigError);
}
