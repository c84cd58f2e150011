#include "debatelab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "debatelab/theory.hpp"
#include "debatelab/verify.hpp"

namespace debatelab {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file: " + path);
    }
    out << content;
    if (!out) {
        throw ConfigError("short write to " + path);
    }
}

void write_metadata(const std::string& result_path, const Json& config, std::uint64_t seed,
                    double duration_seconds) {
    RunMetadata meta;
    meta.config_hash = config_hash_hex(config);
    meta.seed = seed;
    meta.generator = RngStream::kGeneratorId;
    meta.build = build_identifier();
    meta.duration_seconds = duration_seconds;
    write_file(result_path + ".meta.json", meta.to_json().dump(2) + "\n");
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double require_number(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw ConfigError(where + ": field '" + key + "' must be a number");
    }
    return obj[key].get<double>();
}

int require_int(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number_integer()) {
        throw ConfigError(where + ": field '" + key + "' must be an integer");
    }
    return obj[key].get<int>();
}

std::string require_string(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw ConfigError(where + ": field '" + key + "' must be a string");
    }
    return obj[key].get<std::string>();
}

std::vector<double> number_array(const Json& arr, const std::string& where) {
    if (!arr.is_array()) {
        throw ConfigError(where + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) {
            throw ConfigError(where + " must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

Json RunMetadata::to_json() const {
    return Json{{"config_hash", config_hash},
                {"seed", seed},
                {"generator", generator},
                {"build", build},
                {"duration_seconds", duration_seconds}};
}

std::string build_identifier() {
    return std::string("debatelab 0.1.0 (") + __VERSION__ + ")";
}

std::string config_hash_hex(const Json& config) {
    const std::string dump = config.dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
    return buf;
}

Json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file: " + path);
    }
    Json config = Json::parse(in, nullptr, false);
    if (config.is_discarded()) {
        throw ConfigError("config file is not valid JSON: " + path);
    }
    return config;
}

void check_fields(const Json& object, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
    if (!object.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    for (const std::string& key : required) {
        if (!object.contains(key)) {
            throw ConfigError(where + ": missing required field '" + key + "'");
        }
    }
    std::set<std::string> allowed(required.begin(), required.end());
    allowed.insert(optional.begin(), optional.end());
    for (const auto& [key, value] : object.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw ConfigError(where + ": unknown field '" + key + "'");
        }
    }
}

namespace {

Topology parse_topology(const Json& doc) {
    const std::string type = require_string(doc, "type", "topology");
    Topology topology;
    if (type == "decentralized") {
        check_fields(doc, "topology", {"type"}, {"include_self"});
        topology.variant = Decentralized{doc.value("include_self", true)};
    } else if (type == "sparse") {
        check_fields(doc, "topology", {"type", "adjacency"}, {"include_self"});
        Sparse sparse;
        sparse.include_self = doc.value("include_self", true);
        if (!doc["adjacency"].is_array()) {
            throw ConfigError("topology: adjacency must be an array of index arrays");
        }
        for (const auto& row : doc["adjacency"]) {
            std::vector<int> indices;
            for (const auto& v : number_array(row, "topology adjacency row")) {
                indices.push_back(static_cast<int>(v));
            }
            sparse.adjacency.push_back(std::move(indices));
        }
        topology.variant = std::move(sparse);
    } else if (type == "centralized") {
        check_fields(doc, "topology", {"type", "center"}, {});
        topology.variant = Centralized{require_int(doc, "center", "topology")};
    } else {
        throw ConfigError("topology: unknown type '" + type + "'");
    }
    return topology;
}

CritiqueModel parse_critique(const Json& doc) {
    const std::string type = require_string(doc, "type", "critique");
    if (type == "null") {
        check_fields(doc, "critique", {"type"}, {});
        return CritiqueModel::null_critique();
    }
    if (type == "proportional") {
        check_fields(doc, "critique", {"type", "mass"}, {});
        return CritiqueModel::proportional(require_number(doc, "mass", "critique"));
    }
    if (type == "oracle_shift") {
        check_fields(doc, "critique", {"type", "mass", "mu"}, {});
        return CritiqueModel::oracle_shift(require_number(doc, "mass", "critique"),
                                           require_number(doc, "mu", "critique"));
    }
    if (type == "policy_backed") {
        check_fields(doc, "critique", {"type", "mass", "policy"}, {});
        const Json policy_doc = load_config_file(require_string(doc, "policy", "critique"));
        auto policy = std::make_shared<const TabularPolicy>(policy_from_json(policy_doc));
        return CritiqueModel::policy_backed(require_number(doc, "mass", "critique"),
                                            make_second_turn_provider(std::move(policy)));
    }
    throw ConfigError("critique: unknown type '" + type + "'");
}

InitScheme parse_init(const Json& doc) {
    const std::string type = require_string(doc, "type", "init");
    if (type == "homogeneous") {
        check_fields(doc, "init", {"type", "alpha0"}, {});
        return Homogeneous{number_array(doc["alpha0"], "init.alpha0")};
    }
    if (type == "per_agent") {
        check_fields(doc, "init", {"type", "alphas"}, {"social_weights"});
        PerAgent per;
        if (!doc["alphas"].is_array()) {
            throw ConfigError("init.alphas must be an array of alpha arrays");
        }
        for (const auto& row : doc["alphas"]) {
            per.alphas.push_back(number_array(row, "init.alphas row"));
        }
        if (doc.contains("social_weights")) {
            per.social_weights = number_array(doc["social_weights"], "init.social_weights");
        }
        return per;
    }
    throw ConfigError("init: unknown type '" + type + "'");
}

}  // namespace

DebateConfig parse_debate_config(const Json& config) {
    check_fields(config, "simulate config",
                 {"num_agents", "rounds", "answers", "topology", "social_weight", "critique",
                  "init", "replicates"},
                 {"correct_label", "sampling", "seed", "prompt", "sweep"});

    DebateConfig out;
    out.num_agents = require_int(config, "num_agents", "simulate config");
    out.rounds = require_int(config, "rounds", "simulate config");
    out.answer_count = require_int(config, "answers", "simulate config");
    out.topology = parse_topology(config["topology"]);
    out.social_weight = require_number(config, "social_weight", "simulate config");
    out.critique = parse_critique(config["critique"]);
    out.init = parse_init(config["init"]);
    out.correct_label = config.value("correct_label", 1);
    out.prompt_id = config.value("prompt", 0);
    out.replicates = require_int(config, "replicates", "simulate config");
    if (config.contains("seed")) {
        out.seed = config["seed"].get<std::uint64_t>();
    }
    const std::string sampling = config.value("sampling", "compound");
    if (sampling == "compound") {
        out.sampling = SampleMode::Compound;
    } else if (sampling == "marginal") {
        out.sampling = SampleMode::Marginal;
    } else {
        throw ConfigError("simulate config: sampling must be compound or marginal");
    }
    out.validate();
    return out;
}

namespace {

std::vector<int> sweep_values(const Json& config, const std::string& key, int fallback) {
    if (!config.contains("sweep") || !config["sweep"].contains(key)) {
        return {fallback};
    }
    std::vector<int> out;
    for (const auto& v : number_array(config["sweep"][key], "sweep." + key)) {
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) {
        throw ConfigError("sweep." + key + " must not be empty");
    }
    return out;
}

}  // namespace

int cmd_simulate(const Json& config, const CliOptions& options) {
    Stopwatch watch;
    if (options.out_path.empty()) {
        throw ConfigError("simulate needs --out");
    }
    if (config.contains("sweep")) {
        check_fields(config["sweep"], "sweep", {}, {"num_agents", "rounds"});
    }
    DebateConfig base = parse_debate_config(config);
    if (options.seed) {
        base.seed = *options.seed;
    }

    const std::vector<int> agent_counts = sweep_values(config, "num_agents", base.num_agents);
    const std::vector<int> round_counts = sweep_values(config, "rounds", base.rounds);

    std::ostringstream body;
    if (options.format == "csv") {
        body << "num_agents,rounds,round,maj_acc,maj_se,debate_acc,debate_se,delta\n";
    } else if (options.format != "jsonl") {
        throw ConfigError("format must be csv or jsonl");
    }

    for (int n : agent_counts) {
        for (int t : round_counts) {
            DebateConfig block = base;
            block.num_agents = n;
            block.rounds = t;
            block.validate();

            if (options.format == "csv") {
                const ReplicateSummary acc = replicate(
                    block,
                    [&block](const Trajectory& traj) {
                        return system_correct_metric(traj, block.correct_label);
                    },
                    options.threads);
                const double maj = acc.mean[0];
                const double maj_se = acc.se[0];
                for (int round = 0; round <= t; ++round) {
                    const auto idx = static_cast<std::size_t>(round);
                    body << n << ',' << t << ',' << round << ',' << format_double(maj) << ','
                         << format_double(maj_se) << ',' << format_double(acc.mean[idx]) << ','
                         << format_double(acc.se[idx]) << ','
                         << format_double(acc.mean[idx] - maj) << "\n";
                }
            } else {
                // full trajectories, one JSON record per replicate per round
                const RngStream master(block.seed);
                for (int r = 0; r < block.replicates; ++r) {
                    const Trajectory traj =
                        run_debate(block, master.child(static_cast<std::uint64_t>(r)));
                    for (const auto& rec : traj.rounds) {
                        Json line{{"replicate", r},     {"round", rec.round},
                                  {"answers", rec.answers}, {"winner", rec.winner},
                                  {"tie", rec.tie},     {"p", rec.p},
                                  {"p_bar", rec.p_bar}};
                        body << line.dump() << "\n";
                    }
                }
            }
        }
    }

    write_file(options.out_path, body.str());
    write_metadata(options.out_path, config, base.seed, watch.seconds());
    return 0;
}

namespace {

Json report_to_json(const std::vector<SuiteReport>& reports) {
    Json suites = Json::array();
    bool all_pass = true;
    for (const auto& report : reports) {
        Json checks = Json::array();
        for (const auto& check : report.checks) {
            checks.push_back(Json{{"name", check.name},
                                  {"predicted", check.predicted},
                                  {"empirical", check.empirical},
                                  {"se", check.se},
                                  {"pass", check.pass},
                                  {"note", check.note}});
        }
        suites.push_back(Json{{"suite", report.suite},
                              {"pass", report.pass()},
                              {"checks", std::move(checks)}});
        all_pass = all_pass && report.pass();
    }
    return Json{{"suites", std::move(suites)}, {"pass", all_pass}};
}

}  // namespace

int cmd_verify(const std::vector<std::string>& suites, const CliOptions& options) {
    Stopwatch watch;
    VerifyOptions verify_options;
    if (options.seed) {
        verify_options.seed = *options.seed;
    }
    verify_options.replicate_scale_percent = options.verify_scale_percent;
    verify_options.threads = options.threads;

    const std::vector<SuiteReport> reports = run_verification_suites(suites, verify_options);
    bool all_pass = true;
    for (const auto& report : reports) {
        for (const auto& check : report.checks) {
            std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << report.suite << ": "
                      << check.name << " (predicted " << format_double(check.predicted)
                      << ", empirical " << format_double(check.empirical) << ", se "
                      << format_double(check.se) << ")"
                      << (check.note.empty() ? "" : " -- " + check.note) << "\n";
        }
        all_pass = all_pass && report.pass();
    }

    const Json report_json = report_to_json(reports);
    if (!options.out_path.empty()) {
        write_file(options.out_path, report_json.dump(2) + "\n");
        Json config{{"command", "verify"}, {"suites", suites}};
        write_metadata(options.out_path, config, verify_options.seed, watch.seconds());
    }
    return all_pass ? 0 : 2;
}

ToyTask task_from_json(const Json& task_json, std::uint64_t fallback_seed) {
    check_fields(task_json, "task", {"prompts", "answers"},
                 {"correct", "init_correct_prob", "prob_low", "prob_high", "seed"});
    const int prompts = require_int(task_json, "prompts", "task");
    const int answers = require_int(task_json, "answers", "task");

    if (task_json.contains("correct") != task_json.contains("init_correct_prob")) {
        throw ConfigError("task: give both 'correct' and 'init_correct_prob' or neither");
    }
    ToyTask task;
    if (task_json.contains("correct")) {
        task.num_prompts = prompts;
        task.answer_count = answers;
        for (const auto& v : number_array(task_json["correct"], "task.correct")) {
            task.correct.push_back(static_cast<Label>(v));
        }
        task.init_correct_prob = number_array(task_json["init_correct_prob"], "task.init_correct_prob");
        task.validate();
        return task;
    }
    const double lo = task_json.value("prob_low", 0.15);
    const double hi = task_json.value("prob_high", 0.45);
    RngStream rng(task_json.value("seed", fallback_seed));
    return make_task(prompts, answers, lo, hi, rng);
}

Json policy_to_json(const TabularPolicy& policy, const ToyTask& task) {
    const int M = policy.prompts();
    const int K = policy.answers();
    Json first = Json::array();
    for (int m = 0; m < M; ++m) {
        Json row = Json::array();
        for (int k = 0; k < K; ++k) {
            row.push_back(policy.first_table()[static_cast<std::size_t>(m) * K + k]);
        }
        first.push_back(std::move(row));
    }
    Json second = Json::array();
    std::size_t idx = 0;
    for (int m = 0; m < M; ++m) {
        Json by_a1 = Json::array();
        for (int a1 = 0; a1 < K; ++a1) {
            Json by_a2 = Json::array();
            for (int a2 = 0; a2 < K; ++a2) {
                Json row = Json::array();
                for (int k = 0; k < K; ++k) {
                    row.push_back(policy.second_table()[idx++]);
                }
                by_a2.push_back(std::move(row));
            }
            by_a1.push_back(std::move(by_a2));
        }
        second.push_back(std::move(by_a1));
    }
    return Json{{"prompts", M},
                {"answers", K},
                {"first_turn_logits", std::move(first)},
                {"second_turn_logits", std::move(second)},
                {"task", Json{{"correct", task.correct},
                              {"init_correct_prob", task.init_correct_prob}}}};
}

TabularPolicy policy_from_json(const Json& doc) {
    check_fields(doc, "policy", {"prompts", "answers", "first_turn_logits", "second_turn_logits"},
                 {"task"});
    const int M = require_int(doc, "prompts", "policy");
    const int K = require_int(doc, "answers", "policy");
    std::vector<double> first;
    for (const auto& row : doc["first_turn_logits"]) {
        for (const auto& v : number_array(row, "policy first_turn_logits row")) {
            first.push_back(v);
        }
    }
    std::vector<double> second;
    for (const auto& by_a1 : doc["second_turn_logits"]) {
        for (const auto& by_a2 : by_a1) {
            for (const auto& row : by_a2) {
                for (const auto& v : number_array(row, "policy second_turn_logits row")) {
                    second.push_back(v);
                }
            }
        }
    }
    return TabularPolicy(M, K, std::move(first), std::move(second));
}

int cmd_train(const Json& config, const CliOptions& options) {
    Stopwatch watch;
    if (options.out_path.empty()) {
        throw ConfigError("train needs --out");
    }
    check_fields(config, "train config", {"task", "steps", "rollouts", "debate_rollouts"},
                 {"pairing", "learning_rate", "debate_lr_scale", "clip", "critique_mass",
                  "delta_samples", "delta_eval_samples", "seed"});

    std::uint64_t seed = config.value("seed", 0ULL);
    if (options.seed) {
        seed = *options.seed;
    }

    const ToyTask task = task_from_json(config["task"], mix64(seed));
    const int steps = require_int(config, "steps", "train config");

    SelfDebateConfig train_params;
    train_params.rollouts_per_prompt = require_int(config, "rollouts", "train config");
    train_params.debate_rollouts = require_int(config, "debate_rollouts", "train config");
    const std::string pairing = config.value("pairing", "frequency");
    if (pairing == "random") {
        train_params.pairing = PairingRule::Random;
    } else if (pairing == "frequency") {
        train_params.pairing = PairingRule::Frequency;
    } else {
        throw ConfigError("train config: pairing must be random or frequency");
    }
    if (options.rule) {
        train_params.pairing = *options.rule;
    }
    train_params.learning_rate = config.value("learning_rate", 0.3);
    train_params.debate_lr_scale = config.value("debate_lr_scale", 25.0);
    if (config.contains("clip")) {
        check_fields(config["clip"], "clip", {"low", "high"}, {});
        train_params.clip.eps_low = require_number(config["clip"], "low", "clip");
        train_params.clip.eps_high = require_number(config["clip"], "high", "clip");
    }
    train_params.critique_mass = config.value("critique_mass", 1.0);
    train_params.delta_samples = config.value("delta_samples", 512);
    const int eval_samples = config.value("delta_eval_samples", 4000);

    const RngStream root(seed);
    TabularPolicy policy(task);
    const double acc_before = policy.expected_first_turn_accuracy(task);
    const DeltaEstimate before = estimate_delta_from_policy(policy, task, train_params.critique_mass,
                                                            eval_samples, root.child(1000001));

    const TrainingCurves curves = train_self_debate(policy, task, steps, train_params, root.child(1));

    const double acc_after = policy.expected_first_turn_accuracy(task);
    const DeltaEstimate after = estimate_delta_from_policy(policy, task, train_params.critique_mass,
                                                           eval_samples, root.child(1000002));

    std::ostringstream body;
    body << "step,first_turn_acc,debate_acc,kept_debate_prompts,kept_debate_samples,delta_hat\n";
    for (int step = 0; step < steps; ++step) {
        const auto idx = static_cast<std::size_t>(step);
        body << step << ',' << format_double(curves.first_turn_acc[idx]) << ','
             << format_double(curves.debate_acc[idx]) << ',' << curves.kept_debate_prompts[idx]
             << ',' << curves.kept_debate_samples[idx] << ','
             << format_double(curves.delta_hat[idx]) << "\n";
    }
    write_file(options.out_path, body.str());
    write_file(options.out_path + ".policy.json", policy_to_json(policy, task).dump(2) + "\n");

    const Json delta_report{
        {"first_turn_expected_accuracy", Json{{"before", acc_before}, {"after", acc_after}}},
        {"delta_hat_before",
         Json{{"mean", before.mean}, {"se", before.se}, {"samples", before.samples}}},
        {"delta_hat_after",
         Json{{"mean", after.mean}, {"se", after.se}, {"samples", after.samples}}}};
    write_file(options.out_path + ".delta.json", delta_report.dump(2) + "\n");
    write_metadata(options.out_path, config, seed, watch.seconds());

    std::cout << "first-turn expected accuracy " << format_double(acc_before) << " -> "
              << format_double(acc_after) << "\n"
              << "delta_hat " << format_double(before.mean) << " (se "
              << format_double(before.se) << ") -> " << format_double(after.mean) << " (se "
              << format_double(after.se) << ")\n";
    return 0;
}

int cmd_bounds(const Json& config, const CliOptions& options) {
    (void)options;
    const std::string bound = require_string(config, "bound", "bounds config");
    if (bound == "accumulated") {
        check_fields(config, "bounds config", {"bound", "p0", "mu", "s0", "c", "rounds"}, {});
        const AccumulatedBounds b = accumulated_bounds(
            require_number(config, "p0", "bounds"), require_number(config, "mu", "bounds"),
            require_number(config, "s0", "bounds"), require_number(config, "c", "bounds"),
            require_int(config, "rounds", "bounds"));
        std::cout << "harmonic_bound = " << format_double(b.harmonic) << "\n"
                  << "log_bound = " << format_double(b.logarithmic) << "\n";
        return 0;
    }
    if (bound == "vote") {
        check_fields(config, "bounds config", {"bound", "answers", "agents", "rho", "gap"}, {});
        const VoteBound b = vote_error_bound(
            VoteBoundInputs{require_int(config, "answers", "bounds"),
                            require_int(config, "agents", "bounds"),
                            require_number(config, "rho", "bounds"),
                            require_number(config, "gap", "bounds")});
        std::cout << "vote_error_bound = " << format_double(b.value)
                  << (b.vacuous ? " (vacuous)" : "") << "\n";
        return 0;
    }
    if (bound == "neff") {
        check_fields(config, "bounds config", {"bound", "agents", "rho"}, {});
        std::cout << "effective_ensemble_size = "
                  << format_double(effective_ensemble_size(
                         require_int(config, "agents", "bounds"),
                         require_number(config, "rho", "bounds")))
                  << "\n";
        return 0;
    }
    if (bound == "one_step") {
        check_fields(config, "bounds config",
                     {"bound", "p", "alpha_norm", "mass", "social_weight", "neighborhood",
                      "delta", "p_bar"},
                     {});
        DriftInputs in;
        in.p = require_number(config, "p", "bounds");
        in.alpha_norm = require_number(config, "alpha_norm", "bounds");
        in.critique_mass = require_number(config, "mass", "bounds");
        in.social_weight = require_number(config, "social_weight", "bounds");
        in.neighborhood_size = require_int(config, "neighborhood", "bounds");
        in.delta = require_number(config, "delta", "bounds");
        in.p_bar_neighborhood = require_number(config, "p_bar", "bounds");
        std::cout << "expected_next_belief = " << format_double(predict_one_step(in)) << "\n";
        return 0;
    }
    throw ConfigError("bounds config: unknown bound '" + bound + "'");
}

}  // namespace debatelab
