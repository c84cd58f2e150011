#pragma once

// Configuration documents, seeding, result export and the four experiment
// commands behind the CLI: simulate, verify, train, bounds. Every result
// file is written deterministically (same config + seed + build give
// byte-identical bytes) and is accompanied by a .meta.json sidecar.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "debatelab/debate.hpp"
#include "debatelab/selfdebate.hpp"

namespace debatelab {

using Json = nlohmann::json;

struct CliOptions {
    std::optional<std::uint64_t> seed;  // --seed, overrides the config document
    std::string out_path;               // --out
    std::string format = "csv";         // csv | jsonl
    std::optional<PairingRule> rule;    // --rule, overrides the train config
    int verify_scale_percent = 100;     // --scale, shrinks verify replicate counts
    int threads = 0;
};

struct RunMetadata {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string generator;
    std::string build;
    double duration_seconds = 0.0;

    Json to_json() const;
};

std::string build_identifier();

/// FNV-1a 64 hash of the canonical (key-sorted) dump, as hex.
std::string config_hash_hex(const Json& config);

/// Parses a JSON document from disk; throws ConfigError on IO/parse issues.
Json load_config_file(const std::string& path);

/// Rejects unknown fields and missing required fields.
void check_fields(const Json& object, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional);

/// Builds an engine config from a simulate document (no sweep expansion).
DebateConfig parse_debate_config(const Json& config);

ToyTask task_from_json(const Json& task_json, std::uint64_t fallback_seed);

Json policy_to_json(const TabularPolicy& policy, const ToyTask& task);
TabularPolicy policy_from_json(const Json& doc);

int cmd_simulate(const Json& config, const CliOptions& options);
int cmd_verify(const std::vector<std::string>& suites, const CliOptions& options);
int cmd_train(const Json& config, const CliOptions& options);
int cmd_bounds(const Json& config, const CliOptions& options);

}  // namespace debatelab
