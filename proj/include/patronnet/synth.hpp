#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "patronnet/survey.hpp"

namespace patronnet {

struct ConfigInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SynthConfig {
    std::string village_id = "SYN01";
    int n_households = 100;
    int n_hubs = 2;
    int dependents_per_hub = 10;
    double reciprocal_pair_rate = 0.0;  // mutual link pairs among non-hub households
    double noise_link_rate = 0.0;       // extra links over ordered non-hub pairs
    double crucial_fraction = 1.0;      // share of planted bundles that are a single crucial link
    std::uint64_t seed = 1;
};

struct GroundTruth {
    std::vector<std::string> hubs;
    std::map<std::string, std::vector<std::string>> clients_by_hub;
};

struct SynthResult {
    VillageDataset dataset;
    GroundTruth truth;
};

// Plants hub-and-spoke patrons in an otherwise reciprocal/noisy village.
// Every planted client carries a dependence-qualifying bundle of links to
// its hub and hubs never source links, so with zero noise the planted hubs
// are exactly the recoverable elites. Deterministic given the config.
SynthResult generate_village(const SynthConfig& config);

struct RecoveryScore {
    double precision = 1;
    double recall = 1;
    bool precision_degenerate = false;  // nothing detected
    bool recall_degenerate = false;     // empty truth
};

RecoveryScore recovery_score(const std::set<std::string>& detected, const GroundTruth& truth);

nlohmann::json ground_truth_json(const GroundTruth& truth);

}  // namespace patronnet
