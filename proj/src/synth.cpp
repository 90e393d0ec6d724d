#include "patronnet/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "patronnet/rng.hpp"
#include "patronnet/taxonomy.hpp"

namespace patronnet {

namespace {

// Kind pools drawn from the builtin taxonomy, grouped for bundle building.
const std::vector<std::string>& crucial_kinds() {
    static const std::vector<std::string> kinds{
        "lease_land", "sale_output", "getting_employment", "bribe_welfare",
        "assistance_welfare", "dispute_employment", "guidance_political"};
    return kinds;
}

const std::vector<std::string>& all_kinds() {
    static const std::vector<std::string> kinds = [] {
        auto taxonomy = ServiceTaxonomy::builtin();
        std::vector<std::string> out;
        for (const auto& [kind, cat] : taxonomy.entries()) out.push_back(kind);
        return out;
    }();
    return kinds;
}

std::string household_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "H%04d", i);
    return buf;
}

HouseholdRecord make_household(const std::string& village_id, const std::string& id, bool hub,
                               int index) {
    HouseholdRecord h;
    h.household_id = id;
    h.village_id = village_id;
    h.sampled = true;
    if (hub) {
        h.caste = CasteGroup::UpperOrGeneral;
        h.landholding_acres = 5.0;
        h.assets = AssetFlags{true, true, true, true, true};
        h.occupation = Occupation::Business;
        h.heritage = true;
    } else {
        switch (index % 4) {
            case 0: h.caste = CasteGroup::ScSt; break;
            case 1: h.caste = CasteGroup::Muslim; break;
            case 2: h.caste = CasteGroup::Obc; break;
            default: h.caste = CasteGroup::OtherMissing; break;
        }
        h.landholding_acres = 0.25 * (index % 5);
        h.assets.brick_house = index % 3 == 0;
        h.assets.palang = index % 5 == 0;
        h.occupation = index % 2 == 0 ? Occupation::Farming : Occupation::ManualLabour;
        h.heritage = false;
    }
    return h;
}

}  // namespace

SynthResult generate_village(const SynthConfig& config) {
    if (config.n_households < 1 || config.n_hubs < 0 || config.dependents_per_hub < 0) {
        throw ConfigInfeasible("synth: counts must be non-negative (households >= 1)");
    }
    for (double rate : {config.reciprocal_pair_rate, config.noise_link_rate, config.crucial_fraction}) {
        if (rate < 0.0 || rate > 1.0) throw ConfigInfeasible("synth: rates must lie in [0,1]");
    }
    if (config.n_hubs > config.n_households) {
        throw ConfigInfeasible("synth: more hubs than households");
    }
    if (static_cast<long long>(config.n_hubs) * config.dependents_per_hub >
        config.n_households - config.n_hubs) {
        throw ConfigInfeasible("synth: not enough non-hub households for the planted clients");
    }

    Rng rng(config.seed);
    SynthResult result;
    result.dataset.village_id = config.village_id;
    result.dataset.n_total = config.n_households;

    std::vector<std::string> ids;
    ids.reserve(config.n_households);
    for (int i = 1; i <= config.n_households; ++i) ids.push_back(household_name(i));

    // Hubs and their disjoint client pools come from one shuffled order.
    std::vector<std::string> order = ids;
    rng.shuffle(order);
    std::set<std::string> hubs(order.begin(), order.begin() + config.n_hubs);
    std::vector<std::string> pool(order.begin() + config.n_hubs, order.end());

    for (int i = 0; i < config.n_hubs; ++i) result.truth.hubs.push_back(order[i]);
    std::sort(result.truth.hubs.begin(), result.truth.hubs.end());

    for (int i = 0; i < config.n_households; ++i) {
        const std::string& id = ids[i];
        result.dataset.households.emplace(
            id, make_household(config.village_id, id, hubs.count(id) != 0, i));
    }

    std::set<ServiceLinkRecord> links;
    auto add_link = [&](const std::string& receiver, const std::string& provider,
                        const std::string& kind) {
        links.insert(ServiceLinkRecord{receiver, provider, kind, receiver});
    };

    // Planted hub-and-spoke bundles: client -> hub, never the reverse.
    std::size_t next_client = 0;
    for (const auto& hub : result.truth.hubs) {
        auto& clients = result.truth.clients_by_hub[hub];
        for (int d = 0; d < config.dependents_per_hub; ++d) {
            const std::string& client = pool[next_client++];
            clients.push_back(client);
            if (rng.unit() < config.crucial_fraction) {
                const auto& kinds = crucial_kinds();
                add_link(client, hub, kinds[rng.below(kinds.size())]);
            } else if (rng.unit() < 0.5) {
                // same sphere, two economic kinds
                add_link(client, hub, "getting_employment");
                add_link(client, hub, "sale_output");
            } else {
                // mixed spheres
                add_link(client, hub, "getting_employment");
                add_link(client, hub, "guidance_political");
            }
        }
        std::sort(clients.begin(), clients.end());
    }

    // Reciprocal (friendship-like) pairs among non-hub households; the
    // mutual crucial links cancel under bilateral exclusion.
    std::vector<std::string> non_hubs;
    for (const auto& id : ids) {
        if (!hubs.count(id)) non_hubs.push_back(id);
    }
    if (config.reciprocal_pair_rate > 0) {
        for (std::size_t i = 0; i < non_hubs.size(); ++i) {
            for (std::size_t j = i + 1; j < non_hubs.size(); ++j) {
                if (rng.unit() < config.reciprocal_pair_rate) {
                    add_link(non_hubs[i], non_hubs[j], "dispute_employment");
                    add_link(non_hubs[j], non_hubs[i], "dispute_employment");
                }
            }
        }
    }

    // Background noise over ordered non-hub pairs.
    if (config.noise_link_rate > 0) {
        for (const auto& from : non_hubs) {
            for (const auto& to : non_hubs) {
                if (from == to) continue;
                if (rng.unit() < config.noise_link_rate) {
                    const auto& kinds = all_kinds();
                    add_link(from, to, kinds[rng.below(kinds.size())]);
                }
            }
        }
    }

    result.dataset.links.assign(links.begin(), links.end());
    return result;
}

RecoveryScore recovery_score(const std::set<std::string>& detected, const GroundTruth& truth) {
    std::set<std::string> truth_set(truth.hubs.begin(), truth.hubs.end());
    std::size_t hits = 0;
    for (const auto& id : detected) {
        if (truth_set.count(id)) ++hits;
    }
    RecoveryScore score;
    if (detected.empty()) {
        score.precision_degenerate = true;  // reported as 1 by convention
    } else {
        score.precision = static_cast<double>(hits) / static_cast<double>(detected.size());
    }
    if (truth_set.empty()) {
        score.recall_degenerate = true;
    } else {
        score.recall = static_cast<double>(hits) / static_cast<double>(truth_set.size());
    }
    return score;
}

nlohmann::json ground_truth_json(const GroundTruth& truth) {
    nlohmann::json clients = nlohmann::json::object();
    for (const auto& [hub, ids] : truth.clients_by_hub) clients[hub] = ids;
    return nlohmann::json{{"hubs", truth.hubs}, {"clients_by_hub", clients}};
}

}  // namespace patronnet
