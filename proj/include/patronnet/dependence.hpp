#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "patronnet/multigraph.hpp"

namespace patronnet {

// Aggregated strength of all service links from one entity to another.
//   A: exactly one link, and it is crucial
//   B: two or more links, all in the same sphere
//   C: two or more links spanning different spheres
// A single non-crucial link yields no connection.
enum class ConnectionKind { A, B, C };

const char* to_label(ConnectionKind k);

std::optional<ConnectionKind> derive_connection(std::span<const EdgeLabel> links);

// Exact decimal fraction for the elite cutoff, so the strict ">" comparison
// runs on integers and never hits a floating-point boundary.
struct Threshold {
    std::int64_t num = 1;
    std::int64_t den = 20;

    static Threshold parse(const std::string& text);  // decimal in (0,1)
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool exceeded_by(std::size_t count, std::size_t n_sampled) const {
        return static_cast<std::int64_t>(count) * den >
               num * static_cast<std::int64_t>(n_sampled);
    }

    bool operator==(const Threshold&) const = default;
};

// Directed dependence relation (dependent -> patron) after bilateral
// mutual connections are removed. Longer directed cycles are retained.
struct DependenceNetwork {
    std::set<std::string> nodes;
    std::set<std::string> sampled;
    std::map<std::pair<std::string, std::string>, ConnectionKind> edges;
    std::size_t n_sampled = 0;
};

DependenceNetwork derive_dependence_network(const ServiceMultigraph& g, std::size_t n_sampled);

// Entities on which strictly more than threshold x n_sampled of the sampled
// households depend. Non-sampled entities are eligible.
std::set<std::string> identify_elites(const DependenceNetwork& net, Threshold threshold = {});

struct EliteInfo {
    std::string id;
    std::size_t dependent_count = 0;
    bool is_sampled = false;
};

struct VillageClassification {
    std::string village_id;
    std::size_t n_sampled = 0;
    Threshold threshold;
    std::vector<EliteInfo> elites;        // sorted by id
    std::vector<std::string> clients;     // sampled households dependent on an elite
    std::vector<std::string> non_clients; // sampled households that are neither
    std::map<int, std::size_t> cycle_count_by_length;

    bool elite_village() const { return !elites.empty(); }
};

// Elite status dominates: a sampled elite household never appears among
// clients or non-clients.
VillageClassification classify_households(const DependenceNetwork& net,
                                          const std::set<std::string>& elites,
                                          Threshold threshold = {},
                                          const std::string& village_id = {});

// Diagnostic enumeration of simple directed cycles of length 3..max_len.
// Each cycle is reported once, rotated to start at its smallest node id.
std::vector<std::vector<std::string>> cycle_report(const DependenceNetwork& net, int max_len = 6);

nlohmann::json classification_json(const VillageClassification& c);

// Full per-village pipeline: multigraph -> dependence network -> elites ->
// classification, with the cycle summary filled in.
struct VillageAnalysis {
    ServiceMultigraph multigraph;
    DependenceNetwork network;
    VillageClassification classification;
};

VillageAnalysis analyze_village(const VillageDataset& dataset, const ServiceTaxonomy& taxonomy,
                                Threshold threshold = {});

}  // namespace patronnet
