#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "patronnet/survey.hpp"
#include "patronnet/taxonomy.hpp"

namespace patronnet {

struct EdgeLabel {
    std::string kind;
    ServiceCategory category;

    bool operator==(const EdgeLabel&) const = default;
};

// Directed labeled multigraph of service links. Parallel edges between an
// ordered pair carry distinct service kinds; self-edges never occur.
struct ServiceMultigraph {
    std::set<std::string> nodes;
    std::set<std::string> sampled;  // sampled household ids
    std::map<std::pair<std::string, std::string>, std::vector<EdgeLabel>> edges;

    std::size_t edge_count() const;
};

// One labeled edge per canonical link; nodes are all households plus every
// referenced provider (providers may be entities outside the survey).
ServiceMultigraph build_multigraph(const VillageDataset& dataset, const ServiceTaxonomy& taxonomy);

}  // namespace patronnet
