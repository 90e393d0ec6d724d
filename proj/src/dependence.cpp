#include "patronnet/dependence.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace patronnet {

const char* to_label(ConnectionKind k) {
    switch (k) {
        case ConnectionKind::A: return "A";
        case ConnectionKind::B: return "B";
        case ConnectionKind::C: return "C";
    }
    return "?";
}

std::optional<ConnectionKind> derive_connection(std::span<const EdgeLabel> links) {
    if (links.empty()) return std::nullopt;
    if (links.size() == 1) {
        return links[0].category.cruciality == Cruciality::Crucial
                   ? std::optional<ConnectionKind>(ConnectionKind::A)
                   : std::nullopt;
    }
    Sphere first = links[0].category.sphere;
    bool same_sphere = std::all_of(links.begin(), links.end(), [&](const EdgeLabel& e) {
        return e.category.sphere == first;
    });
    return same_sphere ? ConnectionKind::B : ConnectionKind::C;
}

Threshold Threshold::parse(const std::string& text) {
    std::string_view s = text;
    std::int64_t num = 0;
    std::int64_t den = 1;
    std::size_t i = 0;
    bool any_digit = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
        num = num * 10 + (s[i] - '0');
        any_digit = true;
        if (num > 1'000'000'000) throw std::invalid_argument("threshold too precise: " + text);
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
            num = num * 10 + (s[i] - '0');
            den *= 10;
            any_digit = true;
            if (den > 1'000'000'000) throw std::invalid_argument("threshold too precise: " + text);
        }
    }
    if (!any_digit || i != s.size()) {
        throw std::invalid_argument("threshold must be a decimal fraction: " + text);
    }
    if (num <= 0 || num >= den) {
        throw std::invalid_argument("threshold must lie strictly between 0 and 1: " + text);
    }
    return Threshold{num, den};
}

DependenceNetwork derive_dependence_network(const ServiceMultigraph& g, std::size_t n_sampled) {
    DependenceNetwork net;
    net.nodes = g.nodes;
    net.sampled = g.sampled;
    net.n_sampled = n_sampled;

    std::map<std::pair<std::string, std::string>, ConnectionKind> connections;
    for (const auto& [pair, labels] : g.edges) {
        if (auto kind = derive_connection(labels)) {
            connections.emplace(pair, *kind);
        }
    }
    // Keep M->N only when N has no connection of any kind back to M; longer
    // directed cycles survive.
    for (const auto& [pair, kind] : connections) {
        if (!connections.count({pair.second, pair.first})) {
            net.edges.emplace(pair, kind);
        }
    }
    return net;
}

namespace {

std::map<std::string, std::size_t> dependent_counts(const DependenceNetwork& net) {
    std::map<std::string, std::size_t> counts;
    for (const auto& [pair, kind] : net.edges) {
        if (net.sampled.count(pair.first)) {
            ++counts[pair.second];
        }
    }
    return counts;
}

}  // namespace

std::set<std::string> identify_elites(const DependenceNetwork& net, Threshold threshold) {
    std::set<std::string> elites;
    for (const auto& [id, count] : dependent_counts(net)) {
        if (threshold.exceeded_by(count, net.n_sampled)) {
            elites.insert(id);
        }
    }
    return elites;
}

VillageClassification classify_households(const DependenceNetwork& net,
                                          const std::set<std::string>& elites,
                                          Threshold threshold,
                                          const std::string& village_id) {
    VillageClassification c;
    c.village_id = village_id;
    c.n_sampled = net.n_sampled;
    c.threshold = threshold;

    auto counts = dependent_counts(net);
    for (const auto& id : elites) {
        std::size_t count = counts.count(id) ? counts.at(id) : 0;
        c.elites.push_back(EliteInfo{id, count, net.sampled.count(id) != 0});
    }

    std::set<std::string> client_set;
    for (const auto& [pair, kind] : net.edges) {
        if (net.sampled.count(pair.first) && elites.count(pair.second) && !elites.count(pair.first)) {
            client_set.insert(pair.first);
        }
    }
    for (const auto& id : net.sampled) {
        if (elites.count(id)) continue;
        if (client_set.count(id)) {
            c.clients.push_back(id);
        } else {
            c.non_clients.push_back(id);
        }
    }
    return c;
}

std::vector<std::vector<std::string>> cycle_report(const DependenceNetwork& net, int max_len) {
    std::vector<std::string> nodes(net.nodes.begin(), net.nodes.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = static_cast<int>(i);

    std::vector<std::vector<int>> out(nodes.size());
    for (const auto& [pair, kind] : net.edges) {
        out[index.at(pair.first)].push_back(index.at(pair.second));
    }
    for (auto& adj : out) std::sort(adj.begin(), adj.end());

    std::vector<std::vector<std::string>> cycles;
    std::vector<int> path;
    std::vector<bool> on_path(nodes.size(), false);

    // Rooting each cycle at its smallest node and only descending into
    // larger indices enumerates every directed cycle exactly once.
    std::function<void(int)> dfs = [&](int u) {
        for (int v : out[u]) {
            int root = path.front();
            if (v == root) {
                if (path.size() >= 3) {
                    std::vector<std::string> cycle;
                    cycle.reserve(path.size());
                    for (int idx : path) cycle.push_back(nodes[idx]);
                    cycles.push_back(std::move(cycle));
                }
            } else if (v > root && !on_path[v] && static_cast<int>(path.size()) < max_len) {
                path.push_back(v);
                on_path[v] = true;
                dfs(v);
                on_path[v] = false;
                path.pop_back();
            }
        }
    };
    for (std::size_t r = 0; r < nodes.size(); ++r) {
        path.assign(1, static_cast<int>(r));
        on_path[r] = true;
        dfs(static_cast<int>(r));
        on_path[r] = false;
    }
    return cycles;
}

nlohmann::json classification_json(const VillageClassification& c) {
    nlohmann::json elites = nlohmann::json::array();
    for (const auto& e : c.elites) {
        elites.push_back({{"id", e.id},
                          {"dependent_count", e.dependent_count},
                          {"is_sampled", e.is_sampled}});
    }
    nlohmann::json cycles = nlohmann::json::object();
    for (const auto& [len, count] : c.cycle_count_by_length) {
        cycles[std::to_string(len)] = count;
    }
    return nlohmann::json{{"village_id", c.village_id},
                          {"n_sampled", c.n_sampled},
                          {"threshold", c.threshold.value()},
                          {"elite_village", c.elite_village()},
                          {"elites", elites},
                          {"clients", c.clients},
                          {"non_clients", c.non_clients},
                          {"cycles", {{"count_by_length", cycles}}}};
}

VillageAnalysis analyze_village(const VillageDataset& dataset, const ServiceTaxonomy& taxonomy,
                                Threshold threshold) {
    VillageAnalysis a;
    a.multigraph = build_multigraph(dataset, taxonomy);
    a.network = derive_dependence_network(a.multigraph, dataset.n_sampled());
    auto elites = identify_elites(a.network, threshold);
    a.classification = classify_households(a.network, elites, threshold, dataset.village_id);
    for (const auto& cycle : cycle_report(a.network)) {
        ++a.classification.cycle_count_by_length[static_cast<int>(cycle.size())];
    }
    return a;
}

}  // namespace patronnet
