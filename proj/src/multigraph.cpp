#include "patronnet/multigraph.hpp"

namespace patronnet {

std::size_t ServiceMultigraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& [pair, labels] : edges) n += labels.size();
    return n;
}

ServiceMultigraph build_multigraph(const VillageDataset& dataset, const ServiceTaxonomy& taxonomy) {
    ServiceMultigraph g;
    for (const auto& [id, h] : dataset.households) {
        g.nodes.insert(id);
        if (h.sampled) g.sampled.insert(id);
    }
    for (const auto& link : dataset.links) {
        g.nodes.insert(link.receiver);
        g.nodes.insert(link.provider);
        g.edges[{link.receiver, link.provider}].push_back(
            EdgeLabel{link.kind, taxonomy.classify(link.kind)});
    }
    return g;
}

}  // namespace patronnet
