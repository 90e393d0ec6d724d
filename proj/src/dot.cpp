#include "patronnet/dot.hpp"

#include <set>

namespace patronnet {

namespace {

std::string quoted(const std::string& id) {
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string export_dot(const DependenceNetwork& net, const VillageClassification& classification) {
    std::set<std::string> elites;
    for (const auto& e : classification.elites) elites.insert(e.id);
    std::set<std::string> clients(classification.clients.begin(), classification.clients.end());

    std::string out = "digraph dependence {\n";
    if (!classification.village_id.empty()) {
        out += "  label=" + quoted(classification.village_id) + ";\n";
    }
    out += "  rankdir=LR;\n";
    out += "  node [fontsize=10];\n";

    for (const auto& id : net.nodes) {
        out += "  " + quoted(id);
        if (elites.count(id)) {
            out += " [shape=doubleoctagon, style=filled, fillcolor=gold]";
        } else if (clients.count(id)) {
            out += " [shape=ellipse, style=filled, fillcolor=lightblue]";
        } else if (net.sampled.count(id)) {
            out += " [shape=ellipse]";  // non-client
        } else {
            out += " [shape=diamond]";  // outside entity, never classified
        }
        out += ";\n";
    }
    for (const auto& [pair, kind] : net.edges) {
        out += "  " + quoted(pair.first) + " -> " + quoted(pair.second) + " [label=\"" +
               to_label(kind) + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace patronnet
