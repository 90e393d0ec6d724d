#include "patronnet/dot.hpp"

#include <fstream>

#include "doctest.h"
#include "../helpers.hpp"
#include "patronnet/util.hpp"

using namespace patronnet;

namespace {

VillageDataset chain_dataset() {
    VillageDataset v;
    v.village_id = "CHAIN";
    for (const char* id : {"M", "N", "P"}) {
        HouseholdRecord h;
        h.household_id = id;
        h.village_id = v.village_id;
        v.households.emplace(id, std::move(h));
    }
    v.links.push_back({"M", "N", "sale_output", "M"});
    v.links.push_back({"N", "P", "sale_output", "N"});
    std::sort(v.links.begin(), v.links.end());
    return v;
}

}  // namespace

TEST_CASE("empty network renders valid DOT with zero edges") {
    DependenceNetwork net;
    VillageClassification c;
    c.village_id = "EMPTY";
    auto dot = export_dot(net, c);
    CHECK(dot.find("digraph dependence {") == 0);
    CHECK(dot.find("->") == std::string::npos);
    CHECK(dot.back() == '\n');
}

TEST_CASE("elites carry the distinguished shape, clients a distinct style") {
    auto d = chain_dataset();
    auto analysis = analyze_village(d, ServiceTaxonomy::builtin(), Threshold{});
    auto dot = export_dot(analysis.network, analysis.classification);
    // N and P are elites here (1 dependent of 3 sampled is above 5%)
    CHECK(dot.find("\"N\" [shape=doubleoctagon") != std::string::npos);
    CHECK(dot.find("\"P\" [shape=doubleoctagon") != std::string::npos);
    CHECK(dot.find("\"M\" [shape=ellipse, style=filled, fillcolor=lightblue]") !=
          std::string::npos);
    CHECK(dot.find("\"M\" -> \"N\" [label=\"A\"]") != std::string::npos);
}

TEST_CASE("chain fixture matches the golden file byte for byte") {
    auto d = chain_dataset();
    auto analysis = analyze_village(d, ServiceTaxonomy::builtin(), Threshold{});
    auto dot = export_dot(analysis.network, analysis.classification);
    CHECK(dot == read_file_text(testhelp::fixture("golden_chain.dot")));
}

TEST_CASE("export is deterministic across calls") {
    Rng rng(41);
    auto d = testhelp::random_dataset(rng);
    auto a1 = analyze_village(d, ServiceTaxonomy::builtin(), Threshold{});
    auto a2 = analyze_village(d, ServiceTaxonomy::builtin(), Threshold{});
    CHECK(export_dot(a1.network, a1.classification) == export_dot(a2.network, a2.classification));
}
