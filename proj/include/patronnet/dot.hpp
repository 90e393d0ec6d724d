#pragma once

#include <string>

#include "patronnet/dependence.hpp"

namespace patronnet {

// Graphviz rendering of a village dependence network. Output is
// deterministic: nodes sorted by id, fixed attribute order, so identical
// inputs give byte-identical text. Elites get a distinguished shape;
// clients and non-clients get distinct styles; edges carry their
// connection-kind label.
std::string export_dot(const DependenceNetwork& net, const VillageClassification& classification);

}  // namespace patronnet
