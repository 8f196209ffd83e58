// Builds the strongly-connected-but-imprimitive 2-graph, inspects its
// matrices, and walks the decision chain down to the core's simplicity.

#include <iostream>

#include "kgraph/kgraph.hpp"

int main() {
  using namespace kgraph;
  KGraph g = make_three_vertex();
  ComponentMatrices cm = component_matrices(g);
  std::cout << "M1 = " << cm.m[0].to_string() << "\n"
            << "M2 = " << cm.m[1].to_string() << "\n"
            << "strongly connected: " << std::boolalpha
            << is_strongly_connected(g) << "\n";

  auto pr = is_primitive(g);
  std::cout << "primitive: " << pr.primitive;
  if (!pr.primitive) std::cout << "  (" << pr.certificate << ")";
  std::cout << "\n";

  SearchBounds b = SearchBounds::defaults_for(g);
  Semigroup z2 = Semigroup::zk(2);
  Labeling d = degree_labeling(g);
  Verdict sys = system_cofinal(g, z2, d, b);
  std::cout << "lattice system cofinal: " << sys.status_str() << " via "
            << sys.provenance << "\n";

  auto core = simplicity_report(SimplicityTarget::AfCore, g, b);
  std::cout << "core simple: " << core.verdict.status_str() << "\n";
  for (const auto& step : core.chain) std::cout << "  - " << step << "\n";
  return 0;
}
