#pragma once

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "kgraph/degree.hpp"
#include "kgraph/graph.hpp"

namespace kgraph {

using Json = nlohmann::json;

/// Three-valued result of a semi-decider. Holds and Fails always carry a
/// machine-checkable witness or name an exact decision route; Unknown
/// records the bounds that were exhausted. The properties decided here
/// quantify over infinitely many degrees, so soundness beats
/// completeness: no verdict is ever stronger than its certificate.
struct Verdict {
  enum class Status { Holds, Fails, Unknown };
  Status status = Status::Unknown;
  std::string provenance;  // decision route that produced the verdict
  Json witness = Json::object();

  bool holds() const { return status == Status::Holds; }
  bool fails() const { return status == Status::Fails; }
  bool unknown() const { return status == Status::Unknown; }

  static Verdict make_holds(std::string route, Json w = Json::object()) {
    return Verdict{Status::Holds, std::move(route), std::move(w)};
  }
  static Verdict make_fails(std::string route, Json w = Json::object()) {
    return Verdict{Status::Fails, std::move(route), std::move(w)};
  }
  static Verdict make_unknown(std::string route, Json w = Json::object()) {
    return Verdict{Status::Unknown, std::move(route), std::move(w)};
  }

  std::string status_str() const {
    switch (status) {
      case Status::Holds:
        return "holds";
      case Status::Fails:
        return "fails";
      case Status::Unknown:
        return "unknown";
    }
    return "?";
  }
  Json to_json() const {
    return Json{{"status", status_str()},
                {"provenance", provenance},
                {"witness", witness}};
  }
};

/// Caps for the bounded searches. The properties quantify over all of
/// N^k; these bound the explored region and are recorded in Unknown
/// verdicts. KGRAPH_MAX_DEPTH overrides max_path_depth globally.
struct SearchBounds {
  Degree pair_box;          // (m,n) box for local-periodicity checks
  int witness_slack = 2;    // extra degree above m v n for witness paths
  int max_path_depth = 8;   // per-coordinate depth for path searches
  int max_cofinal_n = 8;    // per-coordinate cap for the cofinality N
  int generator_radius = 3; // (a,b) sample box radius in S

  static SearchBounds defaults_for(const KGraph& g) {
    SearchBounds b;
    b.pair_box = Degree::uniform(g.rank(), 4);
    int n = g.num_vertices();
    b.max_path_depth = 2 * (n - 1) * (n - 1) + 2;
    if (g.windowed()) {
      // cap by the window's reach; deeper searches only hit clips
      b.max_path_depth = std::min(b.max_path_depth, 2 * n + 2);
    }
    b.max_cofinal_n = std::max(8, std::min(b.max_path_depth, 24));
    if (const char* env = std::getenv("KGRAPH_MAX_DEPTH")) {
      int v = std::atoi(env);
      if (v > 0) b.max_path_depth = v;
    }
    return b;
  }

  Json to_json() const {
    return Json{{"pair_box", pair_box.to_string()},
                {"witness_slack", witness_slack},
                {"max_path_depth", max_path_depth},
                {"max_cofinal_n", max_cofinal_n},
                {"generator_radius", generator_radius}};
  }
};

}  // namespace kgraph
