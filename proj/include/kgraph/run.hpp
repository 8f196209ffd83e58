#pragma once

#include <chrono>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kgraph/algebra.hpp"
#include "kgraph/deciders.hpp"
#include "kgraph/dsl.hpp"
#include "kgraph/verdict.hpp"

namespace kgraph {

/// One executed directive: its verdict, any extra payload (matrices,
/// frontier sets, ...) and timing. Timing is excluded from round-trip
/// comparisons.
struct DirectiveResult {
  std::string directive;
  std::map<std::string, std::string> options;
  Verdict verdict;
  Json payload = Json::object();
  double millis = 0.0;

  Json to_json() const {
    return Json{{"directive", directive}, {"options", options},
                {"verdict", verdict.to_json()}, {"payload", payload},
                {"millis", millis}};
  }
  static DirectiveResult from_json(const Json& j) {
    DirectiveResult r;
    r.directive = j.at("directive");
    r.options = j.at("options").get<std::map<std::string, std::string>>();
    const Json& v = j.at("verdict");
    std::string st = v.at("status");
    r.verdict.status = st == "holds"   ? Verdict::Status::Holds
                       : st == "fails" ? Verdict::Status::Fails
                                       : Verdict::Status::Unknown;
    r.verdict.provenance = v.at("provenance");
    r.verdict.witness = v.at("witness");
    r.payload = j.at("payload");
    r.millis = j.at("millis");
    return r;
  }
  /// Equality of verdict content, ignoring timing.
  friend bool same_content(const DirectiveResult& a,
                           const DirectiveResult& b) {
    return a.directive == b.directive && a.options == b.options &&
           a.verdict.status == b.verdict.status &&
           a.verdict.provenance == b.verdict.provenance &&
           a.verdict.witness == b.verdict.witness && a.payload == b.payload;
  }
};

struct Report {
  static constexpr const char* kSchema = "report-v1";
  std::string source;
  int rank = 0;
  std::vector<DirectiveResult> results;

  Json to_json() const {
    Json rs = Json::array();
    for (const auto& r : results) rs.push_back(r.to_json());
    return Json{{"schema", kSchema},
                {"source", source},
                {"rank", rank},
                {"results", rs}};
  }
  static Report from_json(const Json& j) {
    if (j.at("schema") != kSchema)
      throw BadParams("unknown report schema");
    Report rep;
    rep.source = j.at("source");
    rep.rank = j.at("rank");
    for (const auto& r : j.at("results"))
      rep.results.push_back(DirectiveResult::from_json(r));
    return rep;
  }

  friend bool same_content(const Report& a, const Report& b) {
    if (a.source != b.source || a.rank != b.rank ||
        a.results.size() != b.results.size())
      return false;
    for (std::size_t i = 0; i < a.results.size(); ++i)
      if (!same_content(a.results[i], b.results[i])) return false;
    return true;
  }

  bool any_unknown() const {
    for (const auto& r : results)
      if (r.verdict.unknown()) return true;
    return false;
  }
};

inline std::string emit_text(const Report& rep) {
  std::ostringstream os;
  os << "# " << rep.source << " (rank " << rep.rank << ")\n";
  for (const auto& r : rep.results) {
    os << "[" << r.verdict.status_str() << "] " << r.directive;
    for (const auto& [k, v] : r.options) os << " --" << k << '=' << v;
    os << "\n  route: " << r.verdict.provenance << "\n";
    if (!r.verdict.witness.empty())
      os << "  witness: " << r.verdict.witness.dump() << "\n";
    if (!r.payload.empty()) os << "  payload: " << r.payload.dump() << "\n";
  }
  return os.str();
}

inline std::string emit_json(const Report& rep) {
  return rep.to_json().dump(2) + "\n";
}

/// Executes a document's directives in order. Deterministic given the
/// same inputs and bounds; bounds come from per-directive options over
/// defaults (and the KGRAPH_MAX_DEPTH environment override).
class Runner {
 public:
  explicit Runner(const KgDocument& doc, std::string source_name = "kg")
      : doc_(doc), source_(std::move(source_name)) {
    // An invalid graph must still produce a readable validation report,
    // so construction failures are deferred to the directives that need
    // the graph.
    try {
      graph_ = doc.build_graph();
    } catch (const Error& e) {
      graph_error_ = e.what();
    }
    if (graph_) {
      sem_ = doc.build_semigroup();
      if (sem_) eta_ = doc.build_labeling(*graph_, *sem_);
    }
  }

  const KGraph& graph() const {
    if (!graph_) throw InvalidGraph(graph_error_);
    return *graph_;
  }

  Report run() {
    Report rep;
    rep.source = source_;
    rep.rank = doc_.rank;
    for (const auto& d : doc_.directives) rep.results.push_back(exec(d));
    if (doc_.directives.empty()) {
      KgDocument::Directive d;
      d.name = "validate";
      rep.results.push_back(exec(d));
    }
    return rep;
  }

  DirectiveResult exec(const KgDocument::Directive& d) {
    DirectiveResult res;
    res.directive = d.name;
    res.options = d.options;
    auto start = std::chrono::steady_clock::now();
    try {
      dispatch(d, res);
    } catch (const Error& e) {
      res.verdict = Verdict::make_unknown(
          "error", Json{{"error", e.what()},
                        {"directive_line", d.line}});
      res.payload["error"] = e.what();
    }
    res.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    return res;
  }

 private:
  SearchBounds bounds_for(const KgDocument::Directive& d) const {
    SearchBounds b = SearchBounds::defaults_for(graph());
    auto get = [&](const char* key) -> std::optional<int> {
      auto it = d.options.find(key);
      if (it == d.options.end()) return std::nullopt;
      return std::stoi(it->second);
    };
    if (auto v = get("max-depth")) b.max_path_depth = *v;
    if (auto v = get("max-cofinal-n")) b.max_cofinal_n = *v;
    if (auto v = get("radius")) b.generator_radius = *v;
    if (auto v = get("witness-slack")) b.witness_slack = *v;
    auto it = d.options.find("max-degree");
    if (it != d.options.end()) {
      std::vector<int> coords;
      std::istringstream is(it->second);
      std::string part;
      while (std::getline(is, part, ',')) coords.push_back(std::stoi(part));
      if (static_cast<int>(coords.size()) == 1)
        coords.assign(graph().rank(), coords[0]);
      if (static_cast<int>(coords.size()) != graph().rank())
        throw BadParams("--max-degree rank mismatch");
      b.pair_box = Degree(coords);
    }
    return b;
  }

  const Semigroup& need_semigroup() const {
    if (!sem_) throw BadParams("directive needs a semigroup block");
    return *sem_;
  }
  const Labeling& need_labeling() const {
    if (!eta_) throw BadParams("directive needs label lines");
    return *eta_;
  }
  SgWindow window_or(const std::string& fallback) const {
    return SgWindow::parse(doc_.window.value_or(fallback));
  }

  void dispatch(const KgDocument::Directive& d, DirectiveResult& res) {
    const std::string& name = d.name;
    if (name == "validate") {
      ValidationReport rep = doc_.validate_graph();
      res.verdict = rep.ok()
                        ? Verdict::make_holds("validation")
                        : Verdict::make_fails("validation",
                                              Json{{"summary", rep.summary()}});
      if (graph_) {
        res.payload = Json{{"vertices", graph_->num_vertices()},
                           {"edges", graph_->num_edges()},
                           {"squares", graph_->num_squares()}};
        if (sem_) {
          auto lrep = validate_labeling(*graph_, *sem_, need_labeling());
          if (!lrep.ok())
            res.verdict = Verdict::make_fails(
                "labeling-validation", Json{{"summary", lrep.summary()}});
        }
      }
    } else if (name == "matrices") {
      ComponentMatrices cm = component_matrices(graph());
      res.payload["commuting"] = cm.commuting;
      Json ms = Json::array();
      for (const auto& m : cm.m) ms.push_back(m.to_string());
      res.payload["matrices"] = ms;
      auto it = d.options.find("N");
      if (it != d.options.end()) {
        std::vector<int> coords;
        std::istringstream is(it->second);
        std::string part;
        while (std::getline(is, part, ',')) coords.push_back(std::stoi(part));
        res.payload["power"] =
            matrix_power(cm, Degree(coords)).to_string();
      }
      res.verdict = cm.commuting
                        ? Verdict::make_holds("component-matrices")
                        : Verdict::make_fails(
                              "component-matrices",
                              Json{{"note", "matrices do not commute"}});
    } else if (name == "strong-connectivity") {
      bool sc = is_strongly_connected(graph());
      res.verdict = sc ? Verdict::make_holds("skeleton-scc")
                       : Verdict::make_fails("skeleton-scc");
    } else if (name == "primitivity") {
      auto pr = is_primitive(graph());
      if (pr.primitive)
        res.verdict = Verdict::make_holds(
            "wielandt-powering", Json{{"N", pr.witness.to_string()}});
      else {
        Json w{{"certificate", pr.certificate}};
        if (graph().skeleton_connected() && !graph().has_sources() &&
            !graph().windowed()) {
          Semigroup zk = Semigroup::zk(graph().rank());
          Labeling dl = degree_labeling(graph());
          LabelStructure ls = build_label_structure(graph(), zk, dl);
          if (!ls.h[0].is_full())
            w["residue_certificate"] =
                Json{{"defect_lattice", ls.h[0].to_string()}};
        }
        res.verdict = Verdict::make_fails("wielandt-powering", w);
      }
    } else if (name == "period") {
      res.payload["period"] = period(graph());
      res.verdict = Verdict::make_holds("level-gcd");
    } else if (name == "aperiodicity") {
      res.verdict = is_aperiodic(graph(), bounds_for(d));
    } else if (name == "cofinality") {
      res.verdict = is_cofinal(graph(), bounds_for(d));
    } else if (name == "system-cofinality") {
      res.verdict = system_cofinal(graph(), need_semigroup(), need_labeling(),
                                   bounds_for(d));
    } else if (name == "upper-density") {
      res.verdict = upper_dense(graph(), need_semigroup(), need_labeling(),
                                bounds_for(d));
    } else if (name == "s-primitivity") {
      res.verdict = s_primitive(graph(), need_semigroup(), need_labeling(),
                                bounds_for(d));
    } else if (name == "gamma" || name == "label-differences") {
      auto r = label_difference_set(graph(), need_semigroup(), need_labeling(),
                                    bounds_for(d));
      res.verdict = r.covers_group;
      Json found = Json::array();
      for (const auto& e : r.found) {
        found.push_back(need_semigroup().format(e));
        if (found.size() >= 64) break;
      }
      res.payload["elements"] = found;
    } else if (name == "frontier") {
      auto vit = d.options.find("vertex");
      int v = vit == d.options.end() ? 0 : graph().vertex(vit->second);
      auto nit = d.options.find("max");
      int maxn = nit == d.options.end() ? 3 : std::stoi(nit->second);
      FrontierScan scan = frontier_scan(graph(), v, maxn);
      res.payload = scan.to_json();
      Json fronts = Json::object();
      for (const Degree& n :
           degrees_upto(Degree::uniform(graph().rank(), std::min(maxn, 2)))) {
        try {
          Frontier f = frontier(graph(), v, n);
          Json vs = Json::array(), fvs = Json::array();
          for (int x : f.v_set) vs.push_back(graph().vertex_name(x));
          for (int x : f.fv_set) fvs.push_back(graph().vertex_name(x));
          fronts[n.to_string()] = Json{{"V", vs}, {"FV", fvs}};
        } catch (const WindowExceeded&) {
          break;
        }
      }
      res.payload["frontiers"] = fronts;
      res.verdict = Verdict::make_holds("backward-reachability");
    } else if (name == "skew") {
      SkewProduct sp = skew_product(graph(), need_semigroup(), need_labeling(),
                                    window_or("all"));
      res.payload = Json{{"vertices", sp.graph.num_vertices()},
                         {"edges", sp.graph.num_edges()},
                         {"squares", sp.graph.num_squares()},
                         {"clipped", sp.graph.any_clips()}};
      res.verdict = is_aperiodic(sp, bounds_for(d));
    } else if (name == "simplicity") {
      const std::string& target = d.options.at("target");
      SearchBounds b = bounds_for(d);
      SimplicityReport sr;
      if (target == "graph")
        sr = simplicity_report(SimplicityTarget::Graph, graph(), b);
      else if (target == "af-core")
        sr = simplicity_report(SimplicityTarget::AfCore, graph(), b);
      else if (target == "skew")
        sr = simplicity_report(SimplicityTarget::Skew, graph(), b,
                               &need_semigroup(), &need_labeling());
      else if (target == "fixed-point")
        sr = simplicity_report(SimplicityTarget::FixedPoint, graph(), b,
                               &need_semigroup(), &need_labeling());
      else
        throw BadParams("unknown simplicity target " + target);
      res.verdict = sr.verdict;
      res.payload["chain"] = sr.chain;
    } else {
      throw BadParams("unknown directive '" + name + "'");
    }
  }

  KgDocument doc_;
  std::string source_;
  std::optional<KGraph> graph_;
  std::string graph_error_;
  std::optional<Semigroup> sem_;
  std::optional<Labeling> eta_;
};

inline Report run_document(const KgDocument& doc,
                           const std::string& source_name) {
  Runner r(doc, source_name);
  return r.run();
}

}  // namespace kgraph
