#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kgraph/graph.hpp"
#include "kgraph/intmat.hpp"
#include "kgraph/path.hpp"

namespace kgraph {

/// The k vertex-indexed counting matrices M_i(u,v) = |u Lambda^{e_i} v|.
/// They commute for every valid rule set; M^n counts degree-n paths.
struct ComponentMatrices {
  int rank = 0;
  std::vector<IntMatrix> m;  // m[i-1] = M_i
  bool commuting = true;
  /// Window-generated input: boundary rows/columns undercount, so a
  /// commutation failure is reported rather than treated as an error.
  bool boundary_affected = false;
};

inline ComponentMatrices component_matrices(const KGraph& g) {
  ComponentMatrices cm;
  cm.rank = g.rank();
  cm.boundary_affected = g.any_clips();
  const int n = g.num_vertices();
  cm.m.assign(g.rank(), IntMatrix(n));
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    cm.m[ed.color - 1].at(ed.range, ed.source) += 1;
  }
  for (int i = 0; i < g.rank(); ++i)
    for (int j = i + 1; j < g.rank(); ++j)
      if (cm.m[i] * cm.m[j] != cm.m[j] * cm.m[i]) cm.commuting = false;
  if (!cm.commuting && !cm.boundary_affected)
    throw NonCommuting(
        "component matrices do not commute; the rule set is inconsistent");
  return cm;
}

/// Exact M^N = M_1^{N_1} ... M_k^{N_k}; entry (u,v) = |u Lambda^N v|.
inline IntMatrix matrix_power(const ComponentMatrices& cm, const Degree& n) {
  if (n.rank() != cm.rank) throw BadParams("matrix_power: rank mismatch");
  if (!n.all_nonnegative()) throw BadParams("matrix_power: negative degree");
  IntMatrix r = IntMatrix::identity(cm.m.empty() ? 0 : cm.m[0].size());
  for (int i = 0; i < cm.rank; ++i)
    if (n[i] > 0) r = r * cm.m[i].pow(static_cast<unsigned>(n[i]));
  return r;
}

namespace detail {

/// Tarjan strongly connected components over the colored skeleton
/// (colors forgotten, edges walked range-to-source).
inline std::vector<int> scc_ids(const KGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> ids(n, -1), low(n, 0), num(n, -1), stk;
  std::vector<char> onstk(n, 0);
  int counter = 0, comp = 0;
  // iterative Tarjan
  struct Frame {
    int v;
    int color;
    std::size_t idx;
  };
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> call{{root, 0, 0}};
    num[root] = low[root] = counter++;
    stk.push_back(root);
    onstk[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      int v = f.v;
      bool descended = false;
      while (f.color < g.rank()) {
        const auto& es = g.edges_ranged_at(v, f.color + 1);
        if (f.idx >= es.size()) {
          ++f.color;
          f.idx = 0;
          continue;
        }
        int u = g.edge(es[f.idx++]).source;
        if (num[u] == -1) {
          num[u] = low[u] = counter++;
          stk.push_back(u);
          onstk[u] = 1;
          call.push_back({u, 0, 0});
          descended = true;
          break;
        }
        if (onstk[u]) low[v] = std::min(low[v], num[u]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        for (;;) {
          int u = stk.back();
          stk.pop_back();
          onstk[u] = 0;
          ids[u] = comp;
          if (u == v) break;
        }
        ++comp;
      }
      call.pop_back();
      if (!call.empty())
        low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return ids;
}

}  // namespace detail

/// Whether every ordered vertex pair is joined by a path of strictly
/// positive degree. With no sources this reduces exactly to strong
/// connectivity of the skeleton; otherwise a bounded matrix search over
/// N in a Wielandt-scale box decides the pairs it can reach.
inline bool is_strongly_connected(const KGraph& g) {
  const int n = g.num_vertices();
  if (n == 0) return false;
  if (!g.has_sources()) {
    auto ids = detail::scc_ids(g);
    for (int v = 1; v < n; ++v)
      if (ids[v] != ids[0]) return false;
    return g.num_edges() > 0;
  }
  // Fallback: bounded search for M^N(u,v) > 0 over the box of N > 0,
  // shrunk so the scan stays bounded. Only degenerate source-ful inputs
  // land here.
  ComponentMatrices cm = component_matrices(g);
  int cap = 2 * (n - 1) * (n - 1) + 2;
  auto box_volume = [&](int c) {
    long long vol = 1;
    for (int i = 0; i < g.rank(); ++i) {
      vol *= c;
      if (vol > 200000) return vol;
    }
    return vol;
  };
  while (cap > 1 && box_volume(cap) > 200000) --cap;
  std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
  auto mark = [&](const IntMatrix& m) {
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (m.at(u, v) > 0) seen[u][v] = 1;
  };
  auto rec = [&](auto&& self, int color, const IntMatrix& acc) -> void {
    IntMatrix cur = acc * cm.m[color - 1];  // coordinate starts at 1
    for (int t = 1; t <= cap; ++t) {
      if (color == g.rank())
        mark(cur);
      else
        self(self, color + 1, cur);
      if (t < cap) cur = cur * cm.m[color - 1];
    }
  };
  rec(rec, 1, IntMatrix::identity(n));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (!seen[u][v]) return false;
  return true;
}

/// Verdict payload for the primitivity decision.
struct PrimitivityResult {
  bool primitive = false;
  /// On success, the least m with (M_1...M_k)^m all-positive; the witness
  /// degree is N = m(1,...,1).
  int witness_m = 0;
  Degree witness;
  std::string certificate;  // on failure
};

/// Exact primitivity decision. A zero row or column of some M_i blocks
/// every N > 0. Otherwise Lambda is primitive iff P = M_1...M_k is a
/// primitive matrix, decided by powering P up to the Wielandt bound
/// (n-1)^2 + 1.
inline PrimitivityResult is_primitive(const KGraph& g) {
  PrimitivityResult res;
  ComponentMatrices cm = component_matrices(g);
  const int n = g.num_vertices();
  for (int i = 0; i < cm.rank; ++i) {
    if (cm.m[i].has_zero_row()) {
      res.certificate = "M" + std::to_string(i + 1) +
                        " has a zero row (a color-" + std::to_string(i + 1) +
                        " source)";
      return res;
    }
    if (cm.m[i].has_zero_col()) {
      res.certificate = "M" + std::to_string(i + 1) +
                        " has a zero column (a color-" + std::to_string(i + 1) +
                        " sink)";
      return res;
    }
  }
  IntMatrix p = cm.m[0];
  for (int i = 1; i < cm.rank; ++i) p = p * cm.m[i];
  const int wielandt = (n - 1) * (n - 1) + 1;
  IntMatrix q = IntMatrix::identity(n);
  for (int m = 1; m <= wielandt; ++m) {
    q = q * p;
    if (q.all_positive()) {
      res.primitive = true;
      res.witness_m = m;
      res.witness = Degree::uniform(g.rank(), m);
      return res;
    }
  }
  res.certificate = "P = M_1...M_k has a zero entry in every power up to " +
                    std::to_string(wielandt) + " (Wielandt bound)";
  return res;
}

/// Period of a strongly connected 1-graph: the gcd of all cycle lengths,
/// computed from breadth-first level discrepancies. Primitive iff
/// strongly connected with period 1.
inline int period(const KGraph& g) {
  if (g.rank() != 1) throw NotRank1("period is defined for 1-graphs");
  if (!is_strongly_connected(g))
    throw NotStronglyConnected("period needs a strongly connected graph");
  const int n = g.num_vertices();
  std::vector<int> level(n, -1);
  std::vector<int> q{0};
  level[0] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    int v = q[h];
    for (int e : g.edges_ranged_at(v, 1)) {
      int u = g.edge(e).source;
      if (level[u] == -1) {
        level[u] = level[v] + 1;
        q.push_back(u);
      }
    }
  }
  int p = 0;
  for (int e = 0; e < g.num_edges(); ++e)
    p = std::gcd(p, std::abs(level[g.edge(e).range] + 1 -
                             level[g.edge(e).source]));
  return p == 0 ? 1 : p;
}

/// Constructive cycle-above-a-vertex: follows degree-(1,...,1)
/// predecessors of v until a range vertex repeats, yielding w and a cycle
/// alpha at w with d(alpha) > 0 and w Lambda v nonempty.
inline std::pair<int, Path> find_cycle_above(const KGraph& g, int v) {
  if (g.has_sinks()) throw HasSinks("find_cycle_above needs no sinks");
  const Degree p = Degree::uniform(g.rank(), 1);
  std::map<int, int> seen_at;  // vertex -> step index
  std::vector<Path> steps;     // steps[i]: beta_{i+1}
  int cur = v;
  seen_at[v] = 0;
  for (int step = 0; step <= g.num_vertices() + 1; ++step) {
    auto preds = paths_into(g, cur, p);
    if (preds.empty()) throw HasSinks("no degree-(1,..,1) path into " +
                                      g.vertex_name(cur));
    const Path& beta = preds.front();
    steps.push_back(beta);
    int w = beta.range;
    auto it = seen_at.find(w);
    if (it != seen_at.end()) {
      // beta_m ... beta_{n+1} is the cycle at w
      Path alpha = steps.back();
      for (int i = static_cast<int>(steps.size()) - 2; i >= it->second; --i)
        alpha = compose(alpha, steps[i]);
      return {w, alpha};
    }
    seen_at[w] = static_cast<int>(steps.size());
    cur = w;
  }
  throw Error("cycle search failed to close");  // unreachable on finite input
}

}  // namespace kgraph
