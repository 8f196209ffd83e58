#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgraph/graph.hpp"
#include "kgraph/path.hpp"
#include "kgraph/semigroup.hpp"

namespace kgraph {

/// Finite subset of a semigroup over which a skew product is
/// materialized: a coordinate box for the vector kinds and the affine
/// semigroup, the whole group for finite groups, a word-length cap for
/// the free monoid.
struct SgWindow {
  enum class Kind { Box, All, WordLength };
  Kind kind = Kind::All;
  std::vector<long long> lo, hi;  // Box
  int max_len = 0;                // WordLength

  static SgWindow box(std::vector<long long> lo_, std::vector<long long> hi_) {
    SgWindow w;
    w.kind = Kind::Box;
    w.lo = std::move(lo_);
    w.hi = std::move(hi_);
    return w;
  }
  static SgWindow all() { return SgWindow{}; }
  static SgWindow words(int len) {
    SgWindow w;
    w.kind = Kind::WordLength;
    w.max_len = len;
    return w;
  }

  /// Parses "a..b,c..d", "all" or "len:N".
  static SgWindow parse(const std::string& spec) {
    if (spec == "all") return all();
    if (spec.rfind("len:", 0) == 0) return words(std::stoi(spec.substr(4)));
    std::vector<long long> lo, hi;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      auto comma = spec.find(',', pos);
      std::string part = spec.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto dots = part.find("..");
      if (dots == std::string::npos)
        throw BadParams("window range must look like lo..hi: " + part);
      lo.push_back(std::stoll(part.substr(0, dots)));
      hi.push_back(std::stoll(part.substr(dots + 2)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return box(std::move(lo), std::move(hi));
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::All:
        return "all";
      case Kind::WordLength:
        return "len:" + std::to_string(max_len);
      case Kind::Box: {
        std::string s;
        for (std::size_t i = 0; i < lo.size(); ++i) {
          if (i) s += ',';
          s += std::to_string(lo[i]) + ".." + std::to_string(hi[i]);
        }
        return s;
      }
    }
    return "?";
  }
};

namespace detail {

inline std::vector<SgElement> enumerate_window(const Semigroup& s,
                                               const SgWindow& w) {
  std::vector<SgElement> out;
  switch (w.kind) {
    case SgWindow::Kind::All: {
      if (s.kind() != Semigroup::Kind::FiniteGroup)
        throw BadParams("window 'all' needs a finite group");
      for (int i = 0; i < s.order(); ++i) out.push_back(SgElement{{i}});
      return out;
    }
    case SgWindow::Kind::WordLength: {
      if (s.kind() != Semigroup::Kind::FreePlus)
        throw BadParams("window 'len:' needs the free monoid");
      std::vector<SgElement> layer{s.identity()};
      out.push_back(s.identity());
      for (int l = 1; l <= w.max_len; ++l) {
        std::vector<SgElement> next;
        for (const auto& e : layer)
          for (long long g = 1; g <= s.rank(); ++g) {
            SgElement x = e;
            x.v.push_back(g);
            next.push_back(x);
            out.push_back(std::move(x));
          }
        layer = std::move(next);
      }
      return out;
    }
    case SgWindow::Kind::Box: {
      int dim = s.kind() == Semigroup::Kind::AffineNN ? 2 : s.rank();
      if (static_cast<int>(w.lo.size()) == 1 && dim > 1) {
        SgWindow ww = w;
        ww.lo.assign(dim, w.lo[0]);
        ww.hi.assign(dim, w.hi[0]);
        return enumerate_window(s, ww);
      }
      if (static_cast<int>(w.lo.size()) != dim)
        throw BadParams("window dimension mismatch");
      std::vector<SgElement> cur{SgElement{{}}};
      for (int i = 0; i < dim; ++i) {
        std::vector<SgElement> next;
        for (const auto& e : cur)
          for (long long x = w.lo[i]; x <= w.hi[i]; ++x) {
            SgElement y = e;
            y.v.push_back(x);
            next.push_back(std::move(y));
          }
        cur = std::move(next);
      }
      std::vector<SgElement> filtered;
      for (auto& e : cur)
        if (s.contains(e)) filtered.push_back(std::move(e));
      return filtered;
    }
  }
  return out;
}

}  // namespace detail

/// The data of a skew product before materialization: a base graph, a
/// semigroup and a validated labeling.
struct SkewSystem {
  const KGraph* base = nullptr;
  Semigroup sem;
  Labeling eta;
};

/// A skew product materialized over a finite window of S. Vertices are
/// pairs (v,t); the edge (e,t) has range (r(e),t) and source
/// (s(e), t eta(e)); degrees are inherited, squares lift from the base.
/// Edges whose S-coordinate leaves the window are clip-flagged.
struct SkewProduct {
  KGraph graph;
  const KGraph* base = nullptr;
  Semigroup sem;
  Labeling eta;
  SgWindow window;
  std::vector<int> base_vertex_of;   // by skew vertex index
  std::vector<SgElement> fiber_of;   // by skew vertex index
  std::vector<int> base_edge_of;     // by skew edge index

  std::optional<int> vertex_at(int base_v, const SgElement& t) const {
    auto it = index_.find({base_v, t});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::map<std::pair<int, SgElement>, int> index_;
};

inline std::string skew_vertex_name(const KGraph& base, const Semigroup& s,
                                    int v, const SgElement& t) {
  return "(" + base.vertex_name(v) + "|" + s.format(t) + ")";
}

/// Materializes the skew product over the window. In strict mode an
/// edge whose source fiber leaves the window raises WindowNotClosed; by
/// default such edges are dropped and clip-flagged.
inline SkewProduct skew_product(const KGraph& base, const Semigroup& s,
                                const Labeling& eta, const SgWindow& window,
                                bool strict = false) {
  {
    auto rep = validate_labeling(base, s, eta);
    if (!rep.ok())
      throw InvalidGraph("labeling is not a functor: " + rep.summary());
  }
  SkewProduct sp{KGraph{}, &base, s, eta, window, {}, {}, {}, {}};
  auto fibers = detail::enumerate_window(s, window);
  std::sort(fibers.begin(), fibers.end());
  fibers.erase(std::unique(fibers.begin(), fibers.end()), fibers.end());
  std::set<SgElement> in_window(fibers.begin(), fibers.end());

  KGraphBuilder b(base.rank());
  b.set_windowed();
  auto vname = [&](int v, const SgElement& t) {
    return skew_vertex_name(base, s, v, t);
  };
  auto ename = [&](int e, const SgElement& t) {
    return "(" + base.edge(e).name + "|" + s.format(t) + ")";
  };
  for (int v = 0; v < base.num_vertices(); ++v) {
    for (const auto& t : fibers) {
      sp.index_[{v, t}] = static_cast<int>(sp.base_vertex_of.size());
      sp.base_vertex_of.push_back(v);
      sp.fiber_of.push_back(t);
      b.add_vertex(vname(v, t));
    }
  }
  // Edges; range fiber t, source fiber t*eta(e).
  for (const auto& t : fibers) {
    for (int e = 0; e < base.num_edges(); ++e) {
      const Edge& ed = base.edge(e);
      SgElement ts = s.multiply(t, eta(e));
      if (in_window.count(ts)) {
        b.add_edge(ename(e, t), ed.color, vname(ed.range, t),
                   vname(ed.source, ts));
        sp.base_edge_of.push_back(e);
      } else if (strict) {
        throw WindowNotClosed("edge " + ed.name + " at fiber " + s.format(t) +
                              " leaves the window (source fiber " +
                              s.format(ts) + ")");
      } else {
        b.mark_clip_ranged(vname(ed.range, t), ed.color);
      }
    }
  }
  // In-clips: a window vertex (v,u) misses the in-edge (e,t) when
  // t = u eta(e)^{-1} exists in S but lies outside the window.
  for (const auto& u : fibers) {
    for (int e = 0; e < base.num_edges(); ++e) {
      const Edge& ed = base.edge(e);
      auto t = s.right_quotient(u, eta(e));
      if (t && !in_window.count(*t))
        b.mark_clip_sourced(vname(ed.source, u), ed.color);
    }
  }
  // Squares lift along the first coordinate: for a base square
  // f g = g' f' and fiber t, ((f,t),(g,t eta(f))) = ((g',t),(f',t eta(g'))).
  for (const auto& t : fibers) {
    for (int e1 = 0; e1 < base.num_edges(); ++e1) {
      const Edge& f = base.edge(e1);
      for (int c2 = 1; c2 <= base.rank(); ++c2) {
        if (c2 == f.color) continue;
        for (int e2 : base.edges_ranged_at(f.source, c2)) {
          if (!base.has_swap(e1, e2)) continue;
          auto [e3, e4] = base.swap_pair(e1, e2);
          if (detail::pair_key(e1, e2) > detail::pair_key(e3, e4))
            continue;  // handle each base square once per fiber
          SgElement tf = s.multiply(t, eta(e1));
          SgElement tg = s.multiply(t, eta(e3));
          SgElement corner = s.multiply(tf, eta(e2));
          bool lhs = in_window.count(tf) && in_window.count(corner);
          bool rhs = in_window.count(tg) && in_window.count(corner);
          if (lhs && rhs) {
            b.add_square(ename(e1, t), ename(e2, tf), ename(e3, t),
                         ename(e4, tg));
          } else {
            if (lhs) b.mark_clipped_pair(ename(e1, t), ename(e2, tf));
            if (rhs) b.mark_clipped_pair(ename(e3, t), ename(e4, tg));
          }
        }
      }
    }
  }
  sp.graph = b.build();
  return sp;
}

/// A degree-preserving functor between graphs, given on vertices and
/// edges. validate() checks colors, range/source compatibility and that
/// squares map to squares.
struct GraphMorphism {
  const KGraph* dom = nullptr;
  const KGraph* cod = nullptr;
  std::vector<int> vmap;  // by dom vertex index
  std::vector<int> emap;  // by dom edge index

  ValidationReport validate() const {
    ValidationReport rep;
    for (int e = 0; e < dom->num_edges(); ++e) {
      const Edge& de = dom->edge(e);
      const Edge& ce = cod->edge(emap[e]);
      if (de.color != ce.color)
        rep.issues.push_back({ValidationIssue::Kind::BadColor,
                              "image of " + de.name + " changes color"});
      if (vmap[de.range] != ce.range || vmap[de.source] != ce.source)
        rep.issues.push_back(
            {ValidationIssue::Kind::BadEndpoint,
             "image of " + de.name + " has incompatible endpoints"});
    }
    for (int e1 = 0; e1 < dom->num_edges(); ++e1) {
      for (int c2 = 1; c2 <= dom->rank(); ++c2) {
        if (c2 == dom->edge(e1).color) continue;
        for (int e2 : dom->edges_ranged_at(dom->edge(e1).source, c2)) {
          if (!dom->has_swap(e1, e2)) continue;
          auto [e3, e4] = dom->swap_pair(e1, e2);
          if (!cod->has_swap(emap[e1], emap[e2])) continue;
          auto [i3, i4] = cod->swap_pair(emap[e1], emap[e2]);
          if (i3 != emap[e3] || i4 != emap[e4])
            rep.issues.push_back(
                {ValidationIssue::Kind::MalformedSquare,
                 "square through " + dom->edge(e1).name + " " +
                     dom->edge(e2).name + " is not preserved"});
        }
      }
    }
    return rep;
  }

  Path apply(const Path& p) const {
    Path q{cod, vmap[p.range], {}};
    q.word.reserve(p.word.size());
    for (int e : p.word) q.word.push_back(emap[e]);
    return q;
  }
};

/// The projection (lambda, t) -> lambda of a skew product onto its base:
/// a surjective morphism with unique r-path lifting.
inline GraphMorphism projection(const SkewProduct& sp) {
  GraphMorphism p;
  p.dom = &sp.graph;
  p.cod = sp.base;
  p.vmap = sp.base_vertex_of;
  p.emap = sp.base_edge_of;
  return p;
}

/// Outcome of a bounded r-path-lifting check.
struct LiftingResult {
  enum class Status { Holds, Fails, Unknown } status = Status::Unknown;
  bool unique_checked = false;
  std::string detail;
  int samples = 0;
};

namespace detail {

// Counts lifts of the codomain word `target` starting at dom vertex v.
// Returns nullopt when the count is window-blocked.
inline std::optional<int> count_lifts(const GraphMorphism& p, int v,
                                      const std::vector<int>& target,
                                      std::size_t at, int cap) {
  if (at == target.size()) return 1;
  int color = p.cod->edge(target[at]).color;
  if (p.dom->clip_ranged(v, color)) return std::nullopt;
  int total = 0;
  for (int e : p.dom->edges_ranged_at(v, color)) {
    if (p.emap[e] != target[at]) continue;
    auto sub = count_lifts(p, p.dom->edge(e).source, target, at + 1, cap);
    if (!sub) return std::nullopt;
    total += *sub;
    if (total >= cap) return total;
  }
  return total;
}

}  // namespace detail

/// Checks r-path lifting of p over all degrees 0 < n <= bound: every
/// lambda in p(v)Gamma must admit a lift at v (exactly one when `unique`).
/// Window-blocked samples are skipped, never reported as failures.
inline LiftingResult check_r_path_lifting(const GraphMorphism& p, bool unique,
                                          const Degree& bound) {
  LiftingResult res;
  for (int v = 0; v < p.dom->num_vertices(); ++v) {
    for (const Degree& n : degrees_upto(bound)) {
      if (n.is_zero()) continue;
      std::vector<Path> targets;
      try {
        targets = paths_from(*p.cod, p.vmap[v], n);
      } catch (const WindowExceeded&) {
        continue;
      }
      for (const Path& t : targets) {
        auto cnt = detail::count_lifts(p, v, t.word, 0, 2);
        if (!cnt) continue;  // window-blocked
        ++res.samples;
        if (*cnt == 0) {
          res.status = LiftingResult::Status::Fails;
          res.detail = "no lift of " + t.to_string() + " at " +
                       p.dom->vertex_name(v);
          return res;
        }
        if (unique && *cnt > 1) {
          res.status = LiftingResult::Status::Fails;
          res.detail = "multiple lifts of " + t.to_string() + " at " +
                       p.dom->vertex_name(v);
          return res;
        }
      }
    }
  }
  res.unique_checked = unique;
  if (res.samples == 0) {
    res.detail = "no window-checkable samples";
    return res;
  }
  res.status = LiftingResult::Status::Holds;
  res.detail = "verified on " + std::to_string(res.samples) +
               " sampled paths up to degree " + bound.to_string();
  return res;
}

/// Outcome of the windowed isomorphism search.
struct IsoResult {
  enum class Status { Holds, Fails, Unknown } status = Status::Unknown;
  std::map<int, int> vertex_map;  // dom -> cod indices, when Holds
  std::map<int, int> edge_map;
  std::string detail;
};

namespace detail {

struct IsoSearch {
  const KGraph& a;
  const KGraph& b;
  std::vector<int> va2b, vb2a, ea2b, eb2a;
  long long budget;

  IsoSearch(const KGraph& a_, const KGraph& b_, long long budget_)
      : a(a_),
        b(b_),
        va2b(a_.num_vertices(), -1),
        vb2a(b_.num_vertices(), -1),
        ea2b(a_.num_edges(), -1),
        eb2a(b_.num_edges(), -1),
        budget(budget_) {}

  bool match_vertex(int x, int y) {
    if (va2b[x] != -1 || vb2a[y] != -1) return va2b[x] == y && vb2a[y] == x;
    if (--budget < 0) return false;
    va2b[x] = y;
    vb2a[y] = x;
    for (int c = 1; c <= a.rank(); ++c) {
      if (a.edges_ranged_at(x, c).size() != b.edges_ranged_at(y, c).size())
        return false;
      if (a.edges_sourced_at(x, c).size() != b.edges_sourced_at(y, c).size())
        return false;
    }
    return true;
  }

  // Deterministic propagation: whenever a vertex pair is matched and a
  // color has exactly one edge on each side, the edge and its far
  // endpoint are forced.
  bool propagate(std::vector<int>& fresh) {
    for (std::size_t h = 0; h < fresh.size(); ++h) {
      int x = fresh[h], y = va2b[x];
      for (int c = 1; c <= a.rank(); ++c) {
        const auto& ax = a.edges_ranged_at(x, c);
        const auto& by = b.edges_ranged_at(y, c);
        if (ax.size() == 1) {
          if (!match_edge(ax[0], by[0], fresh)) return false;
        }
        const auto& axs = a.edges_sourced_at(x, c);
        const auto& bys = b.edges_sourced_at(y, c);
        if (axs.size() == 1) {
          if (!match_edge(axs[0], bys[0], fresh)) return false;
        }
      }
    }
    return true;
  }

  bool match_edge(int e, int f, std::vector<int>& fresh) {
    if (ea2b[e] != -1 || eb2a[f] != -1) return ea2b[e] == f && eb2a[f] == e;
    const Edge& de = a.edge(e);
    const Edge& df = b.edge(f);
    if (de.color != df.color) return false;
    ea2b[e] = f;
    eb2a[f] = e;
    for (auto [x, y] : {std::pair{de.range, df.range},
                        std::pair{de.source, df.source}}) {
      if (va2b[x] == -1 && vb2a[y] == -1) {
        if (!match_vertex(x, y)) return false;
        fresh.push_back(x);
      } else if (va2b[x] != y) {
        return false;
      }
    }
    return true;
  }

  struct State {
    std::vector<int> va2b, vb2a, ea2b, eb2a;
  };
  State snapshot() const { return {va2b, vb2a, ea2b, eb2a}; }
  void restore(State s) {
    va2b = std::move(s.va2b);
    vb2a = std::move(s.vb2a);
    ea2b = std::move(s.ea2b);
    eb2a = std::move(s.eb2a);
  }

  // Match remaining unmatched structure by backtracking (parallel edges,
  // disconnected pieces). Small inputs only.
  bool complete() {
    for (int e = 0; e < a.num_edges(); ++e) {
      if (ea2b[e] != -1) continue;
      const Edge& de = a.edge(e);
      if (va2b[de.range] == -1 || va2b[de.source] == -1) return false;
      State saved = snapshot();
      for (int f : b.edges_ranged_at(va2b[de.range], de.color)) {
        if (eb2a[f] != -1 || b.edge(f).source != va2b[de.source]) continue;
        if (--budget < 0) return false;
        std::vector<int> fresh;
        if (match_edge(e, f, fresh) && propagate(fresh) && complete())
          return true;
        restore(saved);
      }
      return false;
    }
    return true;
  }

  bool squares_preserved() const {
    for (int e1 = 0; e1 < a.num_edges(); ++e1) {
      for (int c2 = 1; c2 <= a.rank(); ++c2) {
        if (c2 == a.edge(e1).color) continue;
        for (int e2 : a.edges_ranged_at(a.edge(e1).source, c2)) {
          if (!a.has_swap(e1, e2)) continue;
          auto [e3, e4] = a.swap_pair(e1, e2);
          if (!b.has_swap(ea2b[e1], ea2b[e2])) return false;
          auto [f3, f4] = b.swap_pair(ea2b[e1], ea2b[e2]);
          if (f3 != ea2b[e3] || f4 != ea2b[e4]) return false;
        }
      }
    }
    return true;
  }
};

}  // namespace detail

/// Searches for a color- and degree-preserving isomorphism between two
/// finite (or windowed) graphs by seeded propagation with backtracking.
inline IsoResult window_isomorphic(const KGraph& a, const KGraph& b,
                                   long long budget = 200000) {
  IsoResult res;
  if (a.rank() != b.rank()) {
    res.status = IsoResult::Status::Fails;
    res.detail = "ranks differ";
    return res;
  }
  if (a.num_vertices() != b.num_vertices() ||
      a.num_edges() != b.num_edges() || a.num_squares() != b.num_squares()) {
    res.status = IsoResult::Status::Fails;
    res.detail = "vertex/edge/square counts differ";
    return res;
  }
  for (int c = 1; c <= a.rank(); ++c) {
    auto signature = [&](const KGraph& g) {
      std::multiset<std::pair<int, int>> sig;
      for (int v = 0; v < g.num_vertices(); ++v)
        sig.insert({static_cast<int>(g.edges_ranged_at(v, c).size()),
                    static_cast<int>(g.edges_sourced_at(v, c).size())});
      return sig;
    };
    if (signature(a) != signature(b)) {
      res.status = IsoResult::Status::Fails;
      res.detail = "color-" + std::to_string(c) + " degree sequences differ";
      return res;
    }
  }
  if (a.num_vertices() == 0) {
    res.status = IsoResult::Status::Holds;
    return res;
  }
  bool exhausted = false;
  for (int seed = 0; seed < b.num_vertices(); ++seed) {
    detail::IsoSearch s(a, b, budget);
    std::vector<int> fresh;
    if (!s.match_vertex(0, seed)) continue;
    fresh.push_back(0);
    if (!s.propagate(fresh)) continue;
    if (s.budget < 0) {
      exhausted = true;
      continue;
    }
    if (!s.complete()) continue;
    if (!s.squares_preserved()) continue;
    res.status = IsoResult::Status::Holds;
    for (int v = 0; v < a.num_vertices(); ++v) res.vertex_map[v] = s.va2b[v];
    for (int e = 0; e < a.num_edges(); ++e) res.edge_map[e] = s.ea2b[e];
    res.detail = "isomorphism found";
    return res;
  }
  if (exhausted) {
    res.detail = "search budget exhausted";
    return res;
  }
  res.status = IsoResult::Status::Fails;
  res.detail = "no seed extends to an isomorphism";
  return res;
}

}  // namespace kgraph
