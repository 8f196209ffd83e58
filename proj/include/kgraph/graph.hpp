#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kgraph/degree.hpp"
#include "kgraph/errors.hpp"

namespace kgraph {

/// A degree-e_i generator of the graph. Edges are read range-to-source:
/// an edge e is a morphism with r(e) = range and s(e) = source, and a
/// two-edge path e1 e2 requires s(e1) = r(e2).
struct Edge {
  std::string name;
  int color = 0;  // 1-based
  int range = -1;
  int source = -1;
};

struct ValidationIssue {
  enum class Kind {
    BadColor,
    BadEndpoint,
    DuplicateName,
    UnknownName,
    MalformedSquare,
    MissingSquare,
    DuplicateSquare,
    HexagonViolation,
  };
  Kind kind;
  std::string detail;
};

inline const char* to_string(ValidationIssue::Kind k) {
  switch (k) {
    case ValidationIssue::Kind::BadColor: return "bad-color";
    case ValidationIssue::Kind::BadEndpoint: return "bad-endpoint";
    case ValidationIssue::Kind::DuplicateName: return "duplicate-name";
    case ValidationIssue::Kind::UnknownName: return "unknown-name";
    case ValidationIssue::Kind::MalformedSquare: return "malformed-square";
    case ValidationIssue::Kind::MissingSquare: return "missing-square";
    case ValidationIssue::Kind::DuplicateSquare: return "duplicate-square";
    case ValidationIssue::Kind::HexagonViolation: return "hexagon-violation";
  }
  return "?";
}

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const {
    std::ostringstream os;
    if (ok()) {
      os << "valid";
    } else {
      os << issues.size() << " issue(s):";
      for (const auto& i : issues)
        os << "\n  [" << to_string(i.kind) << "] " << i.detail;
    }
    return os.str();
  }
};

namespace detail {
inline std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}
}  // namespace detail

class KGraphBuilder;

/// A k-graph presented by its k-colored skeleton plus a complete,
/// associative set of factorization squares. Immutable after build();
/// all operations are const and safe for concurrent readers.
///
/// A graph may be window-generated: a finite materialized fragment of an
/// infinite graph. Slots where an edge was dropped at the window boundary
/// carry clip flags, and operations that would need the missing structure
/// throw WindowExceeded instead of silently truncating.
class KGraph {
 public:
  int rank() const { return rank_; }
  int num_vertices() const { return static_cast<int>(vertex_names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_squares() const { return static_cast<int>(swap_.size() / 2); }

  const std::string& vertex_name(int v) const { return vertex_names_[v]; }
  const Edge& edge(int e) const { return edges_[e]; }

  int vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) throw BadParams("unknown vertex: " + name);
    return it->second;
  }
  std::optional<int> find_vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  int edge_index(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) throw BadParams("unknown edge: " + name);
    return it->second;
  }

  /// Edges with range v and the given color: the ways a path ranged at v
  /// can be extended one step toward its source.
  const std::vector<int>& edges_ranged_at(int v, int color) const {
    return out_[v][color - 1];
  }
  /// Edges with source v and the given color.
  const std::vector<int>& edges_sourced_at(int v, int color) const {
    return in_[v][color - 1];
  }

  bool windowed() const { return windowed_; }
  bool clip_ranged(int v, int color) const {
    return windowed_ && (clip_out_[v] >> (color - 1)) & 1u;
  }
  bool clip_sourced(int v, int color) const {
    return windowed_ && (clip_in_[v] >> (color - 1)) & 1u;
  }
  bool any_clips() const { return windowed_ && clipped_any_; }

  /// Undirected skeleton distance from v to the nearest clipped vertex
  /// (INT_MAX when none). A radius-D search around v is window-safe when
  /// clip_distance(v) >= D.
  int clip_distance(int v) const { return clip_dist_[v]; }

  /// True iff some vertex has no edge ranged at it in some color,
  /// counting clipped slots as unknown rather than empty.
  bool has_sources() const { return has_sources_; }
  bool has_sinks() const { return has_sinks_; }

  /// The square bijection: for a composable bi-colored pair (e1, e2)
  /// returns the unique pair (e3, e4) of the swapped color order with
  /// e1 e2 = e3 e4. Throws WindowExceeded if the square was clipped.
  std::pair<int, int> swap_pair(int e1, int e2) const {
    auto it = swap_.find(detail::pair_key(e1, e2));
    if (it != swap_.end()) return it->second;
    if (clipped_pairs_.count(detail::pair_key(e1, e2)))
      throw WindowExceeded("factorization square clipped at window boundary: " +
                           edges_[e1].name + " " + edges_[e2].name);
    throw Error("no square for composable pair " + edges_[e1].name + " " +
                edges_[e2].name);
  }
  bool has_swap(int e1, int e2) const {
    return swap_.count(detail::pair_key(e1, e2)) != 0;
  }

  /// True iff the undirected skeleton is connected.
  bool skeleton_connected() const { return skeleton_connected_; }

  /// Sorts a composable edge word into ascending color order by applying
  /// factorization squares as adjacent swaps. The result is the normal
  /// form of the morphism the word composes to.
  void normalize(std::vector<int>& word) const {
    const std::size_t n = word.size();
    if (n < 2) return;
    bool moved = true;
    std::size_t guard = n * n + 2;
    while (moved) {
      if (guard-- == 0) throw Error("normalization failed to terminate");
      moved = false;
      for (std::size_t q = 0; q + 1 < n; ++q) {
        if (edges_[word[q]].color > edges_[word[q + 1]].color) {
          auto [a, b] = swap_pair(word[q], word[q + 1]);
          word[q] = a;
          word[q + 1] = b;
          moved = true;
        }
      }
    }
  }

 private:
  friend class KGraphBuilder;

  int rank_ = 0;
  std::vector<std::string> vertex_names_;
  std::unordered_map<std::string, int> vertex_index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, int> edge_index_;
  std::vector<std::vector<std::vector<int>>> out_;  // [v][color-1]
  std::vector<std::vector<std::vector<int>>> in_;
  std::unordered_map<std::uint64_t, std::pair<int, int>> swap_;
  std::unordered_set<std::uint64_t> clipped_pairs_;
  bool windowed_ = false;
  bool clipped_any_ = false;
  std::vector<std::uint32_t> clip_out_, clip_in_;
  std::vector<int> clip_dist_;
  bool has_sources_ = false;
  bool has_sinks_ = false;
  bool skeleton_connected_ = true;
};

/// Assembles a KGraph from named parts, then validates completeness and
/// (for k >= 3) associativity of the square set. A KGraph can only be
/// obtained from a passing report.
class KGraphBuilder {
 public:
  explicit KGraphBuilder(int rank) : rank_(rank) {
    if (rank < 1) throw BadParams("rank must be >= 1");
  }

  KGraphBuilder& add_vertex(const std::string& name) {
    if (g_.vertex_index_.count(name))
      issue(ValidationIssue::Kind::DuplicateName, "vertex " + name);
    else {
      g_.vertex_index_[name] = static_cast<int>(g_.vertex_names_.size());
      g_.vertex_names_.push_back(name);
    }
    return *this;
  }

  KGraphBuilder& add_edge(const std::string& name, int color,
                          const std::string& range,
                          const std::string& source) {
    if (g_.edge_index_.count(name)) {
      issue(ValidationIssue::Kind::DuplicateName, "edge " + name);
      return *this;
    }
    if (color < 1 || color > rank_) {
      issue(ValidationIssue::Kind::BadColor,
            "edge " + name + ": color " + std::to_string(color));
      return *this;
    }
    auto r = g_.vertex_index_.find(range);
    auto s = g_.vertex_index_.find(source);
    if (r == g_.vertex_index_.end() || s == g_.vertex_index_.end()) {
      issue(ValidationIssue::Kind::BadEndpoint,
            "edge " + name + ": undeclared endpoint");
      return *this;
    }
    g_.edge_index_[name] = static_cast<int>(g_.edges_.size());
    g_.edges_.push_back(Edge{name, color, r->second, s->second});
    return *this;
  }

  /// Square e1 e2 = e3 e4, both sides read range-to-source; the sides
  /// carry the two color orders (i,j) and (j,i).
  KGraphBuilder& add_square(const std::string& e1, const std::string& e2,
                            const std::string& e3, const std::string& e4) {
    int a, b, c, d;
    try {
      a = g_.edge_index_.at(e1);
      b = g_.edge_index_.at(e2);
      c = g_.edge_index_.at(e3);
      d = g_.edge_index_.at(e4);
    } catch (const std::out_of_range&) {
      issue(ValidationIssue::Kind::UnknownName,
            "square references undeclared edge: " + e1 + " " + e2 + " = " +
                e3 + " " + e4);
      return *this;
    }
    squares_.push_back({a, b, c, d});
    return *this;
  }

  /// Window metadata: the color-`color` edge slot ranged at v was dropped
  /// because its source falls outside the window.
  KGraphBuilder& mark_clip_ranged(const std::string& v, int color) {
    clip_out_marks_.emplace_back(v, color);
    return *this;
  }
  KGraphBuilder& mark_clip_sourced(const std::string& v, int color) {
    clip_in_marks_.emplace_back(v, color);
    return *this;
  }
  /// The square covering this composable pair was dropped at the window
  /// boundary; completeness checking skips it and swap_pair throws.
  KGraphBuilder& mark_clipped_pair(const std::string& e1,
                                   const std::string& e2) {
    clipped_pair_marks_.emplace_back(e1, e2);
    return *this;
  }
  KGraphBuilder& set_windowed() {
    g_.windowed_ = true;
    return *this;
  }

  /// Full validation: endpoint/color sanity, square endpoint compatibility,
  /// completeness of the square bijection per color pair, and the hexagon
  /// (associativity) condition for rank >= 3.
  ValidationReport validate() {
    finalize();
    ValidationReport report;
    report.issues = issues_;
    check_squares(report);
    if (rank_ >= 3) check_hexagons(report);
    return report;
  }

  /// Validates and returns the graph; throws InvalidGraph on failure.
  KGraph build() {
    ValidationReport report = validate();
    if (!report.ok()) throw InvalidGraph(report.summary());
    compute_flags();
    return g_;
  }

 private:
  struct SquareDecl {
    int e1, e2, e3, e4;
  };

  void issue(ValidationIssue::Kind k, const std::string& d) {
    issues_.push_back({k, d});
  }

  void finalize() {
    if (finalized_) return;
    finalized_ = true;
    g_.rank_ = rank_;
    const int nv = g_.num_vertices();
    g_.out_.assign(nv, std::vector<std::vector<int>>(rank_));
    g_.in_.assign(nv, std::vector<std::vector<int>>(rank_));
    for (int e = 0; e < g_.num_edges(); ++e) {
      const Edge& ed = g_.edges_[e];
      g_.out_[ed.range][ed.color - 1].push_back(e);
      g_.in_[ed.source][ed.color - 1].push_back(e);
    }
    g_.clip_out_.assign(nv, 0);
    g_.clip_in_.assign(nv, 0);
    for (auto& [v, c] : clip_out_marks_) {
      auto it = g_.vertex_index_.find(v);
      if (it != g_.vertex_index_.end()) g_.clip_out_[it->second] |= 1u << (c - 1);
    }
    for (auto& [v, c] : clip_in_marks_) {
      auto it = g_.vertex_index_.find(v);
      if (it != g_.vertex_index_.end()) g_.clip_in_[it->second] |= 1u << (c - 1);
    }
    for (auto& [a, b] : clipped_pair_marks_) {
      auto i = g_.edge_index_.find(a);
      auto j = g_.edge_index_.find(b);
      if (i != g_.edge_index_.end() && j != g_.edge_index_.end())
        g_.clipped_pairs_.insert(detail::pair_key(i->second, j->second));
    }
    // Square declarations become the two-directional swap map.
    for (const auto& sq : squares_) {
      const Edge& f = g_.edges_[sq.e1];
      const Edge& gg = g_.edges_[sq.e2];
      const Edge& gp = g_.edges_[sq.e3];
      const Edge& fp = g_.edges_[sq.e4];
      std::string label = f.name + " " + gg.name + " = " + gp.name + " " +
                          fp.name;
      if (f.color == gg.color || f.color != fp.color || gg.color != gp.color) {
        issue(ValidationIssue::Kind::MalformedSquare, label + ": colors");
        continue;
      }
      if (f.source != gg.range || gp.source != fp.range) {
        issue(ValidationIssue::Kind::MalformedSquare,
              label + ": sides not composable");
        continue;
      }
      if (f.range != gp.range || gg.source != fp.source) {
        issue(ValidationIssue::Kind::MalformedSquare,
              label + ": outer endpoints disagree");
        continue;
      }
      auto k1 = detail::pair_key(sq.e1, sq.e2);
      auto k2 = detail::pair_key(sq.e3, sq.e4);
      if (g_.swap_.count(k1) || g_.swap_.count(k2)) {
        issue(ValidationIssue::Kind::DuplicateSquare, label);
        continue;
      }
      g_.swap_[k1] = {sq.e3, sq.e4};
      g_.swap_[k2] = {sq.e1, sq.e2};
    }
  }

  void check_squares(ValidationReport& report) const {
    // Completeness: every composable bi-colored pair carries exactly one
    // square (duplicates were caught at insertion). Clipped pairs are
    // exempt: their square fell outside the window.
    for (int e1 = 0; e1 < g_.num_edges(); ++e1) {
      const Edge& a = g_.edges_[e1];
      for (int c2 = 1; c2 <= rank_; ++c2) {
        if (c2 == a.color) continue;
        for (int e2 : g_.out_[a.source][c2 - 1]) {
          auto key = detail::pair_key(e1, e2);
          if (!g_.swap_.count(key) && !g_.clipped_pairs_.count(key)) {
            report.issues.push_back(
                {ValidationIssue::Kind::MissingSquare,
                 "no square for composable pair " + a.name + " " +
                     g_.edges_[e2].name});
          }
        }
      }
    }
  }

  // Two rewriting routes from color order (i,j,l) to (l,j,i) must agree
  // on every tri-colored composable triple.
  void check_hexagons(ValidationReport& report) const {
    auto sw = [&](int x, int y) -> std::optional<std::pair<int, int>> {
      auto it = g_.swap_.find(detail::pair_key(x, y));
      if (it == g_.swap_.end()) return std::nullopt;
      return it->second;
    };
    for (int e1 = 0; e1 < g_.num_edges(); ++e1) {
      const Edge& a = g_.edges_[e1];
      for (int c2 = a.color + 1; c2 <= rank_; ++c2) {
        for (int e2 : g_.out_[a.source][c2 - 1]) {
          const Edge& b = g_.edges_[e2];
          for (int c3 = c2 + 1; c3 <= rank_; ++c3) {
            for (int e3 : g_.out_[b.source][c3 - 1]) {
              // Route A: swap(1,2), swap(2,3), swap(1,2).
              auto s1 = sw(e1, e2);
              if (!s1) continue;
              auto [g1, f1] = *s1;
              auto s2 = sw(f1, e3);
              if (!s2) continue;
              auto [h1, f2] = *s2;
              auto s3 = sw(g1, h1);
              if (!s3) continue;
              auto [h2, g2] = *s3;
              // Route B: swap(2,3), swap(1,2), swap(2,3).
              auto t1 = sw(e2, e3);
              if (!t1) continue;
              auto [h3, g3] = *t1;
              auto t2 = sw(e1, h3);
              if (!t2) continue;
              auto [h4, f3] = *t2;
              auto t3 = sw(f3, g3);
              if (!t3) continue;
              auto [g4, f4] = *t3;
              if (h2 != h4 || g2 != g4 || f2 != f4) {
                report.issues.push_back(
                    {ValidationIssue::Kind::HexagonViolation,
                     "triple " + a.name + " " + b.name + " " +
                         g_.edges_[e3].name});
              }
            }
          }
        }
      }
    }
  }

  void compute_flags() {
    const int nv = g_.num_vertices();
    g_.clipped_any_ = false;
    for (int v = 0; v < nv; ++v)
      if (g_.clip_out_[v] || g_.clip_in_[v]) g_.clipped_any_ = true;
    if (!g_.clipped_pairs_.empty()) g_.clipped_any_ = true;

    g_.has_sources_ = false;
    g_.has_sinks_ = false;
    for (int v = 0; v < nv; ++v) {
      for (int c = 1; c <= rank_; ++c) {
        if (g_.out_[v][c - 1].empty() && !g_.clip_ranged(v, c))
          g_.has_sources_ = true;
        if (g_.in_[v][c - 1].empty() && !g_.clip_sourced(v, c))
          g_.has_sinks_ = true;
      }
    }

    // Distance to the nearest clipped vertex, over the undirected skeleton.
    g_.clip_dist_.assign(nv, std::numeric_limits<int>::max());
    std::deque<int> q;
    for (int v = 0; v < nv; ++v) {
      if (g_.clip_out_[v] || g_.clip_in_[v]) {
        g_.clip_dist_[v] = 0;
        q.push_back(v);
      }
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int c = 0; c < rank_; ++c) {
        for (int e : g_.out_[v][c]) {
          int u = g_.edges_[e].source;
          if (g_.clip_dist_[u] > g_.clip_dist_[v] + 1) {
            g_.clip_dist_[u] = g_.clip_dist_[v] + 1;
            q.push_back(u);
          }
        }
        for (int e : g_.in_[v][c]) {
          int u = g_.edges_[e].range;
          if (g_.clip_dist_[u] > g_.clip_dist_[v] + 1) {
            g_.clip_dist_[u] = g_.clip_dist_[v] + 1;
            q.push_back(u);
          }
        }
      }
    }

    // Weak connectivity of the skeleton.
    g_.skeleton_connected_ = true;
    if (nv > 1) {
      std::vector<char> seen(nv, 0);
      std::deque<int> bfs{0};
      seen[0] = 1;
      int count = 1;
      while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop_front();
        for (int c = 0; c < rank_; ++c) {
          for (int e : g_.out_[v][c]) {
            int u = g_.edges_[e].source;
            if (!seen[u]) seen[u] = 1, ++count, bfs.push_back(u);
          }
          for (int e : g_.in_[v][c]) {
            int u = g_.edges_[e].range;
            if (!seen[u]) seen[u] = 1, ++count, bfs.push_back(u);
          }
        }
      }
      g_.skeleton_connected_ = (count == nv);
    }
  }

  int rank_;
  KGraph g_;
  bool finalized_ = false;
  std::vector<SquareDecl> squares_;
  std::vector<ValidationIssue> issues_;
  std::vector<std::pair<std::string, int>> clip_out_marks_, clip_in_marks_;
  std::vector<std::pair<std::string, std::string>> clipped_pair_marks_;
};

}  // namespace kgraph
