#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "kgraph/graph.hpp"

namespace kgraph {

/// A morphism in normal form: a composable edge word sorted by ascending
/// color, together with its range vertex. Degree-0 paths are the identity
/// morphisms at vertices (empty word).
struct Path {
  const KGraph* graph = nullptr;
  int range = -1;
  std::vector<int> word;

  int source() const {
    return word.empty() ? range : graph->edge(word.back()).source;
  }
  Degree degree() const {
    Degree d = Degree::zero(graph->rank());
    for (int e : word) ++d[graph->edge(e).color - 1];
    return d;
  }
  bool is_vertex() const { return word.empty(); }

  friend bool operator==(const Path& a, const Path& b) {
    return a.range == b.range && a.word == b.word;
  }
  friend bool operator!=(const Path& a, const Path& b) { return !(a == b); }

  std::string to_string() const {
    if (word.empty()) return graph->vertex_name(range);
    std::string s;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (i) s += '.';
      s += graph->edge(word[i]).name;
    }
    return s;
  }
};

inline Path vertex_path(const KGraph& g, int v) { return Path{&g, v, {}}; }

inline Path edge_path(const KGraph& g, int e) {
  return Path{&g, g.edge(e).range, {e}};
}

inline Path make_path(const KGraph& g, int range, std::vector<int> word) {
  Path p{&g, range, std::move(word)};
  g.normalize(p.word);
  return p;
}

/// Composition lambda mu with s(lambda) = r(mu); the concatenated word is
/// renormalized by adjacent color swaps.
inline Path compose(const Path& a, const Path& b) {
  if (a.graph != b.graph) throw NotComposable("paths from different graphs");
  if (a.source() != b.range)
    throw NotComposable("s(" + a.to_string() + ") != r(" + b.to_string() +
                        ")");
  Path r{a.graph, a.range, a.word};
  r.word.insert(r.word.end(), b.word.begin(), b.word.end());
  a.graph->normalize(r.word);
  return r;
}

namespace detail {

// Bubbles the first color-c edge of a normal word to the front by
// applying squares, returning it; the remaining word stays normal.
inline int extract_first_of_color(const KGraph& g, std::vector<int>& w,
                                  int color) {
  std::size_t p = 0;
  while (p < w.size() && g.edge(w[p]).color != color) ++p;
  if (p == w.size())
    throw DegreeOutOfRange("word has no color-" + std::to_string(color) +
                           " edge");
  for (; p > 0; --p) {
    auto [a, b] = g.swap_pair(w[p - 1], w[p]);
    w[p - 1] = a;
    w[p] = b;
  }
  int head = w.front();
  w.erase(w.begin());
  return head;
}

// Unique factorization lambda = mu nu with d(mu) = m; returns the words
// of mu and nu (both normal).
inline std::pair<std::vector<int>, std::vector<int>> split_word(
    const KGraph& g, std::vector<int> w, const Degree& m) {
  std::vector<int> prefix;
  for (int c = 1; c <= g.rank(); ++c)
    for (int i = 0; i < m[c - 1]; ++i)
      prefix.push_back(extract_first_of_color(g, w, c));
  return {std::move(prefix), std::move(w)};
}

}  // namespace detail

/// The unique middle factor lambda(m, n) with degree n - m, for
/// 0 <= m <= n <= d(lambda).
inline Path segment(const Path& p, const Degree& m, const Degree& n) {
  const KGraph& g = *p.graph;
  Degree d = p.degree();
  if (!(Degree::zero(g.rank()) <= m) || !(m <= n) || !(n <= d))
    throw DegreeOutOfRange("segment bounds " + m.to_string() + ".." +
                           n.to_string() + " outside 0.." + d.to_string());
  auto [head, rest] = detail::split_word(g, p.word, m);
  int mid_range = head.empty() ? p.range : g.edge(head.back()).source;
  auto [mid, tail] = detail::split_word(g, std::move(rest), n - m);
  (void)tail;
  return Path{&g, mid_range, std::move(mid)};
}

namespace detail {

template <typename Fn>
inline void paths_from_rec(const KGraph& g, int cur, Degree& rem,
                           std::vector<int>& word, Fn&& emit) {
  int c = 0;
  for (int i = 0; i < g.rank(); ++i)
    if (rem[i] > 0) {
      c = i + 1;
      break;
    }
  if (c == 0) {
    emit(word);
    return;
  }
  if (g.clip_ranged(cur, c))
    throw WindowExceeded("paths_from: color-" + std::to_string(c) +
                         " extension clipped at " + g.vertex_name(cur));
  --rem[c - 1];
  for (int e : g.edges_ranged_at(cur, c)) {
    word.push_back(e);
    paths_from_rec(g, g.edge(e).source, rem, word, emit);
    word.pop_back();
  }
  ++rem[c - 1];
}

template <typename Fn>
inline void paths_into_rec(const KGraph& g, int cur, Degree& rem,
                           std::vector<int>& rword, Fn&& emit) {
  int c = 0;
  for (int i = g.rank() - 1; i >= 0; --i)
    if (rem[i] > 0) {
      c = i + 1;
      break;
    }
  if (c == 0) {
    emit(cur, rword);
    return;
  }
  if (g.clip_sourced(cur, c))
    throw WindowExceeded("paths_into: color-" + std::to_string(c) +
                         " extension clipped at " + g.vertex_name(cur));
  --rem[c - 1];
  for (int e : g.edges_sourced_at(cur, c)) {
    rword.push_back(e);
    paths_into_rec(g, g.edge(e).range, rem, rword, emit);
    rword.pop_back();
  }
  ++rem[c - 1];
}

}  // namespace detail

/// The set v Lambda^n of degree-n paths with range v, enumerated in
/// normal-form order. On window-generated graphs throws WindowExceeded
/// whenever a required extension was clipped.
inline std::vector<Path> paths_from(const KGraph& g, int v, const Degree& n) {
  if (n.rank() != g.rank()) throw BadParams("degree rank mismatch");
  if (!n.all_nonnegative()) throw BadParams("degree must be nonnegative");
  std::vector<Path> out;
  Degree rem = n;
  std::vector<int> word;
  detail::paths_from_rec(g, v, rem, word,
                         [&](const std::vector<int>& w) {
                           out.push_back(Path{&g, v, w});
                         });
  return out;
}

/// The set Lambda^n v of degree-n paths with source v.
inline std::vector<Path> paths_into(const KGraph& g, int v, const Degree& n) {
  if (n.rank() != g.rank()) throw BadParams("degree rank mismatch");
  if (!n.all_nonnegative()) throw BadParams("degree must be nonnegative");
  std::vector<Path> out;
  Degree rem = n;
  std::vector<int> rword;
  detail::paths_into_rec(g, v, rem, rword,
                         [&](int rangev, const std::vector<int>& rw) {
                           Path p{&g, rangev, rw};
                           std::reverse(p.word.begin(), p.word.end());
                           out.push_back(std::move(p));
                         });
  return out;
}

/// Sources of all degree-n paths with range v (the one-step building
/// block of backward reachability), without materializing the paths.
inline std::vector<int> sources_of_paths_from(const KGraph& g, int v,
                                              const Degree& n) {
  std::vector<int> out;
  std::vector<char> seen(g.num_vertices(), 0);
  Degree rem = n;
  std::vector<int> word;
  detail::paths_from_rec(g, v, rem, word, [&](const std::vector<int>& w) {
    int s = w.empty() ? v : g.edge(w.back()).source;
    if (!seen[s]) {
      seen[s] = 1;
      out.push_back(s);
    }
  });
  return out;
}

}  // namespace kgraph
