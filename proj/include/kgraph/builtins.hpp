#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kgraph/graph.hpp"

namespace kgraph {

/// The rank-k graph with one vertex and k commuting loops f1..fk.
inline KGraph make_tk(int k) {
  if (k < 1) throw BadParams("tk: k must be >= 1");
  KGraphBuilder b(k);
  b.add_vertex("v");
  for (int i = 1; i <= k; ++i)
    b.add_edge("f" + std::to_string(i), i, "v", "v");
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      std::string fi = "f" + std::to_string(i), fj = "f" + std::to_string(j);
      b.add_square(fi, fj, fj, fi);
    }
  return b.build();
}

/// The 1-graph with a single vertex and two loops e, f.
inline KGraph make_b2() {
  KGraphBuilder b(1);
  b.add_vertex("v");
  b.add_edge("e", 1, "v", "v");
  b.add_edge("f", 1, "v", "v");
  return b.build();
}

/// Single-vertex 2-graph with m blue edges f1..fm, n red edges g1..gn and
/// squares f_i g_j = g_j' f_i' where theta(i,j) = (i',j'). theta is given
/// row-major: theta[(i-1)*n + (j-1)] = (i',j'), 1-based.
inline KGraph make_f2_theta(int m, int n,
                            const std::vector<std::pair<int, int>>& theta) {
  if (m < 1 || n < 1) throw BadParams("f2_theta: m,n must be >= 1");
  if (static_cast<int>(theta.size()) != m * n)
    throw BadParams("f2_theta: theta must have m*n entries");
  KGraphBuilder b(2);
  b.add_vertex("v");
  for (int i = 1; i <= m; ++i)
    b.add_edge("f" + std::to_string(i), 1, "v", "v");
  for (int j = 1; j <= n; ++j)
    b.add_edge("g" + std::to_string(j), 2, "v", "v");
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      auto [ip, jp] = theta[(i - 1) * n + (j - 1)];
      if (ip < 1 || ip > m || jp < 1 || jp > n)
        throw BadParams("f2_theta: theta value out of range");
      b.add_square("f" + std::to_string(i), "g" + std::to_string(j),
                   "g" + std::to_string(jp), "f" + std::to_string(ip));
    }
  return b.build();
}

inline std::vector<std::pair<int, int>> identity_theta(int m, int n) {
  std::vector<std::pair<int, int>> t;
  t.reserve(static_cast<std::size_t>(m) * n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) t.emplace_back(i, j);
  return t;
}

/// A cyclic twist: theta(i,j) = (i mod m + 1, j mod n + 1).
inline std::vector<std::pair<int, int>> cyclic_theta(int m, int n) {
  std::vector<std::pair<int, int>> t;
  t.reserve(static_cast<std::size_t>(m) * n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) t.emplace_back(i % m + 1, j % n + 1);
  return t;
}

/// Strongly connected but imprimitive 2-graph on vertices u, v, w: four
/// blue edges e,f,g,h forming u<->v<->w, six red edges a,b,c,d,t1,t2,
/// and eight squares. Component matrices are
/// M1 = [[0,1,0],[1,0,1],[0,1,0]], M2 = [[1,0,1],[0,2,0],[1,0,1]].
inline KGraph make_three_vertex() {
  KGraphBuilder b(2);
  b.add_vertex("u").add_vertex("v").add_vertex("w");
  // blue (color 1)
  b.add_edge("e", 1, "v", "u");
  b.add_edge("f", 1, "u", "v");
  b.add_edge("g", 1, "w", "v");
  b.add_edge("h", 1, "v", "w");
  // red (color 2)
  b.add_edge("a", 2, "w", "u");
  b.add_edge("b", 2, "u", "w");
  b.add_edge("c", 2, "u", "u");
  b.add_edge("d", 2, "w", "w");
  b.add_edge("t1", 2, "v", "v");
  b.add_edge("t2", 2, "v", "v");
  // paths from u to v
  b.add_square("e", "c", "t1", "e");
  b.add_square("h", "a", "t2", "e");
  // paths from v to u
  b.add_square("c", "f", "f", "t1");
  b.add_square("b", "g", "f", "t2");
  // paths from w to v
  b.add_square("h", "d", "t1", "h");
  b.add_square("e", "b", "t2", "h");
  // paths from v to w
  b.add_square("d", "g", "g", "t1");
  b.add_square("a", "f", "g", "t2");
  return b.build();
}

namespace detail {

inline std::string coord_name(const Degree& d) { return d.to_string(); }

}  // namespace detail

/// Window of the rank-k lattice graph: objects are lattice points, and
/// there is a unique morphism m -> n whenever m <= n. Materialized on the
/// box lo..hi; boundary slots are clip-flagged.
inline KGraph make_delta(int k, const Degree& lo, const Degree& hi) {
  if (lo.rank() != k || hi.rank() != k) throw BadParams("delta: rank mismatch");
  if (!(lo <= hi)) throw BadParams("delta: empty window");
  KGraphBuilder b(k);
  b.set_windowed();
  auto box = degree_box(lo, hi);
  auto inside = [&](const Degree& d) { return lo <= d && d <= hi; };
  for (const auto& m : box) b.add_vertex(detail::coord_name(m));
  for (const auto& m : box) {
    for (int i = 1; i <= k; ++i) {
      Degree t = m + Degree::basis(k, i);
      if (inside(t)) {
        b.add_edge("e" + std::to_string(i) + "@" + detail::coord_name(m), i,
                   detail::coord_name(m), detail::coord_name(t));
      } else {
        b.mark_clip_ranged(detail::coord_name(m), i);
      }
      Degree s = m - Degree::basis(k, i);
      if (!inside(s)) b.mark_clip_sourced(detail::coord_name(m), i);
    }
  }
  for (const auto& m : box) {
    for (int i = 1; i <= k; ++i) {
      for (int j = i + 1; j <= k; ++j) {
        Degree mi = m + Degree::basis(k, i);
        Degree mj = m + Degree::basis(k, j);
        Degree mij = mi + Degree::basis(k, j);
        if (inside(mi) && inside(mj) && inside(mij)) {
          b.add_square(
              "e" + std::to_string(i) + "@" + detail::coord_name(m),
              "e" + std::to_string(j) + "@" + detail::coord_name(mi),
              "e" + std::to_string(j) + "@" + detail::coord_name(m),
              "e" + std::to_string(i) + "@" + detail::coord_name(mj));
        } else {
          if (inside(mi) && inside(mij))
            b.mark_clipped_pair(
                "e" + std::to_string(i) + "@" + detail::coord_name(m),
                "e" + std::to_string(j) + "@" + detail::coord_name(mi));
          if (inside(mj) && inside(mij))
            b.mark_clipped_pair(
                "e" + std::to_string(j) + "@" + detail::coord_name(m),
                "e" + std::to_string(i) + "@" + detail::coord_name(mj));
        }
      }
    }
  }
  return b.build();
}

/// Window of the half-plane ladder 2-graph whose graph is cofinal while
/// its skeleton is not. Vertices are grid points (c,r) with c,r >= 0
/// except (0,0); blue edges run (c+1,r) -> (c,r) source-to-range, red
/// edges run (c,r+1) -> (c,r). Materialized on columns 0..cols and rows
/// 0..rows. The vertices named in the cofinality discussion are (1,0)
/// and (0,1).
inline KGraph make_ladder(int cols, int rows) {
  if (cols < 2 || rows < 2) throw BadParams("ladder: window too small");
  KGraphBuilder b(2);
  b.set_windowed();
  auto name = [](int c, int r) {
    return "(" + std::to_string(c) + "," + std::to_string(r) + ")";
  };
  auto is_vertex = [&](int c, int r) {
    return c >= 0 && r >= 0 && !(c == 0 && r == 0) && c <= cols && r <= rows;
  };
  for (int c = 0; c <= cols; ++c)
    for (int r = 0; r <= rows; ++r)
      if (is_vertex(c, r)) b.add_vertex(name(c, r));
  for (int c = 0; c <= cols; ++c) {
    for (int r = 0; r <= rows; ++r) {
      if (!is_vertex(c, r)) continue;
      // blue, ranged at (c,r), sourced at (c+1,r)
      if (is_vertex(c + 1, r))
        b.add_edge("e@" + name(c, r), 1, name(c, r), name(c + 1, r));
      else if (c + 1 > cols)
        b.mark_clip_ranged(name(c, r), 1);
      // red, ranged at (c,r), sourced at (c,r+1)
      if (is_vertex(c, r + 1))
        b.add_edge("n@" + name(c, r), 2, name(c, r), name(c, r + 1));
      else if (r + 1 > rows)
        b.mark_clip_ranged(name(c, r), 2);
    }
  }
  for (int c = 0; c <= cols; ++c) {
    for (int r = 0; r <= rows; ++r) {
      if (!is_vertex(c, r)) continue;
      bool have = is_vertex(c + 1, r) && is_vertex(c, r + 1) &&
                  is_vertex(c + 1, r + 1);
      if (have)
        b.add_square("e@" + name(c, r), "n@" + name(c + 1, r),
                     "n@" + name(c, r), "e@" + name(c, r + 1));
    }
  }
  return b.build();
}

/// Single-vertex rank-1 graph with no edges at all; useful as a
/// degenerate fixture.
inline KGraph make_edgeless_vertex() {
  KGraphBuilder b(1);
  b.add_vertex("v");
  return b.build();
}

/// String-driven builtin lookup used by the file format and CLI.
/// Recognized (with aliases):
///   T_k <k> | B2 | F2_theta <m> <n> [id|cyclic]
///   three_vertex (alias paper_3vertex)
///   Delta_k <k> <lo..hi,...>  |  ladder <cols> <rows> (alias paper_ladder)
inline KGraph make_builtin(const std::string& name,
                           const std::vector<std::string>& params);

namespace detail {

inline std::pair<Degree, Degree> parse_box(const std::string& spec, int k) {
  std::vector<int> lo, hi;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    std::string part = spec.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto dots = part.find("..");
    if (dots == std::string::npos)
      throw BadParams("window range must look like lo..hi: " + part);
    lo.push_back(std::stoi(part.substr(0, dots)));
    hi.push_back(std::stoi(part.substr(dots + 2)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (k > 0 && static_cast<int>(lo.size()) == 1 && k > 1) {
    lo.assign(k, lo[0]);
    hi.assign(k, hi[0]);
  }
  if (k > 0 && static_cast<int>(lo.size()) != k)
    throw BadParams("window rank mismatch: " + spec);
  return {Degree(lo), Degree(hi)};
}

}  // namespace detail

inline KGraph make_builtin(const std::string& name,
                           const std::vector<std::string>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() < n)
      throw BadParams("builtin " + name + ": missing parameters");
  };
  if (name == "T_k" || name == "tk") {
    need(1);
    return make_tk(std::stoi(params[0]));
  }
  if (name == "B2" || name == "b2") return make_b2();
  if (name == "F2_theta" || name == "f2_theta") {
    need(2);
    int m = std::stoi(params[0]), n = std::stoi(params[1]);
    std::string which = params.size() > 2 ? params[2] : "id";
    if (which == "id") return make_f2_theta(m, n, identity_theta(m, n));
    if (which == "cyclic") return make_f2_theta(m, n, cyclic_theta(m, n));
    throw BadParams("f2_theta: unknown bijection " + which);
  }
  if (name == "three_vertex" || name == "paper_3vertex" || name == "3vertex")
    return make_three_vertex();
  if (name == "Delta_k" || name == "delta" || name == "delta_k") {
    need(2);
    int k = std::stoi(params[0]);
    auto [lo, hi] = detail::parse_box(params[1], k);
    return make_delta(k, lo, hi);
  }
  if (name == "ladder" || name == "paper_ladder") {
    need(2);
    return make_ladder(std::stoi(params[0]), std::stoi(params[1]));
  }
  throw UnknownBuiltin("unknown builtin graph: " + name);
}

}  // namespace kgraph
