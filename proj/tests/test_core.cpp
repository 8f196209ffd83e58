#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "kgraph/builtins.hpp"
#include "kgraph/graph.hpp"
#include "kgraph/path.hpp"

using namespace kgraph;

namespace {

Degree deg(std::vector<int> v) { return Degree(std::move(v)); }

// Independent splitting oracle: all factorizations of p at degree m,
// found by enumerating candidate prefixes and suffixes and composing.
std::vector<std::pair<Path, Path>> all_splits(const KGraph& g, const Path& p,
                                              const Degree& m) {
  std::vector<std::pair<Path, Path>> found;
  for (const Path& mu : paths_from(g, p.range, m)) {
    for (const Path& nu : paths_from(g, mu.source(), p.degree() - m)) {
      if (compose(mu, nu) == p) found.emplace_back(mu, nu);
    }
  }
  return found;
}

}  // namespace

TEST_CASE("degree arithmetic and boxes") {
  Degree a = deg({3, 2}), b = deg({1, 2});
  CHECK(b <= a);
  CHECK_FALSE(a <= b);
  CHECK(join(a, b) == a);
  CHECK((a + b) == deg({4, 4}));
  CHECK((a - b) == deg({2, 0}));
  CHECK_FALSE(b.all_less(a));  // equal second coordinate
  auto box = degrees_upto(deg({1, 2}));
  REQUIRE(box.size() == 6);
  CHECK(box.front() == deg({0, 0}));
  CHECK(box.back() == deg({1, 2}));
}

TEST_CASE("validation accepts the single possible square on F2 with m=n=1") {
  KGraph g = make_f2_theta(1, 1, identity_theta(1, 1));
  CHECK(g.rank() == 2);
  CHECK(g.num_vertices() == 1);
  CHECK(g.num_edges() == 2);
  CHECK(g.num_squares() == 1);
}

TEST_CASE("validation accepts a 4-pair bijection on F2 with m=n=2") {
  KGraph g = make_f2_theta(2, 2, cyclic_theta(2, 2));
  CHECK(g.num_squares() == 4);
}

TEST_CASE("validation rejects a bi-colored skeleton with no squares") {
  KGraphBuilder b(2);
  b.add_vertex("u").add_vertex("v").add_vertex("w");
  b.add_edge("x", 1, "u", "v");
  b.add_edge("y", 2, "v", "w");
  auto report = b.validate();
  REQUIRE_FALSE(report.ok());
  CHECK(report.issues[0].kind == ValidationIssue::Kind::MissingSquare);
  CHECK_THROWS_AS(
      [] {
        KGraphBuilder bb(2);
        bb.add_vertex("u").add_vertex("v").add_vertex("w");
        bb.add_edge("x", 1, "u", "v");
        bb.add_edge("y", 2, "v", "w");
        return bb.build();
      }(),
      InvalidGraph);
}

TEST_CASE("malformed square identifies the offending rule") {
  KGraphBuilder b(2);
  b.add_vertex("u").add_vertex("v");
  b.add_edge("x", 1, "u", "v");
  b.add_edge("y", 2, "v", "u");
  b.add_edge("z", 2, "u", "v");
  // Right side z x is not composable: s(z) = v but r(x) = u.
  b.add_square("x", "y", "z", "x");
  auto report = b.validate();
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (auto& i : report.issues)
    if (i.kind == ValidationIssue::Kind::MalformedSquare &&
        i.detail.find("x y = z x") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("builtin shapes") {
  KGraph t2 = make_tk(2);
  CHECK(t2.num_vertices() == 1);
  CHECK(t2.num_edges() == 2);
  CHECK(t2.num_squares() == 1);

  KGraph tv = make_three_vertex();
  CHECK(tv.num_vertices() == 3);
  CHECK(tv.num_edges() == 10);
  CHECK(tv.num_squares() == 8);
  CHECK_FALSE(tv.has_sources());
  CHECK_FALSE(tv.has_sinks());

  KGraph b2 = make_b2();
  CHECK(b2.rank() == 1);
  CHECK(b2.num_vertices() == 1);
  CHECK(b2.num_edges() == 2);
  CHECK(b2.num_squares() == 0);

  CHECK_THROWS_AS(make_builtin("nope", {}), UnknownBuiltin);
  CHECK_THROWS_AS(make_builtin("T_k", {}), BadParams);
}

TEST_CASE("compose: identity at the range vertex is neutral") {
  KGraph g = make_three_vertex();
  Path e = edge_path(g, g.edge_index("e"));
  Path id = vertex_path(g, e.range);
  CHECK(compose(id, e) == e);
  Path ids = vertex_path(g, e.source());
  CHECK(compose(e, ids) == e);
  CHECK_THROWS_AS(compose(e, e), NotComposable);
}

TEST_CASE("compose in T2 normalizes to ascending color order") {
  KGraph g = make_tk(2);
  Path f1 = edge_path(g, g.edge_index("f1"));
  Path f2 = edge_path(g, g.edge_index("f2"));
  Path p = compose(f2, f1);
  REQUIRE(p.word.size() == 2);
  CHECK(g.edge(p.word[0]).name == "f1");
  CHECK(g.edge(p.word[1]).name == "f2");
  CHECK(p == compose(f1, f2));
}

TEST_CASE("compose(e,c) equals the normal form of t1.e in the 3-vertex graph") {
  KGraph g = make_three_vertex();
  Path e = edge_path(g, g.edge_index("e"));
  Path c = edge_path(g, g.edge_index("c"));
  Path t1 = edge_path(g, g.edge_index("t1"));
  Path ec = compose(e, c);
  Path t1e = compose(t1, e);
  CHECK(ec == t1e);
  REQUIRE(ec.word.size() == 2);
  CHECK(g.edge(ec.word[0]).color == 1);
  CHECK(g.edge(ec.word[1]).color == 2);
}

TEST_CASE("segment endpoints and the windowed lattice identity") {
  KGraph g = make_three_vertex();
  int v = g.vertex("v");
  for (const Path& p : paths_from(g, v, deg({2, 1}))) {
    Path r0 = segment(p, deg({0, 0}), deg({0, 0}));
    CHECK(r0 == vertex_path(g, v));
    CHECK(segment(p, deg({0, 0}), p.degree()) == p);
    CHECK_THROWS_AS(segment(p, deg({1, 0}), deg({3, 1})), DegreeOutOfRange);
  }

  KGraph d2 = make_delta(2, deg({-3, -3}), deg({3, 3}));
  // The unique path from (0,0) of degree (2,2), cut at m = (1,1), is the
  // vertex (1,1).
  auto ps = paths_from(d2, d2.vertex("(0,0)"), deg({2, 2}));
  REQUIRE(ps.size() == 1);
  Path mid = segment(ps[0], deg({1, 1}), deg({1, 1}));
  CHECK(mid.is_vertex());
  CHECK(d2.vertex_name(mid.range) == "(1,1)");
}

TEST_CASE("segment-of-segment coherence, exhaustive on F2_theta") {
  KGraph g = make_f2_theta(2, 2, cyclic_theta(2, 2));
  int v = g.vertex("v");
  auto all_le = degrees_upto(deg({2, 2}));
  for (const Degree& d : all_le) {
    for (const Path& p : paths_from(g, v, d)) {
      for (const Degree& a : degrees_upto(d)) {
        Degree rem = d - a;
        for (const Degree& cminus : degrees_upto(rem)) {
          Degree c = a + cminus;
          Path outer = segment(p, a, c);
          for (const Degree& mminus : degrees_upto(c - a)) {
            Degree m = a + mminus;
            for (const Degree& nminus : degrees_upto(c - m)) {
              Degree n = m + nminus;
              CHECK(segment(outer, m - a, n - a) == segment(p, m, n));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("paths_from cardinalities match the examples") {
  KGraph t2 = make_tk(2);
  CHECK(paths_from(t2, 0, deg({2, 3})).size() == 1);

  KGraph tv = make_three_vertex();
  CHECK(paths_from(tv, tv.vertex("v"), deg({1, 0})).size() == 2);
  for (int v = 0; v < tv.num_vertices(); ++v)
    CHECK(paths_from(tv, v, deg({0, 0})).size() == 1);
}

TEST_CASE("paths_into agrees with filtering paths_from by source") {
  KGraph tv = make_three_vertex();
  for (const Degree& n : degrees_upto(deg({2, 2}))) {
    std::map<int, int> by_source;
    for (int u = 0; u < tv.num_vertices(); ++u)
      for (const Path& p : paths_from(tv, u, n)) ++by_source[p.source()];
    for (int v = 0; v < tv.num_vertices(); ++v) {
      auto in = paths_into(tv, v, n);
      CHECK(static_cast<int>(in.size()) == by_source[v]);
      for (const Path& p : in) CHECK(p.source() == v);
    }
  }
}

TEST_CASE("unique factorization, exhaustive on small degrees") {
  for (const KGraph& g :
       {make_f2_theta(2, 2, cyclic_theta(2, 2)), make_three_vertex()}) {
    for (int v = 0; v < g.num_vertices(); ++v) {
      for (const Degree& d : degrees_upto(deg({2, 2}))) {
        for (const Path& p : paths_from(g, v, d)) {
          for (const Degree& m : degrees_upto(d)) {
            auto splits = all_splits(g, p, m);
            REQUIRE(splits.size() == 1);
            CHECK(splits[0].first == segment(p, Degree::zero(2), m));
            CHECK(splits[0].second == segment(p, m, d));
          }
        }
      }
    }
  }
}

TEST_CASE("windowed graphs fail loudly instead of truncating") {
  KGraph d1 = make_delta(1, deg({0}), deg({3}));
  int v0 = d1.vertex("(0)");
  CHECK(paths_from(d1, v0, deg({3})).size() == 1);
  CHECK_THROWS_AS(paths_from(d1, v0, deg({4})), WindowExceeded);
  CHECK_THROWS_AS(paths_into(d1, v0, deg({1})), WindowExceeded);
  CHECK(d1.clip_distance(d1.vertex("(1)")) == 1);
  CHECK(d1.clip_distance(v0) == 0);  // clip_sourced at the lower corner
}

TEST_CASE("hexagon condition accepts T3 and catches a twisted rule set") {
  CHECK(make_tk(3).num_squares() == 3);

  // Single vertex, two edges per color. The twisted variant lets the
  // (1,2) swap re-index the color-2 edge by the color-1 index and the
  // (2,3) swap re-index the color-3 edge by the color-2 index; the two
  // reversal routes then disagree on the color-3 index.
  auto build = [](bool twist) {
    KGraphBuilder b(3);
    b.add_vertex("v");
    const char* names[3][2] = {{"a0", "a1"}, {"b0", "b1"}, {"c0", "c1"}};
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 2; ++i) b.add_edge(names[c][i], c + 1, "v", "v");
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        int x = twist ? (i ^ j) : j;
        b.add_square(names[0][i], names[1][j], names[1][x], names[0][i]);
        b.add_square(names[1][i], names[2][j], names[2][x], names[1][i]);
        b.add_square(names[0][i], names[2][j], names[2][j], names[0][i]);
      }
    return b.validate();
  };
  CHECK(build(false).ok());
  auto bad = build(true);
  REQUIRE_FALSE(bad.ok());
  bool hex = std::any_of(bad.issues.begin(), bad.issues.end(), [](auto& i) {
    return i.kind == ValidationIssue::Kind::HexagonViolation;
  });
  CHECK(hex);
}

TEST_CASE("compose is associative, exhaustive at degree (1,1,1) on rank 3") {
  for (const KGraph& g :
       {make_tk(3), make_delta(3, deg({-2, -2, -2}), deg({2, 2, 2}))}) {
    for (int v = 0; v < std::min(g.num_vertices(), 30); ++v) {
      if (g.windowed() && g.clip_distance(v) < 3) continue;
      for (const Path& a : paths_from(g, v, deg({1, 0, 0}))) {
        for (const Path& b : paths_from(g, a.source(), deg({0, 1, 0}))) {
          for (const Path& c : paths_from(g, b.source(), deg({0, 0, 1}))) {
            CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
          }
        }
      }
    }
  }
}

TEST_CASE("square bijection makes mixed-degree counts order independent") {
  KGraph g = make_three_vertex();
  for (int u = 0; u < 3; ++u) {
    for (int v = 0; v < 3; ++v) {
      int blue_first = 0, red_first = 0;
      for (int c1 = 1; c1 <= 2; ++c1) {
        for (int e1 = 0; e1 < g.num_edges(); ++e1) {
          if (g.edge(e1).color != c1 || g.edge(e1).range != u) continue;
          for (int e2 : g.edges_ranged_at(g.edge(e1).source, 3 - c1)) {
            if (g.edge(e2).source == v) (c1 == 1 ? blue_first : red_first)++;
          }
        }
      }
      CHECK(blue_first == red_first);
    }
  }
}
