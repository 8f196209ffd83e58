#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "kgraph/algebra.hpp"
#include "kgraph/builtins.hpp"
#include "kgraph/skew.hpp"

using namespace kgraph;

namespace {

Degree deg(std::vector<int> v) { return Degree(std::move(v)); }
SgElement el(std::vector<long long> v) { return SgElement{std::move(v)}; }

SkewProduct b2_over_n(int hi) {
  static KGraph b2 = make_b2();
  Semigroup n1 = Semigroup::nk(1);
  Labeling lab;
  lab.edge_label = {el({1}), el({0})};  // eta(e)=1, eta(f)=0
  return skew_product(b2, n1, lab, SgWindow::box({0}, {hi}));
}

SkewProduct tk_over_zk(int k, int radius) {
  static std::map<int, KGraph> cache;
  if (!cache.count(k)) cache.emplace(k, make_tk(k));
  const KGraph& tk = cache.at(k);
  Semigroup zk = Semigroup::zk(k);
  return skew_product(tk, zk, degree_labeling(tk),
                      SgWindow::box(std::vector<long long>(k, -radius),
                                    std::vector<long long>(k, radius)));
}

}  // namespace

TEST_CASE("B2 skew over N on the window 0..3") {
  SkewProduct sp = b2_over_n(3);
  const KGraph& g = sp.graph;
  CHECK(g.num_vertices() == 4);
  // f-loops at every fiber, e-edges ranged at (v|n) sourced at (v|n+1)
  for (int n = 0; n <= 3; ++n) {
    int v = g.vertex("(v|" + std::to_string(n) + ")");
    auto loops = g.edges_ranged_at(v, 1);
    bool has_loop = false, has_shift = false;
    for (int e : loops) {
      if (g.edge(e).source == v) has_loop = true;
      if (n < 3 && g.edge(e).source ==
                       g.vertex("(v|" + std::to_string(n + 1) + ")"))
        has_shift = true;
    }
    CHECK(has_loop);
    CHECK((n < 3 ? has_shift : g.clip_ranged(v, 1)));
  }
  // source rule: s(lambda,t) = (s(lambda), t eta(lambda)), bit for bit
  for (int e = 0; e < g.num_edges(); ++e) {
    int se = g.edge(e).source;
    int re = g.edge(e).range;
    SgElement expect = sp.sem.multiply(sp.fiber_of[re],
                                       sp.eta(sp.base_edge_of[e]));
    CHECK(sp.fiber_of[se] == expect);
    CHECK(sp.base_vertex_of[se] == sp.base->edge(sp.base_edge_of[e]).source);
  }
}

TEST_CASE("skew degrees are inherited and interior vertices keep sources") {
  SkewProduct sp = tk_over_zk(2, 2);
  const KGraph& g = sp.graph;
  CHECK(g.num_vertices() == 25);
  for (int e = 0; e < g.num_edges(); ++e)
    CHECK(g.edge(e).color == sp.base->edge(sp.base_edge_of[e]).color);
  // no sources on the materialized window (clipped slots excluded)
  CHECK_FALSE(g.has_sources());
  // paths of degree d from an interior vertex project to base paths of
  // the same degree
  int v0 = *sp.vertex_at(0, el({0, 0}));
  GraphMorphism pi = projection(sp);
  CHECK(pi.validate().ok());
  // surjective: every base vertex and edge is hit (the window covers a
  // fiber over everything)
  std::vector<char> vhit(sp.base->num_vertices(), 0),
      ehit(sp.base->num_edges(), 0);
  for (int x : pi.vmap) vhit[x] = 1;
  for (int e : pi.emap) ehit[e] = 1;
  CHECK(std::all_of(vhit.begin(), vhit.end(), [](char c) { return c; }));
  CHECK(std::all_of(ehit.begin(), ehit.end(), [](char c) { return c; }));
  for (const Degree& n : degrees_upto(deg({2, 2}))) {
    for (const Path& p : paths_from(g, v0, n)) {
      Path q = pi.apply(p);
      CHECK(q.degree() == p.degree());
      CHECK(q.range == 0);
    }
  }
  // composition law: skew paths compose exactly when the second fiber is
  // the first fiber shifted by the label, and projection respects it
  for (const Path& p : paths_from(g, v0, deg({1, 0}))) {
    for (const Path& q : paths_from(g, p.source(), deg({0, 1}))) {
      Path pq = compose(p, q);
      CHECK(pi.apply(pq) == compose(pi.apply(p), pi.apply(q)));
      SgElement shift =
          label_of_path(sp.sem, sp.eta, Path{sp.base, 0, {sp.base_edge_of[p.word[0]]}});
      CHECK(sp.fiber_of[p.source()] ==
            sp.sem.multiply(sp.fiber_of[v0], shift));
    }
  }
}

TEST_CASE("skew over a finite group is fully closed") {
  KGraph t2 = make_tk(2);
  auto z2 = Semigroup::finite_group({"e", "a"}, {{0, 1}, {1, 0}});
  Labeling lab;
  lab.edge_label = {z2.parse("a"), z2.parse("e")};
  SkewProduct sp = skew_product(t2, z2, lab, SgWindow::all());
  CHECK(sp.graph.num_vertices() == 2);
  CHECK(sp.graph.num_edges() == 4);
  CHECK_FALSE(sp.graph.any_clips());
  CHECK_FALSE(sp.graph.has_sources());
  CHECK_FALSE(sp.graph.has_sinks());
  ComponentMatrices cm = component_matrices(sp.graph);
  CHECK(cm.commuting);
}

TEST_CASE("labelings that break squares are rejected at skew construction") {
  KGraph t2 = make_tk(2);
  Semigroup fp = Semigroup::free_plus(2);
  Labeling lab;
  lab.edge_label = {fp.parse("1"), fp.parse("2")};  // 1.2 != 2.1
  CHECK_THROWS_AS(skew_product(t2, fp, lab, SgWindow::words(2)),
                  InvalidGraph);
}

TEST_CASE("projection has unique r-path lifting on skew windows") {
  for (const SkewProduct& sp : {b2_over_n(4), tk_over_zk(2, 2)}) {
    GraphMorphism pi = projection(sp);
    auto res = check_r_path_lifting(
        pi, true, Degree::uniform(sp.base->rank(), 2));
    CHECK(res.status == LiftingResult::Status::Holds);
    CHECK(res.samples > 0);
  }
}

TEST_CASE("projection after lifting is the identity on sampled paths") {
  SkewProduct sp = tk_over_zk(2, 3);
  GraphMorphism pi = projection(sp);
  int v0 = *sp.vertex_at(0, el({0, 0}));
  for (const Degree& n : degrees_upto(deg({2, 2}))) {
    auto lifted = paths_from(sp.graph, v0, n);
    auto base = paths_from(*sp.base, 0, n);
    // unique r-path lifting: the projection restricts to a bijection
    REQUIRE(lifted.size() == base.size());
    std::set<std::string> images;
    for (const Path& p : lifted) images.insert(pi.apply(p).to_string());
    std::set<std::string> expect;
    for (const Path& p : base) expect.insert(p.to_string());
    CHECK(images == expect);
  }
}

TEST_CASE("the lattice-to-single-vertex collapse has unique r-path lifting") {
  KGraph d2 = make_delta(2, deg({-2, -2}), deg({2, 2}));
  KGraph t2 = make_tk(2);
  GraphMorphism p;
  p.dom = &d2;
  p.cod = &t2;
  p.vmap.assign(d2.num_vertices(), 0);
  p.emap.resize(d2.num_edges());
  for (int e = 0; e < d2.num_edges(); ++e)
    p.emap[e] = t2.edge_index("f" + std::to_string(d2.edge(e).color));
  REQUIRE(p.validate().ok());
  auto res = check_r_path_lifting(p, true, deg({2, 2}));
  CHECK(res.status == LiftingResult::Status::Holds);
}

TEST_CASE("a non-surjective constant map fails path lifting") {
  KGraphBuilder b(1);
  b.add_vertex("x").add_vertex("y");
  KGraph dom = b.build();
  KGraph t1 = make_tk(1);
  GraphMorphism p;
  p.dom = &dom;
  p.cod = &t1;
  p.vmap = {0, 0};
  auto res = check_r_path_lifting(p, false, deg({1}));
  CHECK(res.status == LiftingResult::Status::Fails);
  CHECK(res.detail.find("no lift") != std::string::npos);
}

TEST_CASE("T_k skew by the degree functor is the lattice window") {
  for (int k : {1, 2}) {
    SkewProduct sp = tk_over_zk(k, k == 1 ? 2 : 3);
    KGraph delta = make_delta(k, Degree::uniform(k, k == 1 ? -2 : -3),
                              Degree::uniform(k, k == 1 ? 2 : 3));
    auto iso = window_isomorphic(sp.graph, delta);
    REQUIRE(iso.status == IsoResult::Status::Holds);
    // the isomorphism is (lambda, m) -> (m, m + d(lambda)); on vertices
    // (v|m) -> (m)
    for (auto [x, y] : iso.vertex_map) {
      SgElement m = sp.fiber_of[x];
      std::vector<int> coords(m.v.begin(), m.v.end());
      CHECK(delta.vertex_name(y) == Degree(coords).to_string());
    }
  }
}

TEST_CASE("window isomorphism rejects different shapes and accepts identity") {
  KGraph t1 = make_tk(1);
  KGraph b2 = make_b2();
  auto r = window_isomorphic(t1, b2);
  CHECK(r.status == IsoResult::Status::Fails);

  KGraph f1 = make_f2_theta(2, 2, cyclic_theta(2, 2));
  KGraph f2 = make_f2_theta(2, 2, cyclic_theta(2, 2));
  auto self = window_isomorphic(f1, f2);
  CHECK(self.status == IsoResult::Status::Holds);

  // same counts, different squares: identity vs cyclic theta on 2x2
  KGraph fid = make_f2_theta(2, 2, identity_theta(2, 2));
  auto diff = window_isomorphic(fid, f1);
  CHECK(diff.status != IsoResult::Status::Holds);
}

TEST_CASE("affine and free-monoid windows materialize") {
  KGraph b2 = make_b2();
  Semigroup aff = Semigroup::affine_nn();
  Labeling lab;
  lab.edge_label = {aff.parse("(1,1)"), aff.parse("(0,2)")};
  SkewProduct sp =
      skew_product(b2, aff, lab, SgWindow::box({0, 1}, {3, 4}));
  CHECK(sp.graph.num_vertices() == 16);
  CHECK(sp.graph.num_edges() > 0);

  Semigroup fp = Semigroup::free_plus(2);
  Labeling wl;
  wl.edge_label = {fp.parse("1"), fp.parse("2")};
  SkewProduct wp = skew_product(b2, fp, wl, SgWindow::words(2));
  CHECK(wp.graph.num_vertices() == 7);  // 1 + 2 + 4 fibers
  CHECK(wp.graph.num_edges() == 6);     // edges from len<2 fibers only
}
