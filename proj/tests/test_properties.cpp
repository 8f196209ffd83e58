// Property suites over the builtin graphs: exhaustive small-instance
// checks of the structural invariants the rest of the library leans on.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "kgraph/kgraph.hpp"

using namespace kgraph;

namespace {

Degree deg(std::vector<int> v) { return Degree(std::move(v)); }

std::vector<const KGraph*> small_builtins() {
  static KGraph t1 = make_tk(1);
  static KGraph t2 = make_tk(2);
  static KGraph t3 = make_tk(3);
  static KGraph b2 = make_b2();
  static KGraph f22 = make_f2_theta(2, 2, cyclic_theta(2, 2));
  static KGraph f32 = make_f2_theta(3, 2, cyclic_theta(3, 2));
  static KGraph tv = make_three_vertex();
  return {&t1, &t2, &t3, &b2, &f22, &f32, &tv};
}

}  // namespace

TEST_CASE("matrices commute on every builtin") {
  for (const KGraph* g : small_builtins()) {
    ComponentMatrices cm = component_matrices(*g);
    CHECK(cm.commuting);
  }
}

TEST_CASE("path census equals matrix powers on every builtin, n <= (3,3)") {
  for (const KGraph* g : small_builtins()) {
    ComponentMatrices cm = component_matrices(*g);
    for (const Degree& n : degrees_upto(Degree::uniform(g->rank(), 3))) {
      IntMatrix m = matrix_power(cm, n);
      for (int u = 0; u < g->num_vertices(); ++u) {
        auto ps = paths_from(*g, u, n);
        std::map<int, long> counts;
        for (const Path& p : ps) ++counts[p.source()];
        for (int v = 0; v < g->num_vertices(); ++v)
          CHECK(mpz_class(counts[v]) == m.at(u, v));
      }
    }
  }
}

TEST_CASE("normal forms are canonical: every enumeration is sorted and "
          "composition is closed") {
  for (const KGraph* g : small_builtins()) {
    for (int v = 0; v < g->num_vertices(); ++v) {
      for (const Degree& n : degrees_upto(Degree::uniform(g->rank(), 2))) {
        for (const Path& p : paths_from(*g, v, n)) {
          for (std::size_t i = 1; i < p.word.size(); ++i)
            CHECK(g->edge(p.word[i - 1]).color <= g->edge(p.word[i]).color);
          CHECK(p.degree() == n);
        }
      }
    }
  }
}

TEST_CASE("primitivity agrees with brute force on builtins with few vertices") {
  for (const KGraph* g : small_builtins()) {
    if (g->num_vertices() > 4) continue;
    int cap = 2 * (g->num_vertices() - 1) * (g->num_vertices() - 1) + 2;
    ComponentMatrices cm = component_matrices(*g);
    bool brute = false;
    auto rec = [&](auto&& self, int color, const IntMatrix& acc) -> void {
      if (brute) return;
      IntMatrix cur = acc * cm.m[color - 1];
      for (int t = 1; t <= cap && !brute; ++t) {
        if (color == g->rank()) {
          if (cur.all_positive()) brute = true;
        } else {
          self(self, color + 1, cur);
        }
        if (t < cap) cur = cur * cm.m[color - 1];
      }
    };
    rec(rec, 1, IntMatrix::identity(g->num_vertices()));
    CHECK(is_primitive(*g).primitive == brute);
  }
}

TEST_CASE("lifting transfers cofinality from skew windows to the base") {
  struct Case {
    const KGraph* g;
    Semigroup s;
    Labeling eta;
    SgWindow w;
  };
  std::vector<Case> cases;
  {
    static KGraph t2 = make_tk(2);
    cases.push_back({&t2, Semigroup::zk(2), degree_labeling(t2),
                     SgWindow::box({-3, -3}, {3, 3})});
    static KGraph b2 = make_b2();
    Labeling eta;
    eta.edge_label = {SgElement{{1}}, SgElement{{0}}};
    cases.push_back({&b2, Semigroup::nk(1), eta, SgWindow::box({0}, {6})});
    static KGraph tv = make_three_vertex();
    cases.push_back({&tv, Semigroup::zk(2), degree_labeling(tv),
                     SgWindow::box({-3, -3}, {3, 3})});
  }
  for (auto& c : cases) {
    SkewProduct sp = skew_product(*c.g, c.s, c.eta, c.w);
    SearchBounds bw = SearchBounds::defaults_for(sp.graph);
    Verdict win = is_cofinal(sp.graph, bw);
    if (win.holds()) {
      Verdict base = is_cofinal(*c.g, SearchBounds::defaults_for(*c.g));
      CHECK_FALSE(base.fails());
    }
  }
}

TEST_CASE("frontier monotonicity and stabilization spot checks") {
  auto all = small_builtins();
  for (const KGraph* gp : {all[0], all[3], all[6]}) {
    const KGraph& g = *gp;
    for (int v = 0; v < g.num_vertices(); ++v) {
      // V(m) subset V(n) for m <= n
      for (const Degree& n : degrees_upto(Degree::uniform(g.rank(), 2))) {
        Frontier fn = frontier(g, v, n);
        for (const Degree& m : degrees_upto(n)) {
          Frontier fm = frontier(g, v, m);
          for (int x : fm.v_set)
            CHECK(std::find(fn.v_set.begin(), fn.v_set.end(), x) !=
                  fn.v_set.end());
        }
        // FV(n) is disjoint from every lower union by construction
        for (int x : fn.fv_set) {
          for (int i = 1; i <= g.rank(); ++i) {
            if (n[i - 1] == 0) continue;
            Frontier lower =
                frontier(g, v, n - Degree::basis(g.rank(), i));
            CHECK(std::find(lower.v_set.begin(), lower.v_set.end(), x) ==
                  lower.v_set.end());
          }
        }
      }
      // pumping: once V stabilizes along an axis it stays stable
      FrontierScan scan = frontier_scan(g, v, 4);
      CHECK(scan.nogrow_consequence_ok);
    }
  }
}

TEST_CASE("route consistency: exact verdicts match bounded searches") {
  // primitivity-equivalence vs the skew-window cofinality search
  static KGraph f2 = make_f2_theta(2, 2, identity_theta(2, 2));
  static KGraph tv = make_three_vertex();
  Semigroup z2 = Semigroup::zk(2);
  for (const KGraph* g : {&f2, &tv}) {
    SearchBounds b = SearchBounds::defaults_for(*g);
    Verdict sys = system_cofinal(*g, z2, degree_labeling(*g), b);
    SkewProduct sp = skew_product(*g, z2, degree_labeling(*g),
                                  SgWindow::box({-3, -3}, {3, 3}));
    Verdict win = is_cofinal(sp.graph, SearchBounds::defaults_for(sp.graph));
    CHECK_FALSE((sys.holds() && win.fails()));
    CHECK_FALSE((sys.fails() && win.holds()));
    if (g == &f2) CHECK(sys.holds());
    if (g == &tv) CHECK(sys.fails());
  }
}

TEST_CASE("rank-1 primitivity is strong connectivity with period one") {
  KGraphBuilder b(1);
  b.add_vertex("u").add_vertex("v");
  b.add_edge("x", 1, "u", "v");
  b.add_edge("y", 1, "v", "u");
  KGraph two_cycle = b.build();
  KGraph b2 = make_b2();
  KGraph t1 = make_tk(1);
  for (const KGraph* g : {&two_cycle, &b2, &t1}) {
    bool sc = is_strongly_connected(*g);
    bool prim = is_primitive(*g).primitive;
    if (sc) CHECK(prim == (period(*g) == 1));
  }
  CHECK_FALSE(is_primitive(two_cycle).primitive);
  CHECK(is_primitive(b2).primitive);
}

TEST_CASE("principal right ideals are cofinal in left-reversible semigroups") {
  // for every t and s there is u with t u >=_l s
  for (const Semigroup& s :
       {Semigroup::nk(2), Semigroup::zk(2), Semigroup::affine_nn()}) {
    auto box = [&](int radius) {
      std::vector<SgElement> out;
      if (s.kind() == Semigroup::Kind::AffineNN) {
        for (long long m = 0; m <= radius; ++m)
          for (long long n = 1; n <= radius; ++n)
            out.push_back(SgElement{{m, n}});
      } else {
        long long lo = s.kind() == Semigroup::Kind::Zk ? -radius : 0;
        for (long long a = lo; a <= radius; ++a)
          for (long long b = lo; b <= radius; ++b)
            out.push_back(SgElement{{a, b}});
      }
      return out;
    };
    for (const auto& t : box(2)) {
      for (const auto& target : box(2)) {
        bool found = false;
        for (const auto& u : box(6)) {
          if (s.left_geq(s.multiply(t, u), target)) {
            found = true;
            break;
          }
        }
        INFO(s.name() << " t=" << s.format(t)
                      << " target=" << s.format(target));
        CHECK(found);
      }
    }
  }
}

TEST_CASE("graphs and deciders are safe for concurrent readers") {
  const KGraph& g = *small_builtins()[6];  // the 3-vertex graph
  SearchBounds b = SearchBounds::defaults_for(g);
  Verdict expect_cf = is_cofinal(g, b);
  auto expect_pr = is_primitive(g);
  std::vector<std::thread> workers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&] {
      for (int i = 0; i < 20; ++i) {
        if (is_cofinal(g, b).status != expect_cf.status) ++mismatches;
        if (is_primitive(g).primitive != expect_pr.primitive) ++mismatches;
        if (paths_from(g, i % 3, Degree({2, 2})).empty()) ++mismatches;
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(mismatches == 0);
}

TEST_CASE("labels of both square factorizations agree on all builtins") {
  for (const KGraph* g : small_builtins()) {
    if (g->rank() < 2) continue;
    Semigroup zk = Semigroup::zk(g->rank());
    Labeling d = degree_labeling(*g);
    for (int e1 = 0; e1 < g->num_edges(); ++e1) {
      for (int c2 = 1; c2 <= g->rank(); ++c2) {
        if (c2 == g->edge(e1).color) continue;
        for (int e2 : g->edges_ranged_at(g->edge(e1).source, c2)) {
          auto [e3, e4] = g->swap_pair(e1, e2);
          SgElement l1 = zk.multiply(d(e1), d(e2));
          SgElement l2 = zk.multiply(d(e3), d(e4));
          CHECK(l1 == l2);
        }
      }
    }
  }
}
