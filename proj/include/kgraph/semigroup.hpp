#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kgraph/degree.hpp"
#include "kgraph/errors.hpp"
#include "kgraph/graph.hpp"
#include "kgraph/path.hpp"

namespace kgraph {

/// Element of a builtin semigroup, encoded uniformly as an integer
/// vector: coordinates for Zk/Nk, (m,n) for the affine semigroup,
/// {table index} for a finite group, a letter word for the free monoid.
struct SgElement {
  std::vector<long long> v;
  friend bool operator==(const SgElement& a, const SgElement& b) {
    return a.v == b.v;
  }
  friend bool operator!=(const SgElement& a, const SgElement& b) {
    return a.v != b.v;
  }
  friend bool operator<(const SgElement& a, const SgElement& b) {
    return a.v < b.v;
  }
};

/// Closed-world countable cancellative monoids: the deciders need a
/// decidable left-invariant preorder and enveloping-group arithmetic,
/// which arbitrary presentations cannot supply.
///   Zk(k), Nk(k)        free abelian (semi)groups
///   FiniteGroup(table)  any finite group by Cayley table
///   AffineNN            (N x N^x, (m1,n1)(m2,n2) = (m1 n2 + m2, n1 n2));
///                       nonabelian, left- but not right-reversible
///   FreePlus(n)         free monoid; not left-reversible for n >= 2
class Semigroup {
 public:
  enum class Kind { Zk, Nk, FiniteGroup, AffineNN, FreePlus };

  static Semigroup zk(int k) { return Semigroup(Kind::Zk, k); }
  static Semigroup nk(int k) { return Semigroup(Kind::Nk, k); }
  static Semigroup affine_nn() { return Semigroup(Kind::AffineNN, 2); }
  static Semigroup free_plus(int n) { return Semigroup(Kind::FreePlus, n); }

  /// Builds a finite group from element names and a Cayley table
  /// (table[a][b] = index of a*b). Identity is names[0]. Associativity,
  /// identity and inverses are checked exhaustively; cancellativity
  /// follows.
  static Semigroup finite_group(std::vector<std::string> names,
                                std::vector<std::vector<int>> table) {
    Semigroup s(Kind::FiniteGroup, 0);
    s.names_ = std::move(names);
    s.table_ = std::move(table);
    const int n = static_cast<int>(s.names_.size());
    if (n == 0 || static_cast<int>(s.table_.size()) != n)
      throw BadParams("group: table size mismatch");
    for (const auto& row : s.table_) {
      if (static_cast<int>(row.size()) != n)
        throw BadParams("group: table row size mismatch");
      for (int x : row)
        if (x < 0 || x >= n) throw BadParams("group: table entry out of range");
    }
    for (int a = 0; a < n; ++a)
      if (s.table_[0][a] != a || s.table_[a][0] != a)
        throw BadParams("group: first element is not an identity");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (s.table_[s.table_[a][b]][c] != s.table_[a][s.table_[b][c]])
            throw BadParams("group: table is not associative");
    for (int a = 0; a < n; ++a) {
      bool inv = false;
      for (int b = 0; b < n; ++b)
        if (s.table_[a][b] == 0 && s.table_[b][a] == 0) inv = true;
      if (!inv) throw BadParams("group: element without inverse");
    }
    return s;
  }

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  int order() const { return static_cast<int>(names_.size()); }

  bool left_reversible() const {
    switch (kind_) {
      case Kind::Zk:
      case Kind::Nk:
      case Kind::FiniteGroup:
      case Kind::AffineNN:
        return true;
      case Kind::FreePlus:
        return rank_ <= 1;
    }
    return false;
  }
  bool is_group() const {
    return kind_ == Kind::Zk || kind_ == Kind::FiniteGroup;
  }
  bool is_vector_kind() const { return kind_ == Kind::Zk || kind_ == Kind::Nk; }

  SgElement identity() const {
    switch (kind_) {
      case Kind::Zk:
      case Kind::Nk:
        return SgElement{std::vector<long long>(rank_, 0)};
      case Kind::AffineNN:
        return SgElement{{0, 1}};
      case Kind::FiniteGroup:
        return SgElement{{0}};
      case Kind::FreePlus:
        return SgElement{{}};
    }
    return {};
  }

  /// True iff e encodes an element of S (as opposed to its enveloping
  /// group).
  bool contains(const SgElement& e) const {
    switch (kind_) {
      case Kind::Zk:
        return static_cast<int>(e.v.size()) == rank_;
      case Kind::Nk:
        return static_cast<int>(e.v.size()) == rank_ &&
               std::all_of(e.v.begin(), e.v.end(),
                           [](long long x) { return x >= 0; });
      case Kind::AffineNN:
        return e.v.size() == 2 && e.v[0] >= 0 && e.v[1] >= 1;
      case Kind::FiniteGroup:
        return e.v.size() == 1 && e.v[0] >= 0 && e.v[0] < order();
      case Kind::FreePlus:
        return std::all_of(e.v.begin(), e.v.end(), [&](long long x) {
          return x >= 1 && x <= rank_;
        });
    }
    return false;
  }

  SgElement multiply(const SgElement& a, const SgElement& b) const {
    switch (kind_) {
      case Kind::Zk:
      case Kind::Nk: {
        SgElement r = a;
        for (int i = 0; i < rank_; ++i) r.v[i] += b.v[i];
        return r;
      }
      case Kind::AffineNN:
        return SgElement{{a.v[0] * b.v[1] + b.v[0], a.v[1] * b.v[1]}};
      case Kind::FiniteGroup:
        return SgElement{{table_[a.v[0]][b.v[0]]}};
      case Kind::FreePlus: {
        SgElement r = a;
        r.v.insert(r.v.end(), b.v.begin(), b.v.end());
        return r;
      }
    }
    return {};
  }

  /// g^{-1} h computed in the enveloping group, returned only when it
  /// lies in S (i.e. when g left-divides h).
  std::optional<SgElement> left_quotient(const SgElement& g,
                                         const SgElement& h) const {
    switch (kind_) {
      case Kind::Zk: {
        SgElement r = h;
        for (int i = 0; i < rank_; ++i) r.v[i] -= g.v[i];
        return r;
      }
      case Kind::Nk: {
        SgElement r = h;
        for (int i = 0; i < rank_; ++i) {
          r.v[i] -= g.v[i];
          if (r.v[i] < 0) return std::nullopt;
        }
        return r;
      }
      case Kind::AffineNN: {
        // (a,p) * (m,n) = (a n + m, p n) = (b,q)
        if (h.v[1] % g.v[1] != 0) return std::nullopt;
        long long n = h.v[1] / g.v[1];
        long long m = h.v[0] - g.v[0] * n;
        if (n < 1 || m < 0) return std::nullopt;
        return SgElement{{m, n}};
      }
      case Kind::FiniteGroup: {
        for (int x = 0; x < order(); ++x)
          if (table_[g.v[0]][x] == h.v[0]) return SgElement{{x}};
        return std::nullopt;
      }
      case Kind::FreePlus: {
        if (g.v.size() > h.v.size()) return std::nullopt;
        if (!std::equal(g.v.begin(), g.v.end(), h.v.begin()))
          return std::nullopt;
        return SgElement{{h.v.begin() + g.v.size(), h.v.end()}};
      }
    }
    return std::nullopt;
  }

  /// h g^{-1} in the enveloping group when it lies in S (g right-divides
  /// h); used to locate in-edges of skew products.
  std::optional<SgElement> right_quotient(const SgElement& h,
                                          const SgElement& g) const {
    switch (kind_) {
      case Kind::Zk:
      case Kind::Nk:
        return left_quotient(g, h);  // abelian
      case Kind::AffineNN: {
        // (m,n) * (gm,gn) = (m gn + gm, n gn) = (hm,hn)
        if (h.v[1] % g.v[1] != 0) return std::nullopt;
        long long n = h.v[1] / g.v[1];
        long long num = h.v[0] - g.v[0];
        if (num % g.v[1] != 0) return std::nullopt;
        long long m = num / g.v[1];
        if (n < 1 || m < 0) return std::nullopt;
        return SgElement{{m, n}};
      }
      case Kind::FiniteGroup: {
        for (int x = 0; x < order(); ++x)
          if (table_[x][g.v[0]] == h.v[0]) return SgElement{{x}};
        return std::nullopt;
      }
      case Kind::FreePlus: {
        if (g.v.size() > h.v.size()) return std::nullopt;
        if (!std::equal(g.v.rbegin(), g.v.rend(), h.v.rbegin()))
          return std::nullopt;
        return SgElement{{h.v.begin(), h.v.end() - g.v.size()}};
      }
    }
    return std::nullopt;
  }

  SgElement inverse(const SgElement& a) const {
    if (!is_group()) throw UnsupportedSemigroup("inverse needs a group");
    if (kind_ == Kind::Zk) {
      SgElement r = a;
      for (auto& x : r.v) x = -x;
      return r;
    }
    for (int x = 0; x < order(); ++x)
      if (table_[a.v[0]][x] == 0) return SgElement{{x}};
    throw Error("group element without inverse");
  }

  /// The left-invariant preorder h >=_l g iff g^{-1} h in S, defined on
  /// the enveloping group of a left-reversible semigroup. For Nk inside
  /// Zk this is the coordinatewise order; groups are trivially directed.
  bool left_geq(const SgElement& h, const SgElement& g) const {
    if (!left_reversible())
      throw UnsupportedSemigroup(
          "left-invariant preorder needs a left-reversible semigroup");
    if (kind_ == Kind::FreePlus)  // rank 1: isomorphic to (N,+)
      return h.v.size() >= g.v.size();
    return left_quotient(g, h).has_value();
  }

  std::string format(const SgElement& e) const {
    switch (kind_) {
      case Kind::Zk:
      case Kind::Nk:
      case Kind::AffineNN: {
        if (kind_ != Kind::AffineNN && rank_ == 1)
          return std::to_string(e.v[0]);
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < e.v.size(); ++i) {
          if (i) os << ',';
          os << e.v[i];
        }
        os << ')';
        return os.str();
      }
      case Kind::FiniteGroup:
        return names_[e.v[0]];
      case Kind::FreePlus: {
        if (e.v.empty()) return "e";
        std::ostringstream os;
        for (std::size_t i = 0; i < e.v.size(); ++i) {
          if (i) os << '.';
          os << e.v[i];
        }
        return os.str();
      }
    }
    return "?";
  }

  SgElement parse(const std::string& text) const {
    switch (kind_) {
      case Kind::Zk:
      case Kind::Nk:
      case Kind::AffineNN: {
        std::string t = text;
        if (!t.empty() && t.front() == '(' && t.back() == ')')
          t = t.substr(1, t.size() - 2);
        SgElement e;
        std::istringstream is(t);
        std::string part;
        while (std::getline(is, part, ','))
          e.v.push_back(std::stoll(part));
        int want = kind_ == Kind::AffineNN ? 2 : rank_;
        if (static_cast<int>(e.v.size()) != want)
          throw BadParams("element " + text + " has wrong arity");
        if (!contains(e) && kind_ != Kind::Zk)
          throw BadParams("element " + text + " is outside the semigroup");
        return e;
      }
      case Kind::FiniteGroup: {
        for (int i = 0; i < order(); ++i)
          if (names_[i] == text) return SgElement{{i}};
        throw BadParams("unknown group element " + text);
      }
      case Kind::FreePlus: {
        if (text == "e") return identity();
        SgElement e;
        std::istringstream is(text);
        std::string part;
        while (std::getline(is, part, '.')) e.v.push_back(std::stoll(part));
        if (!contains(e)) throw BadParams("bad word " + text);
        return e;
      }
    }
    throw BadParams("unparsable element " + text);
  }

  std::string name() const {
    switch (kind_) {
      case Kind::Zk:
        return "Z^" + std::to_string(rank_);
      case Kind::Nk:
        return "N^" + std::to_string(rank_);
      case Kind::FiniteGroup:
        return "group(" + std::to_string(order()) + ")";
      case Kind::AffineNN:
        return "affine-nn";
      case Kind::FreePlus:
        return "free-plus(" + std::to_string(rank_) + ")";
    }
    return "?";
  }

  const std::vector<std::string>& element_names() const { return names_; }

 private:
  Semigroup(Kind k, int rank) : kind_(k), rank_(rank) {
    if ((k == Kind::Zk || k == Kind::Nk || k == Kind::FreePlus) && rank < 1)
      throw BadParams("semigroup rank must be >= 1");
  }

  Kind kind_;
  int rank_;
  std::vector<std::string> names_;       // FiniteGroup
  std::vector<std::vector<int>> table_;  // FiniteGroup
};

/// Verdict-lite for strictly-positive checks: exact on every builtin.
struct StrictlyPositiveResult {
  bool holds = false;
  bool exact = true;
  std::string detail;
};

/// t is strictly positive when {t^n} is cofinal for >=_l. Exact: in N^k
/// iff every coordinate is >= 1; in a group always; in the affine
/// semigroup never (a prime not dividing the multiplier is never
/// caught up with); in the free monoid only for rank 1 and t != 1.
inline StrictlyPositiveResult strictly_positive(const Semigroup& s,
                                                const SgElement& t) {
  StrictlyPositiveResult r;
  switch (s.kind()) {
    case Semigroup::Kind::Nk: {
      for (int i = 0; i < s.rank(); ++i)
        if (t.v[i] < 1) {
          r.detail = "coordinate " + std::to_string(i + 1) +
                     " of t is 0, so t^n never dominates e_" +
                     std::to_string(i + 1);
          return r;
        }
      r.holds = true;
      return r;
    }
    case Semigroup::Kind::Zk:
    case Semigroup::Kind::FiniteGroup:
      r.holds = true;
      r.detail = "in a group the identity already dominates everything";
      return r;
    case Semigroup::Kind::AffineNN: {
      long long n = t.v[1];
      auto is_prime = [](long long x) {
        if (x < 2) return false;
        for (long long d = 2; d * d <= x; ++d)
          if (x % d == 0) return false;
        return true;
      };
      long long p = 2;
      while (!is_prime(p) || n % p == 0) ++p;
      r.detail = "no power of t has multiplier divisible by " +
                 std::to_string(p) + ", so t^n never dominates (0," +
                 std::to_string(p) + ")";
      return r;
    }
    case Semigroup::Kind::FreePlus: {
      if (s.rank() == 1) {
        r.holds = !t.v.empty();
        if (!r.holds) r.detail = "the identity is not cofinal";
        return r;
      }
      r.detail = "distinct words have disjoint upper cones";
      return r;
    }
  }
  return r;
}

/// A functor Lambda -> S presented by its edge labels (vertices map to
/// the identity). Well-definedness on composites is exactly the square
/// condition checked by validate_labeling.
struct Labeling {
  std::vector<SgElement> edge_label;  // by edge index

  const SgElement& operator()(int edge) const { return edge_label[edge]; }
};

inline SgElement label_of_path(const Semigroup& s, const Labeling& lab,
                               const Path& p) {
  SgElement r = s.identity();
  for (int e : p.word) r = s.multiply(r, lab(e));
  return r;
}

/// Functor validation: every square f g = g' f' must satisfy
/// eta(f) eta(g) = eta(g') eta(f').
inline ValidationReport validate_labeling(const KGraph& g, const Semigroup& s,
                                          const Labeling& lab) {
  ValidationReport report;
  if (static_cast<int>(lab.edge_label.size()) != g.num_edges()) {
    report.issues.push_back(
        {ValidationIssue::Kind::UnknownName, "labeling does not cover all edges"});
    return report;
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (!s.contains(lab.edge_label[e]))
      report.issues.push_back({ValidationIssue::Kind::BadEndpoint,
                               "label of " + g.edge(e).name +
                                   " is outside " + s.name()});
  for (int e1 = 0; e1 < g.num_edges(); ++e1) {
    for (int c2 = 1; c2 <= g.rank(); ++c2) {
      if (c2 == g.edge(e1).color) continue;
      for (int e2 : g.edges_ranged_at(g.edge(e1).source, c2)) {
        if (!g.has_swap(e1, e2)) continue;
        auto [e3, e4] = g.swap_pair(e1, e2);
        // report each square once, from its lexicographically first side
        if (detail::pair_key(e1, e2) > detail::pair_key(e3, e4)) continue;
        SgElement lhs = s.multiply(lab(e1), lab(e2));
        SgElement rhs = s.multiply(lab(e3), lab(e4));
        if (lhs != rhs)
          report.issues.push_back(
              {ValidationIssue::Kind::MalformedSquare,
               "labels break square " + g.edge(e1).name + " " +
                   g.edge(e2).name + " = " + g.edge(e3).name + " " +
                   g.edge(e4).name + ": " + s.format(lhs) +
                   " != " + s.format(rhs)});
      }
    }
  }
  return report;
}

/// The degree functor as a labeling into N^k or Z^k of the same rank.
inline Labeling degree_labeling(const KGraph& g) {
  Labeling lab;
  lab.edge_label.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    std::vector<long long> v(g.rank(), 0);
    v[g.edge(e).color - 1] = 1;
    lab.edge_label[e] = SgElement{std::move(v)};
  }
  return lab;
}

/// True iff the labeling is literally the degree functor for a vector
/// semigroup of matching rank.
inline bool is_degree_labeling(const KGraph& g, const Semigroup& s,
                               const Labeling& lab) {
  if (!s.is_vector_kind() || s.rank() != g.rank()) return false;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& v = lab.edge_label[e].v;
    for (int i = 0; i < g.rank(); ++i)
      if (v[i] != (i == g.edge(e).color - 1 ? 1 : 0)) return false;
  }
  return true;
}

}  // namespace kgraph
