#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "kgraph/errors.hpp"

namespace kgraph {

using ZVec = std::vector<mpz_class>;

inline ZVec zvec_of(const std::vector<long long>& v) {
  ZVec r;
  r.reserve(v.size());
  for (long long x : v) r.emplace_back(static_cast<long>(x));
  return r;
}

inline std::string zvec_str(const ZVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += v[i].get_str();
  }
  return s + ")";
}

/// Sublattice of Z^k in Hermite row-echelon form: one pivot row per
/// leading column, pivots positive, entries above pivots reduced.
/// Supports exact membership, canonical coset representatives and index
/// computation, the engine behind residue certificates. Dimensions and
/// generator counts are tiny here, so the form is recomputed from the
/// generator list on each insertion.
class Lattice {
 public:
  explicit Lattice(int dim) : dim_(dim), rows_(dim) {}

  static Lattice from_generators(int dim, const std::vector<ZVec>& gens) {
    Lattice l(dim);
    for (const auto& g : gens) l.add(g);
    return l;
  }

  int dim() const { return dim_; }
  int rank() const {
    int r = 0;
    for (int i = 0; i < dim_; ++i)
      if (!rows_[i].empty()) ++r;
    return r;
  }

  void add(ZVec v) {
    if (static_cast<int>(v.size()) != dim_)
      throw BadParams("lattice generator dimension mismatch");
    if (contains(v)) return;
    gens_.push_back(std::move(v));
    recompute();
  }

  bool contains(const ZVec& v) const {
    ZVec r = residue(v);
    for (const auto& x : r)
      if (x != 0) return false;
    return true;
  }

  /// Canonical coset representative of v: two vectors lie in the same
  /// coset iff their residues are equal.
  ZVec residue(ZVec v) const {
    for (int c = 0; c < dim_; ++c) {
      if (rows_[c].empty() || v[c] == 0) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), v[c].get_mpz_t(), rows_[c][c].get_mpz_t());
      for (int j = c; j < dim_; ++j) v[j] -= q * rows_[c][j];
    }
    return v;
  }

  bool is_full() const {
    for (int c = 0; c < dim_; ++c)
      if (rows_[c].empty() || rows_[c][c] != 1) return false;
    return dim_ >= 0;
  }

  /// [Z^k : L] when full-rank; 0 when the rank is deficient (infinite).
  mpz_class index() const {
    mpz_class idx = 1;
    for (int c = 0; c < dim_; ++c) {
      if (rows_[c].empty()) return 0;
      idx *= rows_[c][c];
    }
    return idx;
  }

  /// All canonical residues when the index is finite and small.
  std::vector<ZVec> cosets(unsigned long cap = 4096) const {
    mpz_class idx = index();
    if (idx == 0 || idx > cap)
      throw BadParams("coset enumeration needs small finite index");
    std::vector<ZVec> out;
    ZVec cur(dim_, 0);
    enumerate(0, cur, out);
    return out;
  }

  /// Some standard basis vector not in the lattice, if any; the cheapest
  /// witness that the lattice is proper.
  ZVec missing_basis_vector() const {
    for (int i = 0; i < dim_; ++i) {
      ZVec e(dim_, 0);
      e[i] = 1;
      if (!contains(e)) return e;
    }
    return {};
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int c = 0; c < dim_; ++c) {
      if (rows_[c].empty()) continue;
      if (!first) s += ", ";
      first = false;
      s += zvec_str(rows_[c]);
    }
    return s + "}";
  }

 private:
  void recompute() {
    rows_.assign(dim_, {});
    std::vector<ZVec> work = gens_;
    for (int c = 0; c < dim_; ++c) {
      // Euclid-combine all remaining rows until at most one is nonzero
      // in column c; that row becomes the pivot row for c.
      for (;;) {
        int best = -1;
        for (std::size_t i = 0; i < work.size(); ++i) {
          if (work[i][c] == 0) continue;
          if (best < 0 || cmpabs(work[i][c], work[best][c]) < 0)
            best = static_cast<int>(i);
        }
        if (best < 0) break;
        bool others = false;
        for (std::size_t i = 0; i < work.size(); ++i) {
          if (static_cast<int>(i) == best || work[i][c] == 0) continue;
          others = true;
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), work[i][c].get_mpz_t(),
                     work[best][c].get_mpz_t());
          for (int j = 0; j < dim_; ++j) work[i][j] -= q * work[best][j];
        }
        if (!others) {
          rows_[c] = work[best];
          if (rows_[c][c] < 0)
            for (auto& x : rows_[c]) x = -x;
          work.erase(work.begin() + best);
          break;
        }
      }
    }
    // Reduce entries above each pivot so residues are canonical.
    for (int c = dim_ - 1; c >= 0; --c) {
      if (rows_[c].empty()) continue;
      for (int r = 0; r < c; ++r) {
        if (rows_[r].empty()) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows_[r][c].get_mpz_t(),
                   rows_[c][c].get_mpz_t());
        if (q != 0)
          for (int j = 0; j < dim_; ++j) rows_[r][j] -= q * rows_[c][j];
      }
    }
  }

  static int cmpabs(const mpz_class& a, const mpz_class& b) {
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
  }

  void enumerate(int c, ZVec& cur, std::vector<ZVec>& out) const {
    if (c == dim_) {
      out.push_back(residue(cur));
      return;
    }
    mpz_class top = rows_[c].empty() ? 1 : rows_[c][c];
    for (mpz_class i = 0; i < top; ++i) {
      cur[c] = i;
      enumerate(c + 1, cur, out);
    }
    cur[c] = 0;
  }

  int dim_;
  std::vector<ZVec> rows_;  // rows_[c] has its pivot at column c (or empty)
  std::vector<ZVec> gens_;
};

}  // namespace kgraph
