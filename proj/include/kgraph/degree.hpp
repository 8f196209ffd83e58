#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgraph {

/// Multi-index in N^k: the value of the degree map on paths.
/// Also used for box corners, where entries may be negative.
class Degree {
 public:
  Degree() = default;
  explicit Degree(std::vector<int> coords) : c_(std::move(coords)) {}

  static Degree zero(int rank) { return Degree(std::vector<int>(rank, 0)); }
  static Degree uniform(int rank, int value) {
    return Degree(std::vector<int>(rank, value));
  }
  /// Standard basis vector e_color (color is 1-based).
  static Degree basis(int rank, int color) {
    Degree d = zero(rank);
    d.c_[color - 1] = 1;
    return d;
  }

  int rank() const { return static_cast<int>(c_.size()); }
  int operator[](int i) const { return c_[i]; }
  int& operator[](int i) { return c_[i]; }
  const std::vector<int>& coords() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](int x) { return x == 0; });
  }
  /// L1 size; meaningful for nonnegative degrees.
  int total() const { return std::accumulate(c_.begin(), c_.end(), 0); }

  friend Degree operator+(const Degree& a, const Degree& b) {
    Degree r = a;
    for (int i = 0; i < r.rank(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend Degree operator-(const Degree& a, const Degree& b) {
    Degree r = a;
    for (int i = 0; i < r.rank(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend bool operator==(const Degree& a, const Degree& b) {
    return a.c_ == b.c_;
  }
  friend bool operator!=(const Degree& a, const Degree& b) {
    return a.c_ != b.c_;
  }

  /// Componentwise partial order m <= n.
  friend bool operator<=(const Degree& a, const Degree& b) {
    for (int i = 0; i < a.rank(); ++i)
      if (a.c_[i] > b.c_[i]) return false;
    return true;
  }
  /// Strict order of the coordinate lattice: all coordinates strictly larger.
  bool all_less(const Degree& b) const {
    for (int i = 0; i < rank(); ++i)
      if (c_[i] >= b.c_[i]) return false;
    return true;
  }
  bool all_positive() const {
    return std::all_of(c_.begin(), c_.end(), [](int x) { return x > 0; });
  }
  bool all_nonnegative() const {
    return std::all_of(c_.begin(), c_.end(), [](int x) { return x >= 0; });
  }

  /// Componentwise maximum (the join m v n).
  friend Degree join(const Degree& a, const Degree& b) {
    Degree r = a;
    for (int i = 0; i < r.rank(); ++i) r.c_[i] = std::max(r.c_[i], b.c_[i]);
    return r;
  }
  friend Degree meet(const Degree& a, const Degree& b) {
    Degree r = a;
    for (int i = 0; i < r.rank(); ++i) r.c_[i] = std::min(r.c_[i], b.c_[i]);
    return r;
  }

  /// Total (lexicographic) order, for use as a map key and for
  /// deterministic iteration; unrelated to the componentwise order.
  bool lex_less(const Degree& b) const { return c_ < b.c_; }

  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < rank(); ++i) {
      if (i) os << ',';
      os << c_[i];
    }
    os << ')';
    return os.str();
  }

 private:
  std::vector<int> c_;
};

struct DegreeLexLess {
  bool operator()(const Degree& a, const Degree& b) const {
    return a.lex_less(b);
  }
};

/// All lattice points lo <= d <= hi (componentwise), in lexicographic order.
inline std::vector<Degree> degree_box(const Degree& lo, const Degree& hi) {
  std::vector<Degree> out;
  if (!(lo <= hi)) return out;
  Degree cur = lo;
  const int k = lo.rank();
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == hi[i]) {
      cur[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

/// All degrees 0 <= d <= hi in lexicographic order.
inline std::vector<Degree> degrees_upto(const Degree& hi) {
  return degree_box(Degree::zero(hi.rank()), hi);
}

}  // namespace kgraph
