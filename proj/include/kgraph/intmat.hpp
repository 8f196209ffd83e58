#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "kgraph/errors.hpp"

namespace kgraph {

/// Dense square matrix of arbitrary-precision integers. Entries grow
/// exponentially under powering, so no fixed-width type is safe here.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  static IntMatrix identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int size() const { return n_; }
  mpz_class& at(int r, int c) { return a_[static_cast<std::size_t>(r) * n_ + c]; }
  const mpz_class& at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * n_ + c];
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix r(x.n_);
    mpz_class acc;
    for (int i = 0; i < x.n_; ++i) {
      for (int k = 0; k < x.n_; ++k) {
        const mpz_class& xik = x.at(i, k);
        if (xik == 0) continue;
        for (int j = 0; j < x.n_; ++j) {
          if (y.at(k, j) == 0) continue;
          r.at(i, j) += xik * y.at(k, j);
        }
      }
    }
    return r;
  }

  friend IntMatrix operator+(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }

  friend IntMatrix operator*(const mpz_class& s, const IntMatrix& y) {
    IntMatrix r(y.n_);
    for (std::size_t i = 0; i < y.a_.size(); ++i) r.a_[i] = s * y.a_[i];
    return r;
  }

  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.n_ == y.n_ && x.a_ == y.a_;
  }
  friend bool operator!=(const IntMatrix& x, const IntMatrix& y) {
    return !(x == y);
  }

  IntMatrix pow(unsigned e) const {
    IntMatrix base = *this, r = identity(n_);
    while (e) {
      if (e & 1u) r = r * base;
      e >>= 1u;
      if (e) base = base * base;
    }
    return r;
  }

  bool all_positive() const {
    for (const auto& x : a_)
      if (x <= 0) return false;
    return true;
  }
  bool has_zero_row() const {
    for (int i = 0; i < n_; ++i) {
      bool all0 = true;
      for (int j = 0; j < n_; ++j)
        if (at(i, j) != 0) {
          all0 = false;
          break;
        }
      if (all0) return true;
    }
    return false;
  }
  bool has_zero_col() const {
    for (int j = 0; j < n_; ++j) {
      bool all0 = true;
      for (int i = 0; i < n_; ++i)
        if (at(i, j) != 0) {
          all0 = false;
          break;
        }
      if (all0) return true;
    }
    return false;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < n_; ++j) {
        if (j) s += ',';
        s += at(i, j).get_str();
      }
      s += ']';
    }
    s += ']';
    return s;
  }

 private:
  int n_ = 0;
  std::vector<mpz_class> a_;
};

}  // namespace kgraph
