#pragma once

// Polynomial de Rham forms on the standard n-simplex in reduced coordinates
// t1..tn (t0 = 1 - sum t_i, dt0 = -sum dt_i), with the simplicial structure
// maps and the elementary (Whitney) forms.

#include "linfty/core.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace linfty {

class PolyForm {
 public:
  using Key = std::pair<std::vector<int>, unsigned>;  // exponents of t1..tn, dt mask (bit i-1 for dt_i)
  using Terms = std::map<Key, Scalar>;

  PolyForm() = default;
  explicit PolyForm(int n) : n_(n) {
    if (n < 0 || n > 30) throw ValidationError("simplex dimension out of range");
  }

  static PolyForm constant(int n, const Scalar& c) {
    PolyForm f(n);
    f.add(std::vector<int>(static_cast<std::size_t>(n), 0), 0, c);
    return f;
  }

  /// Barycentric coordinate t_i, 0 <= i <= n.
  static PolyForm coordinate(int n, int i) {
    check_vertex(n, i);
    PolyForm f(n);
    if (i == 0) {
      f = constant(n, 1);
      for (int j = 1; j <= n; ++j) f.add(unit(n, j), 0, -1);
    } else {
      f.add(unit(n, i), 0, 1);
    }
    return f;
  }

  /// dt_i, 0 <= i <= n.
  static PolyForm dt(int n, int i) {
    check_vertex(n, i);
    PolyForm f(n);
    std::vector<int> zero(static_cast<std::size_t>(n), 0);
    if (i == 0) {
      for (int j = 1; j <= n; ++j) f.add(zero, 1u << (j - 1), -1);
    } else {
      f.add(zero, 1u << (i - 1), 1);
    }
    return f;
  }

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const std::vector<int>& exps, unsigned mask, const Scalar& c) {
    if (c == 0) return;
    if (static_cast<int>(exps.size()) != n_) throw ValidationError("PolyForm: exponent length mismatch");
    if (n_ < 32 && (mask >> n_) != 0) throw ValidationError("PolyForm: dt index out of range");
    auto [it, ins] = terms_.try_emplace(Key{exps, mask}, 0);
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  /// Form degree when homogeneous; -1 for zero; throws when mixed.
  int degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) {
      int kd = __builtin_popcount(k.second);
      if (d >= 0 && d != kd) throw ValidationError("PolyForm: mixed form degree");
      d = kd;
    }
    return d;
  }

  PolyForm& operator+=(const PolyForm& o) {
    same_n(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    same_n(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, -c);
    return *this;
  }
  PolyForm& operator*=(const Scalar& c) {
    if (c == 0) terms_.clear();
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const Scalar& c, PolyForm a) { return a *= c; }
  bool operator==(const PolyForm& o) const { return n_ == o.n_ && terms_ == o.terms_; }
  bool operator!=(const PolyForm& o) const { return !(*this == o); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      Scalar a = abs(c);
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      std::vector<std::string> parts;
      for (int i = 0; i < n_; ++i) {
        if (k.first[i] == 1) parts.push_back("t" + std::to_string(i + 1));
        if (k.first[i] > 1) parts.push_back("t" + std::to_string(i + 1) + "^" + std::to_string(k.first[i]));
      }
      for (int i = 0; i < n_; ++i) {
        if (k.second & (1u << i)) parts.push_back("dt" + std::to_string(i + 1));
      }
      if (parts.empty()) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        for (std::size_t p = 0; p < parts.size(); ++p) os << (p ? "*" : "") << parts[p];
      }
      first = false;
    }
    return os.str();
  }

 private:
  static std::vector<int> unit(int n, int i) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[i - 1] = 1;
    return e;
  }
  static void check_vertex(int n, int i) {
    if (i < 0 || i > n) throw ValidationError("vertex index out of range");
  }
  void same_n(const PolyForm& o) {
    if (o.n_ != n_) throw ValidationError("PolyForm: forms on different simplices");
  }

  int n_ = 0;
  Terms terms_;
};

/// Sign of dt_A ^ dt_B in increasing order; 0 when they overlap.
inline int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int inversions = 0;
  for (unsigned x = b; x != 0; x &= x - 1) {
    int j = __builtin_ctz(x);
    inversions += __builtin_popcount(a >> (j + 1));
  }
  return parity_sign(inversions);
}

inline PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.n() != b.n()) throw ValidationError("wedge: forms on different simplices");
  PolyForm out(a.n());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      int s = wedge_sign(ka.second, kb.second);
      if (s == 0) continue;
      std::vector<int> e = ka.first;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += kb.first[i];
      out.add(e, ka.second | kb.second, s * ca * cb);
    }
  }
  return out;
}

inline PolyForm derham_d(const PolyForm& a) {
  PolyForm out(a.n());
  for (const auto& [k, c] : a.terms()) {
    for (int i = 0; i < a.n(); ++i) {
      if (k.first[i] == 0) continue;
      int s = wedge_sign(1u << i, k.second);
      if (s == 0) continue;
      std::vector<int> e = k.first;
      --e[i];
      out.add(e, k.second | (1u << i), s * c * k.first[i]);
    }
  }
  return out;
}

/// Pullback along the affine map sending t_i (1 <= i <= n) to images[i-1],
/// each a form of degree 0 and polynomial degree <= 1 on the target simplex.
inline PolyForm pullback(const PolyForm& a, int target_n, const std::vector<PolyForm>& images) {
  if (static_cast<int>(images.size()) != a.n()) throw ValidationError("pullback: wrong number of images");
  std::vector<PolyForm> dimages;
  for (const auto& im : images) dimages.push_back(derham_d(im));
  PolyForm out(target_n);
  for (const auto& [k, c] : a.terms()) {
    PolyForm term = PolyForm::constant(target_n, c);
    for (int i = 0; i < a.n(); ++i) {
      for (int e = 0; e < k.first[i]; ++e) term = wedge(term, images[i]);
    }
    for (int i = 0; i < a.n(); ++i) {
      if (k.second & (1u << i)) term = wedge(term, dimages[i]);
    }
    out += term;
  }
  return out;
}

/// The i-th face: restriction to the facet opposite vertex i.
inline PolyForm face(int i, const PolyForm& a) {
  const int n = a.n();
  if (n == 0 || i < 0 || i > n) throw ValidationError("face: index out of range");
  std::vector<PolyForm> images;
  for (int j = 1; j <= n; ++j) {
    if (j < i) {
      images.push_back(PolyForm::coordinate(n - 1, j));
    } else if (j == i) {
      images.push_back(PolyForm(n - 1));
    } else {
      images.push_back(PolyForm::coordinate(n - 1, j - 1));
    }
  }
  return pullback(a, n - 1, images);
}

/// The i-th degeneracy: pullback along the map collapsing vertices i, i+1.
inline PolyForm degeneracy(int i, const PolyForm& a) {
  const int n = a.n();
  if (i < 0 || i > n) throw ValidationError("degeneracy: index out of range");
  std::vector<PolyForm> images;
  for (int j = 1; j <= n; ++j) {
    if (j < i) {
      images.push_back(PolyForm::coordinate(n + 1, j));
    } else if (j == i) {
      images.push_back(PolyForm::coordinate(n + 1, j) + PolyForm::coordinate(n + 1, j + 1));
    } else {
      images.push_back(PolyForm::coordinate(n + 1, j + 1));
    }
  }
  return pullback(a, n + 1, images);
}

/// omega_{i0...ik} = k! sum_j (-1)^j t_{ij} dt_{i0} ... (dt_{ij} omitted) ... dt_{ik}.
inline PolyForm elementary_form(int n, const std::vector<int>& indices) {
  if (indices.empty()) throw ValidationError("elementary_form: no indices");
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0 || indices[j] > n || (j > 0 && indices[j] < indices[j - 1])) {
      throw ValidationError("elementary_form: indices must be weakly increasing in [0, n]");
    }
  }
  const int k = static_cast<int>(indices.size()) - 1;
  PolyForm out(n);
  for (int j = 0; j <= k; ++j) {
    PolyForm term = PolyForm::coordinate(n, indices[j]);
    for (int l = 0; l <= k; ++l) {
      if (l != j) term = wedge(term, PolyForm::dt(n, indices[l]));
    }
    out += (factorial(k) * parity_sign(j)) * term;
  }
  return out;
}

/// omega = omega_{0...n}, the top form n! dt1...dtn.
inline PolyForm top_form(int n) {
  std::vector<int> all;
  for (int i = 0; i <= n; ++i) all.push_back(i);
  return elementary_form(n, all);
}

/// omega with the listed vertices removed from 0..n.
inline PolyForm omitted_form(int n, const std::vector<int>& omitted) {
  std::vector<int> idx;
  for (int i = 0; i <= n; ++i) {
    if (std::find(omitted.begin(), omitted.end(), i) == omitted.end()) idx.push_back(i);
  }
  return elementary_form(n, idx);
}

}  // namespace linfty
