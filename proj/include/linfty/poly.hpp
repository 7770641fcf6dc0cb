#pragma once

// Polynomials in the free graded-commutative algebra on finitely many
// generators of given cohomological degree.  Odd generators square to zero;
// monomials are stored with generators in declaration order.

#include "linfty/core.hpp"

#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace linfty {

struct PolyRing {
  std::vector<std::string> names;
  std::vector<int> degrees;  // cohomological

  int size() const { return static_cast<int>(names.size()); }
  bool odd(int g) const { return is_odd(degrees[g]); }

  std::optional<int> find(const std::string& name) const {
    for (int g = 0; g < size(); ++g) {
      if (names[g] == name) return g;
    }
    return std::nullopt;
  }
};

using RingRef = std::shared_ptr<const PolyRing>;

inline RingRef make_ring(std::vector<std::string> names, std::vector<int> degrees) {
  if (names.size() != degrees.size()) throw ValidationError("generator names and degrees differ in length");
  return std::make_shared<const PolyRing>(PolyRing{std::move(names), std::move(degrees)});
}

using Monomial = std::vector<int>;  // exponents, odd generators at most 1

inline int monomial_degree(const PolyRing& ring, const Monomial& m) {
  int d = 0;
  for (int g = 0; g < ring.size(); ++g) d += m[g] * ring.degrees[g];
  return d;
}

inline int word_length(const Monomial& m) {
  int w = 0;
  for (int e : m) w += e;
  return w;
}

/// Product of two monomials as (sign, monomial); sign 0 when an odd
/// generator would repeat.
inline std::pair<int, Monomial> multiply_monomials(const PolyRing& ring, const Monomial& a, const Monomial& b) {
  Monomial out(a.size());
  long exponent = 0;
  for (int g = 0; g < ring.size(); ++g) {
    out[g] = a[g] + b[g];
    if (ring.odd(g) && out[g] > 1) return {0, {}};
  }
  for (int i = 0; i < ring.size(); ++i) {
    if (!ring.odd(i) || a[i] == 0) continue;
    for (int j = 0; j < i; ++j) {
      if (ring.odd(j) && b[j] != 0) ++exponent;
    }
  }
  return {parity_sign(exponent), std::move(out)};
}

inline std::string monomial_to_string(const PolyRing& ring, const Monomial& m) {
  std::ostringstream os;
  bool first = true;
  for (int g = 0; g < ring.size(); ++g) {
    if (m[g] == 0) continue;
    if (!first) os << "*";
    os << ring.names[g];
    if (m[g] > 1) os << "^" << m[g];
    first = false;
  }
  return first ? "1" : os.str();
}

class Polynomial {
 public:
  using Terms = std::map<Monomial, Scalar>;

  Polynomial() = default;
  explicit Polynomial(RingRef ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingRef ring, const Scalar& c) {
    Polynomial p(ring);
    p.add(Monomial(static_cast<std::size_t>(ring->size()), 0), c);
    return p;
  }

  static Polynomial generator(RingRef ring, int g, const Scalar& c = 1) {
    Monomial m(static_cast<std::size_t>(ring->size()), 0);
    m[g] = 1;
    Polynomial p(ring);
    p.add(m, c);
    return p;
  }

  static Polynomial monomial(RingRef ring, Monomial m, const Scalar& c = 1) {
    Polynomial p(ring);
    p.add(std::move(m), c);
    return p;
  }

  const RingRef& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Monomial& m, const Scalar& c) {
    if (c == 0) return;
    for (int g = 0; g < ring_->size(); ++g) {
      if (ring_->odd(g) && m[g] > 1) return;
    }
    auto [it, inserted] = terms_.try_emplace(m, 0);
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  /// Common cohomological degree; nullopt when inhomogeneous or zero.
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      int dm = monomial_degree(*ring_, m);
      if (d && *d != dm) return std::nullopt;
      d = dm;
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    adopt(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Scalar& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Scalar& c, Polynomial a) { return a *= c; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(a.ring_ ? a.ring_ : b.ring_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        auto [s, m] = multiply_monomials(*out.ring_, ma, mb);
        if (s != 0) out.add(m, s * ca * cb);
      }
    }
    return out;
  }

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest word length first reads more naturally for differentials.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Scalar a = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      std::string mono = monomial_to_string(*ring_, m);
      if (mono == "1") {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        os << mono;
      }
      first = false;
    }
    return os.str();
  }

 private:
  void adopt(const Polynomial& o) {
    if (!ring_) ring_ = o.ring_;
  }

  RingRef ring_;
  Terms terms_;
};

/// Extends `images` (one polynomial per generator) to a derivation of
/// cohomological degree `degree` and applies it to p.
inline Polynomial apply_derivation(const Polynomial& p, const std::vector<Polynomial>& images, int degree) {
  const RingRef& ring = p.ring();
  const int n = ring->size();
  Polynomial out(ring);
  for (const auto& [m, c] : p.terms()) {
    int prefix_degree = 0;
    Monomial prefix(static_cast<std::size_t>(n), 0);
    for (int g = 0; g < n; ++g) {
      if (m[g] == 0) continue;
      Monomial suffix(static_cast<std::size_t>(n), 0);
      for (int h = g + 1; h < n; ++h) suffix[h] = m[h];
      Monomial reduced_power(static_cast<std::size_t>(n), 0);
      reduced_power[g] = m[g] - 1;
      // theta(x^e) = e x^{e-1} theta(x) for even x; odd x have e = 1.
      Polynomial piece = Polynomial::monomial(ring, prefix, c * m[g] * parity_sign(static_cast<long>(degree) * prefix_degree)) *
                         Polynomial::monomial(ring, reduced_power) * images[g] * Polynomial::monomial(ring, suffix);
      out += piece;
      prefix[g] = m[g];
      prefix_degree += m[g] * ring->degrees[g];
    }
  }
  return out;
}

/// Partial derivative with respect to an even generator.
inline Polynomial partial_derivative(const Polynomial& p, int g) {
  if (p.ring()->odd(g)) throw ValidationError("partial_derivative: odd generator");
  Polynomial out(p.ring());
  for (const auto& [m, c] : p.terms()) {
    if (m[g] == 0) continue;
    Monomial d = m;
    --d[g];
    out.add(d, c * m[g]);
  }
  return out;
}

/// Substitutes polynomials (in a possibly different ring) for generators.
inline Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images, const RingRef& target) {
  Polynomial out(target);
  for (const auto& [m, c] : p.terms()) {
    Polynomial term = Polynomial::constant(target, c);
    for (int g = 0; g < p.ring()->size(); ++g) {
      for (int e = 0; e < m[g]; ++e) term = term * images[g];
    }
    out += term;
  }
  return out;
}

/// All monomials of cohomological degree exactly `degree` (generators must
/// have positive degree).
inline std::vector<Monomial> monomials_of_degree(const PolyRing& ring, int degree) {
  std::vector<Monomial> out;
  Monomial cur(static_cast<std::size_t>(ring.size()), 0);
  std::function<void(int, int)> rec = [&](int g, int remaining) {
    if (g == ring.size()) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    int maxe = ring.odd(g) ? 1 : remaining / ring.degrees[g];
    for (int e = 0; e <= maxe && e * ring.degrees[g] <= remaining; ++e) {
      cur[g] = e;
      rec(g + 1, remaining - e * ring.degrees[g]);
    }
    cur[g] = 0;
  };
  if (degree >= 0) rec(0, degree);
  return out;
}

}  // namespace linfty
