#pragma once

// Finite-dimensional commutative differential graded algebras.  Presented
// algebras are built degreewise: monomials of the free graded-commutative
// algebra up to a degree cap, modulo the graded pieces of the relation ideal.

#include "linfty/core.hpp"
#include "linfty/linalg.hpp"
#include "linfty/poly.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace linfty {

struct Presentation {
  std::vector<std::string> generators;
  std::vector<int> degrees;  // cohomological, >= 1
  std::vector<Polynomial> relations;
  std::map<int, Polynomial> differential;  // generator -> d(generator); absent means 0
  std::optional<int> cap;                  // automatic when absent (finite algebras only)

  RingRef ring() const { return make_ring(generators, degrees); }
};

struct Violation {
  std::string axiom;
  std::vector<std::string> where;
  std::string detail;
};

inline std::string describe(const Violation& v) {
  std::string s = v.axiom + " at (";
  for (std::size_t i = 0; i < v.where.size(); ++i) s += (i ? "," : "") + v.where[i];
  s += ")";
  if (!v.detail.empty()) s += ": " + v.detail;
  return s;
}

/// Reduction of free polynomials into a presented quotient, degree by degree.
struct QuotientData {
  RingRef ring;
  struct Piece {
    std::vector<Monomial> monomials;     // free basis in this degree
    std::map<Monomial, int> column;      // monomial -> column
    Matrix ideal_rref;                   // rows span the ideal
    std::vector<int> pivots;
    std::vector<int> standard;           // non-pivot columns -> quotient basis
    std::vector<int> basis_index;        // standard[k] -> Cdga basis index
  };
  std::map<int, Piece> pieces;  // by cohomological degree, 0..cap
};

class Cdga {
 public:
  Cdga() = default;

  /// Direct construction from tables; `cohomological_degrees[i]` for each
  /// basis element.  Products and differentials default to zero.
  Cdga(std::vector<std::string> names, std::vector<int> cohomological_degrees, int unit)
      : unit_(unit) {
    std::vector<BasisEntry> basis;
    for (std::size_t i = 0; i < names.size(); ++i) basis.push_back({names[i], -cohomological_degrees[i]});
    space_ = make_space(std::move(basis));
    diff_.assign(names.size(), SparseVec{});
    diff_overflow_.assign(names.size(), false);
    for (int i = 0; i < dim(); ++i) {
      for (int j = 0; j < dim(); ++j) mult_[{i, j}] = SparseVec{};
    }
    if (unit >= 0 && unit < dim()) {
      for (int i = 0; i < dim(); ++i) {
        mult_[{unit, i}] = SparseVec{{i, 1}};
        mult_[{i, unit}] = SparseVec{{i, 1}};
      }
    }
  }

  const SpaceRef& space() const { return space_; }
  int dim() const { return space_ ? space_->dim() : 0; }
  int unit() const { return unit_; }
  int coh_degree(int i) const { return -space_->degree(i); }
  const std::string& name(int i) const { return space_->name(i); }
  bool closed() const { return closed_; }
  std::optional<int> cap() const { return cap_; }
  int top_degree() const {
    int top = 0;
    for (int i = 0; i < dim(); ++i) top = std::max(top, coh_degree(i));
    return top;
  }

  /// Product of basis elements; throws OverflowError past the cap.
  const SparseVec& mult(int i, int j) const {
    auto it = mult_.find({i, j});
    if (it == mult_.end()) {
      throw OverflowError("product " + name(i) + "*" + name(j) + " exceeds the degree cap");
    }
    return it->second;
  }
  bool mult_defined(int i, int j) const { return mult_.count({i, j}) != 0; }

  const SparseVec& diff(int i) const {
    if (diff_overflow_[i]) throw OverflowError("d(" + name(i) + ") exceeds the degree cap");
    return diff_[i];
  }
  bool diff_defined(int i) const { return !diff_overflow_[i]; }

  SparseVec multiply(const SparseVec& a, const SparseVec& b) const {
    SparseVec out;
    for (const auto& [i, x] : a) {
      for (const auto& [j, y] : b) axpy(out, x * y, mult(i, j));
    }
    return out;
  }

  SparseVec differential(const SparseVec& a) const {
    SparseVec out;
    for (const auto& [i, x] : a) axpy(out, x, diff(i));
    return out;
  }

  void set_mult(int i, int j, SparseVec v) { mult_[{i, j}] = std::move(v); }
  void set_diff(int i, SparseVec v) {
    diff_[i] = std::move(v);
    diff_overflow_[i] = false;
  }

  /// Reduces a polynomial in the presentation's generators into the algebra.
  SparseVec reduce(const Polynomial& p) const {
    if (!quotient_) throw ValidationError("algebra has no presentation to reduce against");
    SparseVec out;
    std::map<int, Polynomial> by_degree;
    for (const auto& [m, c] : p.terms()) {
      int d = monomial_degree(*quotient_->ring, m);
      auto [it, ins] = by_degree.try_emplace(d, Polynomial(quotient_->ring));
      it->second.add(m, c);
    }
    for (const auto& [d, part] : by_degree) axpy(out, 1, reduce_homogeneous(part, d));
    return out;
  }

  const std::optional<QuotientData>& quotient() const { return quotient_; }

 private:
  SparseVec reduce_homogeneous(const Polynomial& p, int degree) const {
    auto it = quotient_->pieces.find(degree);
    if (it == quotient_->pieces.end()) {
      if (closed_ && degree > 0) return {};
      throw OverflowError("degree " + std::to_string(degree) + " exceeds the degree cap");
    }
    const auto& piece = it->second;
    Vec v(piece.monomials.size(), Scalar(0));
    for (const auto& [m, c] : p.terms()) v[piece.column.at(m)] += c;
    for (std::size_t r = 0; r < piece.pivots.size(); ++r) {
      Scalar f = v[piece.pivots[r]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < v.size(); ++c) {
        if (piece.ideal_rref(static_cast<int>(r), static_cast<int>(c)) != 0) {
          v[c] -= f * piece.ideal_rref(static_cast<int>(r), static_cast<int>(c));
        }
      }
    }
    SparseVec out;
    for (std::size_t k = 0; k < piece.standard.size(); ++k) {
      if (v[piece.standard[k]] != 0) out.emplace(piece.basis_index[k], v[piece.standard[k]]);
    }
    return out;
  }

  friend Cdga build_quotient(const Presentation& p);

  SpaceRef space_;
  int unit_ = 0;
  std::map<std::pair<int, int>, SparseVec> mult_;
  std::vector<SparseVec> diff_;
  std::vector<bool> diff_overflow_;
  bool closed_ = true;
  std::optional<int> cap_;
  std::optional<QuotientData> quotient_;
};

namespace detail {

inline QuotientData::Piece quotient_piece(const PolyRing& ring, const RingRef& ringref,
                                          const std::vector<Polynomial>& relations, int degree) {
  QuotientData::Piece piece;
  piece.monomials = monomials_of_degree(ring, degree);
  for (std::size_t c = 0; c < piece.monomials.size(); ++c) piece.column[piece.monomials[c]] = static_cast<int>(c);
  std::vector<Vec> rows;
  for (const auto& f : relations) {
    auto fd = f.homogeneous_degree();
    if (!fd || *fd > degree) continue;
    for (const auto& m : monomials_of_degree(ring, degree - *fd)) {
      Polynomial prod = Polynomial::monomial(ringref, m) * f;
      Vec row(piece.monomials.size(), Scalar(0));
      for (const auto& [mm, c] : prod.terms()) row[piece.column.at(mm)] += c;
      if (!is_zero(row)) rows.push_back(std::move(row));
    }
  }
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(piece.monomials.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < piece.monomials.size(); ++c) m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  }
  Echelon e = rref(std::move(m));
  Matrix trimmed(static_cast<int>(e.pivots.size()), static_cast<int>(piece.monomials.size()));
  for (int r = 0; r < trimmed.rows(); ++r) {
    for (int c = 0; c < trimmed.cols(); ++c) trimmed(r, c) = e.reduced(r, c);
  }
  piece.ideal_rref = std::move(trimmed);
  piece.pivots = e.pivots;
  std::set<int> pivot_set(e.pivots.begin(), e.pivots.end());
  for (int c = 0; c < static_cast<int>(piece.monomials.size()); ++c) {
    if (!pivot_set.count(c)) piece.standard.push_back(c);
  }
  return piece;
}

}  // namespace detail

/// Builds the finite cdga presented by generators, relations and
/// differential, degreewise up to the cap.  Without a cap the algebra must be
/// finite: degrees are added until a run of zero pieces as long as the
/// largest generator degree proves every higher piece vanishes.
inline Cdga build_quotient(const Presentation& p) {
  const int n = static_cast<int>(p.generators.size());
  if (p.degrees.size() != p.generators.size()) throw ValidationError("generator/degree count mismatch");
  for (int g = 0; g < n; ++g) {
    if (p.degrees[g] < 1) throw ValidationError("generator " + p.generators[g] + " must have positive degree");
  }
  RingRef ring = p.ring();
  for (const auto& f : p.relations) {
    if (!f.is_zero() && !f.homogeneous_degree()) throw ValidationError("inhomogeneous relation: " + f.to_string());
  }
  std::vector<Polynomial> d_images;
  for (int g = 0; g < n; ++g) {
    auto it = p.differential.find(g);
    Polynomial img = it == p.differential.end() ? Polynomial(ring) : it->second;
    if (!img.is_zero()) {
      auto dd = img.homogeneous_degree();
      if (!dd || *dd != p.degrees[g] + 1) {
        throw ValidationError("d(" + p.generators[g] + ") must be homogeneous of degree " +
                              std::to_string(p.degrees[g] + 1));
      }
    }
    d_images.push_back(img);
  }
  for (const auto& f : p.relations) {
    if (f.is_zero()) continue;
    if (p.cap && *f.homogeneous_degree() > *p.cap) throw ValidationError("relation above the degree cap: " + f.to_string());
  }

  int gmax = 1;
  for (int d : p.degrees) gmax = std::max(gmax, d);

  QuotientData q;
  q.ring = ring;
  int cap = 0;
  bool closed = false;
  constexpr int kAutoLimit = 256;
  for (int degree = 0;; ++degree) {
    if (p.cap && degree > *p.cap) break;
    if (!p.cap && degree > kAutoLimit) throw ValidationError("algebra is not finite below degree 256; give an explicit cap");
    q.pieces[degree] = detail::quotient_piece(*ring, ring, p.relations, degree);
    cap = degree;
    // A window of gmax consecutive zero pieces forces all higher pieces to
    // vanish: every longer monomial is divisible by one inside the window.
    if (degree >= gmax) {
      bool window_zero = true;
      for (int k = degree - gmax + 1; k <= degree; ++k) {
        if (!q.pieces[k].standard.empty()) window_zero = false;
      }
      if (window_zero) {
        closed = true;
        if (!p.cap) break;
      }
    }
  }
  if (p.cap) {
    closed = false;
    if (cap >= gmax) {
      closed = true;
      for (int k = cap - gmax + 1; k <= cap; ++k) {
        if (!q.pieces[k].standard.empty()) closed = false;
      }
    }
  }

  // Basis: standard monomials degree by degree.
  std::vector<std::string> names;
  std::vector<int> degs;
  std::vector<Monomial> monos;
  for (auto& [degree, piece] : q.pieces) {
    for (int col : piece.standard) {
      piece.basis_index.push_back(static_cast<int>(names.size()));
      names.push_back(monomial_to_string(*ring, piece.monomials[col]));
      degs.push_back(degree);
      monos.push_back(piece.monomials[col]);
    }
  }
  if (names.empty() || names[0] != "1") throw ValidationError("presentation kills the unit");

  Cdga a(names, degs, 0);
  a.closed_ = closed;
  a.cap_ = cap;
  a.quotient_ = std::move(q);
  a.mult_.clear();

  // The relation ideal must be stable under d.
  for (const auto& [degree, piece] : a.quotient_->pieces) {
    if (degree + 1 > cap) continue;
    for (const auto& f : p.relations) {
      auto fd = f.homogeneous_degree();
      if (!fd || *fd > degree) continue;
      for (const auto& m : monomials_of_degree(*ring, degree - *fd)) {
        Polynomial gen = Polynomial::monomial(ring, m) * f;
        if (gen.is_zero()) continue;
        SparseVec image = a.reduce(apply_derivation(gen, d_images, 1));
        if (!image.empty()) {
          throw ValidationError("differential does not preserve the relation ideal at " + gen.to_string());
        }
      }
    }
  }

  const int dim = a.dim();
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      int d = degs[i] + degs[j];
      if (d > cap && !closed) continue;  // overflow: left undefined
      auto [s, m] = multiply_monomials(*ring, monos[i], monos[j]);
      SparseVec v;
      if (s != 0 && d <= cap) v = scaled(a.reduce(Polynomial::monomial(ring, m)), s);
      a.mult_[{i, j}] = std::move(v);
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (degs[i] + 1 > cap) {
      a.diff_[i].clear();
      a.diff_overflow_[i] = !closed;
      continue;
    }
    a.diff_[i] = a.reduce(apply_derivation(Polynomial::monomial(ring, monos[i]), d_images, 1));
  }
  return a;
}

/// Lists every failed cdga axiom; empty iff the tables define a cdga.
/// Checks whose inputs exceed the degree cap are skipped.
inline std::vector<Violation> check_cdga(const Cdga& a) {
  std::vector<Violation> out;
  const int n = a.dim();
  auto nm = [&](int i) { return a.name(i); };
  auto defined = [&](int i, int j) { return a.mult_defined(i, j); };

  for (int i = 0; i < n; ++i) {
    if (!a.diff_defined(i)) continue;
    for (const auto& [k, c] : a.diff(i)) {
      if (a.coh_degree(k) != a.coh_degree(i) + 1) {
        out.push_back({"diff degree", {nm(i)}, "d(" + nm(i) + ") has a term " + nm(k)});
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!defined(i, j)) continue;
      for (const auto& [k, c] : a.mult(i, j)) {
        if (a.coh_degree(k) != a.coh_degree(i) + a.coh_degree(j)) {
          out.push_back({"mult degree", {nm(i), nm(j)}, ""});
          break;
        }
      }
    }
  }
  const int u = a.unit();
  if (u < 0 || u >= n || a.coh_degree(u) != 0) {
    out.push_back({"unit", {}, "unit must be a degree-0 basis element"});
  } else {
    for (int i = 0; i < n; ++i) {
      SparseVec ei{{i, 1}};
      if (!defined(u, i) || a.mult(u, i) != ei || !defined(i, u) || a.mult(i, u) != ei) {
        out.push_back({"unit", {nm(i)}, ""});
      }
    }
    if (a.diff_defined(u) && !a.diff(u).empty()) out.push_back({"unit", {nm(u)}, "d(1) != 0"});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!defined(i, j) || !defined(j, i)) continue;
      int s = parity_sign(static_cast<long>(a.coh_degree(i)) * a.coh_degree(j));
      if (a.mult(i, j) != scaled(a.mult(j, i), s)) out.push_back({"commutativity", {nm(i), nm(j)}, ""});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!defined(i, j)) continue;
      for (int k = 0; k < n; ++k) {
        if (!defined(j, k)) continue;
        try {
          SparseVec left = a.multiply(a.mult(i, j), SparseVec{{k, 1}});
          SparseVec right = a.multiply(SparseVec{{i, 1}}, a.mult(j, k));
          if (left != right) out.push_back({"associativity", {nm(i), nm(j), nm(k)}, ""});
        } catch (const OverflowError&) {
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    try {
      if (!a.differential(a.diff(i)).empty()) out.push_back({"d^2", {nm(i)}, ""});
    } catch (const OverflowError&) {
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!defined(i, j)) continue;
      try {
        SparseVec lhs = a.differential(a.mult(i, j));
        SparseVec rhs = a.multiply(a.diff(i), SparseVec{{j, 1}});
        axpy(rhs, parity_sign(a.coh_degree(i)), a.multiply(SparseVec{{i, 1}}, a.diff(j)));
        if (lhs != rhs) out.push_back({"leibniz", {nm(i), nm(j)}, ""});
      } catch (const OverflowError&) {
      }
    }
  }
  return out;
}

/// The ground field as a cdga.
inline Cdga ground_field() { return Cdga({"1"}, {0}, 0); }

}  // namespace linfty
