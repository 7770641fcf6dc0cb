#pragma once

// L-infinity algebras stored as sparse bracket tables on canonical basis
// tuples, with the generalized Jacobi checker and the three constructions
// used for mapping spaces: extension of scalars, twisting by a Maurer-Cartan
// element and truncation.
//
// Conventions: homological grading; l_r has degree r-2; brackets are graded
// antisymmetric, [.., x, y, ..] = -(-1)^{|x||y|} [.., y, x, ..].

#include "linfty/cdga.hpp"
#include "linfty/core.hpp"
#include "linfty/linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linfty {

class LInftyAlgebra {
 public:
  using Table = std::map<TupleKey, SparseVec>;

  LInftyAlgebra() = default;
  explicit LInftyAlgebra(SpaceRef space) : space_(std::move(space)) {}

  const SpaceRef& space() const { return space_; }
  const GradedSpace& graded() const { return *space_; }
  int dim() const { return space_->dim(); }

  int max_arity() const {
    for (auto it = tables_.rbegin(); it != tables_.rend(); ++it) {
      if (!it->second.empty()) return it->first;
    }
    return 0;
  }

  const Table& table(int arity) const {
    static const Table empty;
    auto it = tables_.find(arity);
    return it == tables_.end() ? empty : it->second;
  }

  const std::map<int, Table>& tables() const { return tables_; }

  /// Sets [tuple] = value, storing it under the canonical key with the
  /// reordering sign.
  void set_bracket(const std::vector<int>& tuple, const SparseVec& value) {
    if (tuple.empty()) throw ValidationError("brackets have arity >= 1");
    auto canon = canonicalize_tuple(tuple, *space_);
    if (!canon) {
      if (!value.empty()) throw ValidationError("bracket repeating an even element must vanish");
      return;
    }
    auto& t = tables_[static_cast<int>(tuple.size())];
    SparseVec v = scaled(value, canon->sign);
    if (v.empty()) {
      t.erase(canon->key);
    } else {
      t[canon->key] = std::move(v);
    }
  }

  /// Adds value to the entry of a canonical key (no reordering).
  void accumulate(const TupleKey& key, const Scalar& c, const SparseVec& value) {
    auto& t = tables_[static_cast<int>(key.size())];
    auto& entry = t[key];
    axpy(entry, c, value);
    if (entry.empty()) t.erase(key);
  }

  void set_canonical(const TupleKey& key, SparseVec value) {
    auto& t = tables_[static_cast<int>(key.size())];
    if (value.empty()) {
      t.erase(key);
    } else {
      t[key] = std::move(value);
    }
  }

  /// Bracket of basis elements in the given order.
  SparseVec bracket_basis(const std::vector<int>& tuple) const {
    auto it = tables_.find(static_cast<int>(tuple.size()));
    if (it == tables_.end() || it->second.empty()) return {};
    auto canon = canonicalize_tuple(tuple, *space_);
    if (!canon) return {};
    auto e = it->second.find(canon->key);
    if (e == it->second.end()) return {};
    return scaled(e->second, canon->sign);
  }

  SparseVec differential(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [i, c] : v) axpy(out, c, bracket_basis({i}));
    return out;
  }

  bool operator==(const LInftyAlgebra& o) const {
    if (!same_space(space_, o.space_)) return false;
    int top = std::max(max_arity(), o.max_arity());
    for (int r = 1; r <= top; ++r) {
      if (table(r) != o.table(r)) return false;
    }
    return true;
  }

 private:
  SpaceRef space_;
  std::map<int, Table> tables_;
};

// ---------------------------------------------------------------------------
// Evaluation

/// Multilinear extension of the bracket tables.
inline Element bracket_eval(const LInftyAlgebra& L, const std::vector<Element>& args) {
  if (args.empty()) throw ValidationError("bracket_eval: arity must be >= 1");
  for (const auto& a : args) {
    if (a.space() && !same_space(a.space(), L.space())) throw ValidationError("bracket_eval: foreign element");
  }
  Element out(L.space());
  const int r = static_cast<int>(args.size());
  if (L.table(r).empty()) return out;
  std::vector<std::vector<std::pair<int, Scalar>>> terms;
  for (const auto& a : args) {
    terms.emplace_back(a.terms().begin(), a.terms().end());
    if (terms.back().empty()) return out;
  }
  SparseVec acc;
  std::vector<std::size_t> pos(static_cast<std::size_t>(r), 0);
  std::vector<int> tuple(static_cast<std::size_t>(r));
  while (true) {
    Scalar coeff = 1;
    for (int k = 0; k < r; ++k) {
      tuple[k] = terms[k][pos[k]].first;
      coeff *= terms[k][pos[k]].second;
    }
    axpy(acc, coeff, L.bracket_basis(tuple));
    int k = r - 1;
    while (k >= 0 && ++pos[k] == terms[k].size()) {
      pos[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return Element(L.space(), std::move(acc));
}

namespace detail {

/// Calls f(sub, rest, count) for each way of splitting a sorted key into a
/// sub-multiset `sub` drawn from indices allowed by `in_support` and the
/// remaining multiset `rest`.  Each distinct pair is visited once.
template <class Pred, class F>
void for_each_split(const TupleKey& key, Pred&& in_support, F&& f) {
  std::vector<std::pair<int, int>> groups;  // (index, multiplicity)
  for (int i : key) {
    if (!groups.empty() && groups.back().first == i) {
      ++groups.back().second;
    } else {
      groups.emplace_back(i, 1);
    }
  }
  std::vector<int> take(groups.size(), 0);
  while (true) {
    TupleKey sub, rest;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (int k = 0; k < take[g]; ++k) sub.push_back(groups[g].first);
      for (int k = take[g]; k < groups[g].second; ++k) rest.push_back(groups[g].first);
    }
    f(sub, rest);
    std::size_t g = 0;
    while (g < groups.size()) {
      int limit = in_support(groups[g].first) ? groups[g].second : 0;
      if (take[g] < limit) {
        ++take[g];
        break;
      }
      take[g] = 0;
      ++g;
    }
    if (g == groups.size()) return;
  }
}

inline Scalar monomial_weight(const TupleKey& sub, const SparseVec& tau) {
  Scalar w = inverse_multiplicity_factorials(sub);
  for (int i : sub) w *= tau.at(i);
  return w;
}

}  // namespace detail

/// Sum of (1/k!) [tau^k] over k >= 1.  Finite since the tables are finite.
inline Element curvature(const LInftyAlgebra& L, const Element& tau) {
  if (!same_space(tau.space(), L.space())) throw ValidationError("curvature: foreign element");
  for (const auto& [i, c] : tau.terms()) {
    if (L.graded().degree(i) != -1) throw ValidationError("curvature: element must have degree -1");
  }
  SparseVec out;
  const SparseVec& t = tau.terms();
  for (const auto& [r, table] : L.tables()) {
    for (const auto& [key, value] : table) {
      bool inside = true;
      for (int i : key) {
        if (!t.count(i)) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      // Ordered tuples over a multiset collapse to k!/prod(m!) copies of the
      // sorted one; degree -1 entries commute with sign +1.
      axpy(out, detail::monomial_weight(key, t), value);
    }
  }
  return Element(L.space(), std::move(out));
}

/// A Maurer-Cartan element; construction verifies the curvature vanishes.
class McElement {
 public:
  static McElement make(const LInftyAlgebra& L, Element tau) {
    Element f = curvature(L, tau);
    if (!f.is_zero()) throw ValidationError("not a Maurer-Cartan element; curvature = " + f.to_string());
    return McElement(std::move(tau));
  }
  const Element& value() const { return value_; }

 private:
  explicit McElement(Element v) : value_(std::move(v)) {}
  Element value_;
};

/// The twisted algebra L^tau: [a_1..a_r]_tau = sum_k (1/k!) [tau^k, a_1..a_r].
inline LInftyAlgebra twist(const LInftyAlgebra& L, const McElement& mc) {
  const Element& tau = mc.value();
  if (!same_space(tau.space(), L.space())) throw ValidationError("twist: foreign Maurer-Cartan element");
  if (!curvature(L, tau).is_zero()) throw ValidationError("twist: curvature is nonzero");
  const SparseVec& t = tau.terms();
  LInftyAlgebra out(L.space());
  for (const auto& [r, table] : L.tables()) {
    for (const auto& [key, value] : table) {
      detail::for_each_split(
          key, [&](int i) { return t.count(i) != 0; },
          [&](const TupleKey& sub, const TupleKey& rest) {
            if (rest.empty()) return;
            TupleKey order = sub;
            order.insert(order.end(), rest.begin(), rest.end());
            auto canon = canonicalize_tuple(order, L.graded());
            if (!canon) return;
            // [tau^k, rest] = sum over orderings of the tau factors.
            Scalar w = detail::monomial_weight(sub, t) * canon->sign;
            out.accumulate(rest, w, value);
          });
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axioms

struct LinftyCheckOptions {
  int max_arity_bound = 0;  // 0: twice the largest stored arity
};

/// Verifies degrees of stored entries and the generalized Jacobi identities
///   sum_p sum_sigma (-1)^eps [[x_s1..x_sp], x_s(p+1)..x_sn] = 0,
///   eps = p + sum over inverted pairs of (|x_i||x_j| + 1),
/// on every canonical basis tuple of length n up to the bound.
inline std::vector<Violation> check_linfty(const LInftyAlgebra& L, LinftyCheckOptions opt = {}) {
  std::vector<Violation> out;
  const GradedSpace& V = L.graded();
  auto names_of = [&](const TupleKey& k) {
    std::vector<std::string> s;
    for (int i : k) s.push_back(V.name(i));
    return s;
  };
  for (const auto& [r, table] : L.tables()) {
    for (const auto& [key, value] : table) {
      int expected = r - 2;
      for (int i : key) expected += V.degree(i);
      for (const auto& [j, c] : value) {
        if (V.degree(j) != expected) {
          out.push_back({"degree r-2", names_of(key), "term " + V.name(j) + " has degree " + std::to_string(V.degree(j))});
          break;
        }
      }
      auto canon = canonicalize_tuple(key, V);
      if (!canon || canon->key != key) out.push_back({"anti-symmetry", names_of(key), "non-canonical key"});
    }
  }
  const int top = L.max_arity();
  if (top == 0) return out;
  const int bound = opt.max_arity_bound > 0 ? opt.max_arity_bound : 2 * top;
  const int dim = L.dim();

  for (int n = 1; n <= bound; ++n) {
    for_each_multiset(dim, n, [&](const TupleKey& x) {
      if (!canonicalize_tuple(x, V)) return;
      SparseVec total;
      for (int p = 1; p <= n; ++p) {
        const int q = n - p + 1;
        if (L.table(p).empty() || L.table(q).empty()) continue;
        // (p, n-p)-unshuffles as bitmasks of the first block.
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) != p) continue;
          std::vector<int> inner, outer;
          long exponent = p;
          for (int a = 0; a < n; ++a) {
            if (mask & (1u << a)) {
              inner.push_back(x[a]);
            } else {
              outer.push_back(x[a]);
              for (int b = a + 1; b < n; ++b) {
                if (mask & (1u << b)) exponent += static_cast<long>(V.degree(x[a])) * V.degree(x[b]) + 1;
              }
            }
          }
          SparseVec in = L.bracket_basis(inner);
          if (in.empty()) continue;
          std::vector<int> tuple(static_cast<std::size_t>(q));
          for (int k = 1; k < q; ++k) tuple[k] = outer[k - 1];
          for (const auto& [y, c] : in) {
            tuple[0] = y;
            axpy(total, c * parity_sign(exponent), L.bracket_basis(tuple));
          }
        }
      }
      if (!total.empty()) {
        out.push_back({"jacobi", names_of(x), "n=" + std::to_string(n) + " sum = " + Element(L.space(), total).to_string()});
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extension of scalars

/// Index of a (x, alpha) in tensor(A, L); the basis is ordered L-major.
inline int tensor_index(const Cdga& A, int a, int alpha) { return alpha * A.dim() + a; }

inline std::string tensor_name(const std::string& a, const std::string& alpha) { return a + "*" + alpha; }

/// A (x) L with
///   delta(x (x) a) = d_A x (x) a + (-1)^{|x|} x (x) delta a,
///   [x_1 (x) a_1, ..., x_r (x) a_r] = (-1)^{sum_{i<j} |a_i||x_j|} x_1...x_r (x) [a_1..a_r].
/// Homological degree of x (x) a is |a| - cohdeg(x).
inline LInftyAlgebra tensor(const Cdga& A, const LInftyAlgebra& L) {
  const int da = A.dim();
  const int dl = L.dim();
  std::vector<BasisEntry> basis;
  for (int x = 0; x < dl; ++x) {
    for (int a = 0; a < da; ++a) {
      basis.push_back({tensor_name(A.name(a), L.graded().name(x)), L.graded().degree(x) - A.coh_degree(a)});
    }
  }
  LInftyAlgebra T(make_space(std::move(basis)));
  const GradedSpace& Lg = L.graded();

  // l_1
  for (int x = 0; x < dl; ++x) {
    SparseVec dx = L.bracket_basis({x});
    for (int a = 0; a < da; ++a) {
      SparseVec v;
      for (const auto& [b, c] : A.diff(a)) add_term(v, tensor_index(A, b, x), c);
      int s = parity_sign(A.coh_degree(a));
      for (const auto& [y, c] : dx) add_term(v, tensor_index(A, a, y), s * c);
      T.set_canonical({tensor_index(A, a, x)}, std::move(v));
    }
  }

  // l_r, r >= 2: enumerate ordered A-tuples; keep the ones whose tensor
  // tuple is already sorted so each canonical key is produced once.
  for (const auto& [r, table] : L.tables()) {
    if (r < 2) continue;
    for (const auto& [key, value] : table) {
      std::vector<int> as(static_cast<std::size_t>(r), 0);
      while (true) {
        bool sorted = true;
        for (int k = 1; k < r; ++k) {
          if (key[k] == key[k - 1] && as[k] < as[k - 1]) sorted = false;
        }
        if (sorted) {
          TupleKey tkey(static_cast<std::size_t>(r));
          for (int k = 0; k < r; ++k) tkey[k] = tensor_index(A, as[k], key[k]);
          if (canonicalize_tuple(tkey, T.graded())) {
            long exponent = 0;
            for (int i = 0; i < r; ++i) {
              for (int j = i + 1; j < r; ++j) exponent += static_cast<long>(Lg.degree(key[i])) * A.coh_degree(as[j]);
            }
            SparseVec prod{{as[0], 1}};
            for (int k = 1; k < r && !prod.empty(); ++k) prod = A.multiply(prod, SparseVec{{as[k], 1}});
            if (!prod.empty()) {
              SparseVec v;
              for (const auto& [b, cb] : prod) {
                for (const auto& [y, cy] : value) add_term(v, tensor_index(A, b, y), parity_sign(exponent) * cb * cy);
              }
              T.set_canonical(tkey, std::move(v));
            }
          }
        }
        int k = r - 1;
        while (k >= 0 && ++as[k] == da) {
          as[k] = 0;
          --k;
        }
        if (k < 0) break;
      }
    }
  }
  return T;
}

/// Element x (x) alpha of tensor(A, L) from coordinates in A and in L.
inline Element tensor_element(const Cdga& A, const LInftyAlgebra& T, const SparseVec& a, int alpha) {
  SparseVec v;
  for (const auto& [i, c] : a) add_term(v, tensor_index(A, i, alpha), c);
  return Element(T.space(), std::move(v));
}

// ---------------------------------------------------------------------------
// Truncation

struct Truncation {
  LInftyAlgebra algebra;
  std::vector<SparseVec> inclusion;  // new basis element -> element of the original
};

namespace detail {

/// Coordinates of v in the span of `columns` (given as sparse vectors over
/// the original basis); nullopt when v is outside the span.
inline std::optional<Vec> coordinates_in(const std::vector<SparseVec>& columns, const SparseVec& v, int dim) {
  std::vector<int> rows(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) rows[i] = i;
  std::vector<Vec> cols;
  for (const auto& c : columns) cols.push_back(dense(c, rows));
  Matrix m = Matrix::from_columns(dim, cols);
  Vec b = dense(v, rows);
  auto x = solve(m, b);
  if (!x) return std::nullopt;
  if (m.apply(*x) != b) return std::nullopt;
  return x;
}

}  // namespace detail

/// The sub-L-infinity algebra L_{>=m}: everything in degrees > m plus ker of
/// delta in degree m.
inline Truncation truncate(const LInftyAlgebra& L, int m) {
  const GradedSpace& V = L.graded();
  std::vector<BasisEntry> basis;
  std::vector<SparseVec> inclusion;
  for (int d : V.degrees_present()) {
    if (d < m) continue;
    auto idx = V.indices_in_degree(d);
    if (d > m) {
      for (int i : idx) {
        basis.push_back({V.name(i), d});
        inclusion.push_back(SparseVec{{i, 1}});
      }
      continue;
    }
    std::vector<int> targets = V.indices_in_degree(m - 1);
    Matrix delta(static_cast<int>(targets.size()), static_cast<int>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) {
      Vec col = dense(L.bracket_basis({idx[c]}), targets);
      for (std::size_t r = 0; r < targets.size(); ++r) delta(static_cast<int>(r), static_cast<int>(c)) = col[r];
    }
    int k = 0;
    for (const auto& v : kernel_basis(delta)) {
      SparseVec sv = sparse(v, idx);
      std::string name;
      if (sv.size() == 1 && sv.begin()->second == 1) {
        name = V.name(sv.begin()->first);
      } else {
        name = "z" + std::to_string(m) + "_" + std::to_string(k);
      }
      ++k;
      basis.push_back({name, m});
      inclusion.push_back(std::move(sv));
    }
  }
  Truncation out{LInftyAlgebra(make_space(basis)), inclusion};
  const int n = static_cast<int>(inclusion.size());
  std::vector<Element> incl;
  for (const auto& v : inclusion) incl.push_back(Element(L.space(), v));
  for (int r = 1; r <= L.max_arity(); ++r) {
    if (L.table(r).empty()) continue;
    for_each_multiset(n, r, [&](const TupleKey& key) {
      if (!canonicalize_tuple(key, out.algebra.graded())) return;
      std::vector<Element> args;
      for (int i : key) args.push_back(incl[i]);
      Element v = bracket_eval(L, args);
      if (v.is_zero()) return;
      auto coords = detail::coordinates_in(inclusion, v.terms(), L.dim());
      if (!coords) throw ValidationError("bracket does not close on the truncation");
      SparseVec sv;
      for (int i = 0; i < n; ++i) {
        if ((*coords)[i] != 0) sv.emplace(i, (*coords)[i]);
      }
      out.algebra.set_canonical(key, std::move(sv));
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nilpotence

/// Descending series F_1 = L, F_{r+1} = span of brackets with an argument in
/// F_r; each stage is stored as an echelon basis of its span.
struct Filtration {
  std::vector<std::vector<SparseVec>> stages;
};

inline std::vector<SparseVec> echelon_span(const std::vector<SparseVec>& vectors, int dim) {
  std::vector<Vec> rows;
  std::vector<int> all(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) all[i] = i;
  Matrix m(static_cast<int>(vectors.size()), dim);
  for (std::size_t r = 0; r < vectors.size(); ++r) {
    Vec d = dense(vectors[r], all);
    for (int c = 0; c < dim; ++c) m(static_cast<int>(r), c) = d[c];
  }
  Echelon e = rref(std::move(m));
  std::vector<SparseVec> out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    SparseVec v;
    for (int c = 0; c < dim; ++c) {
      if (e.reduced(static_cast<int>(r), c) != 0) v.emplace(c, e.reduced(static_cast<int>(r), c));
    }
    out.push_back(std::move(v));
  }
  return out;
}

/// The lower central series; nullopt when it does not reach zero within
/// dim + 1 steps.
inline std::optional<Filtration> lcs_filtration(const LInftyAlgebra& L) {
  const int dim = L.dim();
  Filtration f;
  std::vector<SparseVec> current;
  for (int i = 0; i < dim; ++i) current.push_back(SparseVec{{i, 1}});
  for (int step = 0; step <= dim + 1; ++step) {
    f.stages.push_back(current);
    if (current.empty()) return f;
    std::vector<SparseVec> next;
    for (const auto& [r, table] : L.tables()) {
      if (table.empty()) continue;
      for (const auto& v : current) {
        Element ev(L.space(), v);
        for_each_multiset(dim, r - 1, [&](const TupleKey& rest) {
          std::vector<Element> args{ev};
          for (int i : rest) args.push_back(Element::basis(L.space(), i));
          Element b = bracket_eval(L, args);
          if (!b.is_zero()) next.push_back(b.terms());
        });
      }
    }
    current = echelon_span(next, dim);
  }
  return std::nullopt;
}

}  // namespace linfty
