#pragma once

// Homology of the underlying chain complex, the bracket it inherits, the
// Campbell-Hausdorff group law on degree zero, and derivations of presented
// evenly graded algebras.

#include "linfty/cdga.hpp"
#include "linfty/core.hpp"
#include "linfty/linalg.hpp"
#include "linfty/linf_algebra.hpp"
#include "linfty/poly.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace linfty {

struct ChainComplex {
  SpaceRef space;
  std::map<int, SparseVec> d;  // basis index -> image, degree -1

  SparseVec apply(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [i, c] : v) {
      auto it = d.find(i);
      if (it != d.end()) axpy(out, c, it->second);
    }
    return out;
  }
};

inline ChainComplex underlying_complex(const LInftyAlgebra& L) {
  ChainComplex c{L.space(), {}};
  for (const auto& [key, value] : L.table(1)) c.d[key[0]] = value;
  return c;
}

namespace detail {

inline Matrix differential_block(const ChainComplex& c, const std::vector<int>& from, const std::vector<int>& to) {
  Matrix m(static_cast<int>(to.size()), static_cast<int>(from.size()));
  for (std::size_t j = 0; j < from.size(); ++j) {
    auto it = c.d.find(from[j]);
    if (it == c.d.end()) continue;
    Vec col = dense(it->second, to);
    for (std::size_t i = 0; i < to.size(); ++i) m(static_cast<int>(i), static_cast<int>(j)) = col[i];
  }
  return m;
}

}  // namespace detail

struct HomologyDegree {
  int degree = 0;
  int cycles = 0;      // dim ker
  int boundaries = 0;  // dim im of the incoming differential
  std::vector<int> indices;               // chain basis in this degree
  std::vector<SparseVec> representatives; // one cycle per class
  Matrix solver;                          // [boundary basis | representatives]
  int boundary_columns = 0;

  int dim() const { return static_cast<int>(representatives.size()); }
};

class HomologyReport {
 public:
  HomologyReport() = default;
  HomologyReport(SpaceRef chains, std::map<int, HomologyDegree> degrees)
      : chains_(std::move(chains)), degrees_(std::move(degrees)) {
    std::vector<BasisEntry> basis;
    for (auto& [n, hd] : degrees_) {
      for (int k = 0; k < hd.dim(); ++k) {
        const SparseVec& r = hd.representatives[k];
        std::string name;
        if (r.size() == 1 && r.begin()->second == 1) {
          name = "[" + chains_->name(r.begin()->first) + "]";
        } else {
          name = "h" + std::to_string(n) + "_" + std::to_string(k);
        }
        offset_[{n, k}] = static_cast<int>(basis.size());
        basis.push_back({name, n});
      }
    }
    space_ = make_space(std::move(basis));
  }

  /// Graded space with one basis element per homology class.
  const SpaceRef& space() const { return space_; }
  const SpaceRef& chains() const { return chains_; }
  const std::map<int, HomologyDegree>& degrees() const { return degrees_; }

  int dim(int n) const {
    auto it = degrees_.find(n);
    return it == degrees_.end() ? 0 : it->second.dim();
  }

  std::map<int, int> dims() const {
    std::map<int, int> out;
    for (const auto& [n, hd] : degrees_) {
      if (hd.dim() > 0) out[n] = hd.dim();
    }
    return out;
  }

  /// Representative cycle of class k in degree n.
  Element representative(int n, int k) const {
    return Element(chains_, degrees_.at(n).representatives.at(static_cast<std::size_t>(k)));
  }

  /// Representative of the class with global index i in space().
  Element representative(int i) const {
    for (const auto& [key, off] : offset_) {
      if (off == i) return representative(key.first, key.second);
    }
    throw ValidationError("no homology class with index " + std::to_string(i));
  }

  /// Class of a cycle as an element of space().  Throws if not a cycle.
  Element project(const Element& cycle) const {
    if (!same_space(cycle.space(), chains_)) throw ValidationError("project: element of another complex");
    std::map<int, SparseVec> by_degree;
    for (const auto& [i, c] : cycle.terms()) by_degree[chains_->degree(i)].emplace(i, c);
    SparseVec out;
    for (const auto& [n, part] : by_degree) {
      auto it = degrees_.find(n);
      if (it == degrees_.end()) throw ValidationError("project: degree not covered");
      const HomologyDegree& hd = it->second;
      Vec b = dense(part, hd.indices);
      auto x = solve(hd.solver, b);
      if (!x || hd.solver.apply(*x) != b) throw ValidationError("project: element is not a cycle");
      for (int k = 0; k < hd.dim(); ++k) {
        add_term(out, offset_.at({n, k}), (*x)[static_cast<std::size_t>(hd.boundary_columns + k)]);
      }
    }
    return Element(space_, std::move(out));
  }

 private:
  SpaceRef chains_;
  SpaceRef space_;
  std::map<int, HomologyDegree> degrees_;
  std::map<std::pair<int, int>, int> offset_;
};

/// Exact homology in every degree where the complex is nonzero.
inline HomologyReport homology(const ChainComplex& c) {
  const GradedSpace& V = *c.space;
  for (const auto& [i, img] : c.d) {
    for (const auto& [j, x] : img) {
      if (V.degree(j) != V.degree(i) - 1) throw ValidationError("differential does not have degree -1 at " + V.name(i));
    }
    if (!c.apply(img).empty()) throw ValidationError("differential does not square to zero at " + V.name(i));
  }
  std::map<int, HomologyDegree> out;
  for (int n : V.degrees_present()) {
    HomologyDegree hd;
    hd.degree = n;
    hd.indices = V.indices_in_degree(n);
    Matrix dn = detail::differential_block(c, hd.indices, V.indices_in_degree(n - 1));
    std::vector<Vec> z = kernel_basis(dn);
    hd.cycles = static_cast<int>(z.size());
    Matrix dn1 = detail::differential_block(c, V.indices_in_degree(n + 1), hd.indices);
    std::vector<int> bcols = independent_columns(dn1);
    hd.boundaries = static_cast<int>(bcols.size());
    std::vector<Vec> cols;
    for (int j : bcols) cols.push_back(dn1.column(j));
    const int rows = static_cast<int>(hd.indices.size());
    std::vector<Vec> all = cols;
    all.insert(all.end(), z.begin(), z.end());
    std::vector<int> pivots = independent_columns(Matrix::from_columns(rows, all));
    std::vector<Vec> reps;
    for (int p : pivots) {
      if (p >= static_cast<int>(cols.size())) reps.push_back(all[static_cast<std::size_t>(p)]);
    }
    hd.boundary_columns = static_cast<int>(cols.size());
    std::vector<Vec> solver_cols = cols;
    solver_cols.insert(solver_cols.end(), reps.begin(), reps.end());
    hd.solver = Matrix::from_columns(rows, solver_cols);
    for (const auto& r : reps) hd.representatives.push_back(sparse(r, hd.indices));
    out[n] = std::move(hd);
  }
  return HomologyReport(c.space, std::move(out));
}

inline HomologyReport homology(const LInftyAlgebra& L) { return homology(underlying_complex(L)); }

/// Binary bracket induced on homology, as an algebra on H.space() whose only
/// table is arity 2.
inline LInftyAlgebra induced_bracket(const LInftyAlgebra& L, const HomologyReport& H) {
  if (!same_space(L.space(), H.chains())) throw ValidationError("induced_bracket: report belongs to another algebra");
  LInftyAlgebra out(H.space());
  const int n = H.space()->dim();
  std::vector<Element> reps;
  for (int i = 0; i < n; ++i) reps.push_back(H.representative(i));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (!canonicalize_tuple({i, j}, *H.space())) continue;
      Element b = bracket_eval(L, {reps[i], reps[j]});
      if (b.is_zero()) continue;
      out.set_canonical({i, j}, H.project(b).terms());
    }
  }
  return out;
}

/// Restriction of a graded Lie algebra (arity-2 table) to its degree-zero
/// part.
inline LInftyAlgebra degree_zero_part(const LInftyAlgebra& g) {
  std::vector<int> keep = g.graded().indices_in_degree(0);
  std::vector<BasisEntry> basis;
  std::map<int, int> pos;
  for (int i : keep) {
    pos[i] = static_cast<int>(basis.size());
    basis.push_back(g.graded().entry(i));
  }
  LInftyAlgebra out(make_space(basis));
  for (const auto& [key, value] : g.table(2)) {
    if (!pos.count(key[0]) || !pos.count(key[1])) continue;
    SparseVec v;
    for (const auto& [k, c] : value) v.emplace(pos.at(k), c);
    out.set_canonical({pos[key[0]], pos[key[1]]}, std::move(v));
  }
  return out;
}

/// Nilpotency class: the number of nonzero stages of the lower central
/// series, or nullopt when it does not terminate.
inline std::optional<int> nilpotency_class(const LInftyAlgebra& L) {
  auto f = lcs_filtration(L);
  if (!f) return std::nullopt;
  int c = 0;
  for (const auto& stage : f->stages) {
    if (!stage.empty()) ++c;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Campbell-Hausdorff

namespace detail {

/// Right-nested bracket [w1,[w2,...[w_{k-1},w_k]]] of a word in {a,b}.
inline Element nested_bracket(const LInftyAlgebra& g, const std::vector<int>& word, const Element& a, const Element& b) {
  Element acc = word.back() == 0 ? a : b;
  for (int k = static_cast<int>(word.size()) - 2; k >= 0; --k) {
    acc = bracket_eval(g, {word[static_cast<std::size_t>(k)] == 0 ? a : b, acc});
    if (acc.is_zero()) break;
  }
  return acc;
}

}  // namespace detail

/// log(e^a e^b) by the Dynkin series, summed through the nilpotency class.
inline Element ch_product(const LInftyAlgebra& g, const Element& a, const Element& b) {
  if (!same_space(a.space(), g.space()) || !same_space(b.space(), g.space())) {
    throw ValidationError("ch_product: foreign element");
  }
  for (int r = 1; r <= g.max_arity(); ++r) {
    if (r != 2 && !g.table(r).empty()) throw ValidationError("ch_product: not a Lie algebra");
  }
  for (const auto& e : {a, b}) {
    for (const auto& [i, c] : e.terms()) {
      if (g.graded().degree(i) != 0) throw ValidationError("ch_product: arguments must have degree 0");
    }
  }
  auto cls = nilpotency_class(g);
  if (!cls) throw ValidationError("ch_product: Lie algebra is not nilpotent");
  const int top = std::max(1, *cls);

  Element out(g.space());
  // Sum over n blocks (r_i, s_i) with r_i + s_i >= 1 and total weight <= top.
  std::vector<std::pair<int, int>> blocks;
  std::function<void(int)> rec = [&](int weight) {
    if (!blocks.empty()) {
      const int n = static_cast<int>(blocks.size());
      std::vector<int> word;
      Scalar denom = weight;
      for (const auto& [r, s] : blocks) {
        word.insert(word.end(), static_cast<std::size_t>(r), 0);
        word.insert(word.end(), static_cast<std::size_t>(s), 1);
        denom *= factorial(r) * factorial(s);
      }
      Element term = detail::nested_bracket(g, word, a, b);
      if (!term.is_zero()) {
        Scalar coeff = Scalar(parity_sign(n - 1)) / (Scalar(n) * denom);
        out += coeff * term;
      }
    }
    for (int r = 0; weight + r <= top; ++r) {
      for (int s = 0; weight + r + s <= top; ++s) {
        if (r + s == 0) continue;
        blocks.emplace_back(r, s);
        rec(weight + r + s);
        blocks.pop_back();
      }
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// Derivations

struct Derivation {
  int degree = 0;                 // cohomological
  std::vector<SparseVec> images;  // per generator, in the algebra's basis
};

inline std::string to_string(const Derivation& d, const Cdga& A, const std::vector<std::string>& generators) {
  std::string s;
  for (std::size_t g = 0; g < d.images.size(); ++g) {
    if (d.images[g].empty()) continue;
    if (!s.empty()) s += " + ";
    s += "(" + Element(A.space(), d.images[g]).to_string() + ")*d/d" + generators[g];
  }
  return s.empty() ? "0" : s;
}

/// Basis of the derivations of cohomological degree `degree` of the algebra
/// presented by even generators and relations: assignments x_i -> p_i with
/// sum_i p_i df_j/dx_i = 0 in the quotient for every relation f_j.
inline std::vector<Derivation> derivations(const Presentation& p, int degree) {
  for (int d : p.degrees) {
    if (is_odd(d)) throw ValidationError("derivations: odd generators are not supported");
  }
  Presentation plain = p;
  plain.differential.clear();
  Cdga A = build_quotient(plain);
  const int n = static_cast<int>(p.generators.size());
  RingRef ring = p.ring();

  // Unknowns: coordinates of p_i in A^{|x_i| + degree}.
  std::vector<std::vector<int>> slots(static_cast<std::size_t>(n));
  std::vector<std::pair<int, int>> unknowns;  // (generator, basis index)
  for (int g = 0; g < n; ++g) {
    int target = p.degrees[g] + degree;
    if (target < 0) continue;
    if (!A.closed() && target > *A.cap()) throw OverflowError("derivations: degree exceeds the cap");
    for (int i = 0; i < A.dim(); ++i) {
      if (A.coh_degree(i) == target) {
        slots[g].push_back(static_cast<int>(unknowns.size()));
        unknowns.emplace_back(g, i);
      }
    }
  }
  // Equations: one block per relation, coordinates in A.
  std::vector<SparseVec> columns(unknowns.size());
  int offset = 0;
  for (const auto& f : p.relations) {
    if (f.is_zero()) continue;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      auto [g, i] = unknowns[u];
      SparseVec partial = A.reduce(partial_derivative(f, g));
      SparseVec prod = A.multiply(SparseVec{{i, 1}}, partial);
      for (const auto& [k, c] : prod) columns[u].emplace(offset + k, c);
    }
    offset += A.dim();
  }
  std::vector<int> rows(static_cast<std::size_t>(offset));
  for (int r = 0; r < offset; ++r) rows[r] = r;
  std::vector<Vec> dense_cols;
  for (const auto& c : columns) dense_cols.push_back(dense(c, rows));
  Matrix m = Matrix::from_columns(offset, dense_cols);
  std::vector<Derivation> out;
  for (const auto& v : kernel_basis(m)) {
    Derivation d{degree, std::vector<SparseVec>(static_cast<std::size_t>(n))};
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      if (v[u] != 0) d.images[unknowns[u].first].emplace(unknowns[u].second, v[u]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace linfty
