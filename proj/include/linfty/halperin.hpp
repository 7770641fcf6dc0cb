#pragma once

// Meier's criterion for F0-spaces: pi_odd(aut X) vanishes in positive degrees
// iff H*(X) has no derivations of negative degree.  Both sides are computed
// and compared degree by degree.

#include "linfty/cdga.hpp"
#include "linfty/ce.hpp"
#include "linfty/homalg.hpp"
#include "linfty/linf_algebra.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace linfty {

struct HalperinReport {
  bool holds = false;                 // no positive odd twisted homology
  bool no_negative_derivations = false;
  bool isomorphism_verified = false;  // ker D^pi on the odd part = Der(A) in every degree
  bool regular_sequence_assumed = true;
  std::map<int, int> kernel_dims;      // homological degree n -> dim ker(D^pi) on A (x) L_odd
  std::map<int, int> derivation_dims;  // cohomological degree k = -n-1 -> dim Der^k(A)
  std::map<int, int> odd_homology;     // odd n -> dim H_n(A (x) L, D^pi)
  std::optional<std::string> witness;  // a negative-degree derivation when the criterion fails
};

/// Data of the check: the formal model, its dual L-infinity algebra, and the
/// twisted tensor product.
struct HalperinData {
  Cdga A;
  SullivanPresentation minimal_model;  // Q[x] (x) Lambda(y), dy_j = f_j
  LInftyAlgebra L;
  LInftyAlgebra tensor;
  Element pi;
};

inline void require_f0_shape(const Presentation& p) {
  if (p.generators.empty()) throw ValidationError("F0 presentation needs generators");
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    if (is_odd(p.degrees[g])) throw ValidationError("F0 presentation: generator " + p.generators[g] + " has odd degree");
  }
  for (const auto& [g, d] : p.differential) {
    if (!d.is_zero()) throw ValidationError("F0 presentation: differential must vanish");
  }
  std::size_t nonzero = 0;
  for (const auto& f : p.relations) nonzero += f.is_zero() ? 0 : 1;
  if (nonzero != p.generators.size()) {
    throw ValidationError("F0 presentation: need as many relations as generators");
  }
}

inline HalperinData halperin_data(const Presentation& p) {
  require_f0_shape(p);
  Presentation plain = p;
  plain.cap.reset();
  plain.differential.clear();
  Cdga A = build_quotient(plain);
  if (!A.closed()) throw ValidationError("F0 presentation: quotient is not finite-dimensional");

  std::vector<Polynomial> rels;
  for (const auto& f : p.relations) {
    if (!f.is_zero()) rels.push_back(f);
  }
  const int n = static_cast<int>(p.generators.size());
  std::vector<std::string> names = p.generators;
  std::vector<int> degrees = p.degrees;
  std::set<std::string> taken(names.begin(), names.end());
  for (std::size_t j = 0; j < rels.size(); ++j) {
    std::string y = "y" + std::to_string(j + 1);
    while (taken.count(y)) y = "_" + y;
    taken.insert(y);
    names.push_back(y);
    degrees.push_back(*rels[j].homogeneous_degree() - 1);
  }
  SullivanPresentation S = SullivanPresentation::make(names, degrees);
  std::vector<Polynomial> images;
  for (int g = 0; g < n; ++g) images.push_back(S.gen(g));
  for (std::size_t j = 0; j < rels.size(); ++j) S.d[n + static_cast<int>(j)] = substitute(rels[j], images, S.ring);

  std::vector<std::string> lnames;
  for (int g = 0; g < n; ++g) lnames.push_back("alpha_" + p.generators[g]);
  for (std::size_t j = 0; j < rels.size(); ++j) lnames.push_back("beta_" + std::to_string(j + 1));
  LInftyAlgebra L = sullivan_to_linfty(S, lnames);
  LInftyAlgebra T = tensor(A, L);

  // The y_i vanish in the formal model A, so pi only has the x-part.
  SparseVec pi;
  for (int g = 0; g < n; ++g) {
    auto xi = A.space()->find(p.generators[g]);
    if (!xi) throw ValidationError("F0 presentation: generator " + p.generators[g] + " vanishes in the quotient");
    pi.emplace(tensor_index(A, *xi, g), 1);
  }
  Element pi_element(T.space(), std::move(pi));
  return {std::move(A), std::move(S), std::move(L), std::move(T), std::move(pi_element)};
}

inline HalperinReport halperin_check(const Presentation& p) {
  HalperinData data = halperin_data(p);
  Presentation q = p;
  q.cap.reset();
  const Cdga& A = data.A;
  const int n = static_cast<int>(p.generators.size());
  McElement pi = McElement::make(data.tensor, data.pi);
  LInftyAlgebra tw = twist(data.tensor, pi);
  const GradedSpace& T = tw.graded();

  HalperinReport r;
  // D^pi vanishes on A (x) L_even.
  for (int x = n; x < data.L.dim(); ++x) {
    for (int a = 0; a < A.dim(); ++a) {
      if (!tw.bracket_basis({tensor_index(A, a, x)}).empty()) {
        throw ValidationError("halperin_check: D^pi is nonzero on the even part");
      }
    }
  }
  std::set<int> odd_degrees;
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < A.dim(); ++a) odd_degrees.insert(T.degree(tensor_index(A, a, x)));
  }
  int max_gen = 0;
  for (int d : p.degrees) max_gen = std::max(max_gen, d);
  for (int k = -max_gen; k <= A.top_degree(); ++k) odd_degrees.insert(-k - 1);

  std::vector<int> all(static_cast<std::size_t>(T.dim()));
  for (int i = 0; i < T.dim(); ++i) all[i] = i;
  for (int deg : odd_degrees) {
    std::vector<int> cols;
    for (int x = 0; x < n; ++x) {
      for (int a = 0; a < A.dim(); ++a) {
        int idx = tensor_index(A, a, x);
        if (T.degree(idx) == deg) cols.push_back(idx);
      }
    }
    std::vector<Vec> dense_cols;
    for (int c : cols) dense_cols.push_back(dense(tw.bracket_basis({c}), all));
    int ker = static_cast<int>(cols.size()) - rank(Matrix::from_columns(T.dim(), dense_cols));
    r.kernel_dims[deg] = ker;
    int k = -deg - 1;
    std::vector<Derivation> ders = derivations(q, k);
    r.derivation_dims[k] = static_cast<int>(ders.size());
    if (k < 0 && !ders.empty() && !r.witness) r.witness = to_string(ders.front(), A, p.generators);
  }
  HomologyReport H = homology(tw);
  for (const auto& [deg, dim] : H.dims()) {
    if (is_odd(deg)) r.odd_homology[deg] = dim;
  }
  r.holds = true;
  for (const auto& [deg, dim] : r.odd_homology) {
    if (deg > 0 && dim > 0) r.holds = false;
  }
  r.no_negative_derivations = true;
  for (const auto& [k, dim] : r.derivation_dims) {
    if (k < 0 && dim > 0) r.no_negative_derivations = false;
  }
  r.isomorphism_verified = true;
  for (const auto& [deg, ker] : r.kernel_dims) {
    if (ker != r.derivation_dims.at(-deg - 1)) r.isomorphism_verified = false;
    if (is_odd(deg)) {
      auto it = r.odd_homology.find(deg);
      if ((it == r.odd_homology.end() ? 0 : it->second) != ker) r.isomorphism_verified = false;
    }
  }
  return r;
}

}  // namespace linfty
