#pragma once

// Simplices of the nerve: degree -1 elements of Omega_n (x) g, written as
// sums of omega (x) x.  Brackets follow extension of scalars with Omega_n in
// the role of the cdga:
//   (d + delta)(omega (x) x) = d omega (x) x + (-1)^{|omega|} omega (x) delta x,
//   [omega_1 (x) x_1, ..., omega_r (x) x_r]
//       = (-1)^{sum_{i<j} |x_i||omega_j|} omega_1 ... omega_r (x) [x_1, ..., x_r].

#include "linfty/core.hpp"
#include "linfty/forms.hpp"
#include "linfty/linf_algebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace linfty {

class GSimplex {
 public:
  GSimplex() = default;
  GSimplex(SpaceRef space, int n) : space_(std::move(space)), n_(n) {}

  /// The constant simplex on an element of g.
  static GSimplex constant(int n, const Element& x) {
    GSimplex s(x.space(), n);
    for (const auto& [i, c] : x.terms()) s.add(i, PolyForm::constant(n, c));
    return s;
  }

  /// omega (x) x.
  static GSimplex product(const PolyForm& omega, const Element& x) {
    GSimplex s(x.space(), omega.n());
    for (const auto& [i, c] : x.terms()) s.add(i, c * omega);
    return s;
  }

  const SpaceRef& space() const { return space_; }
  int n() const { return n_; }
  const std::map<int, PolyForm>& parts() const { return parts_; }
  bool is_zero() const { return parts_.empty(); }

  void add(int basis, const PolyForm& f) {
    if (f.n() != n_) throw ValidationError("GSimplex: form on the wrong simplex");
    auto [it, ins] = parts_.try_emplace(basis, PolyForm(n_));
    it->second += f;
    if (it->second.is_zero()) parts_.erase(it);
  }

  GSimplex& operator+=(const GSimplex& o) {
    check(o);
    for (const auto& [i, f] : o.parts_) add(i, f);
    return *this;
  }
  GSimplex& operator-=(const GSimplex& o) {
    check(o);
    for (const auto& [i, f] : o.parts_) add(i, Scalar(-1) * f);
    return *this;
  }
  GSimplex& operator*=(const Scalar& c) {
    if (c == 0) parts_.clear();
    for (auto& [i, f] : parts_) f *= c;
    return *this;
  }
  friend GSimplex operator+(GSimplex a, const GSimplex& b) { return a += b; }
  friend GSimplex operator-(GSimplex a, const GSimplex& b) { return a -= b; }
  friend GSimplex operator*(const Scalar& c, GSimplex a) { return a *= c; }
  bool operator==(const GSimplex& o) const { return n_ == o.n_ && same_space(space_, o.space_) && parts_ == o.parts_; }
  bool operator!=(const GSimplex& o) const { return !(*this == o); }

  std::string to_string() const {
    if (parts_.empty()) return "0";
    std::string s;
    for (const auto& [i, f] : parts_) {
      if (!s.empty()) s += " + ";
      s += "(" + f.to_string() + ")*" + space_->name(i);
    }
    return s;
  }

 private:
  void check(const GSimplex& o) const {
    if (o.n_ != n_ || !same_space(space_, o.space_)) throw ValidationError("GSimplex: incompatible simplices");
  }

  SpaceRef space_;
  int n_ = 0;
  std::map<int, PolyForm> parts_;
};

inline GSimplex face(int i, const GSimplex& s) {
  GSimplex out(s.space(), s.n() - 1);
  for (const auto& [x, f] : s.parts()) out.add(x, face(i, f));
  return out;
}

inline GSimplex degeneracy(int i, const GSimplex& s) {
  GSimplex out(s.space(), s.n() + 1);
  for (const auto& [x, f] : s.parts()) out.add(x, degeneracy(i, f));
  return out;
}

namespace detail {

struct PureTerm {
  PolyForm::Key form;
  Scalar coeff;
  int x;
};

inline std::vector<PureTerm> pure_terms(const GSimplex& s) {
  std::vector<PureTerm> out;
  for (const auto& [x, f] : s.parts()) {
    for (const auto& [k, c] : f.terms()) out.push_back({k, c, x});
  }
  return out;
}

inline int form_degree(const PolyForm::Key& k) { return __builtin_popcount(k.second); }

}  // namespace detail

/// Checks that every term omega (x) x has total degree |x| - |omega| = -1.
inline void require_degree_minus_one(const LInftyAlgebra& L, const GSimplex& s) {
  if (!same_space(L.space(), s.space())) throw ValidationError("simplex over another algebra");
  for (const auto& t : detail::pure_terms(s)) {
    if (L.graded().degree(t.x) - detail::form_degree(t.form) != -1) {
      throw ValidationError("simplex term on " + L.graded().name(t.x) + " does not have total degree -1");
    }
  }
}

/// (d + delta) s.
inline GSimplex total_differential(const LInftyAlgebra& L, const GSimplex& s) {
  GSimplex out(s.space(), s.n());
  for (const auto& [x, f] : s.parts()) {
    PolyForm df = derham_d(f);
    if (!df.is_zero()) out.add(x, df);
    SparseVec dx = L.bracket_basis({x});
    for (const auto& [k, c] : f.terms()) {
      PolyForm mono(s.n());
      mono.add(k.first, k.second, c * parity_sign(detail::form_degree(k)));
      for (const auto& [y, cy] : dx) out.add(y, cy * mono);
    }
  }
  return out;
}

/// (d + delta) s + sum_{k>=2} (1/k!) [s^k] for s of degree -1.
inline GSimplex simplex_curvature(const LInftyAlgebra& L, const GSimplex& s) {
  require_degree_minus_one(L, s);
  GSimplex out = total_differential(L, s);
  const auto terms = detail::pure_terms(s);
  const int nt = static_cast<int>(terms.size());
  const GradedSpace& V = L.graded();
  // Terms of degree -1 bracket symmetrically, so ordered tuples collapse to
  // sorted multisets weighted by 1/prod m_i!.
  for (int k = 2; k <= L.max_arity(); ++k) {
    if (L.table(k).empty()) continue;
    for_each_multiset(nt, k, [&](const TupleKey& pick) {
      std::vector<int> xs;
      for (int p : pick) xs.push_back(terms[p].x);
      SparseVec b = L.bracket_basis(xs);
      if (b.empty()) return;
      long e = 0;
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) e += static_cast<long>(V.degree(xs[i])) * detail::form_degree(terms[pick[j]].form);
      }
      PolyForm prod = PolyForm::constant(s.n(), inverse_multiplicity_factorials(pick) * parity_sign(e));
      for (int p : pick) {
        PolyForm mono(s.n());
        mono.add(terms[p].form.first, terms[p].form.second, terms[p].coeff);
        prod = wedge(prod, mono);
        if (prod.is_zero()) return;
      }
      for (const auto& [y, c] : b) out.add(y, c * prod);
    });
  }
  return out;
}

inline bool mc_simplex_check(const LInftyAlgebra& L, const GSimplex& s) { return simplex_curvature(L, s).is_zero(); }

/// The simplex tau + omega^{n+1} (x) alpha for a cycle alpha of degree n in g^tau.
inline GSimplex b_simplex(const LInftyAlgebra& L, const McElement& tau, const Element& alpha) {
  auto n = alpha.homogeneous_degree();
  if (!n || *n < 0) throw ValidationError("b_simplex: alpha must be homogeneous of degree >= 0");
  LInftyAlgebra twisted = twist(L, tau);
  if (!bracket_eval(twisted, {alpha}).is_zero()) throw ValidationError("b_simplex: alpha is not a twisted cycle");
  const int dim = *n + 1;
  GSimplex s = GSimplex::constant(dim, tau.value()) + GSimplex::product(top_form(dim), alpha);
  if (!mc_simplex_check(L, s)) throw ValidationError("b_simplex: result is not Maurer-Cartan");
  GSimplex base = GSimplex::constant(dim - 1, tau.value());
  for (int i = 0; i <= dim; ++i) {
    if (face(i, s) != base) throw ValidationError("b_simplex: face " + std::to_string(i) + " is not constant");
  }
  return s;
}

/// lambda = omega_0^ (x) alpha + omega_1^ (x) (alpha + beta) + omega_2^ (x) beta
/// on the (n+2)-simplex for cycles alpha, beta of degree n.
inline GSimplex homomorphism_simplex(const Element& alpha, const Element& beta) {
  auto n = alpha.homogeneous_degree();
  if (!n) n = beta.homogeneous_degree();
  if (!n || *n < 0) throw ValidationError("homomorphism_simplex: cycles must be homogeneous");
  const int dim = *n + 2;
  return GSimplex::product(omitted_form(dim, {0}), alpha) + GSimplex::product(omitted_form(dim, {1}), alpha + beta) +
         GSimplex::product(omitted_form(dim, {2}), beta);
}

/// (d + delta) applied to (-1)^{n+1} omega_2^ (x) chi - omega_02^ (x) alpha
/// - omega_12^ (x) beta on the (n+2)-simplex, where delta chi = alpha - beta.
/// Its faces are (omega (x) alpha, omega (x) beta, 0, ..., 0).
inline GSimplex boundary_witness(const LInftyAlgebra& g, const Element& alpha, const Element& beta, const Element& chi) {
  auto m = chi.homogeneous_degree();
  if (!m || *m < 1) throw ValidationError("boundary_witness: chi must be homogeneous of degree >= 1");
  const int n = *m - 1;
  if (bracket_eval(g, {chi}) != alpha - beta) throw ValidationError("boundary_witness: delta chi != alpha - beta");
  const int dim = n + 2;
  GSimplex e = Scalar(parity_sign(n + 1)) * GSimplex::product(omitted_form(dim, {2}), chi);
  if (!alpha.is_zero()) e -= GSimplex::product(omitted_form(dim, {0, 2}), alpha);
  if (!beta.is_zero()) e -= GSimplex::product(omitted_form(dim, {1, 2}), beta);
  return total_differential(g, e);
}

/// True iff lambda is a Maurer-Cartan 1-simplex from tau0 to tau1.
inline bool verify_mc_path(const LInftyAlgebra& L, const McElement& tau0, const McElement& tau1, const GSimplex& lambda) {
  if (lambda.n() != 1 || !same_space(L.space(), lambda.space())) return false;
  try {
    if (!mc_simplex_check(L, lambda)) return false;
  } catch (const ValidationError&) {
    return false;
  }
  return face(0, lambda) == GSimplex::constant(0, tau1.value()) && face(1, lambda) == GSimplex::constant(0, tau0.value());
}

}  // namespace linfty
