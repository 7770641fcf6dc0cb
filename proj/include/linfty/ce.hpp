#pragma once

// Chevalley-Eilenberg duality between finite non-negatively graded
// L-infinity algebras and Sullivan algebras, plus the tools used to compare
// Sullivan presentations: minimality, contractible-pair minimization and
// equivalence up to invertible diagonal rescaling of generators.
//
// Sign convention.  The generator dual to a basis element x has cohomological
// degree |x| + 1 and
//   d v_y = - sum_k sum_K (1/prod m_i!) s_k(K) c^y_K v_{x_1} ... v_{x_k},
// summed over canonical keys K = (x_1 <= ... <= x_k) with l_k(K) = sum_y c^y_K y,
// where s_1(x) = (-1)^{|x|+1} and s_k(K) = (-1)^{sum_{i<j} |x_i|(|x_j|+1)} for
// k >= 2.  With this choice cdga maps C*(L) -> A correspond to Maurer-Cartan
// elements of A (x) L.

#include "linfty/core.hpp"
#include "linfty/linalg.hpp"
#include "linfty/linf_algebra.hpp"
#include "linfty/poly.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace linfty {

struct SullivanPresentation {
  RingRef ring;                      // generator names and cohomological degrees
  std::vector<Polynomial> d;         // per generator

  int size() const { return ring ? ring->size() : 0; }
  const std::string& name(int g) const { return ring->names[g]; }
  int degree(int g) const { return ring->degrees[g]; }

  static SullivanPresentation make(std::vector<std::string> names, std::vector<int> degrees) {
    SullivanPresentation s;
    s.ring = make_ring(std::move(names), std::move(degrees));
    for (int g = 0; g < s.size(); ++g) s.d.emplace_back(s.ring);
    return s;
  }

  Polynomial gen(int g, const Scalar& c = 1) const { return Polynomial::generator(ring, g, c); }
  Polynomial gen(const std::string& n, const Scalar& c = 1) const {
    auto g = ring->find(n);
    if (!g) throw ValidationError("unknown generator " + n);
    return gen(*g, c);
  }
};

inline bool plain_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline std::string suspended_name(const std::string& basis_name) {
  return plain_identifier(basis_name) ? "s" + basis_name : "s{" + basis_name + "}";
}

/// Inverse of suspended_name when the name has that shape.
inline std::optional<std::string> desuspended_name(const std::string& g) {
  if (g.size() >= 4 && g[0] == 's' && g[1] == '{' && g.back() == '}') return g.substr(2, g.size() - 3);
  if (g.size() >= 2 && g[0] == 's' && plain_identifier(g.substr(1))) return g.substr(1);
  return std::nullopt;
}

namespace detail {

inline int ce_sign(const TupleKey& key, const GradedSpace& V) {
  if (key.size() == 1) return parity_sign(V.degree(key[0]) + 1);
  long e = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    for (std::size_t j = i + 1; j < key.size(); ++j) e += static_cast<long>(V.degree(key[i])) * (V.degree(key[j]) + 1);
  }
  return parity_sign(e);
}

}  // namespace detail

/// Derivation-free check that d has degree +1 and squares to zero on every
/// generator.  Returns the offending generators.
inline std::vector<Violation> verify_d_squared(const SullivanPresentation& S) {
  std::vector<Violation> out;
  for (int g = 0; g < S.size(); ++g) {
    if (S.d[g].is_zero()) continue;
    auto deg = S.d[g].homogeneous_degree();
    if (!deg || *deg != S.degree(g) + 1) out.push_back({"d degree", {S.name(g)}, "d" + S.name(g) + " = " + S.d[g].to_string()});
  }
  for (int g = 0; g < S.size(); ++g) {
    Polynomial dd = apply_derivation(S.d[g], S.d, 1);
    if (!dd.is_zero()) out.push_back({"d^2", {S.name(g)}, "d(d" + S.name(g) + ") = " + dd.to_string()});
  }
  return out;
}

/// C*(L) as a Sullivan presentation.
inline SullivanPresentation ce_construct(const LInftyAlgebra& L) {
  const GradedSpace& V = L.graded();
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (int i = 0; i < V.dim(); ++i) {
    if (V.degree(i) < 0) throw ValidationError("ce_construct: negative degree at " + V.name(i) + "; truncate first");
    names.push_back(suspended_name(V.name(i)));
    degrees.push_back(V.degree(i) + 1);
  }
  SullivanPresentation S = SullivanPresentation::make(std::move(names), std::move(degrees));
  for (const auto& [r, table] : L.tables()) {
    for (const auto& [key, value] : table) {
      Polynomial word = Polynomial::constant(S.ring, 1);
      for (int i : key) word = word * S.gen(i);
      Scalar w = -inverse_multiplicity_factorials(key) * detail::ce_sign(key, V);
      for (const auto& [y, c] : value) S.d[y] += (w * c) * word;
    }
  }
  auto bad = verify_d_squared(S);
  if (!bad.empty()) throw ValidationError("ce_construct: " + describe(bad.front()));
  return S;
}

/// The L-infinity algebra whose Chevalley-Eilenberg algebra is S.  Basis
/// names drop the suspension prefix when every generator carries one, unless
/// explicit names are given.
inline LInftyAlgebra sullivan_to_linfty(const SullivanPresentation& S,
                                        const std::optional<std::vector<std::string>>& names = std::nullopt) {
  const int n = S.size();
  std::vector<std::string> basis_names;
  if (names) {
    if (static_cast<int>(names->size()) != n) throw ValidationError("sullivan_to_linfty: wrong number of names");
    basis_names = *names;
  } else {
    bool all = true;
    for (int g = 0; g < n; ++g) all = all && desuspended_name(S.name(g)).has_value();
    for (int g = 0; g < n; ++g) basis_names.push_back(all ? *desuspended_name(S.name(g)) : S.name(g));
  }
  std::vector<BasisEntry> basis;
  for (int g = 0; g < n; ++g) {
    if (S.degree(g) < 1) throw ValidationError("sullivan_to_linfty: generators must have positive degree");
    basis.push_back({basis_names[g], S.degree(g) - 1});
  }
  LInftyAlgebra L(make_space(std::move(basis)));
  for (int y = 0; y < n; ++y) {
    for (const auto& [m, c] : S.d[y].terms()) {
      if (word_length(m) == 0) throw ValidationError("sullivan_to_linfty: constant term in d" + S.name(y));
      TupleKey key;
      for (int g = 0; g < n; ++g) key.insert(key.end(), static_cast<std::size_t>(m[g]), g);
      Scalar coeff = -c / (inverse_multiplicity_factorials(key) * detail::ce_sign(key, L.graded()));
      L.accumulate(key, coeff, SparseVec{{y, 1}});
    }
  }
  return L;
}

/// True iff no differential has a linear term.
inline bool minimality_check(const SullivanPresentation& S) {
  for (const auto& p : S.d) {
    for (const auto& [m, c] : p.terms()) {
      if (word_length(m) == 1) return false;
    }
  }
  return true;
}

/// Stages V(0) c V(1) c ... with dV(k) in Lambda V(k-1); nullopt when no
/// such filtration exists.
inline std::optional<std::vector<std::vector<int>>> sullivan_filtration(const SullivanPresentation& S) {
  std::vector<std::vector<int>> stages;
  std::set<int> placed;
  while (static_cast<int>(placed.size()) < S.size()) {
    std::vector<int> next;
    for (int g = 0; g < S.size(); ++g) {
      if (placed.count(g)) continue;
      bool ok = true;
      for (const auto& [m, c] : S.d[g].terms()) {
        for (int h = 0; h < S.size(); ++h) {
          if (m[h] != 0 && !placed.count(h)) ok = false;
        }
      }
      if (ok) next.push_back(g);
    }
    if (next.empty()) return std::nullopt;
    placed.insert(next.begin(), next.end());
    stages.push_back(std::move(next));
  }
  return stages;
}

// ---------------------------------------------------------------------------
// Minimization

struct MinimalModel {
  SullivanPresentation model;
  std::vector<std::string> removed;  // generators killed in contractible pairs
};

/// Removes contractible pairs (v, dv) one at a time: when dv = c u + p with
/// p free of u, the quotient by the ideal (v, dv) is quasi-isomorphic and is
/// presented on the remaining generators with u -> -p/c, v -> 0.
inline MinimalModel minimal_model(const SullivanPresentation& S) {
  SullivanPresentation cur = S;
  std::vector<std::string> removed;
  while (true) {
    int v = -1, u = -1;
    Scalar c;
    for (int g = 0; g < cur.size() && v < 0; ++g) {
      for (const auto& [m, coeff] : cur.d[g].terms()) {
        if (word_length(m) != 1) continue;
        v = g;
        u = static_cast<int>(std::find(m.begin(), m.end(), 1) - m.begin());
        c = coeff;
        break;
      }
    }
    if (v < 0) break;
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<int> keep;
    for (int g = 0; g < cur.size(); ++g) {
      if (g == u || g == v) continue;
      keep.push_back(g);
      names.push_back(cur.name(g));
      degrees.push_back(cur.degree(g));
    }
    SullivanPresentation next = SullivanPresentation::make(names, degrees);
    std::vector<Polynomial> images(static_cast<std::size_t>(cur.size()), Polynomial(next.ring));
    for (std::size_t k = 0; k < keep.size(); ++k) images[keep[k]] = next.gen(static_cast<int>(k));
    images[v] = Polynomial(next.ring);
    Polynomial p = cur.d[v] - cur.gen(u, c);
    for (const auto& [m, x] : p.terms()) {
      if (m[u] != 0) throw ValidationError("minimal_model: generator degrees must be positive");
    }
    images[u] = (-1 / c) * substitute(p, images, next.ring);
    for (std::size_t k = 0; k < keep.size(); ++k) next.d[k] = substitute(cur.d[keep[k]], images, next.ring);
    removed.push_back(cur.name(u));
    removed.push_back(cur.name(v));
    cur = std::move(next);
  }
  auto bad = verify_d_squared(cur);
  if (!bad.empty()) throw ValidationError("minimal_model: " + describe(bad.front()));
  return {cur, removed};
}

// ---------------------------------------------------------------------------
// Comparison up to diagonal rescaling

namespace detail {

/// Pairwise coprime integers > 1 whose products give each input.
inline std::vector<mpz_class> coprime_base(std::vector<mpz_class> nums) {
  std::vector<mpz_class> base;
  for (auto& n : nums) {
    n = abs(n);
    if (n > 1) base.push_back(n);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    for (std::size_t i = 0; i < base.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < base.size() && !changed; ++j) {
        mpz_class g = gcd(base[i], base[j]);
        if (g == 1) continue;
        mpz_class a = base[i] / g, b = base[j] / g;
        base.erase(base.begin() + static_cast<long>(j));
        base.erase(base.begin() + static_cast<long>(i));
        for (const auto& x : {g, a, b}) {
          if (x > 1) base.push_back(x);
        }
        changed = true;
      }
    }
  }
  return base;
}

inline int valuation(mpz_class n, const mpz_class& b) {
  n = abs(n);
  int v = 0;
  while (n != 0 && n % b == 0) {
    n /= b;
    ++v;
  }
  return v;
}

/// Integer solution of A x = b (rows x cols) via Smith normal form.
inline std::optional<std::vector<mpz_class>> solve_integer(std::vector<std::vector<mpz_class>> A, std::vector<mpz_class> b,
                                                           int cols) {
  const int rows = static_cast<int>(A.size());
  // Track column operations in V so that A V = D after row reduction of [A|b].
  std::vector<std::vector<mpz_class>> V(static_cast<std::size_t>(cols), std::vector<mpz_class>(static_cast<std::size_t>(cols), 0));
  for (int i = 0; i < cols; ++i) V[i][i] = 1;
  auto swap_cols = [&](int a, int c) {
    for (int r = 0; r < rows; ++r) std::swap(A[r][a], A[r][c]);
    for (int r = 0; r < cols; ++r) std::swap(V[r][a], V[r][c]);
  };
  auto add_col = [&](int dst, int src, const mpz_class& f) {  // col dst += f col src
    for (int r = 0; r < rows; ++r) A[r][dst] += f * A[r][src];
    for (int r = 0; r < cols; ++r) V[r][dst] += f * V[r][src];
  };
  auto add_row = [&](int dst, int src, const mpz_class& f) {
    for (int c = 0; c < cols; ++c) A[dst][c] += f * A[src][c];
    b[dst] += f * b[src];
  };
  int t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // pivot: smallest nonzero entry in the remaining block
    int pr = -1, pc = -1;
    for (int r = t; r < rows; ++r) {
      for (int c = t; c < cols; ++c) {
        if (A[r][c] != 0 && (pr < 0 || abs(A[r][c]) < abs(A[pr][pc]))) {
          pr = r;
          pc = c;
        }
      }
    }
    if (pr < 0) break;
    std::swap(A[t], A[pr]);
    std::swap(b[t], b[pr]);
    swap_cols(t, pc);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int r = t + 1; r < rows; ++r) {
        if (A[r][t] == 0) continue;
        mpz_class q = A[r][t] / A[t][t];
        add_row(r, t, -q);
        if (A[r][t] != 0) {
          std::swap(A[t], A[r]);
          std::swap(b[t], b[r]);
          clean = false;
        }
      }
      for (int c = t + 1; c < cols; ++c) {
        if (A[t][c] == 0) continue;
        mpz_class q = A[t][c] / A[t][t];
        add_col(c, t, -q);
        if (A[t][c] != 0) {
          swap_cols(t, c);
          clean = false;
        }
      }
    }
  }
  std::vector<mpz_class> y(static_cast<std::size_t>(cols), 0);
  for (int r = 0; r < rows; ++r) {
    if (r < t) {
      if (b[r] % A[r][r] != 0) return std::nullopt;
      y[r] = b[r] / A[r][r];
    } else if (b[r] != 0) {
      return std::nullopt;
    }
  }
  std::vector<mpz_class> x(static_cast<std::size_t>(cols), 0);
  for (int r = 0; r < cols; ++r) {
    for (int c = 0; c < cols; ++c) x[r] += V[r][c] * y[c];
  }
  return x;
}

/// Solution of A x = b over GF(2).
inline std::optional<std::vector<int>> solve_gf2(std::vector<std::vector<int>> A, std::vector<int> b, int cols) {
  const int rows = static_cast<int>(A.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i) {
      if (A[i][c]) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(A[r], A[p]);
    std::swap(b[r], b[p]);
    for (int i = 0; i < rows; ++i) {
      if (i != r && A[i][c]) {
        for (int k = 0; k < cols; ++k) A[i][k] ^= A[r][k];
        b[i] ^= b[r];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i) {
    if (b[i]) return std::nullopt;
  }
  std::vector<int> x(static_cast<std::size_t>(cols), 0);
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

/// Scalars lambda_g != 0 with phi(v_g) = lambda_g v'_{perm[g]} a dg isomorphism.
inline std::optional<std::vector<Scalar>> rescaling_for(const SullivanPresentation& S, const SullivanPresentation& T,
                                                         const std::vector<int>& perm) {
  const int n = S.size();
  std::vector<Polynomial> images;
  for (int g = 0; g < n; ++g) images.push_back(T.gen(perm[g]));
  // Equations lambda_g * c'_{m'} = c_m * prod lambda^m  for matching supports.
  struct Eq {
    std::vector<int> exps;  // exponent per unknown on the left minus right
    Scalar ratio;
  };
  std::vector<Eq> eqs;
  for (int g = 0; g < n; ++g) {
    Polynomial image = substitute(S.d[g], images, T.ring);
    const Polynomial& target = T.d[perm[g]];
    if (image.terms().size() != target.terms().size()) return std::nullopt;
    for (const auto& [m, c] : image.terms()) {
      auto it = target.terms().find(m);
      if (it == target.terms().end()) return std::nullopt;
      // lambda_g / prod_h lambda_h^{m[perm h]} = c / c'
      Eq e{std::vector<int>(static_cast<std::size_t>(n), 0), c / it->second};
      for (int h = 0; h < n; ++h) e.exps[h] -= m[perm[h]];
      e.exps[g] += 1;
      eqs.push_back(std::move(e));
    }
  }
  if (eqs.empty()) return std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(1));
  std::vector<mpz_class> parts;
  for (const auto& e : eqs) {
    parts.push_back(e.ratio.get_num());
    parts.push_back(e.ratio.get_den());
  }
  std::vector<mpz_class> base = coprime_base(parts);
  std::vector<std::vector<mpz_class>> A;
  std::vector<mpz_class> rhs;
  for (const auto& p : base) {
    for (const auto& e : eqs) {
      std::vector<mpz_class> row;
      for (int x : e.exps) row.emplace_back(x);
      A.push_back(std::move(row));
      rhs.emplace_back(valuation(e.ratio.get_num(), p) - valuation(e.ratio.get_den(), p));
    }
  }
  std::vector<std::vector<mpz_class>> exps_by_base;
  for (std::size_t k = 0; k < base.size(); ++k) {
    std::vector<std::vector<mpz_class>> Ak(A.begin() + static_cast<long>(k * eqs.size()),
                                           A.begin() + static_cast<long>((k + 1) * eqs.size()));
    std::vector<mpz_class> bk(rhs.begin() + static_cast<long>(k * eqs.size()), rhs.begin() + static_cast<long>((k + 1) * eqs.size()));
    auto sol = solve_integer(Ak, bk, n);
    if (!sol) return std::nullopt;
    exps_by_base.push_back(*sol);
  }
  std::vector<std::vector<int>> A2;
  std::vector<int> b2;
  for (const auto& e : eqs) {
    std::vector<int> row;
    for (int x : e.exps) row.push_back(((x % 2) + 2) % 2);
    A2.push_back(std::move(row));
    b2.push_back(e.ratio < 0 ? 1 : 0);
  }
  auto signs = solve_gf2(A2, b2, n);
  if (!signs) return std::nullopt;
  std::vector<Scalar> lambda(static_cast<std::size_t>(n), Scalar(1));
  for (int g = 0; g < n; ++g) {
    Scalar l = (*signs)[g] ? -1 : 1;
    for (std::size_t k = 0; k < base.size(); ++k) {
      mpz_class e = exps_by_base[k][g];
      mpz_class power;
      mpz_class ae = abs(e);
      mpz_pow_ui(power.get_mpz_t(), base[k].get_mpz_t(), ae.get_ui());
      if (e >= 0) {
        l *= Scalar(power);
      } else {
        l /= Scalar(power);
      }
    }
    lambda[g] = l;
  }
  return lambda;
}

}  // namespace detail

struct Rescaling {
  std::vector<int> mapping;     // source generator -> target generator
  std::vector<Scalar> factors;  // v_g -> factors[g] * v'_{mapping[g]}
};

/// Applies phi(v_g) = lambda_g v'_{perm g} and checks phi d = d' phi exactly.
inline bool verify_rescaling(const SullivanPresentation& S, const SullivanPresentation& T, const Rescaling& r) {
  if (S.size() != T.size()) return false;
  std::vector<Polynomial> images;
  for (int g = 0; g < S.size(); ++g) {
    if (r.factors[g] == 0 || S.degree(g) != T.degree(r.mapping[g])) return false;
    images.push_back(T.gen(r.mapping[g], r.factors[g]));
  }
  for (int g = 0; g < S.size(); ++g) {
    Polynomial lhs = substitute(S.d[g], images, T.ring);
    Polynomial rhs = r.factors[g] * T.d[r.mapping[g]];
    if (lhs != rhs) return false;
  }
  return true;
}

/// Finds an isomorphism S -> T that sends each generator to a nonzero
/// multiple of a generator of the same degree.  With `mapping` given only
/// that matching is tried; otherwise every degree-preserving bijection is.
inline std::optional<Rescaling> diagonal_equivalence(const SullivanPresentation& S, const SullivanPresentation& T,
                                                     const std::optional<std::vector<int>>& mapping = std::nullopt) {
  const int n = S.size();
  if (n != T.size()) return std::nullopt;
  auto attempt = [&](const std::vector<int>& perm) -> std::optional<Rescaling> {
    for (int g = 0; g < n; ++g) {
      if (S.degree(g) != T.degree(perm[g])) return std::nullopt;
    }
    auto lambda = detail::rescaling_for(S, T, perm);
    if (!lambda) return std::nullopt;
    Rescaling r{perm, *lambda};
    if (!verify_rescaling(S, T, r)) return std::nullopt;
    return r;
  };
  if (mapping) return attempt(*mapping);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) perm[g] = g;
  std::vector<int> tdeg, sdeg;
  for (int g = 0; g < n; ++g) {
    tdeg.push_back(T.degree(g));
    sdeg.push_back(S.degree(g));
  }
  std::sort(tdeg.begin(), tdeg.end());
  std::sort(sdeg.begin(), sdeg.end());
  if (tdeg != sdeg) return std::nullopt;
  // Enumerate bijections within each degree.
  std::vector<int> target(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::optional<Rescaling> found;
  std::function<void(int)> rec = [&](int g) {
    if (found) return;
    if (g == n) {
      found = attempt(target);
      return;
    }
    for (int h = 0; h < n; ++h) {
      if (used[h] || T.degree(h) != S.degree(g)) continue;
      used[h] = true;
      target[g] = h;
      rec(g + 1);
      used[h] = false;
    }
  };
  rec(0);
  return found;
}

// ---------------------------------------------------------------------------
// Output

inline std::string to_text(const SullivanPresentation& S) {
  std::ostringstream os;
  os << "Λ(";
  for (int g = 0; g < S.size(); ++g) os << (g ? ", " : "") << S.name(g) << ":" << S.degree(g);
  os << ");";
  for (int g = 0; g < S.size(); ++g) os << " d " << S.name(g) << " = " << S.d[g].to_string() << ";";
  return os.str();
}

inline nlohmann::json to_json(const SullivanPresentation& S) {
  nlohmann::json gens = nlohmann::json::array();
  for (int g = 0; g < S.size(); ++g) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = S.d[g].terms().rbegin(); it != S.d[g].terms().rend(); ++it) {
      nlohmann::json mono = nlohmann::json::object();
      for (int h = 0; h < S.size(); ++h) {
        if (it->first[h] != 0) mono[S.name(h)] = it->first[h];
      }
      terms.push_back({{"coefficient", it->second.get_str()}, {"monomial", mono}});
    }
    gens.push_back({{"name", S.name(g)}, {"degree", S.degree(g)}, {"d", terms}, {"d_text", S.d[g].to_string()}});
  }
  return {{"generators", gens}, {"minimal", minimality_check(S)}};
}

}  // namespace linfty
