#pragma once

// End-to-end driver: from a cdga model A of X, an L-infinity model L of Y and
// a Maurer-Cartan element tau of A (x) L, compute the rational homotopy
// groups of the mapping space component (pi_{n+1} = H_n of the twisted
// algebra for n >= 0) and a Sullivan model C*((A (x) L)^tau_{>=0}).

#include "linfty/ce.hpp"
#include "linfty/cdga.hpp"
#include "linfty/dsl.hpp"
#include "linfty/halperin.hpp"
#include "linfty/homalg.hpp"
#include "linfty/linf_algebra.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace linfty {

inline constexpr int kReportSchemaVersion = 1;

struct ChSample {
  std::string a, b, product;
};

struct MappingSpaceReport {
  std::string mc_name;
  std::string mc_value;
  bool mc_verified = false;
  int tensor_dim = 0;
  int top_degree = 0;
  int max_degree = 0;
  int nilpotency = 0;
  std::map<int, int> homology_dims;  // every degree, including negative ones
  std::map<int, int> pi;             // k = n + 1 -> dim pi_k, 0 <= n <= max_degree
  LInftyAlgebra induced;             // binary bracket on H
  LInftyAlgebra h0;                  // degree-zero Lie algebra
  std::vector<ChSample> ch_samples;
  SullivanPresentation sullivan;     // C* of the truncation
  MinimalModel minimal;
  bool sullivan_minimal = false;
  bool twisted_l1_vanishes = false;  // on the truncation
  std::vector<std::string> notes;
};

struct MapOptions {
  std::optional<int> max_degree;
  int ch_sample_limit = 3;  // samples among the first k basis elements of H_0
};

inline nlohmann::json linf_to_json(const LInftyAlgebra& L) {
  const GradedSpace& V = L.graded();
  nlohmann::json gens = nlohmann::json::array();
  for (int i = 0; i < V.dim(); ++i) gens.push_back({{"name", V.name(i)}, {"degree", V.degree(i)}});
  nlohmann::json brackets = nlohmann::json::array();
  for (const auto& [r, table] : L.tables()) {
    for (const auto& [key, value] : table) {
      nlohmann::json args = nlohmann::json::array();
      for (int k : key) args.push_back(V.name(k));
      nlohmann::json val = nlohmann::json::array();
      for (const auto& [i, c] : value) val.push_back({{"generator", V.name(i)}, {"coefficient", c.get_str()}});
      brackets.push_back({{"arity", r}, {"args", args}, {"value", val}});
    }
  }
  return {{"generators", gens}, {"brackets", brackets}};
}

/// Runs tensor, curvature check, twist, homology, induced bracket, truncation,
/// Chevalley-Eilenberg and minimization for the named mc declaration.
inline MappingSpaceReport map_model(const ModelSpec& spec, const std::string& mc_name, MapOptions opt = {}) {
  Cdga A = build_cdga(spec);
  {
    auto v = check_cdga(A);
    if (!v.empty()) throw ValidationError("cdga axioms fail: " + describe(v.front()));
  }
  LInftyAlgebra L = build_linf(spec);
  {
    auto v = check_linfty(L);
    if (!v.empty()) throw ValidationError("L-infinity axioms fail: " + describe(v.front()));
  }
  LInftyAlgebra T = tensor(A, L);
  MappingSpaceReport r;
  r.mc_name = mc_name;
  Element tau = build_mc(spec, A, L, T, mc_name);
  r.mc_value = tau.to_string();
  McElement mc = McElement::make(T, tau);
  r.mc_verified = true;

  auto cls = nilpotency_class(T);
  if (!cls) throw ValidationError("tensor algebra A (x) L is not nilpotent");
  r.nilpotency = *cls;
  r.tensor_dim = T.dim();
  int top = 0;
  for (int i = 0; i < T.dim(); ++i) top = std::max(top, T.graded().degree(i));
  r.top_degree = top;
  r.max_degree = opt.max_degree ? *opt.max_degree : (spec.max_degree ? *spec.max_degree : 2 * top + 2);

  LInftyAlgebra tw = twist(T, mc);
  HomologyReport H = homology(tw);
  r.homology_dims = H.dims();
  for (int n = 0; n <= r.max_degree; ++n) r.pi[n + 1] = H.dim(n);

  r.induced = induced_bracket(tw, H);
  r.h0 = degree_zero_part(r.induced);
  const int k0 = std::min(r.h0.dim(), opt.ch_sample_limit);
  for (int i = 0; i < k0; ++i) {
    for (int j = 0; j < k0; ++j) {
      Element a(r.h0.space(), {{i, 1}});
      Element b(r.h0.space(), {{j, 1}});
      r.ch_samples.push_back({a.to_string(), b.to_string(), ch_product(r.h0, a, b).to_string()});
    }
  }

  Truncation tr = truncate(tw, 0);
  r.twisted_l1_vanishes = tr.algebra.table(1).empty();
  r.sullivan = ce_construct(tr.algebra);
  r.sullivan_minimal = minimality_check(r.sullivan);
  r.minimal = minimal_model(r.sullivan);

  r.notes.push_back("pi_0: MC verification only; tau = " + r.mc_value + " has zero curvature");
  r.notes.push_back("pi_{n+1} = H_n of the twisted algebra for 0 <= n <= " + std::to_string(r.max_degree));
  r.notes.push_back("Sullivan model: Chevalley-Eilenberg cochains of the degree >= 0 truncation");
  if (!r.minimal.removed.empty()) r.notes.push_back("minimal model removes contractible pairs");
  return r;
}

inline std::string default_mc(const ModelSpec& spec) {
  if (spec.mcs.size() == 1) return spec.mcs.front().name;
  if (spec.mcs.empty()) throw ValidationError("specification declares no mc element");
  throw ValidationError("several mc elements declared; choose one");
}

inline nlohmann::json to_json(const MappingSpaceReport& r) {
  nlohmann::json pi = nlohmann::json::array();
  for (const auto& [k, d] : r.pi) pi.push_back({{"k", k}, {"dim", d}});
  nlohmann::json h = nlohmann::json::array();
  for (const auto& [n, d] : r.homology_dims) h.push_back({{"degree", n}, {"dim", d}});
  nlohmann::json ch = nlohmann::json::array();
  for (const auto& s : r.ch_samples) ch.push_back({{"a", s.a}, {"b", s.b}, {"product", s.product}});
  nlohmann::json removed = r.minimal.removed;
  return {
      {"schema_version", kReportSchemaVersion},
      {"mc", {{"name", r.mc_name}, {"value", r.mc_value}, {"verified", r.mc_verified}}},
      {"pi0", "MC verification only"},
      {"tensor", {{"dim", r.tensor_dim}, {"top_degree", r.top_degree}, {"nilpotency_class", r.nilpotency}}},
      {"max_degree", r.max_degree},
      {"pi", pi},
      {"homology", h},
      {"induced_bracket", linf_to_json(r.induced)},
      {"h0_lie", linf_to_json(r.h0)},
      {"ch_samples", ch},
      {"sullivan", to_json(r.sullivan)},
      {"twisted_l1_vanishes", r.twisted_l1_vanishes},
      {"minimal_model", {{"model", to_json(r.minimal.model)}, {"removed", removed}}},
      {"notes", r.notes},
  };
}

inline std::string to_text(const MappingSpaceReport& r) {
  std::ostringstream os;
  os << "mc " << r.mc_name << " = " << r.mc_value << "  [verified]\n";
  os << "pi_0: MC verification only\n";
  os << "A (x) L: dim " << r.tensor_dim << ", top degree " << r.top_degree << ", nilpotency class " << r.nilpotency << "\n";
  os << "rational homotopy up to degree " << (r.max_degree + 1) << ":\n";
  for (const auto& [k, d] : r.pi) os << "  pi_" << k << " = " << d << "\n";
  if (r.h0.dim() > 0) {
    os << "H_0 Lie algebra: dim " << r.h0.dim() << "\n";
    for (const auto& s : r.ch_samples) os << "  " << s.a << " . " << s.b << " = " << s.product << "\n";
  }
  os << "Sullivan model: " << to_text(r.sullivan) << (r.sullivan_minimal ? "  [minimal]" : "") << "\n";
  if (!r.sullivan_minimal) os << "minimal model: " << to_text(r.minimal.model) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Built-in example families, produced as text in the input format.

/// Inclusion CP^n -> CP^m: A = Q[x]/(x^{n+1}), L = <alpha, beta> with
/// [alpha^{m+1}] = (m+1)! beta, tau = x (x) alpha.
inline std::string builtin_cp_inclusion(int n, int m) {
  if (n < 1) throw ValidationError("cp-inclusion: n must be positive");
  if (m < n) throw ValidationError("cp-inclusion: need m >= n");
  std::ostringstream os;
  os << "# CP^" << n << " -> CP^" << m << "\n";
  os << "algebra cdga A {\n  gen x : 2;\n  rel x^" << (n + 1) << ";\n}\n";
  os << "algebra linf L {\n  gen alpha : 1;\n  gen beta : " << 2 * m << ";\n  bracket [";
  for (int k = 0; k <= m; ++k) os << (k ? "," : "") << "alpha";
  os << "] = " << factorial(m + 1).get_str() << " beta;\n}\n";
  os << "mc tau = x*alpha;\n";
  return os.str();
}

/// Maps into a product of Eilenberg-MacLane spaces: abelian L with the given
/// homological degrees, tau = 0.
inline std::string builtin_em_target(const Presentation& A, const std::vector<int>& degrees) {
  std::ostringstream os;
  os << to_dsl(A, "A");
  os << "algebra linf L {\n";
  for (std::size_t i = 0; i < degrees.size(); ++i) os << "  gen e" << (i + 1) << " : " << degrees[i] << ";\n";
  os << "}\nmc tau = 0;\n";
  return os.str();
}

/// The F0 data: A = Q[x]/(f), L dual to Q[x] (x) Lambda(y), dy_j = f_j, and
/// pi = sum x_i (x) alpha_i.
inline std::string builtin_f0_aut(const Presentation& p) {
  HalperinData data = halperin_data(p);
  Presentation plain = p;
  plain.differential.clear();
  std::ostringstream os;
  os << to_dsl(plain, "A") << to_dsl(data.L, "L") << "mc pi = ";
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    os << (g ? " + " : "") << p.generators[g] << "*" << data.L.graded().name(static_cast<int>(g));
  }
  os << ";\n";
  return os.str();
}

}  // namespace linfty
