#pragma once

// Shared fixtures: the model files, the built-in families and a few small
// algebras with known structure.

#include "linfty/all.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef LINFTY_MODELS_DIR
#define LINFTY_MODELS_DIR "models"
#endif

namespace corpus {

using namespace linfty;

inline std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string model_path(const std::string& name) { return std::string(LINFTY_MODELS_DIR) + "/" + name; }

struct Named {
  std::string name;
  std::string text;
};

/// Every model file plus the built-in families, as text.
inline std::vector<Named> specs() {
  std::vector<Named> out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(LINFTY_MODELS_DIR)) {
    if (e.path().extension() == ".lin") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back({f.filename().string(), read(f.string())});
  for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}) {
    out.push_back({"cp" + std::to_string(n) + std::to_string(m), builtin_cp_inclusion(n, m)});
  }
  return out;
}

/// Presentation parsed from a cdga block written as text.
inline Presentation presentation(const std::string& text) { return build_presentation(*parse(text).cdga); }

inline Presentation truncated_polynomial(int n) {
  return presentation("algebra cdga A { gen x : 2; rel x^" + std::to_string(n + 1) + "; }");
}

inline Presentation two_squares() { return presentation("algebra cdga A { gen a : 2; gen b : 2; rel a^2; rel b^2; }"); }

/// Degree-zero Lie algebra from structure constants [e_i, e_j] = sum c e_k.
inline LInftyAlgebra lie_algebra(const std::vector<std::string>& names,
                                 const std::vector<std::tuple<int, int, SparseVec>>& brackets) {
  std::vector<BasisEntry> basis;
  for (const auto& n : names) basis.push_back({n, 0});
  LInftyAlgebra g(make_space(basis));
  for (const auto& [i, j, v] : brackets) g.set_bracket({i, j}, v);
  return g;
}

inline LInftyAlgebra heisenberg() { return lie_algebra({"X", "Y", "Z"}, {{0, 1, {{2, 1}}}}); }

/// Free nilpotent Lie algebra of class 3 on X, Y: Z = [X,Y], U = [X,Z], V = [Y,Z].
inline LInftyAlgebra free_nilpotent_3() {
  return lie_algebra({"X", "Y", "Z", "U", "V"}, {{0, 1, {{2, 1}}}, {0, 2, {{3, 1}}}, {1, 2, {{4, 1}}}});
}

/// Random L-infinity algebra whose brackets all land in a central subspace
/// with no brackets of its own; every such table satisfies the Jacobi
/// identities.  Generators: a1, a2 (degree -1), b (degree 0), c1 (-1) and
/// c2 (-2) central.  Bracket [a1,a1] and [a1,a1,a1] are zero so that multiples
/// of a1 (plus c1) are Maurer-Cartan.
struct RandomCentral {
  LInftyAlgebra L;
  int a1 = 0, a2 = 1, b = 2, c1 = 3, c2 = 4;
};

inline RandomCentral random_central(std::mt19937_64& rng) {
  RandomCentral r{LInftyAlgebra(make_space({{"a1", -1}, {"a2", -1}, {"b", 0}, {"c1", -1}, {"c2", -2}}))};
  auto q = [&] { return oracle::random_rational(rng, 4); };
  LInftyAlgebra& L = r.L;
  L.set_bracket({0, 1}, {{4, q()}});
  L.set_bracket({1, 1}, {{4, q()}});
  L.set_bracket({0, 2}, {{3, q()}});
  L.set_bracket({1, 2}, {{3, q()}});
  L.set_bracket({0, 1, 1}, {{4, q()}});
  L.set_bracket({0, 0, 1}, {{4, q()}});
  L.set_bracket({1, 1, 1}, {{4, q()}});
  L.set_bracket({0, 1, 2}, {{3, q()}});
  L.set_bracket({1, 1, 2}, {{3, q()}});
  return r;
}

/// Small random algebra of dimension 4 in the same family: a1, a2 (-1),
/// c1 (-1) and c2 (-2).
inline RandomCentral random_central_small(std::mt19937_64& rng) {
  RandomCentral r{LInftyAlgebra(make_space({{"a1", -1}, {"a2", -1}, {"c1", -1}, {"c2", -2}}))};
  r.b = -1;
  r.c1 = 2;
  r.c2 = 3;
  auto q = [&] { return oracle::random_rational(rng, 4); };
  r.L.set_bracket({0, 1}, {{3, q()}});
  r.L.set_bracket({1, 1}, {{3, q()}});
  r.L.set_bracket({0, 1, 1}, {{3, q()}});
  r.L.set_bracket({1, 1, 1}, {{3, q()}});
  return r;
}

/// Lambda(z, w_{m-n}, ..., w_m) with |z| = 2, |w_r| = 2r+1 and dw_r = z^{r+1}.
inline SullivanPresentation cp_target(int n, int m) {
  std::vector<std::string> names{"z"};
  std::vector<int> degrees{2};
  for (int r = m - n; r <= m; ++r) {
    if (r == 0) continue;
    names.push_back("w" + std::to_string(r));
    degrees.push_back(2 * r + 1);
  }
  SullivanPresentation S = SullivanPresentation::make(names, degrees);
  Polynomial z = S.gen(0);
  for (int g = 1; g < S.size(); ++g) {
    Polynomial p = Polynomial::constant(S.ring, 1);
    for (int k = 0; k < (S.degree(g) + 1) / 2; ++k) p = p * z;
    S.d[g] = p;
  }
  return S;
}

/// Every finite non-negatively graded algebra reachable from the corpus:
/// the model-file L's and the degree >= 0 truncations of their twists.
inline std::vector<std::pair<std::string, LInftyAlgebra>> nonnegative_algebras() {
  std::vector<std::pair<std::string, LInftyAlgebra>> out;
  for (const auto& s : specs()) {
    ModelSpec spec = parse(s.text);
    if (!spec.linf) continue;
    Cdga A = build_cdga(spec);
    LInftyAlgebra L = build_linf(spec);
    bool nonneg = true;
    for (int i = 0; i < L.dim(); ++i) nonneg = nonneg && L.graded().degree(i) >= 0;
    if (nonneg && L.dim() > 0) out.emplace_back(s.name + "/L", L);
    LInftyAlgebra T = tensor(A, L);
    for (const auto& mc : spec.mcs) {
      LInftyAlgebra tw = twist(T, McElement::make(T, build_mc(spec, A, L, T, mc.name)));
      LInftyAlgebra tr = truncate(tw, 0).algebra;
      if (tr.dim() > 0) out.emplace_back(s.name + "/" + mc.name, std::move(tr));
    }
  }
  return out;
}

}  // namespace corpus
