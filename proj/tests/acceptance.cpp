// Acceptance checks, one PASS/FAIL line each.  Exit status is the number of
// failures.  Criteria 1-3 drive the CLI binary and read back its JSON.

#include "corpus.hpp"

#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

using namespace linfty;
using nlohmann::json;

namespace {

struct Check {
  std::vector<std::string> failures;
  int count = 0;
  void require(bool ok, const std::string& what) {
    ++count;
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok && failures.size() == 5) failures.push_back("...");
  }
  bool ok() const { return failures.empty(); }
};

json run_cli(const std::string& args) {
  const std::string cmd = std::string(LINFTY_CLI) + " " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw Error("cannot run " + cmd);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  if (pclose(p) != 0) throw Error("non-zero exit from " + cmd);
  return json::parse(out);
}

std::map<int, int> pi_of(const json& j) {
  std::map<int, int> out;
  for (const auto& e : j.at("pi")) out[e.at("k").get<int>()] = e.at("dim").get<int>();
  return out;
}

SullivanPresentation sullivan_from_json(const json& model) {
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (const auto& g : model.at("generators")) {
    names.push_back(g.at("name"));
    degrees.push_back(g.at("degree"));
  }
  SullivanPresentation S = SullivanPresentation::make(names, degrees);
  for (int g = 0; g < S.size(); ++g) {
    for (const auto& term : model.at("generators")[g].at("d")) {
      Polynomial p = Polynomial::constant(S.ring, Scalar(term.at("coefficient").get<std::string>()));
      for (const auto& [name, e] : term.at("monomial").items()) {
        for (int k = 0; k < e.get<int>(); ++k) p = p * S.gen(name);
      }
      S.d[g] += p;
    }
  }
  return S;
}

LInftyAlgebra twisted(const std::string& text, const std::string& mc) {
  ModelSpec spec = parse(text);
  Cdga A = build_cdga(spec);
  LInftyAlgebra L = build_linf(spec);
  LInftyAlgebra T = tensor(A, L);
  return twist(T, McElement::make(T, build_mc(spec, A, L, T, mc)));
}

std::map<int, int> dense_oracle(const LInftyAlgebra& L) {
  const int n = L.dim();
  oracle::DenseQ d(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n), 0));
  std::vector<int> degrees;
  for (int j = 0; j < n; ++j) {
    degrees.push_back(L.graded().degree(j));
    for (const auto& [i, c] : L.bracket_basis({j})) d[i][j] = c;
  }
  return oracle::homology_dims(degrees, d);
}

int at(const std::map<int, int>& m, int k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

std::string pair_name(int n, int m) { return "(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

bool has_axiom(const std::vector<Violation>& v, const std::string& axiom) {
  for (const auto& x : v) {
    if (x.axiom == axiom) return true;
  }
  return false;
}

int idx(const Cdga& A, const std::string& name) { return A.space()->index(name); }

// ---------------------------------------------------------------------------

void cp_strict(Check& c) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}}) {
    const std::string tag = pair_name(n, m);
    json j = run_cli("example cp " + std::to_string(n) + " " + std::to_string(m) + " --json");
    auto pi = pi_of(j);
    c.require(pi.rbegin()->first >= 2 * m + 2, tag + " pi not reported up to 2m+2");
    for (int k = 1; k <= 2 * m + 2; ++k) {
      int expected = 0;
      if (k == 2) expected = 1;
      if (k % 2 == 1 && k >= 3) {
        const int r = (k - 1) / 2;
        expected = (r >= m - n && r <= m) ? 1 : 0;
      }
      c.require(at(pi, k) == expected, tag + " pi_" + std::to_string(k));
    }
    SullivanPresentation M = sullivan_from_json(j.at("minimal_model").at("model"));
    SullivanPresentation target = corpus::cp_target(n, m);
    c.require(minimality_check(M), tag + " model not minimal");
    auto eq = diagonal_equivalence(M, target);
    c.require(eq.has_value() && verify_rescaling(M, target, *eq), tag + " no diagonal rescaling to the target");
    for (int g = 0; g < M.size(); ++g) {
      if (M.degree(g) % 2 == 0) continue;
      const int r = (M.degree(g) - 1) / 2;
      const auto& terms = M.d[g].terms();
      bool shape = terms.size() == 1 && terms.begin()->second != 0;
      if (shape) {
        int zdeg = 0;
        for (int e : terms.begin()->first) zdeg += e;
        shape = zdeg == r + 1;
      }
      c.require(shape, tag + " dw_" + std::to_string(r) + " is not c z^{r+1}");
    }
  }
}

void cp_self(Check& c) {
  for (int n = 1; n <= 3; ++n) {
    const std::string tag = pair_name(n, n);
    json j = run_cli("example cp " + std::to_string(n) + " " + std::to_string(n) + " --json");
    auto pi = pi_of(j);
    for (const auto& [k, d] : pi) {
      const bool odd_hit = k % 2 == 1 && k >= 3 && k <= 2 * n + 1;
      c.require(d == (odd_hit ? 1 : 0), tag + " pi_" + std::to_string(k));
    }
    SullivanPresentation M = sullivan_from_json(j.at("minimal_model").at("model"));
    std::vector<int> degrees;
    for (int g = 0; g < M.size(); ++g) {
      degrees.push_back(M.degree(g));
      c.require(M.d[g].is_zero(), tag + " d nonzero on " + M.name(g));
    }
    std::sort(degrees.begin(), degrees.end());
    std::vector<int> expected;
    for (int k = 3; k <= 2 * n + 1; k += 2) expected.push_back(k);
    c.require(degrees == expected, tag + " generator degrees");
  }
}

void eilenberg_maclane(Check& c) {
  json j = run_cli("homotopy " + corpus::model_path("em.lin") + " --mc tau --json -");
  auto pi = pi_of(j);
  // H^*(X) = Q[x]/(x^3) in degrees 0, 2, 4; L in degrees 1, 3.
  auto expected = oracle::tensor_dims({{0, 1}, {2, 1}, {4, 1}}, {{1, 1}, {3, 1}});
  for (const auto& [k, d] : pi) c.require(d == at(expected, k - 1), "pi_" + std::to_string(k));
  for (const auto& [n, d] : expected) {
    if (n >= 0) c.require(pi.count(n + 1) && pi.at(n + 1) == d, "degree " + std::to_string(n) + " not reported");
  }
  for (const auto& h : j.at("homology")) {
    c.require(h.at("dim").get<int>() == at(expected, h.at("degree").get<int>()), "homology degree mismatch");
  }
}

void axioms(Check& c) {
  for (const auto& s : corpus::specs()) {
    ModelSpec spec = parse(s.text);
    Cdga A = build_cdga(spec);
    c.require(check_cdga(A).empty(), s.name + " cdga axioms");
    if (!spec.linf) continue;
    LInftyAlgebra L = build_linf(spec);
    c.require(check_linfty(L).empty(), s.name + " L axioms");
    LInftyAlgebra T = tensor(A, L);
    c.require(check_linfty(T).empty(), s.name + " A (x) L axioms");
    for (const auto& mc : spec.mcs) {
      LInftyAlgebra tw = twist(T, McElement::make(T, build_mc(spec, A, L, T, mc.name)));
      c.require(check_linfty(tw).empty(), s.name + "/" + mc.name + " twisted axioms");
    }
  }

  // Ten single-entry mutations.
  auto cdga_of = [](const std::string& text) { return build_quotient(corpus::presentation(text)); };
  const std::string xu = "algebra cdga A { gen x : 2; gen u : 3; rel x^3; d u = x^2; }";
  const std::string s2 = "algebra cdga S { gen v : 2; gen w : 3; d w = v^2; cap 9; }";
  {
    Cdga A = cdga_of(xu);
    A.set_mult(idx(A, "x"), idx(A, "x*u"), {{idx(A, "x^2*u"), 2}});
    c.require(has_axiom(check_cdga(A), "commutativity"), "mutation: commutativity");
  }
  {
    Cdga A = build_quotient(corpus::truncated_polynomial(2));
    A.set_mult(A.unit(), idx(A, "x"), {});
    c.require(has_axiom(check_cdga(A), "unit"), "mutation: unit");
  }
  {
    Cdga A = cdga_of(xu);
    A.set_diff(idx(A, "x"), {{idx(A, "u"), 1}});
    c.require(has_axiom(check_cdga(A), "d^2"), "mutation: d^2");
  }
  {
    Cdga A = cdga_of(s2);
    A.set_mult(idx(A, "v"), idx(A, "v^2"), {{idx(A, "v^3"), 2}});
    A.set_mult(idx(A, "v^2"), idx(A, "v"), {{idx(A, "v^3"), 2}});
    c.require(has_axiom(check_cdga(A), "associativity"), "mutation: associativity");
  }
  {
    Cdga A = cdga_of(s2);
    A.set_diff(idx(A, "v*w"), {{idx(A, "v^3"), 2}});
    c.require(has_axiom(check_cdga(A), "leibniz"), "mutation: leibniz");
  }
  {
    Cdga A = cdga_of(xu);
    A.set_mult(idx(A, "x"), idx(A, "x"), {{idx(A, "u"), 1}});
    c.require(has_axiom(check_cdga(A), "mult degree"), "mutation: cdga degree");
  }
  {
    LInftyAlgebra L = build_linf(parse(builtin_cp_inclusion(1, 2)));
    L.set_canonical({0, 0, 0}, {{0, 6}});
    c.require(has_axiom(check_linfty(L), "degree r-2"), "mutation: bracket degree");
  }
  {
    LInftyAlgebra h = corpus::heisenberg();
    h.set_canonical({1, 0}, {{2, 1}});
    c.require(has_axiom(check_linfty(h), "anti-symmetry"), "mutation: anti-symmetry");
  }
  {
    LInftyAlgebra h = corpus::heisenberg();
    h.set_bracket({0, 2}, {{0, 1}});
    c.require(has_axiom(check_linfty(h), "jacobi"), "mutation: jacobi");
  }
  {
    Cdga A = cdga_of(xu);
    LInftyAlgebra T = tensor(A, corpus::heisenberg());
    const int a = T.graded().index("1*X"), b = T.graded().index("u*Y");
    T.set_bracket({a, b}, scaled(T.bracket_basis({a, b}), 2));
    c.require(has_axiom(check_linfty(T), "jacobi"), "mutation: tensor bracket");
  }

  for (const auto& [name, L] : corpus::nonnegative_algebras()) {
    c.require(verify_d_squared(ce_construct(L)).empty(), name + " CE d^2");
  }
}

void translation(Check& c) {
  std::mt19937_64 rng(20240601);
  for (int alg = 0; alg < 5; ++alg) {
    auto r = corpus::random_central(rng);
    c.require(r.L.dim() <= 6 && check_linfty(r.L).empty() && nilpotency_class(r.L).has_value(), "random algebra");
    Element tau = Element::basis(r.L.space(), r.a1, oracle::random_rational(rng)) +
                  Element::basis(r.L.space(), r.c1, oracle::random_rational(rng));
    McElement mc = McElement::make(r.L, tau);
    LInftyAlgebra tw = twist(r.L, mc);
    auto deg = r.L.graded().indices_in_degree(-1);
    for (int k = 0; k < 100; ++k) {
      SparseVec v;
      for (int i : deg) add_term(v, i, oracle::random_rational(rng));
      Element sigma(r.L.space(), v);
      // every fourth sample is Maurer-Cartan in the twisted algebra
      if (k % 4 == 0) sigma = Element::basis(r.L.space(), r.c1, oracle::random_rational(rng)) - Scalar(k % 8 == 0) * tau;
      Element lhs = curvature(tw, sigma), rhs = curvature(r.L, sigma + tau);
      c.require(lhs.is_zero() == rhs.is_zero() && lhs == rhs, "random sigma");
    }
  }
  // Both sides are polynomials of degree <= max arity in sigma; agreement on
  // the grid {0..d}^k is agreement of coefficients.
  auto r = corpus::random_central_small(rng);
  c.require(r.L.dim() <= 4, "symbolic case dimension");
  McElement mc = McElement::make(r.L, Element::basis(r.L.space(), r.a1, rational(2, 3)));
  LInftyAlgebra tw = twist(r.L, mc);
  auto deg = r.L.graded().indices_in_degree(-1);
  const int k = static_cast<int>(deg.size()), bound = r.L.max_arity();
  std::vector<int> point(static_cast<std::size_t>(k), 0);
  while (true) {
    SparseVec v;
    for (int j = 0; j < k; ++j) add_term(v, deg[j], point[j]);
    Element sigma(r.L.space(), v);
    c.require(curvature(tw, sigma) == curvature(r.L, sigma + mc.value()), "symbolic grid point");
    int j = 0;
    while (j < k && ++point[j] > bound) point[j++] = 0;
    if (j == k) break;
  }
}

void nerve(Check& c) {
  for (int n = 1; n <= 4; ++n) {
    const PolyForm omega = top_form(n - 1);
    for (int r = 0; r <= n; ++r) {
      PolyForm w = omitted_form(n, {r});
      for (int i = 0; i <= n; ++i) {
        c.require(i == r ? face(i, w) == omega : face(i, w).is_zero(), "face of omitted form");
      }
      c.require(derham_d(w) == Scalar(parity_sign(r)) * top_form(n), "d of omitted form");
    }
  }
  for (const auto& s : corpus::specs()) {
    ModelSpec spec = parse(s.text);
    if (!spec.linf) continue;
    Cdga A = build_cdga(spec);
    LInftyAlgebra L = build_linf(spec);
    LInftyAlgebra T = tensor(A, L);
    for (const auto& mc : spec.mcs) {
      McElement tau = McElement::make(T, build_mc(spec, A, L, T, mc.name));
      HomologyReport H = homology(twist(T, tau));
      for (const auto& [deg, hd] : H.degrees()) {
        if (deg < 0) continue;
        for (int k = 0; k < hd.dim(); ++k) {
          GSimplex b = b_simplex(T, tau, H.representative(deg, k));
          c.require(mc_simplex_check(T, b), s.name + " b_simplex not MC");
          GSimplex base = GSimplex::constant(deg, tau.value());
          for (int i = 0; i <= deg + 1; ++i) c.require(face(i, b) == base, s.name + " b_simplex face");
        }
      }
    }
  }
}

void campbell_hausdorff(Check& c) {
  LInftyAlgebra h = corpus::heisenberg();
  Element X = Element::named(h.space(), "X"), Y = Element::named(h.space(), "Y"), Z = Element::named(h.space(), "Z");
  c.require(ch_product(h, X, Y) == X + Y + rational(1, 2) * Z, "Heisenberg X.Y");

  LInftyAlgebra g = corpus::free_nilpotent_3();
  auto element = [&](const std::vector<Scalar>& v) {
    SparseVec s;
    for (std::size_t i = 0; i < v.size(); ++i) add_term(s, static_cast<int>(i), v[i]);
    return Element(g.space(), s);
  };
  std::mt19937_64 rng(1234);
  for (int k = 0; k < 50; ++k) {
    std::vector<Scalar> a(5), b(5);
    for (auto& v : a) v = oracle::random_rational(rng);
    for (auto& v : b) v = oracle::random_rational(rng);
    c.require(ch_product(g, element(a), element(b)) == element(oracle::ch_free(a, b)), "matrix log oracle");
  }
  std::vector<Element> grid;
  for (int x : {-1, 2}) {
    for (int y : {0, 1}) {
      for (int z : {0, 2}) grid.push_back(element({x, y, rational(z, 3), rational(-z, 2), z - y}));
    }
  }
  Element zero(g.space());
  for (const auto& a : grid) {
    c.require(ch_product(g, a, zero) == a && ch_product(g, zero, a) == a, "identity");
    c.require(ch_product(g, a, Scalar(-1) * a).is_zero(), "inverse");
    for (const auto& b : grid) {
      Element ab = ch_product(g, a, b);
      for (const auto& d : grid) c.require(ch_product(g, ab, d) == ch_product(g, a, ch_product(g, b, d)), "associativity");
    }
  }
}

void halperin(Check& c) {
  std::vector<std::pair<std::string, Presentation>> cases;
  for (int n = 1; n <= 3; ++n) cases.emplace_back("x^" + std::to_string(n + 1), corpus::truncated_polynomial(n));
  cases.emplace_back("a^2,b^2", corpus::two_squares());
  for (const auto& [name, p] : cases) {
    HalperinReport r = halperin_check(p);
    c.require(r.holds, name + " does not hold");
    c.require(r.isomorphism_verified, name + " isomorphism");
    for (const auto& [n, ker] : r.kernel_dims) {
      const int k = -n - 1;
      c.require(ker == static_cast<int>(derivations(p, k).size()), name + " ker vs Der^" + std::to_string(k));
    }
  }
}

void round_trip(Check& c) {
  std::vector<std::pair<std::string, LInftyAlgebra>> algebras = corpus::nonnegative_algebras();
  for (int n = 1; n <= 3; ++n) algebras.emplace_back("halperin", halperin_data(corpus::truncated_polynomial(n)).L);
  for (const auto& [name, L] : algebras) {
    LInftyAlgebra back = sullivan_to_linfty(ce_construct(L));
    c.require(back == L && back.tables() == L.tables(), name);
  }
}

void homology_oracle(Check& c) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}, {1, 1}, {2, 2}, {3, 3}}) {
    LInftyAlgebra tw = twisted(builtin_cp_inclusion(n, m), "tau");
    auto lib = homology(tw).dims();
    c.require(lib == dense_oracle(tw), pair_name(n, m) + " dense elimination");
    c.require(lib == oracle::cp_homology(n, m), pair_name(n, m) + " closed form");
  }
  LInftyAlgebra em = twisted(corpus::read(corpus::model_path("em.lin")), "tau");
  c.require(homology(em).dims() == dense_oracle(em), "EM dense elimination");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"CP inclusions m > n", cp_strict},
      {"self-maps m = n", cp_self},
      {"Eilenberg-MacLane targets", eilenberg_maclane},
      {"axiom suites, mutations, CE d^2", axioms},
      {"translation lemma", translation},
      {"nerve identities and b-simplices", nerve},
      {"Campbell-Hausdorff", campbell_hausdorff},
      {"Halperin criterion", halperin},
      {"CE round trip", round_trip},
      {"homology oracle", homology_oracle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    std::string error;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool ok = c.ok() && error.empty() && c.count > 0;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " (" << c.count << " checks)";
    if (!error.empty()) std::cout << " exception: " << error;
    for (const auto& f : c.failures) std::cout << " [" << f << "]";
    std::cout << "\n";
  }
  return failed;
}
