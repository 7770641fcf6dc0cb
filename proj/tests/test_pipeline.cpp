#include "corpus.hpp"

#include <gtest/gtest.h>

using namespace linfty;

namespace {

SourcePos error_pos(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.pos();
  }
  ADD_FAILURE() << "no ParseError";
  return {};
}

}  // namespace

TEST(Dsl, ParsesCpModel) {
  ModelSpec spec = parse(corpus::read(corpus::model_path("cp12.lin")));
  Cdga A = build_cdga(spec);
  LInftyAlgebra L = build_linf(spec);
  const GradedSpace& V = L.graded();
  EXPECT_EQ(L.bracket_basis({V.index("alpha"), V.index("alpha"), V.index("alpha")}), (SparseVec{{V.index("beta"), 6}}));
  EXPECT_EQ(L.max_arity(), 3);
  // Q[x]/(x^2) has basis 1, x.
  EXPECT_EQ(A.dim(), 2);
  EXPECT_EQ(tensor(A, L).dim(), A.dim() * L.dim());
  EXPECT_EQ(spec.mcs.size(), 2u);
  EXPECT_EQ(default_mc(parse(builtin_cp_inclusion(1, 2))), "tau");
  EXPECT_THROW(default_mc(spec), ValidationError);
}

TEST(Dsl, ErrorPositions) {
  SourcePos p = error_pos([] { parse("algebra cdga A {\n  gen x : 2\n}\n"); });
  EXPECT_EQ(p.line, 3);
  EXPECT_EQ(p.column, 1);
  p = error_pos([] { parse(corpus::read(std::string(LINFTY_TEST_DATA) + "/bad_degree.lin")); });
  EXPECT_EQ(p.line, 2);
  EXPECT_EQ(p.column, 11);
  p = error_pos([] { parse("algebra linf L { gen a : 1; }\nmc t = 3 a $;"); });
  EXPECT_EQ(p.line, 2);
  EXPECT_EQ(p.column, 12);
  p = error_pos([] { parse("mc tau = 0;\nmc tau = 0;\n"); });
  EXPECT_EQ(p.line, 2);
}

TEST(Dsl, UnknownIdentifiers) {
  ModelSpec spec = parse(corpus::read(std::string(LINFTY_TEST_DATA) + "/unknown_gen.lin"));
  SourcePos p = error_pos([&] { build_linf(spec); });
  EXPECT_EQ(p.line, 3);
  ModelSpec em = parse(corpus::read(corpus::model_path("em.lin")) + "mc bad = y*e1;\n");
  Cdga A = build_cdga(em);
  LInftyAlgebra L = build_linf(em);
  LInftyAlgebra T = tensor(A, L);
  EXPECT_THROW(build_mc(em, A, L, T, "bad"), ParseError);
  EXPECT_THROW(build_mc(em, A, L, T, "missing"), ValidationError);
}

TEST(Dsl, ValidationErrors) {
  EXPECT_THROW(build_linf(parse(corpus::read(std::string(LINFTY_TEST_DATA) + "/degree_mismatch.lin"))), ValidationError);
  EXPECT_THROW(build_cdga(parse("algebra cdga A { gen x : 0; }")), ValidationError);
  EXPECT_THROW(build_cdga(parse("algebra cdga A { gen x : 2; gen x : 2; rel x^2; }")), ParseError);
  // tau = x*alpha over Q[x]/(x^3) has curvature x^2 beta.
  EXPECT_THROW(map_model(parse(corpus::read(std::string(LINFTY_TEST_DATA) + "/not_mc.lin")), "tau"), ValidationError);
}

// Written factor order is normalized with Koszul signs.
TEST(Dsl, KoszulReordering) {
  const std::string text =
      "algebra cdga A { gen y : 3; gen z : 3; gen x : 2; rel x^2; }\n"
      "algebra linf L { gen a : 5; gen b : 1; }\n"
      "mc p = y*z*a;\nmc q = z*y*a;\nmc r = a*z*y;\nmc s = x*b;\nmc t = b*x;\n";
  ModelSpec spec = parse(text);
  Cdga A = build_cdga(spec);
  LInftyAlgebra L = build_linf(spec);
  LInftyAlgebra T = tensor(A, L);
  Element p = build_mc(spec, A, L, T, "p");
  EXPECT_FALSE(p.is_zero());
  EXPECT_EQ(build_mc(spec, A, L, T, "q"), Scalar(-1) * p);
  // a past z*y: (-1)^{5*3} twice, then z*y = -y*z.
  EXPECT_EQ(build_mc(spec, A, L, T, "r"), Scalar(-1) * p);
  EXPECT_EQ(build_mc(spec, A, L, T, "s"), build_mc(spec, A, L, T, "t"));
}

TEST(Dsl, MaxDegreeOption) {
  ModelSpec spec = parse(builtin_cp_inclusion(1, 2) + "option max_degree = 3;\n");
  ASSERT_TRUE(spec.max_degree);
  MappingSpaceReport r = map_model(spec, "tau");
  EXPECT_EQ(r.pi.size(), 4u);
  EXPECT_EQ(r.pi.rbegin()->first, 4);
  EXPECT_EQ(map_model(spec, "tau", {.max_degree = 1}).pi.size(), 2u);
}

TEST(Dsl, PrintRoundTrip) {
  for (const auto& s : corpus::specs()) {
    ModelSpec spec = parse(s.text);
    std::string text;
    if (spec.cdga) text += to_dsl(build_presentation(*spec.cdga), "A");
    if (spec.linf) text += to_dsl(build_linf(spec), "L");
    ModelSpec again = parse(text);
    if (spec.linf) {
      EXPECT_TRUE(build_linf(again) == build_linf(spec)) << s.name << "\n" << text;
    }
    if (spec.cdga) {
      Cdga A = build_cdga(spec), B = build_cdga(again);
      EXPECT_EQ(A.dim(), B.dim()) << s.name;
      EXPECT_EQ(to_dsl(build_presentation(*again.cdga), "A"), to_dsl(build_presentation(*spec.cdga), "A")) << s.name;
    }
  }
}

TEST(Pipeline, CpReportMatchesOracle) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}, {2, 2}}) {
    MappingSpaceReport r = map_model(parse(builtin_cp_inclusion(n, m)), "tau");
    auto h = oracle::cp_homology(n, m);
    for (const auto& [k, dim] : r.pi) {
      auto it = h.find(k - 1);
      EXPECT_EQ(dim, it == h.end() ? 0 : it->second) << n << "," << m << " pi_" << k;
    }
    EXPECT_TRUE(r.mc_verified);
    EXPECT_EQ(r.tensor_dim, (n + 1) * 2);
    EXPECT_EQ(r.max_degree, 2 * r.top_degree + 2);
  }
}

TEST(Pipeline, EilenbergMacLane) {
  MappingSpaceReport r = map_model(parse(corpus::read(corpus::model_path("em.lin"))), "tau");
  auto expected = oracle::tensor_dims({{0, 1}, {2, 1}, {4, 1}}, {{1, 1}, {3, 1}});
  EXPECT_EQ(r.homology_dims, expected);
  // abelian, so nothing is twisted and the Sullivan model is minimal
  EXPECT_TRUE(r.sullivan_minimal);
  EXPECT_TRUE(r.twisted_l1_vanishes);
  EXPECT_NE(builtin_em_target(corpus::truncated_polynomial(2), {1, 3}).find("mc tau = 0;"), std::string::npos);
}

TEST(Pipeline, MinimalityMatchesTwistedDifferential) {
  for (const auto& s : corpus::specs()) {
    ModelSpec spec = parse(s.text);
    if (!spec.linf) continue;
    for (const auto& mc : spec.mcs) {
      MappingSpaceReport r = map_model(spec, mc.name);
      EXPECT_EQ(r.sullivan_minimal, r.twisted_l1_vanishes) << s.name << "/" << mc.name;
      EXPECT_TRUE(minimality_check(r.minimal.model)) << s.name;
    }
  }
}

TEST(Pipeline, HZeroCampbellHausdorff) {
  // No cdga block: A = Q and H_0 is the Heisenberg algebra on 1*X, 1*Y, 1*Z.
  std::string text =
      "algebra linf L { gen X : 0; gen Y : 0; gen Z : 0; bracket [X,Y] = Z; }\nmc zero = 0;\n";
  MappingSpaceReport r = map_model(parse(text), "zero");
  ASSERT_EQ(r.h0.dim(), 3);
  EXPECT_EQ(r.ch_samples.size(), 9u);
  bool found = false;
  for (const auto& c : r.ch_samples) {
    if (c.a == "[1*X]" && c.b == "[1*Y]") {
      EXPECT_EQ(c.product, "[1*X] + [1*Y] + 1/2*[1*Z]");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Pipeline, F0Builtin) {
  ModelSpec spec = parse(builtin_f0_aut(corpus::truncated_polynomial(2)));
  MappingSpaceReport r = map_model(spec, "pi");
  HalperinReport h = halperin_check(corpus::truncated_polynomial(2));
  for (const auto& [n, d] : h.odd_homology) {
    auto it = r.homology_dims.find(n);
    EXPECT_EQ(it == r.homology_dims.end() ? 0 : it->second, d) << n;
  }
  EXPECT_THROW(builtin_f0_aut(corpus::presentation("algebra cdga A { gen y : 3; }")), ValidationError);
}

TEST(Pipeline, BuiltinErrors) {
  EXPECT_THROW(builtin_cp_inclusion(0, 1), ValidationError);
  EXPECT_THROW(builtin_cp_inclusion(2, 1), ValidationError);
}

TEST(Pipeline, JsonIsDeterministic) {
  ModelSpec spec = parse(builtin_cp_inclusion(1, 2));
  const std::string a = to_json(map_model(spec, "tau")).dump(2);
  const std::string b = to_json(map_model(parse(builtin_cp_inclusion(1, 2)), "tau")).dump(2);
  EXPECT_EQ(a, b);
  nlohmann::json j = nlohmann::json::parse(a);
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["pi0"], "MC verification only");
  EXPECT_EQ(j["pi"][1]["k"], 2);
  EXPECT_EQ(j["pi"][1]["dim"], 1);
  EXPECT_NE(to_text(map_model(spec, "tau")).find("pi_2 = 1"), std::string::npos);
}
