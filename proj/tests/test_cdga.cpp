#include "corpus.hpp"

#include <gtest/gtest.h>

using namespace linfty;

namespace {

bool has_axiom(const std::vector<Violation>& v, const std::string& axiom) {
  for (const auto& x : v) {
    if (x.axiom == axiom) return true;
  }
  return false;
}

int idx(const Cdga& A, const std::string& name) { return A.space()->index(name); }

}  // namespace

TEST(Cdga, TruncatedPolynomial) {
  Cdga A = build_quotient(corpus::truncated_polynomial(2));
  ASSERT_EQ(A.dim(), 3);
  EXPECT_TRUE(A.closed());
  EXPECT_EQ(A.top_degree(), 4);
  const int x = idx(A, "x"), x2 = idx(A, "x^2");
  EXPECT_EQ(A.mult(x, x), (SparseVec{{x2, 1}}));
  EXPECT_TRUE(A.mult(x, x2).empty());
  EXPECT_TRUE(check_cdga(A).empty());
}

TEST(Cdga, ExteriorGenerator) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga E { gen y : 3; }"));
  ASSERT_EQ(A.dim(), 2);
  const int y = idx(A, "y");
  EXPECT_TRUE(A.mult(y, y).empty());
  EXPECT_TRUE(A.closed());
  EXPECT_TRUE(check_cdga(A).empty());
}

TEST(Cdga, DifferentialWithCap) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga S { gen x : 2; gen y : 5; d y = x^3; cap 10; }"));
  EXPECT_FALSE(A.closed());
  const int y = idx(A, "y"), x3 = idx(A, "x^3");
  EXPECT_EQ(A.diff(y), (SparseVec{{x3, 1}}));
  // d(x^2 y) = x^5 sits at degree 10 = cap.
  EXPECT_EQ(A.diff(idx(A, "x^2*y")), (SparseVec{{idx(A, "x^5"), 1}}));
  // products past the cap are not silently zero
  EXPECT_THROW(A.mult(idx(A, "x^5"), idx(A, "x")), OverflowError);
  EXPECT_TRUE(check_cdga(A).empty());
}

TEST(Cdga, Reduce) {
  Presentation p = corpus::two_squares();
  Cdga A = build_quotient(p);
  EXPECT_EQ(A.dim(), 4);
  RingRef R = p.ring();
  Polynomial a = Polynomial::generator(R, 0), b = Polynomial::generator(R, 1);
  EXPECT_TRUE(A.reduce(a * a + b * b).empty());
  EXPECT_EQ(A.reduce(Scalar(3) * (a * b)), (SparseVec{{idx(A, "a*b"), 3}}));
}

TEST(Cdga, RejectsBadInput) {
  EXPECT_THROW(build_quotient(corpus::presentation("algebra cdga A { gen x : 2; d x = x^2; }")), ValidationError);
  EXPECT_THROW(build_quotient(corpus::presentation("algebra cdga A { gen x : 2; }")), ValidationError);
}

TEST(Cdga, CorpusSatisfiesAxioms) {
  for (const auto& s : corpus::specs()) {
    ModelSpec spec = parse(s.text);
    EXPECT_TRUE(check_cdga(build_cdga(spec)).empty()) << s.name;
  }
}

// Each single-entry mutation of a valid table must be caught.
TEST(CdgaMutation, Commutativity) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga A { gen x : 2; gen u : 3; rel x^3; d u = x^2; }"));
  ASSERT_TRUE(check_cdga(A).empty());
  A.set_mult(idx(A, "x"), idx(A, "x*u"), {{idx(A, "x^2*u"), 2}});
  EXPECT_TRUE(has_axiom(check_cdga(A), "commutativity"));
}

TEST(CdgaMutation, Unit) {
  Cdga A = build_quotient(corpus::truncated_polynomial(2));
  A.set_mult(A.unit(), idx(A, "x"), {});
  EXPECT_TRUE(has_axiom(check_cdga(A), "unit"));
}

TEST(CdgaMutation, DSquared) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga A { gen x : 2; gen u : 3; rel x^3; d u = x^2; }"));
  A.set_diff(idx(A, "x"), {{idx(A, "u"), 1}});
  EXPECT_TRUE(has_axiom(check_cdga(A), "d^2"));
}

TEST(CdgaMutation, Degree) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga A { gen x : 2; gen u : 3; rel x^3; d u = x^2; }"));
  A.set_mult(idx(A, "x"), idx(A, "x"), {{idx(A, "u"), 1}});
  EXPECT_TRUE(has_axiom(check_cdga(A), "mult degree"));
}

TEST(CdgaMutation, Associativity) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga S { gen v : 2; gen w : 3; d w = v^2; cap 9; }"));
  const int v = idx(A, "v"), v2 = idx(A, "v^2"), v3 = idx(A, "v^3");
  A.set_mult(v, v2, {{v3, 2}});
  A.set_mult(v2, v, {{v3, 2}});
  EXPECT_TRUE(has_axiom(check_cdga(A), "associativity"));
}

TEST(CdgaMutation, Leibniz) {
  Cdga A = build_quotient(corpus::presentation("algebra cdga S { gen v : 2; gen w : 3; d w = v^2; cap 9; }"));
  A.set_diff(idx(A, "v*w"), {{idx(A, "v^3"), 2}});
  EXPECT_TRUE(has_axiom(check_cdga(A), "leibniz"));
}
