#include <gtest/gtest.h>

#include "softdd/designer.hpp"
#include "softdd/table.hpp"

using namespace softdd;

TEST(Designer, SpecCounts) {
  DesignSpec s{DesignFamily::S, 1, 0};
  EXPECT_EQ(s.coefficient_count(), 3);
  DesignSpec q{DesignFamily::Q, 2, 1};
  EXPECT_EQ(q.coefficient_count(), 6);
  EXPECT_EQ(q.name(), "Q2");
  EXPECT_THROW((DesignSpec{DesignFamily::S, 0, 0}.validate()), ValidationError);
}

TEST(Designer, S1) {
  const DesignResult r = design({DesignFamily::S, 1, 0});
  ASSERT_EQ(r.coeffs.size(), 3u);
  EXPECT_LT(r.max_residual, 1e-10);
  const ShapeParams p = compute_params(r.shape);
  EXPECT_LT(std::abs(p.s), 1e-9);
  EXPECT_LT(std::abs(p.cos_avg), 1e-9);
  EXPECT_NEAR(r.shape.phase(1.0), pi, 1e-10);
  EXPECT_NEAR(r.shape.amplitude(0.0), 0.0, 1e-10);
  EXPECT_NEAR(r.coeffs[1], 1.187302, 1e-5);
}

TEST(Designer, Q1) {
  const DesignResult r = design({DesignFamily::Q, 1, 0});
  ASSERT_EQ(r.coeffs.size(), 4u);
  EXPECT_LT(r.max_residual, 1e-10);
  EXPECT_LT(std::abs(r.achieved.s), 1e-9);
  EXPECT_LT(std::abs(r.achieved.alpha), 1e-9);
  EXPECT_LT(std::abs(r.achieved.zeta - 0.239889), 0.01);
}

TEST(Designer, HigherL) {
  for (DesignFamily f : {DesignFamily::S, DesignFamily::Q}) {
    const DesignResult r = design({f, 2, 0});
    EXPECT_LT(r.max_residual, 1e-10) << r.spec.name();
    EXPECT_NEAR(r.shape.amplitude(0.0), 0.0, 1e-9);
  }
}

TEST(Designer, OddEndpointDerivativesVanish) {
  const DesignResult r = design({DesignFamily::Q, 2, 0});
  for (int l : {1, 3, 5})
    EXPECT_LT(std::abs(fourier_endpoint_derivative(r.coeffs, l)), 1e-9);
  EXPECT_LT(std::abs(fourier_endpoint_derivative(r.coeffs, 2)), 1e-10);
}

TEST(Designer, QuadratureRefinementStable) {
  DesignOptions coarse, fine;
  fine.n_quad = 2 * coarse.n_quad;
  const DesignResult a = design({DesignFamily::Q, 1, 0}, coarse);
  const DesignResult b = design({DesignFamily::Q, 1, 0}, fine);
  for (std::size_t m = 0; m < a.coeffs.size(); ++m)
    EXPECT_NEAR(a.coeffs[m], b.coeffs[m], 1e-8);
}

TEST(Designer, ExtraTermsLowerPeak) {
  const DesignResult base = design({DesignFamily::S, 1, 0});
  const DesignResult wide = design({DesignFamily::S, 1, 1});
  ASSERT_EQ(wide.coeffs.size(), 4u);
  EXPECT_LT(wide.max_residual, 1e-10);
  EXPECT_LE(wide.peak_amplitude, base.peak_amplitude + 1e-9);
}

TEST(Designer, Deterministic) {
  const DesignResult a = design({DesignFamily::S, 2, 0});
  const DesignResult b = design({DesignFamily::S, 2, 0});
  EXPECT_EQ(a.coeffs, b.coeffs);
}

TEST(Designer, ResolveNames) {
  EXPECT_EQ(resolve_shape("Q1").kind(), ShapeKind::fourier);
  EXPECT_EQ(resolve_shape("gaussian:0.1").kind(), ShapeKind::gaussian);
  EXPECT_THROW(resolve_shape("S9"), ValidationError);
  EXPECT_THROW(resolve_shape("Sx"), ValidationError);
}

TEST(Designer, TableReport) {
  const auto entries = table_entries();
  ASSERT_EQ(entries.size(), 9u);
  for (const auto& e : entries)
    EXPECT_FALSE(e.zeta_flag()) << e.name;
  const std::string text = table_report();
  EXPECT_NE(text.find("G0.05"), std::string::npos);
  EXPECT_NE(text.find("Q2"), std::string::npos);
}
