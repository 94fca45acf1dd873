#include <gtest/gtest.h>

#include "softdd/shapes.hpp"
#include "softdd/table.hpp"

using namespace softdd;

TEST(Shapes, GaussianPeak) {
  const PulseShape g = PulseShape::gaussian(0.05);
  const double tau = 0.05;
  const double nominal = std::sqrt(pi) / tau;
  // truncation rescale is ~1 + 1e-87 at this width
  EXPECT_NEAR(g.amplitude(0.5) / nominal, 1.0, 1e-12);
}

TEST(Shapes, FourierConstant) {
  const PulseShape f = PulseShape::fourier({0.5});
  EXPECT_NEAR(f.amplitude(0.1), two_pi * 0.5, 1e-14);
  EXPECT_NEAR(f.amplitude(0.9), two_pi * 0.5, 1e-14);
}

TEST(Shapes, HermitianPeak) {
  const PulseShape h = PulseShape::hermitian(0.05);
  const PulseShape g = PulseShape::gaussian(0.05);
  const double expected = g.amplitude(0.5) / (1.0 - kHermitianGamma / 2.0);
  EXPECT_NEAR(h.amplitude(0.5) / expected, 1.0, 1e-9);
}

TEST(Shapes, AreaAndSymmetry) {
  for (const PulseShape& s :
       {PulseShape::gaussian(0.05), PulseShape::gaussian(0.1), PulseShape::hermitian(0.1),
        PulseShape::fourier({0.5, 1.0, 0.5})}) {
    EXPECT_NEAR(s.phase(1.0), pi, 1e-10) << s.label();
    EXPECT_NEAR(s.phase(0.5), pi / 2, 1e-10) << s.label();
    for (double t : {0.05, 0.2, 0.37})
      EXPECT_NEAR(s.amplitude(t), s.amplitude(1.0 - t), 1e-9 * s.peak_amplitude()) << s.label();
  }
}

TEST(Shapes, PhaseIsPrimitiveOfAmplitude) {
  for (const PulseShape& s : {PulseShape::fourier({0.5, 0.9, 0.4, -0.1}),
                              PulseShape::hermitian(0.1), PulseShape::gaussian(0.1)}) {
    const int n = 2000;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = 0.3 * k / n, b = 0.3 * (k + 1) / n;
      acc += (b - a) / 6.0 * (s.amplitude(a) + 4.0 * s.amplitude(0.5 * (a + b)) + s.amplitude(b));
    }
    EXPECT_NEAR(s.phase(0.3), acc, 1e-10) << s.label();
  }
}

TEST(Shapes, DeltaPhaseStep) {
  const PulseShape d = PulseShape::delta();
  EXPECT_EQ(d.phase(0.3), 0.0);
  EXPECT_EQ(d.phase(0.7), pi);
  EXPECT_THROW(d.amplitude(0.5), ValidationError);
}

TEST(Shapes, RangeChecked) {
  const PulseShape g = PulseShape::gaussian(0.1);
  EXPECT_THROW(g.amplitude(-0.1), ValidationError);
  EXPECT_THROW(g.phase(1.2), ValidationError);
}

TEST(Shapes, DeltaRow) {
  const ShapeParams p = compute_params(PulseShape::delta());
  EXPECT_EQ(p.s, 0.0);
  EXPECT_EQ(p.alpha, 0.0);
  EXPECT_EQ(p.zeta, 0.25);
}

TEST(Shapes, GaussianRows) {
  const ShapeParams g10 = compute_params(PulseShape::gaussian(0.10));
  EXPECT_NEAR(g10.s, 0.148979, 1e-6);
  EXPECT_NEAR(g10.alpha / 2, 0.0653938, 1e-6);
  EXPECT_NEAR(g10.zeta, 0.247905, 1e-6);
  const ShapeParams g05 = compute_params(PulseShape::gaussian(0.05));
  EXPECT_NEAR(g05.s, 1.5 * 0.05, 1e-3);
  EXPECT_NEAR(g05.s, 0.0744895, 1e-6);
}

TEST(Shapes, HermitianRows) {
  const ShapeParams h05 = compute_params(PulseShape::hermitian(0.05));
  EXPECT_LT(std::abs(h05.s), 1e-6);
  EXPECT_NEAR(h05.alpha / 2, 0.00153849, 1e-6);
  EXPECT_NEAR(h05.zeta, 0.249647, 1e-6);
}

TEST(Shapes, CosineAverageVanishes) {
  for (const PulseShape& s : {PulseShape::gaussian(0.05), PulseShape::hermitian(0.1),
                              PulseShape::fourier({0.5, 0.8, 0.3})})
    EXPECT_LT(std::abs(compute_params(s).cos_avg), 1e-9) << s.label();
}

TEST(Shapes, GaussianApproachesDelta) {
  double prev_s = 1.0, prev_a = 1.0;
  for (double r : {0.1, 0.08, 0.05, 0.03, 0.02}) {
    const ShapeParams p = compute_params(PulseShape::gaussian(r), 8192);
    EXPECT_LT(p.s, prev_s);
    EXPECT_LT(p.alpha, prev_a);
    EXPECT_LT(std::abs(p.zeta - 0.25), 0.003);
    prev_s = p.s;
    prev_a = p.alpha;
  }
}

TEST(Shapes, NegatedFlipsOddParams) {
  const ShapeParams p = compute_params(PulseShape::gaussian(0.1));
  const ShapeParams n = negated(p);
  EXPECT_EQ(n.s, -p.s);
  EXPECT_EQ(n.alpha, -p.alpha);
  EXPECT_EQ(n.zeta, p.zeta);
}

TEST(Shapes, HermitianGammaRecovery) {
  EXPECT_NEAR(hermitian_gamma_for_zero_s(0.05), kHermitianGamma, 1e-6);
}

TEST(Shapes, TextRoundTrip) {
  for (const char* text : {"kind=gaussian width=0.1", "kind=fourier coeffs=0.5,1,0.5",
                           "kind=hermitian width=0.05", "kind=delta"}) {
    const PulseShape a = parse_shape(text);
    const PulseShape b = parse_shape(to_text(a));
    EXPECT_EQ(to_text(a), to_text(b));
  }
  EXPECT_EQ(parse_shape("gaussian:0.10").width_ratio(), 0.10);
  EXPECT_EQ(parse_shape("fourier:0.5,1,0.5").coeffs().size(), 3u);
  EXPECT_THROW(parse_shape("kind=square"), ValidationError);
  EXPECT_THROW(parse_shape("gaussian:-1"), ValidationError);
  EXPECT_THROW(compute_params(PulseShape::gaussian(0.1), 32), ValidationError);
}

TEST(Shapes, ReferenceTable) {
  ASSERT_TRUE(reference_row("G0.05"));
  EXPECT_EQ(reference_row("G0.05")->s, 0.0744895);
  EXPECT_FALSE(reference_row("nope"));
}
