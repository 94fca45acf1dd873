#include <gtest/gtest.h>

#include <sstream>

#include "softdd/designer.hpp"
#include "softdd/metrics.hpp"
#include "softdd/order.hpp"

using namespace softdd;

namespace {

EvolutionTrace jc_trace(const std::string& seq, const PulseShape& shape, double wr, double g,
                        int n_max, int periods, int grid = 10) {
  ModelParams m;
  m.omega_r = wr;
  m.g = g;
  m.n_max = n_max;
  return run_trace(jaynes_cummings(m), ControlSchedule{parse_sequence(seq), shape}, periods,
                   BlochGrid(grid).states());
}

} // namespace

TEST(Metrics, BlochGridStructure) {
  const BlochGrid g(50);
  ASSERT_EQ(g.size(), 56u);
  for (const auto& s : g.states())
    EXPECT_NEAR(s.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(g.states()[0](0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(g.states()[1](1)), 1.0, 1e-15);
  const BlochGrid small(10);
  for (std::size_t i = 0; i < small.size(); ++i)
    EXPECT_LT((small.states()[i] - g.states()[i]).norm(), 1e-15);
  EXPECT_EQ(BlochGrid(0).size(), 6u);
  EXPECT_THROW(BlochGrid(-1), ValidationError);
}

TEST(Metrics, InitialSampleIsIdeal) {
  const auto tr = jc_trace("4p", PulseShape::gaussian(0.1), 0.0, 0.1, 4, 3);
  EXPECT_NEAR(fidelity_min(tr)[0], 1.0, 1e-15);
  EXPECT_EQ(quanta_max(tr)[0], 0.0);
  EXPECT_EQ(leakage_max(tr)[0], 0.0);
}

TEST(Metrics, DecoupledQubit) {
  const auto tr = jc_trace("4p", PulseShape::gaussian(0.1), 0.117, 0.0, 3, 10);
  for (double f : fidelity_min(tr))
    EXPECT_NEAR(f, 1.0, 1e-12);
  for (double n : quanta_max(tr))
    EXPECT_NEAR(n, 0.0, 1e-14);
}

TEST(Metrics, Bounds) {
  const auto tr = jc_trace("xbarx", PulseShape::gaussian(0.1), 0.0, 0.3, 4, 20);
  for (double f : fidelity_min(tr)) {
    EXPECT_GE(f, -1e-12);
    EXPECT_LE(f, 1.0 + 1e-12);
  }
  for (double n : quanta_max(tr)) {
    EXPECT_GE(n, -1e-12);
    EXPECT_LE(n, 4.0 + 1e-12);
  }
}

TEST(Metrics, TwoLevelOscillatorBound) {
  const auto tr = jc_trace("xbarx", PulseShape::gaussian(0.1), 0.0, 0.5, 1, 20);
  for (double n : quanta_max(tr))
    EXPECT_LE(n, 1.0 + 1e-12);
}

TEST(Metrics, GridRefinementMonotone) {
  const PulseShape shape = PulseShape::gaussian(0.1);
  const auto coarse = jc_trace("4p", shape, 0.0, 0.1, 4, 20, 5);
  const auto fine = jc_trace("4p", shape, 0.0, 0.1, 4, 20, 40);
  const auto fc = fidelity_min(coarse), ff = fidelity_min(fine);
  const auto nc = quanta_max(coarse), nf = quanta_max(fine);
  for (std::size_t k = 0; k < fc.size(); ++k) {
    EXPECT_LE(ff[k], fc[k] + 1e-15);
    EXPECT_GE(nf[k], nc[k] - 1e-15);
  }
}

TEST(Metrics, ResonantFourPHeats) {
  const auto tr = jc_trace("4p", PulseShape::gaussian(0.1), 0.0, 0.1, 8, 40);
  const auto n = quanta_max(tr);
  EXPECT_GT(n[1], 0.1);
  EXPECT_GT(n.back(), 1.0);
  EXPECT_LT(fidelity_min(tr).back(), 0.99);
}

TEST(Metrics, MissingStates) {
  EvolutionTrace empty;
  EXPECT_THROW(fidelity_min(empty), ValidationError);
  EXPECT_THROW(quanta_max(empty), ValidationError);
}

TEST(Metrics, CsvLayout) {
  const auto tr = jc_trace("4p", PulseShape::gaussian(0.1), 0.0, 0.1, 2, 3);
  std::ostringstream a, b;
  write_csv(a, tr);
  write_csv(b, tr);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, csv_header());
  int rows = 0;
  while (std::getline(in, line))
    ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(csv_number(1.0), "1");
  EXPECT_EQ(csv_number(0.25), "0.25");
}

TEST(Order, FitExponent) {
  const std::vector<double> x{1.0, 0.5, 0.1};
  std::vector<double> y;
  for (double v : x)
    y.push_back(2.0 * v * v * v);
  bool floor = true;
  EXPECT_NEAR(fit_exponent(x, y, &floor), 3.0, 1e-12);
  EXPECT_FALSE(floor);
  EXPECT_TRUE(std::isnan(fit_exponent(x, {0.0, 0.0, 0.0}, &floor)));
  EXPECT_TRUE(floor);
}

TEST(Order, XbarXHasFirstOrderHamiltonian) {
  ModelParams m;
  m.n_max = 4;
  const auto r = order_check(parse_sequence("xbarx"), jaynes_cummings(m),
                             PulseShape::gaussian(0.1), {0.3, 0.1, 0.03}, Reference::zero);
  EXPECT_NEAR(r.exponent, 1.0, 0.1);
}

TEST(Order, EightASecondOrder) {
  ModelParams m;
  m.n_max = 4;
  const auto r = order_check(parse_sequence("8a"), jaynes_cummings(m), resolve_shape("Q1"),
                             {0.3, 0.1, 0.03});
  EXPECT_GE(r.exponent, 2.8);
}

TEST(Order, ZeroCouplingFloor) {
  const auto r = order_check(parse_sequence("8s"), chemical_shift(0.0), PulseShape::gaussian(0.1),
                             {1.0, 0.1});
  for (double d : r.defects)
    EXPECT_LT(d, kDefectFloor);
  EXPECT_TRUE(r.floor_limited);
}

TEST(Order, Validation) {
  const CouplingSet c = chemical_shift(1.0);
  const PulseShape g = PulseShape::gaussian(0.1);
  EXPECT_THROW(order_check(parse_sequence("4p"), c, g, {1.0, 0.5}), ValidationError);
  EXPECT_THROW(order_check(parse_sequence("4p"), c, g, {1.0}), ValidationError);
  EXPECT_THROW(order_check(parse_sequence("4p"), c, g, {1.0, -0.1}), ValidationError);
  EXPECT_THROW(order_check(parse_sequence("X Y"), c, g, {1.0, 0.1}, Reference::composed),
               ValidationError);
}
