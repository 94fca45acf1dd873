#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "softdd/experiment.hpp"

using namespace softdd;

namespace {

ExperimentConfig from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  cfg.parse(is);
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST(Config, Defaults) {
  const auto runs = ExperimentConfig{}.runs();
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].periods, 100);
  EXPECT_EQ(runs[0].model.n_max, 8);
  EXPECT_DOUBLE_EQ(runs[0].model.g, 0.1);
  EXPECT_EQ(runs[0].grid, 50);
  EXPECT_EQ(runs[0].oscillator, "ground");
  EXPECT_TRUE(runs[0].tag.empty());
}

TEST(Config, ParseAndOverride) {
  ExperimentConfig cfg = from_text("# comment\nsequence = 8s\nshape = Q1   # trailing\n"
                                   "omega-r = 0.117\n\nperiods = 5\n");
  cfg.set("periods", "7");
  const auto runs = cfg.runs();
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].sequence, "8s");
  EXPECT_EQ(runs[0].shape, "Q1");
  EXPECT_DOUBLE_EQ(runs[0].model.omega_r, 0.117);
  EXPECT_EQ(runs[0].periods, 7);
}

TEST(Config, Errors) {
  EXPECT_THROW(from_text("nonsense = 1\n"), ValidationError);
  EXPECT_THROW(from_text("periods 5\n"), ValidationError);
  EXPECT_THROW(from_text("periods =\n"), ValidationError);
  EXPECT_THROW(from_text("periods = 2.5\n").runs(), ValidationError);
  EXPECT_THROW(from_text("n_max = 0\n").runs(), ValidationError);
  EXPECT_THROW(from_text("sequence = X Y\n").runs(), ValidationError);
  EXPECT_THROW(from_text("shape = gaussian\n").runs(), ValidationError);
  EXPECT_THROW(from_text("oscillator = fock:9\n").runs(), ValidationError);
  EXPECT_THROW(from_text("steps = 8\n").runs(), ValidationError);
  ExperimentConfig cfg;
  EXPECT_THROW(cfg.load("/nonexistent/softdd.cfg"), ValidationError);
  try {
    cfg.set("bogus", "1");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("valid keys"), std::string::npos);
  }
}

TEST(Config, SweepExpansion) {
  const auto runs = from_text("sequence = 4p, 4pxz\nn_max = 1, 8\nomega_r = 0, 0.117\n"
                              "shape = gaussian:0.10; S1\noutput = out/fig.csv\n")
                        .runs();
  ASSERT_EQ(runs.size(), 16u);
  std::set<std::string> outputs;
  for (const auto& r : runs)
    outputs.insert(r.output);
  EXPECT_EQ(outputs.size(), 16u);
  EXPECT_EQ(runs[0].output.rfind("out/fig_", 0), 0u);
  EXPECT_NE(runs[0].tag.find("sequence-4p"), std::string::npos);
}

TEST(Config, FigureConfigsLoad) {
  for (int k = 1; k <= 6; ++k) {
    ExperimentConfig cfg;
    cfg.load(std::string(SOFTDD_FIGS_DIR) + "/fig" + std::to_string(k) + ".cfg");
    const auto runs = cfg.runs();
    EXPECT_GE(runs.size(), 4u) << k;
    for (const auto& r : runs) {
      EXPECT_EQ(r.periods, 100);
      EXPECT_DOUBLE_EQ(r.model.g, 0.1);
    }
  }
}

TEST(Experiment, ZeroPeriodsRow) {
  RunConfig rc;
  rc.periods = 0;
  rc.grid = 4;
  const RunResult r = run_experiment(rc);
  EXPECT_EQ(r.csv, std::string(csv_header()) + "\n0,0,1,0,0\n");
}

TEST(Experiment, DeterministicCsv) {
  RunConfig rc;
  rc.periods = 5;
  rc.grid = 8;
  rc.model.n_max = 3;
  rc.oscillator = "thermal:0.2";
  EXPECT_EQ(run_experiment(rc).csv, run_experiment(rc).csv);
}

TEST(Experiment, ParallelSweepWritesAtomically) {
  const auto dir = std::filesystem::temp_directory_path() / "softdd_config_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = from_text("sequence = 4p, 8s\nperiods = 3\ngrid = 4\nn_max = 2\n");
  cfg.set("output", (dir / "trace.csv").string());
  const auto runs = cfg.runs();
  const auto par = run_all(runs, 2);
  const auto seq = run_all(runs, 1);
  ASSERT_EQ(par.size(), 2u);
  for (std::size_t i = 0; i < par.size(); ++i) {
    EXPECT_EQ(par[i].csv, seq[i].csv);
    write_atomically(par[i].config.output, par[i].csv);
    EXPECT_EQ(slurp(par[i].config.output), par[i].csv);
  }
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    EXPECT_EQ(e.path().extension(), ".csv");
    ++files;
  }
  EXPECT_EQ(files, 2);
  std::filesystem::remove_all(dir);
}
