#ifndef SOFTDD_EXPERIMENT_HPP
#define SOFTDD_EXPERIMENT_HPP

// Running configured simulations and writing their traces.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "softdd/config.hpp"
#include "softdd/metrics.hpp"

namespace softdd {

struct RunResult {
  RunConfig config;
  EvolutionTrace trace;
  std::string csv;
};

inline RunResult run_experiment(const RunConfig& rc) {
  rc.validate();
  const ControlSchedule sched{parse_sequence(rc.sequence), resolve_shape(rc.shape)};
  TraceOptions opt;
  opt.propagator.steps_per_pulse = rc.steps_per_pulse;
  opt.oscillator = rc.oscillator_state();
  const BlochGrid grid(rc.grid);
  RunResult out{rc, run_trace(jaynes_cummings(rc.model), sched, rc.periods, grid.states(), opt), {}};
  std::ostringstream os;
  write_csv(os, out.trace);
  out.csv = os.str();
  return out;
}

/// Writes via a sibling temporary file and a rename.
inline void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path())
    fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp" +
                       std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ValidationError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out)
      throw ValidationError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

/// Runs all configurations, at most `jobs` at a time. Results keep input
/// order.
inline std::vector<RunResult> run_all(const std::vector<RunConfig>& runs, unsigned jobs = 0) {
  if (jobs == 0)
    jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<RunResult> results(runs.size());
  for (std::size_t start = 0; start < runs.size(); start += jobs) {
    std::vector<std::future<RunResult>> batch;
    const std::size_t end = std::min(runs.size(), start + jobs);
    for (std::size_t i = start; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_experiment, runs[i]));
    for (std::size_t i = start; i < end; ++i)
      results[i] = batch[i - start].get();
  }
  return results;
}

} // namespace softdd

#endif
