#ifndef SOFTDD_CONFIG_HPP
#define SOFTDD_CONFIG_HPP

// Experiment configuration: flat "key = value" text. A comma-separated value
// on a sweepable key expands into one run per element (cartesian product over
// keys, in key order). Frequencies are in units of 2 pi/tp.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "softdd/designer.hpp"
#include "softdd/errors.hpp"
#include "softdd/propagate.hpp"
#include "softdd/sequences.hpp"

namespace softdd {

struct RunConfig {
  std::string shape = "gaussian:0.10";
  std::string sequence = "4p";
  ModelParams model;
  int periods = 100;
  int steps_per_pulse = 256;
  int grid = 50;
  std::string oscillator = "ground"; // ground | fock:n | thermal:nbar
  std::string output = "trace.csv";
  std::string tag; // sweep coordinates, e.g. "sequence-4p_n_max-8"

  OscillatorState oscillator_state() const {
    const auto parts = detail::split(oscillator, ':');
    if (parts.size() == 1 && parts[0] == "ground")
      return OscillatorState::ground();
    if (parts.size() == 2 && parts[0] == "fock") {
      const double n = detail::parse_double(parts[1], "oscillator fock level");
      if (n != std::floor(n) || n < 0 || n > model.n_max)
        throw ValidationError("oscillator = fock:n needs an integer level 0..n_max");
      return OscillatorState::fock(static_cast<int>(n));
    }
    if (parts.size() == 2 && parts[0] == "thermal")
      return OscillatorState::thermal(detail::parse_double(parts[1], "thermal occupation"),
                                      model.n_max);
    throw ValidationError("oscillator must be 'ground', 'fock:<n>' or 'thermal:<nbar>', got '" +
                          oscillator + "'");
  }

  void validate() const {
    model.validate();
    if (periods < 0)
      throw ValidationError("periods must be >= 0");
    if (steps_per_pulse < 16)
      throw ValidationError("steps_per_pulse must be >= 16");
    if (grid < 0)
      throw ValidationError("grid must be >= 0");
    if (output.empty())
      throw ValidationError("output path is empty");
    const Sequence seq = parse_sequence(sequence);
    if (zeroth_order_defect(seq) > 1e-10)
      throw ValidationError("sequence '" + sequence +
                            "' is not refocusing at zeroth order; the fidelity target would "
                            "not be the initial state");
    (void)resolve_shape(shape);
    oscillator_state().validate(model.n_max);
  }
};

class ExperimentConfig {
public:
  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k = {
        "shape", "sequence", "omega_r", "omega_0", "g", "n_max", "periods",
        "steps_per_pulse", "grid", "oscillator", "output"};
    return k;
  }

  static bool sweepable(const std::string& key) {
    return key != "output";
  }

  /// Sets a key; later calls override earlier ones (file, then flags).
  void set(const std::string& key, const std::string& value) {
    const std::string k = normalize_key(key);
    if (std::find(keys().begin(), keys().end(), k) == keys().end()) {
      std::string valid;
      for (const auto& v : keys())
        valid += (valid.empty() ? "" : ", ") + v;
      throw ValidationError("unknown config key '" + key + "' (valid keys: " + valid + ")");
    }
    const std::string v = detail::trim(value);
    if (v.empty())
      throw ValidationError("config key '" + k + "' has an empty value");
    values_[k] = v;
  }

  bool has(const std::string& key) const { return values_.count(normalize_key(key)) > 0; }

  void parse(std::istream& is, const std::string& origin = "config") {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos)
        line.erase(hash);
      const std::string t = detail::trim(line);
      if (t.empty())
        continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ValidationError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
      set(detail::trim(t.substr(0, eq)), t.substr(eq + 1));
    }
  }

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
      throw ValidationError("cannot open config file '" + path + "'");
    parse(in, path);
  }

  /// Expanded runs, validated.
  std::vector<RunConfig> runs() const {
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& k : keys()) {
      const auto it = values_.find(k);
      if (it == values_.end())
        continue;
      std::vector<std::string> vals;
      if (sweepable(k) && k != "sequence" && k != "shape") {
        for (const auto& v : detail::split(it->second, ','))
          vals.push_back(detail::trim(v));
      } else if (k == "sequence" || k == "shape") {
        // lists use ';' or ',' between entries; fourier coefficients use ','
        // inside a single entry, so only ';' separates shapes.
        const char sep = k == "shape" ? ';' : ',';
        for (const auto& v : detail::split(it->second, sep))
          vals.push_back(detail::trim(v));
      } else {
        vals.push_back(it->second);
      }
      for (const auto& v : vals)
        if (v.empty())
          throw ValidationError("config key '" + k + "' has an empty list entry");
      axes.emplace_back(k, vals);
    }
    std::vector<RunConfig> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    bool sweep = false;
    for (const auto& a : axes)
      sweep = sweep || a.second.size() > 1;
    while (true) {
      RunConfig rc;
      std::string tag;
      for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto& [k, vals] = axes[i];
        apply(rc, k, vals[idx[i]]);
        if (vals.size() > 1)
          tag += (tag.empty() ? "" : "_") + k + "-" + sanitize(vals[idx[i]]);
      }
      rc.tag = tag;
      if (sweep)
        rc.output = sweep_path(rc.output, tag);
      rc.validate();
      out.push_back(rc);
      std::size_t i = 0;
      for (; i < axes.size(); ++i) {
        if (++idx[i] < axes[i].second.size())
          break;
        idx[i] = 0;
      }
      if (i == axes.size())
        break;
    }
    return out;
  }

private:
  std::map<std::string, std::string> values_;

  static std::string normalize_key(std::string k) {
    k = detail::trim(k);
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "steps")
      k = "steps_per_pulse";
    return k;
  }

  static int parse_int(const std::string& v, const std::string& what) {
    const double d = detail::parse_double(v, what);
    if (d != std::floor(d) || std::abs(d) > 1e9)
      throw ValidationError(what + " must be an integer, got '" + v + "'");
    return static_cast<int>(d);
  }

  static void apply(RunConfig& rc, const std::string& k, const std::string& v) {
    if (k == "shape")
      rc.shape = v;
    else if (k == "sequence")
      rc.sequence = v;
    else if (k == "omega_r")
      rc.model.omega_r = detail::parse_double(v, k);
    else if (k == "omega_0")
      rc.model.omega_0 = detail::parse_double(v, k);
    else if (k == "g")
      rc.model.g = detail::parse_double(v, k);
    else if (k == "n_max")
      rc.model.n_max = parse_int(v, k);
    else if (k == "periods")
      rc.periods = parse_int(v, k);
    else if (k == "steps_per_pulse")
      rc.steps_per_pulse = parse_int(v, k);
    else if (k == "grid")
      rc.grid = parse_int(v, k);
    else if (k == "oscillator")
      rc.oscillator = v;
    else if (k == "output")
      rc.output = v;
  }

  static std::string sanitize(const std::string& v) {
    std::string out;
    for (char c : v)
      out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.') ? c : '_';
    return out;
  }

  static std::string sweep_path(const std::string& base, const std::string& tag) {
    const std::filesystem::path p(base);
    const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
    return (p.parent_path() / (p.stem().string() + "_" + tag + ext)).string();
  }
};

} // namespace softdd

#endif
