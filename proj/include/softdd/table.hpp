#ifndef SOFTDD_TABLE_HPP
#define SOFTDD_TABLE_HPP

// Parameter table for the built-in shapes, alongside published reference
// values.

#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "softdd/designer.hpp"
#include "softdd/shapes.hpp"

namespace softdd {

struct ReferenceRow {
  std::string name;
  double s, half_alpha, zeta;
};

/// Published values (s, alpha/2, zeta).
inline const std::vector<ReferenceRow>& reference_table() {
  static const std::vector<ReferenceRow> rows = {
      {"delta", 0.0, 0.0, 0.25},
      {"G0.05", 0.0744895, 0.0349708, 0.249476},
      {"G0.10", 0.148979, 0.0653938, 0.247905},
      {"H0.05", 0.0, 0.00153849, 0.249647},
      {"H0.10", 0.0, 0.00615393, 0.248589},
      {"S1", 0.0, 0.0332661, 0.238227},
      {"S2", 0.0, 0.0250328, 0.241377},
      {"Q1", 0.0, 0.0, 0.239889},
      {"Q2", 0.0, 0.0, 0.242205},
  };
  return rows;
}

inline std::optional<ReferenceRow> reference_row(const std::string& name) {
  for (const auto& r : reference_table())
    if (r.name == name)
      return r;
  return std::nullopt;
}

struct TableEntry {
  std::string name;
  ShapeParams params;
  std::optional<ReferenceRow> reference;
  bool designed = false;
  double max_residual = 0.0;

  /// Designed shapes may sit on a different branch than the reference.
  bool zeta_flag() const {
    return designed && reference && std::abs(params.zeta - reference->zeta) > 0.01;
  }
};

inline std::vector<TableEntry> table_entries(int n_quad = 4096) {
  std::vector<TableEntry> out;
  auto add = [&](const std::string& name, const PulseShape& shape) {
    out.push_back({name, compute_params(shape, n_quad), reference_row(name)});
  };
  add("delta", PulseShape::delta());
  add("G0.05", PulseShape::gaussian(0.05));
  add("G0.10", PulseShape::gaussian(0.10));
  add("H0.05", PulseShape::hermitian(0.05));
  add("H0.10", PulseShape::hermitian(0.10));
  for (const char* name : {"S1", "S2", "Q1", "Q2"}) {
    DesignOptions opt;
    opt.n_quad = n_quad;
    const DesignResult r = design(parse_design_name(name), opt);
    TableEntry e{name, r.achieved, reference_row(name), true, r.max_residual};
    out.push_back(e);
  }
  return out;
}

inline std::string format_row(const std::string& name, const ShapeParams& p) {
  std::ostringstream os;
  os << std::left << std::setw(8) << name << std::right << std::fixed << std::setprecision(7)
     << std::setw(12) << (std::abs(p.s) < 5e-8 ? 0.0 : p.s) << std::setw(12)
     << (std::abs(p.alpha) < 1e-7 ? 0.0 : p.alpha / 2) << std::setw(12) << p.zeta;
  return os.str();
}

/// Rows (shape, s, alpha/2, zeta) with reference columns.
inline std::string table_report(int n_quad = 4096) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "shape" << std::right << std::setw(12) << "s"
     << std::setw(12) << "alpha/2" << std::setw(12) << "zeta" << "   |" << std::setw(12)
     << "ref zeta" << "  note\n";
  for (const auto& e : table_entries(n_quad)) {
    os << format_row(e.name, e.params) << "   |";
    if (e.reference)
      os << std::fixed << std::setprecision(6) << std::setw(12) << e.reference->zeta;
    else
      os << std::setw(12) << "-";
    if (e.designed)
      os << (e.zeta_flag() ? "  zeta mismatch > 0.01" : "  designed");
    os << '\n';
  }
  return os.str();
}

} // namespace softdd

#endif
