#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "valdist/nevanlinna.hpp"
#include "valdist/tsuji.hpp"
#include "valdist/wiman_valiron.hpp"

namespace valdist {

/// %.17g, so values round-trip exactly.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  CsvWriter& cell(const std::string& s) {
    if (!first_) line_ << ',';
    first_ = false;
    line_ << s;
    return *this;
  }
  CsvWriter& cell(double x) { return cell(fmt17(x)); }
  CsvWriter& cell(int x) { return cell(std::to_string(x)); }
  CsvWriter& cell(bool b) { return cell(std::string(b ? "1" : "0")); }

  void end_row() {
    out_ << line_.str() << '\n';
    line_.str({});
    first_ = true;
  }

  [[nodiscard]] std::string str() const { return out_.str(); }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (const auto& c : cells) cell(c);
    end_row();
  }

  std::ostringstream out_;
  std::ostringstream line_;
  bool first_ = true;
};

inline std::string characteristic_csv(const std::string& label, const std::vector<CharacteristicSample>& samples) {
  CsvWriter w({"flavor", "label", "r", "m", "N", "T"});
  for (const auto& s : samples) {
    w.cell(std::string(flavor_name(s.flavor))).cell(label).cell(s.r).cell(s.m).cell(s.N).cell(s.T);
    w.end_row();
  }
  return w.str();
}

inline std::string tsuji_csv(const std::string& label, const std::vector<TsujiSample>& samples) {
  CsvWriter w({"label", "r", "m_tsuji", "N_tsuji", "T_tsuji", "perturbed_r"});
  for (const auto& s : samples) {
    w.cell(label).cell(s.r).cell(s.m).cell(s.N).cell(s.T).cell(s.perturbed_r);
    w.end_row();
  }
  return w.str();
}

inline std::string rectangle_csv(const std::string& label, const std::vector<RectangleSample>& samples) {
  CsvWriter w({"label", "sigma", "x", "m2", "N2", "T2", "T3"});
  for (const auto& s : samples) {
    w.cell(label).cell(s.sigma).cell(s.x).cell(s.m2).cell(s.N2).cell(s.T2).cell(s.T3);
    w.end_row();
  }
  return w.str();
}

inline std::string wv_csv(const WVProfile& p) {
  CsvWriter w({"r", "B", "a", "eps", "zr_re", "zr_im", "exceptional", "phi_bound"});
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    w.cell(p.grid[i]).cell(p.B[i]).cell(p.a[i]).cell(p.eps[i]).cell(p.z_r[i].real()).cell(p.z_r[i].imag());
    w.cell(static_cast<bool>(p.exceptional[i])).cell(p.phi_bound[i]);
    w.end_row();
  }
  return w.str();
}

}  // namespace valdist
