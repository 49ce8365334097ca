#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "condembed/errors.hpp"
#include "condembed/j1_solver.hpp"
#include "condembed/matrix.hpp"
#include "condembed/mc_oracle.hpp"

namespace condembed {

/// Shortest decimal that round-trips a double exactly (17 significant
/// digits).
inline std::string format_full(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// CSV matrix format: one row per line, comma-separated decimal literals.
// Lines starting with '#' and blank lines are skipped.

inline Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
    if (view.empty() || view.front() == '#') continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (start <= view.size()) {
      std::size_t comma = view.find(',', start);
      if (comma == std::string_view::npos) comma = view.size();
      std::string_view cell = view.substr(start, comma - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      double value = 0.0;
      const auto result = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (result.ec != std::errc{} || result.ptr != cell.data() + cell.size())
        throw parse_error("line " + std::to_string(line_no) + ": bad numeric literal '" +
                          std::string(cell) + "'");
      row.push_back(value);
      start = comma + 1;
      if (comma == view.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw parse_error("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rows.front().size()) + " columns, got " +
                        std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw parse_error("no matrix rows found");

  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline Matrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_full(m(i, j));
    }
    out << '\n';
  }
}

inline void write_matrix_csv_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  write_matrix_csv(out, m);
}

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json solve_report_json(const SolveReport& report) {
  return nlohmann::json{
      {"method", report.method == SolveMethod::closed_form ? "closed_form" : "fixed_point"},
      {"generator", matrix_json(report.generator.matrix())},
      {"theta", report.theta},
      {"iterations", report.iterations},
      {"residual", report.residual},
      {"contraction",
       {{"alpha", report.contraction.alpha},
        {"C_alpha", report.contraction.C_alpha},
        {"K", report.contraction.K}}}};
}

inline nlohmann::json simulation_json(const SimulationEstimate& est) {
  return nlohmann::json{{"conditional_freq", matrix_json(est.conditional_freq)},
                        {"std_err", matrix_json(est.std_err)},
                        {"retained_fraction", est.retained_fraction},
                        {"total_paths", est.total_paths}};
}

}  // namespace condembed
