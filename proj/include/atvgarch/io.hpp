#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "atvgarch/estimator.hpp"
#include "atvgarch/lm_test.hpp"
#include "atvgarch/montecarlo.hpp"
#include "atvgarch/simulator.hpp"
#include "atvgarch/stats.hpp"

namespace atvgarch {

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // file line of each row

  /// Throws parse_error naming the column when it is absent.
  std::size_t column(const std::string& name) const;
  /// Numeric column; cells that fail to parse raise parse_error with the
  /// 1-based file line number.
  std::vector<double> numeric(const std::string& name) const;
};

/// Comma-separated with a header row; blank lines are skipped. Rows with the
/// wrong number of fields raise parse_error naming the line.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }

 private:
  std::size_t width_;
  std::string out_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Columns t, time, x and h_true when present.
std::string series_csv(const SeriesFrame& s);
/// Reads the column `x` (and `h_true` if present) back into a frame; times
/// follow the t/T axis.
SeriesFrame read_series_csv(const std::filesystem::path& path, const std::string& column = "x");

std::string matrix_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& m);

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// key = value lines; '#' starts a comment, [section] headers prefix later
/// keys with "section.", values may be double-quoted. Errors name the line.
std::vector<ConfigEntry> parse_config(const std::string& text);
std::vector<ConfigEntry> read_config(const std::filesystem::path& path);

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const ParamVector& theta);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const LmResult& r);
nlohmann::json to_json(const McSummary& s);
nlohmann::json to_json(const SummaryStats& s);

}  // namespace atvgarch
