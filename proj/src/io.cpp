#include "atvgarch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "atvgarch/error.hpp"

namespace atvgarch {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  out.push_back(trim(cell));
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": expected " +
                                              std::to_string(t.header.size()) + " fields, got " +
                                              std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(lineno);
  }
  if (t.header.empty()) throw Error(ErrorCode::parse_error, "empty CSV input");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorCode::parse_error, "no column named '" + name + "'");
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const std::size_t j = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string& cell = rows[i][j];
    double v;
    if (!parse_number(cell, v) || !std::isfinite(v))
      throw Error(ErrorCode::parse_error, "line " + std::to_string(line_numbers[i]) + ": column '" +
                                              name + "' value '" + cell + "' is not a number");
    out.push_back(v);
  }
  return out;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw Error(ErrorCode::invalid_argument, "CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::io_error, "write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string series_csv(const SeriesFrame& s) {
  const bool with_h = s.h_true.size() == s.size();
  std::vector<std::string> header{"t", "time", "x"};
  if (with_h) header.push_back("h_true");
  CsvWriter w(header);
  for (std::size_t t = 0; t < s.size(); ++t) {
    std::vector<std::string> r{std::to_string(t + 1), format_double(s.times[t]),
                               format_double(s.x[t])};
    if (with_h) r.push_back(format_double(s.h_true[t]));
    w.row(r);
  }
  return w.str();
}

SeriesFrame read_series_csv(const std::filesystem::path& path, const std::string& column) {
  const CsvTable t = read_csv(path);
  SeriesFrame s = SeriesFrame::from_returns(t.numeric(column));
  for (const auto& h : t.header)
    if (h == "h_true") s.h_true = t.numeric("h_true");
  return s;
}

std::string matrix_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& m) {
  if (names.size() != static_cast<std::size_t>(m.cols()))
    throw Error(ErrorCode::invalid_argument, "column names do not match the matrix");
  CsvWriter w(names);
  std::vector<double> r(names.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    w.row(r);
  }
  return w.str();
}

std::vector<ConfigEntry> parse_config(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto where = "line " + std::to_string(lineno) + ": ";
    std::string s = line;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) {
        s.resize(i);
        break;
      }
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw Error(ErrorCode::invalid_config, where + "unterminated section");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::invalid_config, where + "expected key = value");
    std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::invalid_config, where + "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;
    for (const auto& e : out)
      if (e.key == key)
        throw Error(ErrorCode::invalid_config,
                    where + "duplicate key '" + key + "' (first set on line " + std::to_string(e.line) + ")");
    out.push_back({key, value, lineno});
  }
  return out;
}

std::vector<ConfigEntry> read_config(const std::filesystem::path& path) {
  return parse_config(read_text(path));
}

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Eigen::VectorXd(m.row(i))));
  return rows;
}

json to_json(const ParamVector& theta) {
  json tr = json::array();
  for (const auto& t : theta.transitions)
    tr.push_back({{"gamma", t.gamma}, {"eta", eta_from_gamma(t.gamma)}, {"c", t.c}, {"alpha0l", t.alpha0l}});
  return {{"alpha0", theta.alpha0}, {"alphas", theta.alphas}, {"betas", theta.betas}, {"transitions", tr}};
}

json to_json(const FitResult& r) {
  return {{"p", r.spec.p},
          {"q", r.spec.q},
          {"k_orders", r.spec.k_orders},
          {"names", parameter_names(r.spec, Coords::reporting)},
          {"estimates", to_json(r.estimates(Coords::reporting))},
          {"theta_hat", to_json(r.theta_hat)},
          {"loglik", r.loglik},
          {"converged", r.converged},
          {"eta_at_bound", r.eta_at_bound},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"restarts", r.restarts},
          {"persistence", r.persistence},
          {"cov_robust", to_json(r.cov_robust)},
          {"cov_nonrobust", to_json(r.cov_nonrobust)},
          {"se_robust", to_json(r.se_robust)},
          {"se_nonrobust", to_json(r.se_nonrobust)},
          {"se_reliable", r.se_reliable},
          {"kappa", r.kappa}};
}

json to_json(const LmResult& r) {
  return {{"stat", r.stat},
          {"robust_stat", r.robust_stat},
          {"df", r.df},
          {"p_value", r.p_value},
          {"robust_p_value", r.robust_p_value},
          {"null_loglik", r.null_fit.loglik},
          {"null_converged", r.null_fit.converged}};
}

json to_json(const McSummary& s) {
  return {{"names", s.names},
          {"truth", s.truth},
          {"mean", s.mean},
          {"sd", s.sd},
          {"mean_abs_error", s.mean_abs_error},
          {"discard_rate", s.discard_rate},
          {"reps_used", s.reps_used},
          {"attempts", s.attempts},
          {"discards", s.discards},
          {"not_converged", s.not_converged},
          {"stuck_at_start", s.stuck_at_start},
          {"runtime_seconds", s.runtime_seconds}};
}

json to_json(const SummaryStats& s) {
  return {{"n", s.n},
          {"mean", s.mean},
          {"sd", s.sd},
          {"median", s.median},
          {"min", s.min},
          {"max", s.max},
          {"skew", s.skew},
          {"robust_skew", s.robust_skew},
          {"kurtosis", s.kurtosis},
          {"robust_kurtosis", s.robust_kurtosis},
          {"excess_kurtosis", s.excess_kurtosis}};
}

}  // namespace atvgarch
