// atvgarch command-line front end.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "atvgarch/empirical.hpp"
#include "atvgarch/error.hpp"
#include "atvgarch/io.hpp"
#include "atvgarch/lm_test.hpp"
#include "atvgarch/model.hpp"
#include "atvgarch/montecarlo.hpp"
#include "atvgarch/simulator.hpp"
#include "atvgarch/stats.hpp"

#ifndef ATVGARCH_VERSION
#define ATVGARCH_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace atvgarch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_config:
    case ErrorCode::unsupported_order:
    case ErrorCode::invalid_moments:
    case ErrorCode::explosive_config:
      return kExitConfig;
    case ErrorCode::io_error:
    case ErrorCode::parse_error:
      return kExitIo;
    default:
      return kExitNumerical;
  }
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads for replications")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  sub->add_option("--format", c.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--config", c.config, "key = value file; command-line flags override it");
}

// Model parameters for simulate and mc.
struct ModelArgs {
  std::string dgp = "DGP2";
  double alpha0 = 0.0;
  std::vector<double> alphas, betas, gammas, cs, alpha0ls;
  std::string dist = "gaussian";
  double dof = 8.0;
};

void add_model(CLI::App* sub, ModelArgs& m) {
  sub->add_option("--dgp", m.dgp, "DGP1, DGP2, DGP3 or custom")->capture_default_str();
  sub->add_option("--alpha0", m.alpha0, "custom: constant intercept");
  sub->add_option("--alphas", m.alphas, "custom: ARCH coefficients");
  sub->add_option("--betas", m.betas, "custom: GARCH coefficients");
  sub->add_option("--gammas", m.gammas, "custom: transition slopes");
  sub->add_option("--cs", m.cs, "custom: transition locations (one per transition)");
  sub->add_option("--alpha0ls", m.alpha0ls, "custom: transition weights");
  sub->add_option("--dist", m.dist, "Error distribution")
      ->check(CLI::IsMember({"gaussian", "t"}))
      ->capture_default_str();
  sub->add_option("--dof", m.dof, "Student t degrees of freedom")->capture_default_str();
}

ParamVector model_theta(const ModelArgs& m) {
  if (m.dgp != "custom") return dgp(m.dgp).theta_true;
  if (m.alphas.empty() || m.betas.empty())
    throw Error(ErrorCode::invalid_config, "custom DGP needs --alpha0, --alphas and --betas");
  if (m.gammas.size() != m.cs.size() || m.gammas.size() != m.alpha0ls.size())
    throw Error(ErrorCode::invalid_config, "--gammas, --cs and --alpha0ls must have equal length");
  ParamVector th{m.alpha0, m.alphas, m.betas, {}};
  for (std::size_t l = 0; l < m.gammas.size(); ++l)
    th.transitions.push_back({m.gammas[l], {m.cs[l]}, m.alpha0ls[l]});
  validate(th);
  return th;
}

ErrorDist model_dist(const ModelArgs& m) {
  return m.dist == "t" ? ErrorDist::student_t(m.dof) : ErrorDist::gaussian();
}

// Input series for fit, lm-test and empirical.
struct InputArgs {
  std::string input;
  std::string column = "x";
  std::string role = "return";
};

void add_input(CLI::App* sub, InputArgs& in) {
  sub->add_option("--input", in.input, "CSV file with a header row")->required();
  sub->add_option("--column", in.column, "Column holding the data")->capture_default_str();
  sub->add_option("--role", in.role, "Whether the column holds prices or returns")
      ->check(CLI::IsMember({"price", "return"}))
      ->capture_default_str();
}

std::vector<double> load_returns(const InputArgs& in) {
  auto col = read_csv(in.input).numeric(in.column);
  if (in.role == "price") return log_returns(col);
  return col;
}

struct FitArgs {
  std::size_t truncation_lag = 200;
  std::size_t max_iterations = 500;
  std::size_t max_restarts = 3;
};

void add_fit(CLI::App* sub, FitArgs& f) {
  sub->add_option("--truncation-lag", f.truncation_lag, "Terms kept in the truncated variance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--max-iter", f.max_iterations, "BFGS iteration cap per run")
      ->capture_default_str();
  sub->add_option("--max-restarts", f.max_restarts, "Jittered restarts after a failed run")
      ->capture_default_str();
}

FitOptions fit_options(const FitArgs& f, std::uint64_t seed) {
  FitOptions o;
  o.likelihood.truncation_lag = f.truncation_lag;
  o.optimizer.max_iterations = f.max_iterations;
  o.max_restarts = f.max_restarts;
  o.seed = seed;
  return o;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorCode::io_error, "cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

std::string table_text(const std::string& format, const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json o;
      for (std::size_t i = 0; i < header.size(); ++i) {
        char* end = nullptr;
        const double v = std::strtod(r[i].c_str(), &end);
        if (end && *end == '\0' && !r[i].empty())
          o[header[i]] = v;
        else
          o[header[i]] = r[i];
      }
      arr.push_back(o);
    }
    return arr.dump(2) + "\n";
  }
  CsvWriter w(header);
  for (const auto& r : rows) w.row(r);
  return w.str();
}

std::vector<std::string> split_values(const std::string& v) {
  std::string s = v;
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') tok = tok.substr(1, tok.size() - 2);
    out.push_back(tok);
  }
  return out;
}

// Every option value of the subcommand after parsing, for the manifest.
json options_snapshot(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (name.empty() || name == "help" || name == "config" || name == "manifest") continue;
    if (opt->get_expected_min() == 0) {
      cfg[name] = opt->count() > 0;
      continue;
    }
    std::vector<std::string> vals;
    if (opt->count() > 0)
      vals = opt->results();
    else if (const std::string d = opt->get_default_str(); !d.empty() && d != "[]" && d != "{}")
      vals = split_values(d);
    else
      continue;
    cfg[name] = vals;
  }
  return cfg;
}

json manifest(const std::string& sub, const CLI::App* app, const Common& c,
              const std::vector<std::string>& outputs) {
  return {{"tool", "atvgarch"},
          {"version", ATVGARCH_VERSION},
          {"subcommand", sub},
          {"seed", c.seed},
          {"config", options_snapshot(app)},
          {"outputs", outputs}};
}

void write_manifest(const fs::path& dir, const json& m) {
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

void run_simulate(CLI::App* app, const Common& c, const ModelArgs& m, std::size_t T,
                  std::size_t burn_in) {
  const ParamVector th = model_theta(m);
  const fs::path dir = prepare_out_dir(c.out_dir);
  const SeriesFrame s = simulate({th, model_dist(m), T, burn_in, c.seed});
  write_text(dir / "series.csv", series_csv(s));
  json man = manifest("simulate", app, c, {"series.csv"});
  man["theta"] = to_json(th);
  write_manifest(dir, man);
}

void write_fitted(const fs::path& path, const SeriesFrame& s, const FitResult& r,
                  const LikelihoodConfig& lc) {
  const auto h = truncated_variance(r.theta_hat, s, lc);
  CsvWriter w({"t", "time", "x", "h_hat", "g_hat"});
  for (std::size_t t = 0; t < s.size(); ++t)
    w.row({std::to_string(t + 1), format_double(s.times[t]), format_double(s.x[t]),
           format_double(h[t]), format_double(transition_sum(s.times[t], r.theta_hat))});
  write_text(path, w.str());
}

ModelSpec model_spec(const std::string& model, std::size_t p, std::size_t q, std::size_t L) {
  if (model == "garch") return ModelSpec::garch(p, q);
  return ModelSpec::atv(p, q, std::vector<std::size_t>(L, 1));
}

void run_fit(CLI::App* app, const Common& c, const InputArgs& in, const FitArgs& fa,
             const std::string& model, std::size_t p, std::size_t q, std::size_t L) {
  const fs::path dir = prepare_out_dir(c.out_dir);
  const SeriesFrame s = SeriesFrame::from_returns(load_returns(in));
  const FitOptions fo = fit_options(fa, c.seed);
  const FitResult r = fit(s, model_spec(model, p, q, L), fo);
  write_text(dir / "fit.json", to_json(r).dump(2) + "\n");
  write_fitted(dir / "fitted.csv", s, r, fo.likelihood);
  write_manifest(dir, manifest("fit", app, c, {"fit.json", "fitted.csv"}));
}

void run_mc_cmd(CLI::App* app, const Common& c, const ModelArgs& m, const FitArgs& fa,
                std::size_t T, std::size_t reps, bool full) {
  if (full) {
    reps = 10000;
    std::cerr << "warning: running the full 10000-replication study; this takes hours\n";
  }
  const fs::path dir = prepare_out_dir(c.out_dir);
  DgpSpec d;
  d.name = m.dgp;
  d.theta_true = model_theta(m);
  d.error_dist = model_dist(m);
  d.T = T;
  d.reps = reps;
  d.seed = c.seed;
  McOptions mo;
  mo.fit = fit_options(fa, c.seed);
  mo.fit.covariance = false;
  mo.threads = c.threads;
  const McResult res = run_mc(d, mo);
  const McSummary& s = res.summary;

  const std::string ext = c.format == "json" ? ".json" : ".csv";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t j = 0; j < s.names.size(); ++j)
    rows.push_back({s.names[j], format_double(s.truth[j]), format_double(s.mean[j]),
                    format_double(s.sd[j]), format_double(s.mean_abs_error[j])});
  write_text(dir / ("mc_summary" + ext),
             table_text(c.format, {"parameter", "truth", "mean", "sd", "mean_abs_error"}, rows));

  std::vector<std::string> header = s.names;
  header.insert(header.begin(), {"rep", "seed"});
  header.insert(header.end(), {"converged", "stuck_at_start"});
  rows.clear();
  for (Eigen::Index r = 0; r < res.raw.rows(); ++r) {
    std::vector<std::string> row{std::to_string(r + 1), std::to_string(res.seeds[std::size_t(r)])};
    for (Eigen::Index j = 0; j < res.raw.cols(); ++j) row.push_back(format_double(res.raw(r, j)));
    row.push_back(res.converged[std::size_t(r)] ? "1" : "0");
    row.push_back(res.stuck[std::size_t(r)] ? "1" : "0");
    rows.push_back(std::move(row));
  }
  write_text(dir / ("mc_raw" + ext), table_text(c.format, header, rows));
  std::vector<std::string> outputs{"mc_summary" + ext, "mc_raw" + ext};

  json man = manifest("mc", app, c, {});
  if (res.raw.rows() >= 100) {
    const Standardized z = standardized_estimates(res.raw);
    write_text(dir / "mc_standardized.csv", matrix_csv(s.names, z.z));
    outputs.push_back("mc_standardized.csv");
    man["normality"] = {{"names", s.names}, {"skew", z.skew}, {"excess_kurtosis", z.excess_kurtosis}};
  }
  man["outputs"] = outputs;
  man["dgp"] = {{"name", d.name}, {"theta", to_json(d.theta_true)}, {"T", d.T}, {"reps", d.reps}};
  man["summary"] = to_json(s);
  write_manifest(dir, man);
}

void run_lm(CLI::App* app, const Common& c, const InputArgs& in, const FitArgs& fa,
            const std::string& null_model, std::size_t order) {
  const fs::path dir = prepare_out_dir(c.out_dir);
  const SeriesFrame s = SeriesFrame::from_returns(load_returns(in));
  LmOptions lo;
  lo.taylor_order = order;
  lo.fit = fit_options(fa, c.seed);
  const ModelSpec spec = null_model == "garch" ? ModelSpec::garch() : ModelSpec::atv(1, 1, {1});
  const LmResult r = lm_constancy_test(s, spec, lo);
  json out = to_json(r);
  out["null"] = null_model;
  out["null_fit"] = to_json(r.null_fit);
  write_text(dir / "lm.json", out.dump(2) + "\n");
  write_manifest(dir, manifest("lm-test", app, c, {"lm.json"}));
}

void run_moment_region(CLI::App* app, const Common& c, const std::string& dist, double dof,
                       std::size_t resolution) {
  const fs::path dir = prepare_out_dir(c.out_dir);
  const ErrorDist ed = dist == "t" ? ErrorDist::student_t(dof) : ErrorDist::gaussian();
  const MomentRegion mr = moment_region_grid(ed.m2(), ed.m4(), resolution);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < mr.boundary_alpha.size(); ++i)
    rows.push_back({format_double(mr.boundary_alpha[i]), format_double(mr.boundary_beta[i])});
  const std::string ext = c.format == "json" ? ".json" : ".csv";
  write_text(dir / ("moment_boundary" + ext), table_text(c.format, {"alpha1", "beta1"}, rows));
  rows.clear();
  for (std::size_t i = 0; i < mr.alpha_grid.size(); ++i)
    for (std::size_t j = 0; j < mr.beta_grid.size(); ++j)
      rows.push_back({format_double(mr.alpha_grid[i]), format_double(mr.beta_grid[j]),
                      mr.inside[i * mr.beta_grid.size() + j] ? "1" : "0"});
  write_text(dir / ("moment_grid" + ext), table_text(c.format, {"alpha1", "beta1", "inside"}, rows));
  json man = manifest("moment-region", app, c, {"moment_boundary" + ext, "moment_grid" + ext});
  man["m2"] = ed.m2();
  man["m4"] = ed.m4();
  write_manifest(dir, man);
}

// "gamma,c1[,c2...][:weight]"
TransitionParams parse_transition(const std::string& spec) {
  std::string body = spec;
  double weight = 1.0;
  if (auto pos = body.find(':'); pos != std::string::npos) {
    weight = std::stod(body.substr(pos + 1));
    body.resize(pos);
  }
  std::vector<double> v;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() < 2)
    throw Error(ErrorCode::invalid_config, "transition '" + spec + "' needs gamma and a location");
  TransitionParams t{v[0], std::vector<double>(v.begin() + 1, v.end()), weight};
  if (!(t.gamma > 0.0)) throw Error(ErrorCode::invalid_config, "transition slope must be positive");
  if (!std::is_sorted(t.c.begin(), t.c.end()))
    throw Error(ErrorCode::invalid_config, "transition locations must be increasing");
  return t;
}

void run_transition_curve(CLI::App* app, const Common& c, std::vector<std::string> specs,
                          std::size_t grid) {
  if (specs.empty()) specs = {"20,0.5"};
  std::vector<TransitionParams> trs;
  for (const auto& s : specs) {
    try {
      trs.push_back(parse_transition(s));
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::invalid_config, "cannot parse transition '" + s + "'");
    }
  }
  if (grid < 2) throw Error(ErrorCode::invalid_config, "--grid must be at least 2");
  const fs::path dir = prepare_out_dir(c.out_dir);
  std::vector<std::string> header{"u"};
  for (std::size_t l = 0; l < trs.size(); ++l) header.push_back("G" + std::to_string(l + 1));
  header.push_back("g");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < grid; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(grid - 1);
    std::vector<std::string> row{format_double(u)};
    double g = 0.0;
    for (const auto& t : trs) {
      const double G = logistic_g(u, t);
      g += t.alpha0l * G;
      row.push_back(format_double(G));
    }
    row.push_back(format_double(g));
    rows.push_back(std::move(row));
  }
  const std::string ext = c.format == "json" ? ".json" : ".csv";
  write_text(dir / ("transition_curve" + ext), table_text(c.format, header, rows));
  write_manifest(dir, manifest("transition-curve", app, c, {"transition_curve" + ext}));
}

void run_empirical(CLI::App* app, const Common& c, const InputArgs& in, const FitArgs& fa,
                   std::size_t order) {
  const fs::path dir = prepare_out_dir(c.out_dir);
  const std::vector<double> x = load_returns(in);
  EmpiricalOptions eo;
  eo.fit = fit_options(fa, c.seed);
  eo.taylor_order = order;
  const EmpiricalReport r = empirical_pipeline(x, eo);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";

  json lm = json::array();
  for (const auto& e : r.lm_sequence) {
    json j = to_json(e.result);
    j["null"] = e.null_label;
    lm.push_back(j);
  }
  const json report = {{"stats", to_json(r.stats)},
                       {"garch_fit", to_json(r.garch_fit)},
                       {"atv_fit", to_json(r.atv_fit)},
                       {"lm_sequence", lm},
                       {"persistence_before", r.persistence_before},
                       {"persistence_after", r.persistence_after},
                       {"lm0_rejects", r.lm0_rejects},
                       {"persistence_consistent", r.persistence_consistent},
                       {"warnings", r.warnings}};
  write_text(dir / "report.json", report.dump(2) + "\n");
  write_text(dir / "report.txt", format_report(r));
  write_fitted(dir / "fitted.csv", SeriesFrame::from_returns(x), r.atv_fit, eo.fit.likelihood);
  write_manifest(dir, manifest("empirical", app, c, {"report.json", "report.txt", "fitted.csv"}));
}

// ---------------------------------------------------------------------------
// --config and manifest replay both turn stored values into extra argv
// tokens placed before the user's own, skipping keys given on the command
// line.

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

std::vector<std::string> tokens_for(const CLI::Option* opt, const std::string& key,
                                    const std::vector<std::string>& values) {
  if (opt->get_expected_min() == 0) {
    const std::string v = values.empty() ? "true" : values.front();
    if (v == "true" || v == "1") return {"--" + key};
    if (v == "false" || v == "0") return {};
    throw Error(ErrorCode::invalid_config, "flag '" + key + "' takes true or false");
  }
  std::vector<std::string> out;
  for (const auto& v : values) {
    out.push_back("--" + key);
    out.push_back(v);
  }
  return out;
}

CLI::App* find_subcommand(CLI::App& app, const std::vector<std::string>& args) {
  for (const auto& a : args) {
    if (a.rfind("-", 0) == 0) continue;
    try {
      return app.get_subcommand(a);
    } catch (const CLI::OptionNotFound&) {
      return nullptr;
    }
  }
  return nullptr;
}

std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  CLI::App* sub = find_subcommand(app, args);
  if (!sub) return args;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> extra;
  for (const auto& e : read_config(path)) {
    const std::string where = path + ":" + std::to_string(e.line) + ": ";
    const CLI::Option* opt = sub->get_option_no_throw("--" + e.key);
    if (!opt || e.key == "config" || e.key == "help")
      throw Error(ErrorCode::invalid_config, where + "unknown key '" + e.key + "' for " + sub->get_name());
    if (given_on_command_line(args, e.key)) continue;
    auto t = tokens_for(opt, e.key, split_values(e.value));
    extra.insert(extra.end(), t.begin(), t.end());
  }
  const auto pos = std::find(args.begin(), args.end(), sub->get_name());
  args.insert(pos + 1, extra.begin(), extra.end());
  return args;
}

std::vector<std::string> expand_manifest(CLI::App& app, const std::string& path,
                                         const std::vector<std::string>& overrides) {
  json m;
  try {
    m = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
  if (!m.contains("subcommand") || !m.contains("config"))
    throw Error(ErrorCode::invalid_config, path + ": not a run manifest");
  const std::string name = m["subcommand"].get<std::string>();
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(name);
  } catch (const CLI::OptionNotFound&) {
    throw Error(ErrorCode::invalid_config, path + ": unknown subcommand '" + name + "'");
  }
  std::vector<std::string> args{name};
  for (const auto& [key, value] : m["config"].items()) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw Error(ErrorCode::invalid_config, path + ": unknown key '" + key + "'");
    if (given_on_command_line(overrides, key)) continue;
    std::vector<std::string> vals;
    if (value.is_boolean())
      vals = {value.get<bool>() ? "true" : "false"};
    else
      vals = value.get<std::vector<std::string>>();
    auto t = tokens_for(opt, key, vals);
    args.insert(args.end(), t.begin(), t.end());
  }
  args.insert(args.end(), overrides.begin(), overrides.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ATV-GARCH simulation, estimation and testing"};
  app.set_version_flag("--version", ATVGARCH_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  ModelArgs model;
  InputArgs input;
  FitArgs fitargs;
  std::size_t T = 3000, burn_in = 500, reps = 500, p = 1, q = 1, L = 1, order = 3, grid = 201,
              resolution = 201;
  bool full = false;
  std::string model_kind = "atv", null_model = "garch", dist = "gaussian", manifest_path;
  double dof = 8.0;
  std::vector<std::string> transitions;

  auto* sim = app.add_subcommand("simulate", "Simulate a series");
  add_common(sim, common);
  add_model(sim, model);
  sim->add_option("--T", T, "Sample length")->check(CLI::PositiveNumber);
  sim->add_option("--burn-in", burn_in, "Burn-in observations");

  auto* fitc = app.add_subcommand("fit", "Fit GARCH or ATV-GARCH by QML");
  add_common(fitc, common);
  add_input(fitc, input);
  add_fit(fitc, fitargs);
  fitc->add_option("--model", model_kind, "garch or atv")->check(CLI::IsMember({"garch", "atv"}));
  fitc->add_option("--p", p, "ARCH order")->check(CLI::PositiveNumber);
  fitc->add_option("--q", q, "GARCH order")->check(CLI::PositiveNumber);
  fitc->add_option("--transitions", L, "Number of transitions (atv)")->check(CLI::PositiveNumber);

  auto* mc = app.add_subcommand("mc", "Monte Carlo replication study");
  add_common(mc, common);
  add_model(mc, model);
  add_fit(mc, fitargs);
  mc->add_option("--T", T, "Sample length")->check(CLI::PositiveNumber);
  mc->add_option("--reps", reps, "Replications kept")->check(CLI::PositiveNumber);
  mc->add_flag("--full", full, "Run 10000 replications");

  auto* lm = app.add_subcommand("lm-test", "LM test of a constant intercept");
  add_common(lm, common);
  add_input(lm, input);
  add_fit(lm, fitargs);
  lm->add_option("--null", null_model, "garch (L=0) or atv1 (L=1)")
      ->check(CLI::IsMember({"garch", "atv1"}));
  lm->add_option("--taylor-order", order, "Order of the Taylor expansion")
      ->check(CLI::PositiveNumber);

  auto* mr = app.add_subcommand("moment-region", "Fourth-moment region of GARCH(1,1)");
  add_common(mr, common);
  mr->add_option("--dist", dist, "Error distribution")->check(CLI::IsMember({"gaussian", "t"}));
  mr->add_option("--dof", dof, "Student t degrees of freedom");
  mr->add_option("--resolution", resolution, "Grid points per axis")->check(CLI::Range(2, 10001));

  auto* tc = app.add_subcommand("transition-curve", "Logistic transition curves");
  add_common(tc, common);
  tc->add_option("--transition", transitions, "gamma,c1[,c2...][:weight]; repeatable");
  tc->add_option("--grid", grid, "Points on [0, 1]");

  auto* emp = app.add_subcommand("empirical", "Summary statistics, fits and LM sequence");
  add_common(emp, common);
  add_input(emp, input);
  add_fit(emp, fitargs);
  emp->add_option("--taylor-order", order, "Order of the Taylor expansion")
      ->check(CLI::PositiveNumber);

  auto* rerun = app.add_subcommand("rerun", "Repeat a run from its manifest");
  rerun->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
  rerun->allow_extras();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (!args.empty() && args.front() == "rerun") {
      app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
      const std::vector<std::string> overrides = rerun->remaining();
      args = expand_manifest(app, manifest_path, overrides);
      app.clear();
    } else {
      args = expand_config(app, args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) run_simulate(sim, common, model, T, burn_in);
    if (fitc->parsed()) run_fit(fitc, common, input, fitargs, model_kind, p, q, L);
    if (mc->parsed()) run_mc_cmd(mc, common, model, fitargs, T, reps, full);
    if (lm->parsed()) run_lm(lm, common, input, fitargs, null_model, order);
    if (mr->parsed()) run_moment_region(mr, common, dist, dof, resolution);
    if (tc->parsed()) run_transition_curve(tc, common, transitions, grid);
    if (emp->parsed()) run_empirical(emp, common, input, fitargs, order);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
