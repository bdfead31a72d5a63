#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "atvgarch/error.hpp"
#include "atvgarch/io.hpp"

using namespace atvgarch;

namespace {

template <class F>
std::string message_of(F&& f, ErrorCode expect) {
  try {
    f();
  } catch (const Error& e) {
    CHECK(e.code() == expect);
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

}  // namespace

TEST_CASE("doubles print to a round-tripping decimal") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(u(g), int(u(g) * 10));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("series CSV round trip is exact") {
  const ParamVector th{0.05, {0.1}, {0.8}, {{18.0, {0.5}, 0.15}}};
  const SeriesFrame s = simulate({th, {}, 500, 100, 3});
  const auto path = std::filesystem::temp_directory_path() / "atvgarch_io_series.csv";
  write_text(path, series_csv(s));
  const SeriesFrame back = read_series_csv(path);
  REQUIRE(back.size() == s.size());
  CHECK(back.x == s.x);
  CHECK(back.h_true == s.h_true);
  std::filesystem::remove(path);
}

TEST_CASE("CSV errors name the line") {
  const std::string ragged = "t,x\n1,0.5\n2\n";
  CHECK(message_of([&] { parse_csv(ragged); }, ErrorCode::parse_error).find("line 3") !=
        std::string::npos);

  const CsvTable t = parse_csv("t,x\n\n1,0.5\n2,abc\n");
  const std::string m = message_of([&] { t.numeric("x"); }, ErrorCode::parse_error);
  CHECK(m.find("line 4") != std::string::npos);
  CHECK(m.find("abc") != std::string::npos);
  message_of([&] { t.column("y"); }, ErrorCode::parse_error);
  CHECK(t.numeric("t") == std::vector<double>{1.0, 2.0});

  message_of([] { read_text("/nonexistent/dir/file.csv"); }, ErrorCode::io_error);
}

TEST_CASE("config files") {
  const auto entries = parse_config(
      "# run settings\nseed = 7\n\n[mc]\nreps = 100  # trailing\nname = \"a # b\"\n");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "seed");
  CHECK(entries[0].value == "7");
  CHECK(entries[0].line == 2);
  CHECK(entries[1].key == "mc.reps");
  CHECK(entries[1].value == "100");
  CHECK(entries[2].value == "a # b");

  CHECK(message_of([] { parse_config("a = 1\nno equals here\n"); }, ErrorCode::invalid_config)
            .find("line 2") != std::string::npos);
  CHECK(message_of([] { parse_config("a = 1\na = 2\n"); }, ErrorCode::invalid_config)
            .find("line 2") != std::string::npos);
}

TEST_CASE("JSON output keeps full precision") {
  Eigen::VectorXd v(2);
  v << 0.1, 1.0 / 3.0;
  const auto j = to_json(v);
  CHECK(j[1].get<double>() == 1.0 / 3.0);
  const ParamVector th{0.05, {0.1}, {0.8}, {{18.0, {0.5}, 0.15}}};
  const auto p = to_json(th);
  CHECK(p.dump().find("alpha0") != std::string::npos);
}
