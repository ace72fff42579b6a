#include <organics/config.hpp>
#include <organics/dynamics.hpp>
#include <organics/io.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace organics;
using config::json;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("organics_test_" + name)).string();
}

}  // namespace

TEST(Io, FormatParseRoundTripIsExact) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(i % 40) - 20);
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::parse_double(io::format_double(std::numeric_limits<double>::denorm_min())),
            std::numeric_limits<double>::denorm_min());
  EXPECT_THROW(io::parse_double("1.0x"), io::IoError);
}

TEST(Io, TrajectoryCsvRoundTrip) {
  NetworkSpec s = NetworkSpec::zeros(3, 1);
  s.w_zx << cplx(1.0, 0.3), 0.5, -0.25;
  s.w_yy = CMat::Identity(3, 3) * cplx(0.9, 0.1);
  s.w_bx.setOnes();
  const Trajectory tr = simulate(s, [](double t) { return CVec::Constant(1, std::sin(t)); }, 0.0, 20.0, 0.1,
                                 SimState::zeros(3));
  const auto table = io::trajectory_table(tr, {{"extra", std::vector<double>(tr.size(), 1.0 / 3.0)}});
  EXPECT_EQ(table.columns[0], "t");
  EXPECT_EQ(table.columns[1], "re_y_0");
  EXPECT_EQ(table.columns[2], "im_y_0");
  EXPECT_EQ(table.columns[3], "a_0");
  EXPECT_EQ(table.columns[4], "b_0");
  EXPECT_EQ(table.columns.back(), "extra");

  std::stringstream ss;
  io::write_csv(ss, table);
  const auto back = io::read_csv(ss);
  ASSERT_EQ(back.rows.size(), table.rows.size());
  for (std::size_t r = 0; r < back.rows.size(); ++r)
    for (std::size_t c = 0; c < back.columns.size(); ++c) EXPECT_EQ(back.rows[r][c], table.rows[r][c]);

  const Trajectory loaded = io::trajectory_from_table(back);
  ASSERT_EQ(loaded.size(), tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_EQ(loaded.y[k], tr.y[k]);
    EXPECT_EQ(loaded.b[k], tr.b[k]);
  }
}

TEST(Io, CsvFileAndErrors) {
  io::CsvTable t;
  t.columns = {"t", "v"};
  t.rows = {{0.0, 1.5}, {1.0, -2.25}};
  const std::string p = temp_path("table.csv");
  io::write_csv(p, t);
  const auto back = io::read_csv(p);
  EXPECT_EQ(back.rows[1][back.column("v")], -2.25);
  EXPECT_THROW(back.column("missing"), io::IoError);
  std::remove(p.c_str());
  EXPECT_THROW(io::read_csv(temp_path("does_not_exist.csv")), io::IoError);
  std::stringstream bad("t,v\n1,2,3\n");
  EXPECT_THROW(io::read_csv(bad), io::IoError);
  EXPECT_THROW(io::trajectory_table({0.0}, {}, {}, {}), DimensionError);
}

TEST(Io, SvgIsWritten) {
  const std::string p = temp_path("plot.svg");
  io::write_svg(p, "title", {{"a", {0, 1, 2}, {0, 1, 0}}, {"b", {0, 1, 2}, {1, 0, 1}}});
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("<svg"), std::string::npos);
  EXPECT_NE(ss.str().find("polyline"), std::string::npos);
  std::remove(p.c_str());
}

TEST(Config, SpecRoundTrip) {
  NetworkSpec s = NetworkSpec::zeros(2, 3, 12.0, 7.0);
  s.w_yy << cplx(0.5, 0.25), 0.0, -1.0, cplx(0.0, -2.0);
  s.w_zx(1, 2) = cplx(0.1, 0.2);
  s.w_ax(0, 1) = 1.0;
  s.w_by(1, 0) = -0.5;
  s.c_yhat[0] = cplx(0.0, 1.0);
  s.tau_y[1] = 20.0;
  const NetworkSpec back = config::spec_from_json(json::parse(config::spec_to_json(s).dump()));
  EXPECT_EQ(back.w_yy, s.w_yy);
  EXPECT_EQ(back.w_zx, s.w_zx);
  EXPECT_EQ(back.w_ax, s.w_ax);
  EXPECT_EQ(back.w_by, s.w_by);
  EXPECT_EQ(back.c_yhat, s.c_yhat);
  EXPECT_EQ(back.tau_y, s.tau_y);
  EXPECT_EQ(back.tau_a, 7.0);
}

TEST(Config, ConstructorsResolve) {
  const json j = json::parse(R"({
    "weights": {
      "w_yy": {"constructor": "center-surround", "n": 8},
      "w_zx": {"constructor": "eigen-encoder", "k": 2},
      "w_ry": {"constructor": "eigen-readout", "k": 2}
    },
    "tau_y": 10
  })");
  const NetworkSpec s = config::spec_from_json(j);
  EXPECT_EQ(s.n_neurons(), 8);
  EXPECT_EQ(s.n_inputs(), 2);
  EXPECT_EQ(s.n_readouts(), 2);
  EXPECT_LT((s.w_ry * s.w_zx - CMat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);

  EXPECT_EQ(config::construct_matrix({{"constructor", "synfire"}, {"n", 5}}).rows(), 5);
  EXPECT_EQ(config::construct_matrix({{"constructor", "ei-pair"}})(0, 0), cplx(2.0));
  const CMat osc = config::construct_matrix({{"constructor", "diagonal-oscillators"}, {"freqs_hz", {0.0, 8.0}}});
  EXPECT_EQ(osc.rows(), 2);
  const CMat r1 = config::construct_matrix({{"constructor", "random-spectral"}, {"n", 10}, {"d", 2}, {"seed", 3}});
  const CMat r2 = weights::random_spectral({10, 2, 0.05, 3});
  EXPECT_EQ(r1, r2);
}

TEST(Config, Errors) {
  EXPECT_THROW(config::spec_from_json(json::parse(R"({"weights": {"w_yy": [[1]]}})")), config::ConfigError);
  EXPECT_THROW(config::construct_matrix({{"constructor", "nope"}}), config::ConfigError);
  EXPECT_THROW(config::construct_matrix({{"constructor", "eigen-encoder"}}), config::ConfigError);
  EXPECT_THROW(config::matrix_from_json(json::parse("[[1, 2], [3]]"), "w"), config::ConfigError);
  EXPECT_THROW(config::matrix_from_json(json::parse(R"([["x"]])"), "w"), config::ConfigError);
  EXPECT_THROW(config::spec_from_json(json::parse(R"({"w_yy": [[1]], "w_zx": [[1]], "w_ax": [[[0, 1]]]})")),
               config::ConfigError);
  EXPECT_THROW(config::spec_from_json(json::parse(R"({"w_yy": [[1, 0]], "w_zx": [[1]]})")), DimensionError);
  EXPECT_THROW(config::load_spec(temp_path("missing.json")), config::ConfigError);
}

TEST(Config, ReportJson) {
  const auto r = analyze(weights::ei_pair().cast<cplx>(), (RVec(2) << 10.0, 12.5).finished());
  const json j = config::report_to_json(r);
  EXPECT_EQ(j.at("stability"), "stable-oscillation");
  EXPECT_EQ(j.at("dimensionality"), 0);
  EXPECT_NEAR(j.at("frequencies_hz")[0].get<double>(), 12.328, 1e-3);
}
