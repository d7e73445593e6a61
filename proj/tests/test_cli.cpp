#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "valdist/cli.hpp"

using namespace valdist;
using cli::RunConfig;

namespace {

RunConfig config(const std::string& sub, const std::string& fn) {
  RunConfig c;
  c.subcommand = sub;
  c.fn = fn;
  return c;
}

/// Column `name` of a CSV report.
std::vector<double> column(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> head;
  {
    std::istringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) head.push_back(cell);
  }
  const auto idx = static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
  std::vector<double> out;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t k = 0; k <= idx && std::getline(ls, cell, ','); ++k) {
    }
    out.push_back(std::stod(cell));
  }
  return out;
}

double range(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

TEST(Cli, TsujiTransferredRationalBounded) {
  auto c = config("characteristic", "transferred-rational");
  c.flavor = "tsuji";
  c.rmax = 100.0;
  const auto out = cli::run(c);
  ASSERT_EQ(out.exit_code, 0) << out.message;
  const auto T = column(out.text, "T_tsuji");
  EXPECT_EQ(T.size(), 30u);
  EXPECT_LE(range(T), 1.0);
}

TEST(Cli, NevanlinnaHExpMonotone) {
  const auto out = cli::run(config("characteristic", "h-exp"));
  ASSERT_EQ(out.exit_code, 0) << out.message;
  const auto T = column(out.text, "T");
  for (std::size_t i = 1; i < T.size(); ++i) EXPECT_GE(T[i], T[i - 1] - 1e-9);
}

TEST(Cli, LogMColumn) {
  auto c = config("characteristic", "notLP");
  c.logM = true;
  const auto out = cli::run(c);
  ASSERT_EQ(out.exit_code, 0) << out.message;
  const auto r = column(out.text, "r");
  const auto lm = column(out.text, "logM");
  ASSERT_EQ(r.size(), lm.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    EXPECT_NEAR(lm[i] / (3.0 * std::exp((1.0 + r[i]) / (1.0 - r[i]))), 1.0, 1e-6) << r[i];
}

TEST(Cli, VerifyNotLP) {
  const auto out = cli::run(config("verify-example", "notLP"));
  EXPECT_EQ(out.exit_code, 0);
  const auto j = nlohmann::json::parse(out.text);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("checks").size(), 3u);
  EXPECT_EQ(j.at("config").at("fn"), "notLP");
}

TEST(Cli, VerifyG4ew) {
  const auto out = cli::run(config("verify-example", "g4ew"));
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_TRUE(nlohmann::json::parse(out.text).at("pass").get<bool>());
}

TEST(Cli, VerifyBrokenNotLP) {
  const auto out = cli::run(config("verify-example", "broken-notLP"));
  EXPECT_EQ(out.exit_code, 4);
  const auto j = nlohmann::json::parse(out.text);
  EXPECT_FALSE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("checks").at(0).at("details").at("winding_f").get<int>(), 1);
}

TEST(Cli, FactoriseSinLevy) {
  const auto out = cli::run(config("factorise", "sin-levy"));
  ASSERT_EQ(out.exit_code, 0) << out.message;
  const auto j = nlohmann::json::parse(out.text);
  EXPECT_EQ(j.at("psi"), "product");
  EXPECT_TRUE(j.at("herglotz").at("pass").get<bool>());
  EXPECT_GT(j.at("factorisation").at("truncation_K").get<int>(), 0);
}

TEST(Cli, FactoriseZeroFree) {
  const auto out = cli::run(config("factorise", "notLP"));
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(out.text).at("psi"), "1");
}

TEST(Cli, FactoriseBrokenInterlacing) {
  auto c = config("factorise", "notLP");
  c.zeros = "0.1,0.5";
  c.rolle = "0.6";
  const auto out = cli::run(c);
  EXPECT_EQ(out.exit_code, 3);
  EXPECT_NE(out.message.find("Interlacing"), std::string::npos) << out.message;
}

TEST(Cli, WvHExpClosedForm) {
  auto c = config("wv", "h-exp");
  c.R = std::exp(3.0);
  const auto out = cli::run(c);
  ASSERT_EQ(out.exit_code, 0) << out.message;
  const auto r = column(out.text, "r");
  const auto B = column(out.text, "B");
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double want = std::max(0.0, (1.0 + r[i]) / (1.0 - r[i]) - 3.0);
    EXPECT_NEAR(B[i], want, 1e-6 * std::max(1.0, want));
  }
  // the a column on the interior of a finer grid
  c.grid = 16;
  const auto fine = cli::run(c);
  const auto rf = column(fine.text, "r");
  const auto af = column(fine.text, "a");
  for (std::size_t i = 1; i + 1 < rf.size(); ++i) {
    if (rf[i] < 0.75) continue;
    EXPECT_NEAR(af[i] / (2.0 * rf[i] / ((1.0 - rf[i]) * (1.0 - rf[i]))), 1.0, 0.01) << rf[i];
  }
}

TEST(Cli, WvBoundedRefused) {
  auto c = config("wv", "disc-rational-3");
  c.s0 = 0.6;
  const auto out = cli::run(c);
  EXPECT_EQ(out.exit_code, 3);
  EXPECT_NE(out.message.find("bounded"), std::string::npos) << out.message;
}

TEST(Cli, WvNotLPNoOverflow) {
  auto c = config("wv", "notLP");
  const auto out = cli::run(c);
  ASSERT_EQ(out.exit_code, 0) << out.message;
  for (double b : column(out.text, "B")) EXPECT_TRUE(std::isfinite(b));
}

TEST(Cli, RectAndResidual) {
  const auto rect = cli::run(config("rect", "identity"));
  ASSERT_EQ(rect.exit_code, 0) << rect.message;
  const auto T2 = column(rect.text, "T2"), T3 = column(rect.text, "T3");
  for (std::size_t i = 0; i < T2.size(); ++i) {
    EXPECT_GE(T2[i], 0.0);
    EXPECT_GE(T3[i], T2[i]);
  }
  const auto res = cli::run(config("residual", "identity"));
  ASSERT_EQ(res.exit_code, 0) << res.message;
  EXPECT_LE(range(column(res.text, "residual")), 1.0);
}

TEST(Cli, TinyTolIsNumericFailure) {
  auto c = config("characteristic", "notLP");
  c.tol = 1e-300;
  EXPECT_EQ(cli::run(c).exit_code, 2);
}

TEST(Cli, Preconditions) {
  EXPECT_EQ(cli::run(config("nonsense", "notLP")).exit_code, 3);
  EXPECT_EQ(cli::run(config("characteristic", "no-such-fn")).exit_code, 3);
  auto c = config("characteristic", "notLP");
  c.rmin = 0.5;
  c.rmax = 0.4;
  EXPECT_EQ(cli::run(c).exit_code, 3);
  c = config("characteristic", "notLP");
  c.flavor = "other";
  EXPECT_EQ(cli::run(c).exit_code, 3);
}

TEST(Cli, Deterministic) {
  for (const auto& [sub, fn] : std::vector<std::pair<std::string, std::string>>{
           {"characteristic", "notLP"}, {"factorise", "sin-levy"}, {"wv", "h-exp"}, {"residual", "transferred-rational"}}) {
    const auto a = cli::run(config(sub, fn));
    const auto b = cli::run(config(sub, fn));
    EXPECT_EQ(a.exit_code, b.exit_code);
    EXPECT_EQ(a.text, b.text) << sub << " " << fn;
  }
}

TEST(Cli, GridHelpers) {
  const auto g = cli::make_grid(1.0, 100.0, 3, cli::Spacing::geometric);
  EXPECT_DOUBLE_EQ(g[1], 10.0);
  const auto h = cli::make_grid(0.5, 0.99, 5, cli::Spacing::gap);
  EXPECT_DOUBLE_EQ(h.back(), 0.99);
  EXPECT_THROW(cli::parse_list("0.1,x"), PreconditionError);
  EXPECT_EQ(cli::parse_list("0.1,0.5").size(), 2u);
}
