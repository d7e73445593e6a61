#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace valdist;

namespace {

const double e = std::exp(1.0);

}

TEST(Proximity, ConstantE) {
  const auto c = testutil::constant(e);
  for (double r : {0.1, 0.5, 2.0}) EXPECT_NEAR(proximity_m(c, r, at_infinity), 1.0, 1e-12);
}

TEST(Proximity, HExpAtZero) { EXPECT_NEAR(proximity_m(catalog_get("h-exp"), 0.5, cplx{}), 0.0, 1e-15); }

TEST(Proximity, HExpAtInfinityAgainstTrapezoid) {
  const double r = 0.5;
  const int n = 100000;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const cplx z = std::polar(r, two_pi * k / n);
    s += std::max(0.0, ((1.0 + z) / (1.0 - z)).real());
  }
  EXPECT_NEAR(proximity_m(catalog_get("h-exp"), r, at_infinity), s / n, 1e-6);
}

TEST(Counting, ZeroFree) {
  for (double r : {0.3, 0.9}) EXPECT_EQ(counting_N(catalog_get("h-exp"), r, cplx{}), 0.0);
}

TEST(Counting, OriginConvention) {
  const auto f = catalog_get("identity");
  EXPECT_EQ(counting_N(f, 0.5, cplx{}), 0.0);
  NevanlinnaOptions std_opt;
  std_opt.origin = OriginConvention::standard;
  EXPECT_NEAR(counting_N(f, 0.5, cplx{}, std_opt), std::log(0.5), 1e-15);
}

TEST(Counting, TwoSimpleZeros) {
  const auto f = testutil::rational("pm", {{0.25, 0.0, 1}, {-0.25, 0.0, 1}}, nlohmann::json::array());
  EXPECT_NEAR(counting_N(f, 0.5, cplx{}), 2.0 * std::log(2.0), 1e-14);
  // located rather than read from the registry
  HandleSpec s = f.spec();
  s.registry.reset();
  EXPECT_NEAR(counting_N(FunctionHandle(s), 0.5, cplx{}), 2.0 * std::log(2.0), 1e-8);
}

TEST(Characteristic, ConstantE) {
  for (double r : {0.2, 0.7}) EXPECT_NEAR(characteristic_T(testutil::constant(e), r).T, 1.0, 1e-12);
}

TEST(Characteristic, HExpIsOne) {
  // log|h| = Re W > 0 is harmonic with W(0) = 1, so T(r, h) = m(r, h) = 1
  for (double r : {0.5, 0.9, 0.99}) EXPECT_NEAR(characteristic_T(catalog_get("h-exp"), r).T, 1.0, 1e-9);
}

TEST(Characteristic, PoleOnCircleMovesRadius) {
  // pole at 0.5: the circle is pushed off it and the used radius recorded
  const auto f = testutil::rational("p", nlohmann::json::array(), {{0.5, 0.0, 1}});
  const auto s = characteristic_T(f, 0.5);
  EXPECT_GT(s.perturbed_r, 0.5);
  EXPECT_LT(s.perturbed_r, 0.5 + 1e-6);
  EXPECT_GE(s.m, 0.0);
}

TEST(Characteristic, SweepProperties) {
  const std::vector<std::string> disc{"notLP", "g4ew", "h-exp", "disc-rational-1", "disc-rational-2",
                                      "disc-rational-3", "sin-levy", "broken-notLP"};
  std::vector<double> grid;
  for (int i = 1; i <= 12; ++i) grid.push_back(0.07 * i);
  for (const auto& n : disc) {
    const auto samples = characteristic_sweep(catalog_get(n), grid);
    double prev = -inf;
    for (const auto& s : samples) {
      EXPECT_GE(s.m, 0.0) << n;
      EXPECT_GE(s.N, 0.0) << n;
      EXPECT_EQ(s.T, s.m + s.N) << n;
      EXPECT_GE(s.T, prev - 1e-9) << n << " r = " << s.r;
      prev = s.T;
    }
  }
}

TEST(Characteristic, FirstFundamentalTheoremOscillation) {
  struct Case {
    const char* name;
    cplx a;
    double rmax;
  };
  for (const auto& c : {Case{"rational-sample", 1.0, 3.0}, Case{"disc-rational-2", 0.0, 0.95},
                        Case{"disc-rational-3", {0.2, 0.1}, 0.95}, Case{"poly-two-real", 0.5, 3.0}}) {
    const auto f = catalog_get(c.name);
    const auto g = reciprocal_shift(f, c.a);
    double lo = inf, hi = -inf;
    for (int i = 1; i <= 20; ++i) {
      const double r = c.rmax * i / 20.0;
      const double d = characteristic_T(f, r).T - characteristic_T(g, r).T;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    EXPECT_LE(hi - lo, 1.5) << c.name;
  }
}

TEST(LogMaxModulus, NotLP) {
  const auto f = catalog_get("notLP");
  for (double r : {0.0, 0.5, 0.9}) {
    const double want = 3.0 * std::exp((1.0 + r) / (1.0 - r));
    EXPECT_NEAR(log_max_modulus(f, r) / want, 1.0, 1e-6) << r;
  }
}

TEST(LogMaxModulus, Constant) { EXPECT_NEAR(log_max_modulus(testutil::constant(-3.5), 0.7), std::log(3.5), 1e-15); }

TEST(LogMaxModulus, G4ew) {
  const auto g = catalog_get("g4ew");
  for (double r : {0.3, 0.8, 0.97}) EXPECT_NEAR(log_max_modulus(g, r), std::log(4.0) + (1.0 + r) / (1.0 - r), 1e-9);
}

TEST(LogMaxModulus, PoleOnCircle) {
  EXPECT_THROW(log_max_modulus(catalog_get("disc-rational-1"), 0.6), PoleOnCircle);
}

TEST(Deficiency, HExp) {
  std::vector<double> grid;
  for (int j = 2; j <= 20; ++j) grid.push_back(1.0 - std::exp2(-j / 3.0));
  EXPECT_NEAR(deficiency_estimate(catalog_get("h-exp"), at_infinity, grid), 1.0, 0.05);
  EXPECT_NEAR(deficiency_estimate(catalog_get("h-exp"), cplx{}, grid), 0.0, 1e-9);
}

TEST(Deficiency, ConstantAtInfinity) {
  std::vector<double> grid;
  for (int j = 1; j <= 10; ++j) grid.push_back(0.09 * j);
  EXPECT_NEAR(deficiency_estimate(testutil::constant(e), at_infinity, grid), 1.0, 1e-12);
  EXPECT_THROW(deficiency_estimate(testutil::constant(0.5), at_infinity, grid), DegenerateT);
  EXPECT_THROW(deficiency_estimate(testutil::constant(e), at_infinity, {0.1, 0.2}), PreconditionError);
}

TEST(Nevanlinna, DiscRadiusChecked) {
  EXPECT_THROW(characteristic_T(catalog_get("notLP"), 1.0), DomainError);
  EXPECT_THROW(proximity_m(catalog_get("identity"), -0.1, at_infinity), DomainError);
}
