#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace valdist;
using testutil::rel_diff;

namespace {

const double e = std::exp(1.0);

}

TEST(Eval, IdentityReturnsArgument) {
  const auto f = catalog_get("identity");
  const cplx z{0.3, 0.1};
  EXPECT_EQ(f(z).to_complex(), z);
}

TEST(Eval, NotLPAtOrigin) {
  const auto f = catalog_get("notLP");
  // e^{3e}, kept in log form
  EXPECT_NEAR(f(cplx{}).log_abs(), 3.0 * e, 1e-13);
  EXPECT_NEAR(f(cplx{}).phase(), 0.0, 1e-13);
}

TEST(Eval, ReciprocalAtOriginIsPole) {
  EXPECT_TRUE(catalog_get("reciprocal")(cplx{}).is_pole());
  // within the fusion radius as well
  EXPECT_TRUE(catalog_get("reciprocal")(cplx{1e-13, 0.0}).is_pole());
}

TEST(Eval, OutsideDomainThrows) {
  EXPECT_THROW(catalog_get("notLP")(cplx{1.5, 0.0}), DomainError);
  EXPECT_THROW(catalog_get("transferred-rational")(cplx{3.0, 0.0}), DomainError);
}

TEST(Eval, Deterministic) {
  const auto f = catalog_get("sin-levy");
  const cplx z{0.41, -0.27};
  const Value a = f(z), b = f(z);
  EXPECT_EQ(a.factor(), b.factor());
  EXPECT_EQ(a.exponent(), b.exponent());
}

TEST(Eval, OverflowKeptInLogForm) {
  // log M(0.999) = 3 e^{1999}: far beyond double range, still finite in log form.
  const auto f = catalog_get("notLP");
  const double la = f(cplx{0.99, 0.0}).log_abs();
  EXPECT_NEAR(la / (3.0 * std::exp(199.0)), 1.0, 1e-12);
}

TEST(Derivative, IdentityFirst) {
  const auto d = derivative(catalog_get("identity"), 1);
  for (cplx z : {cplx{0.0, 0.0}, cplx{1.5, -2.0}, cplx{-0.3, 0.7}}) EXPECT_NEAR(std::abs(d(z).to_complex() - 1.0), 0.0, 1e-14);
}

TEST(Derivative, NotLPFirstAtOrigin) {
  // L(0) f(0) with L = 3 e^W W', W'(0) = 2: 6e e^{3e}
  const auto d = derivative(catalog_get("notLP"), 1);
  const Value v = d(cplx{});
  EXPECT_NEAR(v.log_abs(), std::log(6.0 * e) + 3.0 * e, 1e-12);
  EXPECT_NEAR(v.phase(), 0.0, 1e-12);
}

TEST(Derivative, ExpThirdViaCauchy) {
  const auto d = cauchy_derivative_handle(catalog_get("exp"), 3);
  EXPECT_EQ(d.deriv_source(), DerivSource::cauchy_integral);
  EXPECT_NEAR(std::abs(d(cplx{}).to_complex() - 1.0), 0.0, 1e-8);
}

TEST(Catalog, NotLPRegistry) {
  const auto f = catalog_get("notLP");
  ASSERT_TRUE(f.registry());
  EXPECT_TRUE(f.registry()->complete);
  EXPECT_TRUE(f.registry()->zeros.empty());
  EXPECT_TRUE(f.registry()->poles.empty());
  EXPECT_EQ(f.domain().kind(), DomainKind::unit_disc);
}

TEST(Catalog, G4ewAboveFour) {
  const auto g = catalog_get("g4ew");
  double lo = inf;
  for (cplx z : sample_disc(10000, 7)) {
    const cplx W = (1.0 + z) / (1.0 - z);
    EXPECT_NEAR(g(z).log_abs(), std::log(4.0) + W.real(), 1e-9 * (1.0 + std::abs(W)));
    lo = std::min(lo, g(z).log_abs());
  }
  EXPECT_GT(lo, std::log(4.0));
}

TEST(Catalog, SinLevyZeros) {
  const auto f = catalog_get("sin-levy");
  ASSERT_TRUE(f.registry());
  EXPECT_FALSE(f.registry()->complete);
  const auto& z = f.registry()->zeros;
  ASSERT_GE(z.size(), 10u);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(z[n - 1].at.real(), (n - 1.0) / (n + 1.0), 1e-15);
    EXPECT_LT(std::abs(f(z[n - 1].at).to_complex()), 1e-12 * (n + 1) * (n + 1));
  }
}

TEST(Catalog, UnknownName) { EXPECT_THROW(catalog_get("no-such-entry"), UnknownCatalogEntry); }

TEST(Catalog, JsonEntries) {
  const auto c = Catalog::from_json(nlohmann::json::parse(R"({"entries": [
    {"name": "q", "expression-tag": "rational", "domain": "unit-disc",
     "params": {"zeros": [[0.2, 0.1, 2]], "poles": [[-0.5, 0.0, 1]]}}]})"));
  const auto q = c.get("q");
  const cplx z{0.1, 0.3};
  const cplx want = (z - cplx{0.2, 0.1}) * (z - cplx{0.2, 0.1}) / (z + 0.5);
  EXPECT_LT(std::abs(q(z).to_complex() - want), 1e-14);
  EXPECT_TRUE(q.has_complete_registry());
  EXPECT_EQ(q.registry()->zeros.at(0).multiplicity, 2);

  EXPECT_THROW(Catalog::from_json(nlohmann::json::parse(R"([{"name": "x"}])")), CatalogFormatError);
  EXPECT_THROW(Catalog::from_json(nlohmann::json::parse(R"([{"name": "x", "expression-tag": "nope"}])")).get("x"),
               CatalogFormatError);
  // a point listed as zero and pole at once
  EXPECT_ANY_THROW(testutil::rational("bad", {{0.1, 0.0, 1}}, {{0.1, 0.0, 1}}));
}

TEST(Catalog, MergedOverrides) {
  const auto extra = Catalog::from_json(nlohmann::json::parse(
      R"([{"name": "identity", "expression-tag": "constant", "params": {"re": 2.0}, "domain": "plane"}])"));
  const auto merged = Catalog::builtin().merged(extra);
  EXPECT_NEAR(merged.get("identity")(cplx{0.5, 0.0}).to_complex().real(), 2.0, 0.0);
  EXPECT_TRUE(merged.contains("notLP"));
}

// Closed-form derivatives against the Cauchy route, 100 interior points per entry.
TEST(Catalog, ClosedFormMatchesCauchy) {
  for (const auto& name : Catalog::builtin().names()) {
    const auto f = catalog_get(name);
    if (f.closed_form_orders() < 1) continue;
    const double radius = f.domain().kind() == DomainKind::unit_disc ? 0.8 : 1.5;
    for (int order = 1; order <= std::min(2, f.closed_form_orders()); ++order) {
      const auto closed = derivative(f, order);
      const auto cauchy = cauchy_derivative_handle(f, order);
      double worst = 0.0;
      for (cplx z : sample_disc(100, 3, radius)) {
        if (f.registry()) {
          bool near = false;
          for (const auto& p : f.registry()->poles) near = near || std::abs(z - p.at) < 0.05;
          if (near) continue;
        }
        const Value a = closed(z), b = cauchy(z);
        if (a.is_zero() && std::abs(b.to_complex()) < 1e-10) continue;
        worst = std::max(worst, rel_diff(b, a));
      }
      EXPECT_LT(worst, 1e-6) << name << " order " << order;
    }
  }
}

TEST(Catalog, RealSymmetry) {
  for (const auto& name : Catalog::builtin().names()) {
    const auto f = catalog_get(name);
    if (!f.real_symmetric()) continue;
    const double radius = f.domain().kind() == DomainKind::unit_disc ? 0.9 : 1.5;
    for (cplx z : sample_disc(200, 11, radius)) {
      const Value a = f(z), b = f(std::conj(z));
      if (a.is_pole() || a.is_zero()) continue;
      // conj(f(conj z)) = f(z): equal moduli, opposite phases.
      const double d = std::abs(b.log_abs() - a.log_abs()) + std::abs(std::remainder(b.phase() + a.phase(), two_pi));
      EXPECT_LT(d, 1e-12 * (1.0 + std::abs(a.exponent()))) << name << " at " << z;
    }
  }
}
