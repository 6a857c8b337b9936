// Copyright 2026 The uqnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/monte_carlo.hpp"
#include "oracles/quadrature.hpp"
#include "support.hpp"
#include "uqnet/gp/fit.hpp"
#include "uqnet/network/gauss_integrals.hpp"
#include "uqnet/network/graph.hpp"
#include "uqnet/network/linked_gp.hpp"
#include "uqnet/network/mdm.hpp"

using namespace uqnet;
using namespace uqnet::network;

namespace {

gp::KernelSpec random_kernel(Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 2.0);
  gp::KernelSpec k;
  k.lengthscales = Eigen::VectorXd::NullaryExpr(d, [&] { return u(rng); });
  return k;
}

double corr(const gp::KernelSpec& k, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return gp::eval_correlation(k, x, y);
}

// GP on a smooth function of `dim` inputs over [0, 1]^dim (or the given box).
gp::GpEmulator smooth_emulator(Eigen::Index dim, int n, std::uint64_t seed,
                               const std::function<double(const Eigen::VectorXd&)>& f,
                               std::vector<gp::Domain> domains = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (domains.empty()) domains.assign(static_cast<std::size_t>(dim), gp::Domain{0.0, 1.0});
  gp::Design d;
  d.domains = domains;
  d.inputs.resize(n, dim);
  d.outputs.resize(n);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto& dom = domains[static_cast<std::size_t>(j)];
      d.inputs(i, j) = dom.lower + dom.width() * u(rng);
    }
    d.outputs(i) = f(d.inputs.row(i).transpose());
  }
  gp::HyperparamSearchConfig cfg;
  cfg.restarts = 4;
  return gp::fit_gp(d, cfg);
}

struct McMoments {
  oracle::RunningStats mean;      // of m(X)
  oracle::RunningStats total2;    // of v(X) + (m(X) - c)^2 around a pilot centre
  double centre = 0.0;
};

}  // namespace

TEST_SUITE("network") {

TEST_CASE("kernel mean collapses to the kernel at a point mass") {
  std::mt19937_64 rng(1);
  const gp::KernelSpec k = random_kernel(3, rng);
  const Eigen::Vector3d mu(0.1, -0.4, 0.8), xi(0.5, 0.2, -0.1), xj(-0.3, 0.0, 0.4);
  const GaussianMoments point(mu, Eigen::Matrix3d::Zero());
  CHECK(gauss_kernel_mean(k, xi, point) == doctest::Approx(corr(k, mu, xi)).epsilon(1e-15));
  CHECK(gauss_kernel_second(k, xi, xj, point) == doctest::Approx(corr(k, mu, xi) * corr(k, mu, xj)).epsilon(1e-14));
  const Eigen::VectorXd lin = gauss_kernel_linear(k, xi, point);
  for (int i = 0; i < 3; ++i) CHECK(lin(i) == doctest::Approx(mu(i) * corr(k, mu, xi)).epsilon(1e-14));
}

TEST_CASE("one-dimensional kernel mean at the design point") {
  gp::KernelSpec k;
  k.lengthscales = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.3);
  const GaussianMoments law(x, Eigen::MatrixXd::Constant(1, 1, 0.5));
  CHECK(gauss_kernel_mean(k, x, law) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  const double quad = oracle::adaptive_expectation(law.mean, law.cov, [&](const Eigen::VectorXd& v) { return corr(k, v, x); });
  CHECK(std::abs(quad - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("kernel integrals match quadrature with correlated inputs") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 1 + trial % 3;
    const gp::KernelSpec k = random_kernel(d, rng);
    const Eigen::VectorXd mu = Eigen::VectorXd::NullaryExpr(d, [&] { return n01(rng); });
    const Eigen::VectorXd xi = Eigen::VectorXd::NullaryExpr(d, [&] { return n01(rng); });
    const Eigen::VectorXd xj = Eigen::VectorXd::NullaryExpr(d, [&] { return n01(rng); });
    const GaussianMoments law(mu, testing::random_spd(d, rng, 0.5));
    const double m = oracle::adaptive_expectation(mu, law.cov, [&](const Eigen::VectorXd& v) { return corr(k, v, xi); });
    const double s = oracle::adaptive_expectation(
        mu, law.cov, [&](const Eigen::VectorXd& v) { return corr(k, v, xi) * corr(k, v, xj); });
    CHECK(std::abs(gauss_kernel_mean(k, xi, law) - m) < 1e-8);
    CHECK(std::abs(gauss_kernel_second(k, xi, xj, law) - s) < 1e-8);
    const Eigen::VectorXd lin = gauss_kernel_linear(k, xi, law);
    for (Eigen::Index c = 0; c < d; ++c) {
      const double l = oracle::adaptive_expectation(mu, law.cov, [&](const Eigen::VectorXd& v) { return v(c) * corr(k, v, xi); });
      CHECK(std::abs(lin(c) - l) < 1e-8);
    }
  }
}

TEST_CASE("kernel covariance keeps its relative accuracy at tiny input variance") {
  // first order: Cov(r_i, r_j) = grad r_i' Sigma grad r_j + O(|Sigma|^2)
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index d = 1 + trial % 3;
    const gp::KernelSpec k = random_kernel(d, rng);
    const Eigen::VectorXd mu = Eigen::VectorXd::NullaryExpr(d, [&] { return 0.5 * n01(rng); });
    const Eigen::VectorXd xi = Eigen::VectorXd::NullaryExpr(d, [&] { return 0.5 * n01(rng); });
    const Eigen::VectorXd xj = Eigen::VectorXd::NullaryExpr(d, [&] { return 0.5 * n01(rng); });
    const Eigen::MatrixXd cov = testing::random_spd(d, rng, 1e-12);
    const KernelExpectations ke(k, GaussianMoments(mu, cov));
    const Eigen::ArrayXd lambda = k.lengthscales.array().square().inverse();
    const Eigen::VectorXd gi = (-2.0 * corr(k, mu, xi) * lambda * (mu - xi).array()).matrix();
    const Eigen::VectorXd gj = (-2.0 * corr(k, mu, xj) * lambda * (mu - xj).array()).matrix();
    const double first_order = gi.dot(cov * gj);
    CHECK(std::abs(ke.centered_second(xi, xj) - first_order) <= 1e-6 * std::abs(first_order));
  }
}

TEST_CASE("linear moment is symmetric about the design point") {
  std::mt19937_64 rng(3);
  const gp::KernelSpec k = random_kernel(2, rng);
  const Eigen::Vector2d mu(0.4, -1.2);
  const GaussianMoments law(mu, testing::random_spd(2, rng));
  const Eigen::VectorXd lin = gauss_kernel_linear(k, mu, law);
  const double xi = gauss_kernel_mean(k, mu, law);
  CHECK(lin(0) == doctest::Approx(mu(0) * xi).epsilon(1e-13));
  CHECK(lin(1) == doctest::Approx(mu(1) * xi).epsilon(1e-13));
}

TEST_CASE("laws must be positive semidefinite") {
  gp::KernelSpec k;
  k.lengthscales = Eigen::VectorXd::Ones(2);
  const GaussianMoments bad(Eigen::Vector2d::Zero(), (Eigen::Matrix2d() << 1, 2, 2, 1).finished());
  CHECK(testing::error_code([&] { gauss_kernel_mean(k, Eigen::Vector2d::Zero(), bad); }) == "invalid_law");
}

TEST_CASE("a degenerate parent law reproduces the plain prediction") {
  const gp::GpEmulator em = smooth_emulator(3, 25, 4, [](const Eigen::VectorXd& x) {
    return std::sin(3 * x(0)) + x(1) * x(2) + 0.5 * x(2);
  });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Vector3d mu(u(rng), u(rng), u(rng));
    const auto p = em.predict(mu);
    const LinkedMoments lm = linked_gp_moments(em, GaussianMoments(mu, Eigen::Matrix3d::Zero()));
    CHECK(std::abs(lm.mean - p.mean) <= 1e-10 * (1 + std::abs(p.mean)));
    CHECK(std::abs(lm.variance - p.variance) <= 1e-10 * (1 + p.variance));
    const std::vector<Eigen::Index> coords{1};
    const LinkedMoments part = linked_gp_moments(em, GaussianMoments::scalar(mu(1), 0.0), coords, mu);
    CHECK(std::abs(part.mean - p.mean) <= 1e-10 * (1 + std::abs(p.mean)));
    CHECK(std::abs(part.variance - p.variance) <= 1e-10 * (1 + p.variance));
  }
}

TEST_CASE("linked moments match Monte Carlo through the child's conditional moments") {
  const gp::GpEmulator em = smooth_emulator(2, 20, 6, [](const Eigen::VectorXd& x) {
    return std::exp(-x(0)) * std::cos(4 * x(1)) + x(0);
  });
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::Vector2d mu(0.3 + 0.1 * trial, 0.6 - 0.1 * trial);
    const Eigen::Matrix2d cov = testing::random_spd(2, rng, 0.02);
    const LinkedMoments lm = linked_gp_moments(em, GaussianMoments(mu, cov));
    const Eigen::Matrix2d l = cov.llt().matrixL();
    const int draws = 200000;
    oracle::RunningStats m, total;
    std::vector<std::pair<double, double>> samples;
    samples.reserve(draws);
    for (int i = 0; i < draws; ++i) {
      const Eigen::Vector2d x = mu + l * Eigen::Vector2d(n01(rng), n01(rng));
      const auto p = em.predict(x);
      m.add(p.mean);
      samples.emplace_back(p.mean, p.variance);
    }
    for (const auto& [mean, var] : samples) total.add(var + (mean - m.mean) * (mean - m.mean));
    CHECK(std::abs(lm.mean - m.mean) <= 4 * m.standard_error());
    CHECK(std::abs(lm.variance - total.mean) <= 4 * total.standard_error() + 1e-9 * lm.variance);
    CHECK(lm.variance >= lm.expected_conditional_variance);
    CHECK(lm.variance_of_conditional_mean >= 0.0);
  }
}

TEST_CASE("linked variance is nondecreasing in parent uncertainty") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const gp::GpEmulator em = smooth_emulator(2, 18, 100 + trial, [&](const Eigen::VectorXd& x) {
      return std::sin(2 * x(0) + trial) + x(1) * x(1);
    });
    const Eigen::Vector2d mu(u(rng), u(rng));
    const Eigen::Matrix2d base = testing::random_spd(2, rng, 0.01);
    double previous = -1.0;
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
      const double v = linked_gp_moments(em, GaussianMoments(mu, alpha * base)).variance;
      CHECK(v >= 0.0);
      CHECK(v >= previous - 1e-10 * std::abs(previous));
      previous = v;
    }
  }
}

TEST_CASE("mdm with a certain parent reduces to the conditional forecast") {
  std::mt19937_64 rng(9);
  dlm::StepForecast prior;
  prior.a = Eigen::Vector4d(0.5, 1.2, 0.01, -0.02);
  prior.R = testing::random_spd(4, rng, 0.01);
  const Eigen::Vector4d f(1.0, 2.8, 30.0, 12.0);
  const std::vector<std::string> names{"const", "gas_price", "ets", "offshore_wind"};
  const MdmMarginal m = mdm_marginal(GaussianMoments::scalar(2.8, 0.0), prior, 0.3, names, "gas_price", f);
  CHECK(m.moments.scalar_mean() == doctest::Approx(f.dot(prior.a)).epsilon(1e-14));
  CHECK(m.moments.scalar_variance() == doctest::Approx(f.dot(prior.R * f) + 0.3).epsilon(1e-13));
  CHECK(m.cross_cov(0) == 0.0);
}

TEST_CASE("mdm regression covariance for the electricity model") {
  dlm::StepForecast prior;
  prior.a = Eigen::Vector4d(0.5, 1.2, 0.01, -0.02);
  prior.R = 0.01 * Eigen::Matrix4d::Identity();
  const std::vector<std::string> names{"const", "gas_price", "ets", "offshore_wind"};
  const MdmMarginal m =
      mdm_marginal(GaussianMoments::scalar(2.8, 0.04), prior, 0.3, names, "gas_price", Eigen::Vector4d(1, 0, 30, 12));
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected(1, 1) = 0.04;
  CHECK(m.omega == expected);
  CHECK(m.regressor_mean == Eigen::Vector4d(1, 2.8, 30, 12));
  CHECK(m.cross_cov(0) == doctest::Approx(1.2 * 0.04).epsilon(1e-15));
  const double corr = m.cross_cov(0) / std::sqrt(0.04 * m.moments.scalar_variance());
  CHECK(std::abs(corr) <= 1.0);
  CHECK(testing::error_code([&] {
          mdm_marginal(GaussianMoments::scalar(2.8, 0.04), prior, 0.3, names, "coal", Eigen::Vector4d(1, 0, 30, 12));
        }) == "binding_error");
}

TEST_CASE("mdm moments match Monte Carlo") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n01;
  dlm::StepForecast prior;
  prior.a = Eigen::Vector3d(0.4, 1.1, -0.3);
  prior.R = testing::random_spd(3, rng, 0.05);
  const double v = 0.2, f2 = 2.5, q2 = 0.3;
  const std::vector<std::string> names{"const", "gas", "x"};
  const Eigen::Vector3d regs(1.0, 0.0, 1.7);
  const MdmMarginal m = mdm_marginal(GaussianMoments::scalar(f2, q2), prior, v, names, "gas", regs);
  const Eigen::Matrix3d l = prior.R.llt().matrixL();
  oracle::RunningStats y, y2, cross;
  const int draws = 400000;
  std::vector<std::pair<double, double>> s;
  s.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    const double p = f2 + std::sqrt(q2) * n01(rng);
    const Eigen::Vector3d theta = prior.a + l * Eigen::Vector3d(n01(rng), n01(rng), n01(rng));
    const double out = theta(0) + theta(1) * p + theta(2) * regs(2) + std::sqrt(v) * n01(rng);
    y.add(out);
    s.emplace_back(p, out);
  }
  for (const auto& [p, out] : s) {
    y2.add((out - y.mean) * (out - y.mean));
    cross.add((p - f2) * (out - y.mean));
  }
  CHECK(std::abs(m.moments.scalar_mean() - y.mean) <= 4 * y.standard_error());
  CHECK(std::abs(m.moments.scalar_variance() - y2.mean) <= 4 * y2.standard_error());
  CHECK(std::abs(m.cross_cov(0) - cross.mean) <= 4 * cross.standard_error());
}

TEST_CASE("graph definitions are validated with paths") {
  const auto em = std::make_shared<const gp::GpEmulator>(smooth_emulator(1, 8, 11, [](const Eigen::VectorXd& x) { return x(0); }));
  ModelResolver resolver;
  resolver.gp = [&](const std::string& id) { return id == "g" ? em : nullptr; };
  resolver.dlm_regressors = [](const std::string& id) {
    return id == "d" ? std::vector<std::string>{"const", "p"} : std::vector<std::string>{};
  };
  const auto build = [&](const nlohmann::json& doc) { NodeGraph::build(graph_def_from_json(doc), resolver); };
  nlohmann::json ok = {{"id", "g1"},
                       {"target", "y"},
                       {"nodes",
                        {{{"id", "e"}, {"type", "exogenous"}, {"value", 0.5}},
                         {{"id", "d1"}, {"type", "dlm"}, {"model", "d"}},
                         {{"id", "d2"}, {"type", "dlm"}, {"model", "d"}, {"bindings", {{"p", "d1"}}}},
                         {{"id", "y"}, {"type", "gp"}, {"model", "g"}, {"bindings", {{"x1", "d2"}}}}}}};
  CHECK_NOTHROW(build(ok));
  nlohmann::json cycle = ok;
  cycle["nodes"][1]["bindings"] = {{"p", "d2"}};
  CHECK(testing::error_code([&] { build(cycle); }) == "invalid_graph");
  nlohmann::json unbound = ok;
  unbound["nodes"][3].erase("bindings");
  try {
    build(unbound);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "invalid_graph");
    CHECK(e.context().at("path") == "nodes.y.bindings.x1");
  }
  nlohmann::json unknown = ok;
  unknown["nodes"][2]["bindings"] = {{"q", "d1"}};
  CHECK(testing::error_code([&] { build(unknown); }) == "invalid_graph");
  nlohmann::json bad_type = ok;
  bad_type["nodes"][0]["type"] = "constant";
  CHECK(testing::error_code([&] { build(bad_type); }) == "invalid_graph");
  nlohmann::json dangling = ok;
  dangling["nodes"][3]["bindings"] = {{"x1", "nowhere"}};
  CHECK(testing::error_code([&] { build(dangling); }) == "invalid_graph");
  const GraphDef def = graph_def_from_json(ok);
  CHECK(to_json(graph_def_from_json(to_json(def))) == to_json(def));
}

TEST_CASE("graph propagation matches end-to-end Monte Carlo") {
  // y1: GP of an exogenous input; y2: DLM; y3: DLM regressing on y2; y4: GP of (y1, y2, y3).
  const auto g1 = std::make_shared<const gp::GpEmulator>(
      smooth_emulator(1, 8, 12, [](const Eigen::VectorXd& x) { return 1.0 + std::sin(3 * x(0)); }));
  const auto g4 = std::make_shared<const gp::GpEmulator>(smooth_emulator(
      3, 40, 13, [](const Eigen::VectorXd& x) { return x(0) * std::min(x(1), 0.5 * x(2)) + 0.3 * x(2); },
      {{0.0, 3.0}, {1.0, 4.0}, {2.0, 8.0}}));
  gp::Design d4 = g4->design();
  ModelResolver resolver;
  resolver.gp = [&](const std::string& id) { return id == "g1" ? g1 : g4; };
  resolver.dlm_regressors = [](const std::string& id) {
    return id == "d2" ? std::vector<std::string>{"const"} : std::vector<std::string>{"const", "gas"};
  };
  const nlohmann::json doc = {
      {"id", "mc"},
      {"target", "y4"},
      {"nodes",
       {{{"id", "x"}, {"type", "exogenous"}, {"value", 0.4}},
        {{"id", "y1"}, {"type", "gp"}, {"model", "g1"}, {"bindings", {{"x1", "x"}}}},
        {{"id", "y2"}, {"type", "dlm"}, {"model", "d2"}},
        {{"id", "y3"}, {"type", "dlm"}, {"model", "d3"}, {"bindings", {{"gas", "y2"}}}},
        {{"id", "y4"}, {"type", "gp"}, {"model", "g4"}, {"bindings", {{"x1", "y1"}, {"x2", "y2"}, {"x3", "y3"}}}}}}};
  const NodeGraph graph = NodeGraph::build(graph_def_from_json(doc), resolver);
  StepInputs in;
  in.exogenous["x"] = 0.4;
  DlmStepInput s2, s3;
  s2.prior.a = Eigen::VectorXd::Constant(1, 2.5);
  s2.prior.R = Eigen::MatrixXd::Constant(1, 1, 0.04);
  s2.obs_variance = 0.02;
  s2.regressors = Eigen::VectorXd::Ones(1);
  s2.prior.f = 2.5;
  s2.prior.Q = 0.06;
  s3.prior.a = Eigen::Vector2d(1.0, 1.6);
  s3.prior.R = (Eigen::Matrix2d() << 0.02, -0.002, -0.002, 0.003).finished();
  s3.obs_variance = 0.05;
  s3.regressors = Eigen::Vector2d(1.0, 0.0);
  in.dlm["y2"] = s2;
  in.dlm["y3"] = s3;
  const PropagationResult res = propagate(graph, in);
  const auto& y1 = res.nodes.at("y1").moments;
  const auto& y4 = res.nodes.at("y4");

  std::mt19937_64 rng(14);
  std::normal_distribution<double> n01;
  const Eigen::Matrix2d l3 = s3.prior.R.llt().matrixL();
  const int draws = 100000;
  oracle::RunningStats mean;
  std::vector<std::pair<double, double>> s;
  s.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    const double a = y1.scalar_mean() + std::sqrt(y1.scalar_variance()) * n01(rng);
    const double b = 2.5 + std::sqrt(0.06) * n01(rng);
    const Eigen::Vector2d th = s3.prior.a + l3 * Eigen::Vector2d(n01(rng), n01(rng));
    const double c = th(0) + th(1) * b + std::sqrt(0.05) * n01(rng);
    const auto p = g4->predict(Eigen::Vector3d(a, b, c));
    mean.add(p.mean);
    s.emplace_back(p.mean, p.variance);
  }
  oracle::RunningStats total;
  for (const auto& [m, v] : s) total.add(v + (m - mean.mean) * (m - mean.mean));
  CHECK(std::abs(y4.moments.scalar_mean() - mean.mean) <= 5 * mean.standard_error());
  CHECK(std::abs(y4.moments.scalar_variance() - total.mean) <= 5 * total.standard_error());
  CHECK(y4.moments.scalar_variance() >= y4.plain->variance);
  CHECK(res.joint.cov(2, 3) == doctest::Approx(1.6 * 0.06).epsilon(1e-12));
  CHECK(res.joint.cov(1, 2) == 0.0);

  StepInputs zero = in;
  zero.zero_parent_variance = true;
  const PropagationResult z = propagate(graph, zero);
  const auto& zy4 = z.nodes.at("y4");
  CHECK(zy4.moments.scalar_mean() == doctest::Approx(zy4.plain->mean).epsilon(1e-12));
  CHECK(zy4.moments.scalar_variance() == doctest::Approx(zy4.plain->variance).epsilon(1e-12));
}

}  // TEST_SUITE
