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

#include "uqnet/simulators/simulators.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "uqnet/common/error.hpp"
#include "uqnet/common/latin.hpp"

namespace uqnet::simulators {

double heating_demand(const HeatDemandParams& p) {
  if (!(p.efficiency > 0.0)) {
    throw invalid_argument("invalid_parameter", "efficiency must be positive", {{"parameter", "efficiency"}});
  }
  return p.transmission_coefficient * p.hdd * 24.0 / p.efficiency + p.baseline_load;
}

Technology cheapest_technology(const DispatchParams& p) {
  if (!(p.boiler_efficiency > 0.0) || !(p.heat_pump_cop > 0.0)) {
    throw invalid_argument("invalid_parameter", "boiler efficiency and COP must be positive");
  }
  const double gas_unit = p.gas_price / p.boiler_efficiency;
  const double hp_unit = p.elec_price / p.heat_pump_cop;
  return gas_unit < hp_unit ? Technology::kGasBoiler : Technology::kHeatPump;
}

double dispatch_cost(const DispatchParams& p) {
  if (p.demand < 0.0) throw invalid_argument("invalid_parameter", "demand must be nonnegative", {{"parameter", "demand"}});
  const double unit = cheapest_technology(p) == Technology::kGasBoiler ? p.gas_price / p.boiler_efficiency
                                                                        : p.elec_price / p.heat_pump_cop;
  return p.demand * unit / 100.0;
}

std::vector<gp::Domain> heat_demand_domains() { return {{200.0, 1200.0}, {0.5, 1.0}, {10.0, 25.0}}; }

std::vector<std::string> heat_demand_input_names() { return {"hdd", "efficiency", "transmission_coefficient"}; }

std::vector<gp::Domain> dispatch_domains() {
  return {{48000.0, 1450000.0}, {1.0, 5.0}, {4.0, 25.0}, {0.3, 1.0}, {2.0, 6.0}};
}

std::vector<std::string> dispatch_input_names() {
  return {"demand", "gas_price", "elec_price", "boiler_efficiency", "heat_pump_cop"};
}

namespace {

double row_distance2(const Eigen::MatrixXd& u, Eigen::Index i, Eigen::Index j) {
  return (u.row(i) - u.row(j)).squaredNorm();
}

double min_distance2(const Eigen::MatrixXd& u) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) best = std::min(best, row_distance2(u, i, j));
  }
  return best;
}

// Pairwise d^-p terms of the Morris-Mitchell criterion, updated per swap.
class PhiP {
 public:
  explicit PhiP(const Eigen::MatrixXd& u, double p = 15.0) : p_(p), terms_(u.rows(), u.rows()) {
    terms_.setZero();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) terms_(i, j) = terms_(j, i) = term(row_distance2(u, i, j));
    }
    sum_ = terms_.sum() / 2.0;
  }

  // Change in the criterion sum if rows a and b of `u` (already swapped)
  // replaced the stored terms; fills `rows` with the new terms.
  double delta(const Eigen::MatrixXd& u, Eigen::Index a, Eigen::Index b, Eigen::MatrixXd& rows) const {
    rows.resize(2, u.rows());
    double change = 0.0;
    const Eigen::Index ab[2] = {a, b};
    for (int k = 0; k < 2; ++k) {
      for (Eigen::Index j = 0; j < u.rows(); ++j) {
        rows(k, j) = j == ab[k] ? 0.0 : term(row_distance2(u, ab[k], j));
        if (k == 1 && j == a) continue;  // the a-b pair is counted once
        change += rows(k, j) - terms_(ab[k], j);
      }
    }
    return change;
  }

  void accept(Eigen::Index a, Eigen::Index b, const Eigen::MatrixXd& rows, double change) {
    terms_.row(a) = rows.row(0);
    terms_.col(a) = rows.row(0).transpose();
    terms_.row(b) = rows.row(1);
    terms_.col(b) = rows.row(1).transpose();
    sum_ += change;
  }

  double sum() const { return sum_; }

 private:
  double term(double d2) const { return std::pow(d2, -0.5 * p_); }

  double p_;
  Eigen::MatrixXd terms_;
  double sum_ = 0.0;
};

}  // namespace

Eigen::MatrixXd lhc_design(Eigen::Index n, const std::vector<gp::Domain>& domains, std::uint64_t seed,
                           int swap_iterations) {
  if (n < 2) throw invalid_argument("precondition", "a Latin hypercube needs at least 2 runs");
  for (std::size_t j = 0; j < domains.size(); ++j) {
    if (!(domains[j].upper > domains[j].lower)) {
      throw invalid_argument("degenerate_domain", "domain of input " + std::to_string(j) + " has lower == upper",
                             {{"input", std::to_string(j)}});
    }
  }
  const auto d = static_cast<Eigen::Index>(domains.size());
  Rng rng(seed);
  Eigen::MatrixXd u = random_latin_hypercube(n, d, rng);

  // Swapping two entries within a column keeps the Latin property.
  PhiP criterion(u);
  Eigen::MatrixXd rows;
  for (int it = 0; it < swap_iterations; ++it) {
    const auto col = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(d)));
    const auto a = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const auto b = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    std::swap(u(a, col), u(b, col));
    const double change = criterion.delta(u, a, b, rows);
    if (change < 0.0) {
      criterion.accept(a, b, rows, change);
    } else {
      std::swap(u(a, col), u(b, col));
    }
  }

  Eigen::MatrixXd x(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& dom = domains[static_cast<std::size_t>(j)];
    x.col(j) = (dom.lower + dom.width() * u.col(j).array()).matrix();
  }
  return x;
}

double min_pairwise_distance(const Eigen::MatrixXd& points, const std::vector<gp::Domain>& domains) {
  Eigen::MatrixXd u(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const auto& dom = domains[static_cast<std::size_t>(j)];
    u.col(j) = ((points.col(j).array() - dom.lower) / dom.width()).matrix();
  }
  return std::sqrt(min_distance2(u));
}

SimulatorKind parse_simulator(const std::string& name) {
  if (name == "heat" || name == "heat_demand" || name == "heating_demand") return SimulatorKind::kHeatDemand;
  if (name == "dispatch" || name == "energy" || name == "dispatch_cost") return SimulatorKind::kDispatch;
  throw invalid_argument("unknown_simulator", "unknown simulator '" + name + "' (expected heat or dispatch)");
}

gp::Design run_ensemble(SimulatorKind kind, Eigen::Index runs, std::uint64_t seed) {
  gp::Design design;
  const bool heat = kind == SimulatorKind::kHeatDemand;
  design.domains = heat ? heat_demand_domains() : dispatch_domains();
  design.input_names = heat ? heat_demand_input_names() : dispatch_input_names();
  design.inputs = lhc_design(runs, design.domains, seed);
  design.outputs.resize(runs);
  for (Eigen::Index i = 0; i < runs; ++i) {
    const auto x = design.inputs.row(i);
    design.outputs(i) = heat ? heating_demand({x(0), x(1), x(2), 0.0})
                             : dispatch_cost({x(0), x(1), x(2), x(3), x(4)});
  }
  return design;
}

void write_ensemble_csv(std::ostream& out, const gp::Design& design, const std::string& output_name) {
  for (Eigen::Index j = 0; j < design.dim(); ++j) {
    out << (design.input_names.empty() ? "x" + std::to_string(j + 1) : design.input_names[static_cast<std::size_t>(j)])
        << ',';
  }
  out << output_name << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < design.size(); ++i) {
    for (Eigen::Index j = 0; j < design.dim(); ++j) out << design.inputs(i, j) << ',';
    out << design.outputs(i) << '\n';
  }
}

gp::Design read_ensemble_csv(std::istream& in, const std::vector<gp::Domain>& domains) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error("empty_csv", "ensemble CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto p = static_cast<Eigen::Index>(header.size()) - 1;
  if (p < 1 || static_cast<Eigen::Index>(domains.size()) != p) {
    throw parse_error("bad_header", "ensemble header does not match the declared input domains");
  }
  std::vector<std::vector<double>> rows;
  int row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw parse_error("bad_number", "unparsable number '" + cell + "' at row " + std::to_string(row_number),
                          {{"row", std::to_string(row_number)}, {"column", std::to_string(row.size() + 1)}});
      }
    }
    if (static_cast<Eigen::Index>(row.size()) != p + 1) {
      throw parse_error("bad_row", "row " + std::to_string(row_number) + " has the wrong number of columns",
                        {{"row", std::to_string(row_number)}});
    }
    rows.push_back(std::move(row));
  }
  gp::Design d;
  d.domains = domains;
  d.input_names.assign(header.begin(), header.end() - 1);
  d.inputs.resize(static_cast<Eigen::Index>(rows.size()), p);
  d.outputs.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) d.inputs(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    d.outputs(static_cast<Eigen::Index>(i)) = rows[i].back();
  }
  return d;
}

}  // namespace uqnet::simulators
