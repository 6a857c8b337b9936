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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uqnet/gp/design.hpp"

namespace uqnet::simulators {

// Degree-day heating model. Inputs follow the heat-demand emulator's
// ordering: heating degree days, equipment efficiency, transmission H.
struct HeatDemandParams {
  double hdd = 600.0;                       // K day per quarter
  double efficiency = 0.8;                  // (0, 1]
  double transmission_coefficient = 15.0;   // kW/K
  double baseline_load = 0.0;               // kWh per quarter
};

// H [kW/K] * hdd [K day] * 24 [h/day] / efficiency + baseline, in kWh.
double heating_demand(const HeatDemandParams& p);

struct DispatchParams {
  double demand = 500000.0;       // kWh of heat per quarter
  double gas_price = 3.0;         // p/kWh
  double elec_price = 15.0;       // p/kWh
  double boiler_efficiency = 0.9;
  double heat_pump_cop = 4.0;
};

enum class Technology { kGasBoiler, kHeatPump };

// Least-cost technology: gas at gas_price / boiler_efficiency per kWh of heat
// against the heat pump at elec_price / COP; ties go to the heat pump.
Technology cheapest_technology(const DispatchParams& p);

// Operational cost in GBP: demand x cheapest unit cost (p/kWh) / 100.
double dispatch_cost(const DispatchParams& p);

// Input domains of the two simulators as used for emulation.
std::vector<gp::Domain> heat_demand_domains();
std::vector<std::string> heat_demand_input_names();
std::vector<gp::Domain> dispatch_domains();
std::vector<std::string> dispatch_input_names();

// Latin hypercube over `domains` improved by maximin coordinate swaps.
// Bit-reproducible for a given seed.
Eigen::MatrixXd lhc_design(Eigen::Index n, const std::vector<gp::Domain>& domains, std::uint64_t seed,
                           int swap_iterations = 4000);

// Smallest pairwise Euclidean distance between rows after scaling each
// column to [0, 1] by its domain.
double min_pairwise_distance(const Eigen::MatrixXd& points, const std::vector<gp::Domain>& domains);

enum class SimulatorKind { kHeatDemand, kDispatch };

SimulatorKind parse_simulator(const std::string& name);

// Runs the simulator at every design row.
gp::Design run_ensemble(SimulatorKind kind, Eigen::Index runs, std::uint64_t seed);

// CSV: header of input names plus the output name, one run per row.
void write_ensemble_csv(std::ostream& out, const gp::Design& design, const std::string& output_name);
gp::Design read_ensemble_csv(std::istream& in, const std::vector<gp::Domain>& domains);

}  // namespace uqnet::simulators
