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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "uqnet/common/gaussian_moments.hpp"
#include "uqnet/dlm/dlm.hpp"
#include "uqnet/gp/emulator.hpp"

namespace uqnet::network {

enum class NodeKind { kExogenous, kDlm, kGp };

const char* to_string(NodeKind kind);

// Declarative node as it appears in a graph definition file. `bindings` maps
// a child input (GP input name or DLM regressor name) to a source node id.
struct NodeDef {
  std::string id;
  NodeKind kind = NodeKind::kExogenous;
  std::string model;
  std::map<std::string, std::string> bindings;
  // Exogenous nodes: one constant value, or four values indexed by the
  // quarter of the year (Q1..Q4).
  std::vector<double> profile;
};

struct GraphDef {
  std::string id;
  std::vector<NodeDef> nodes;
  std::string target;
};

GraphDef graph_def_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const GraphDef& def);

// Looks up models referenced by a graph definition.
struct ModelResolver {
  std::function<std::shared_ptr<const gp::GpEmulator>(const std::string&)> gp;
  std::function<std::vector<std::string>(const std::string&)> dlm_regressors;
};

// Validated feed-forward graph. GP nodes carry their emulator; DLM nodes
// carry their regressor names (state moments are supplied per step).
class NodeGraph {
 public:
  struct Node {
    NodeDef def;
    std::shared_ptr<const gp::GpEmulator> emulator;  // GP nodes
    std::vector<std::string> inputs;                 // GP input names or DLM regressor names
    std::vector<std::optional<std::string>> sources;  // per input: bound node id, if any
  };

  static NodeGraph build(const GraphDef& def, const ModelResolver& resolver);

  const std::vector<Node>& nodes() const { return nodes_; }  // topological order
  const Node& node(const std::string& id) const;
  const std::string& target() const { return def_.target; }
  const GraphDef& definition() const { return def_; }

 private:
  GraphDef def_;
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t> index_;
};

// Per-step inputs of a DLM node: its prior state moments for the target time
// and the regression vector (entries bound to parent nodes are ignored).
struct DlmStepInput {
  dlm::StepForecast prior;
  double obs_variance = 0.0;
  Eigen::VectorXd regressors;
};

struct StepInputs {
  std::map<std::string, double> exogenous;                 // exogenous node id -> value
  std::map<std::string, DlmStepInput> dlm;                 // dlm node id -> step input
  std::map<std::string, double> output_scale;              // node id -> factor on its output
  std::map<std::pair<std::string, std::string>, double> edge_scale;  // (child, input) -> factor
  bool zero_parent_variance = false;                       // feed children parent means only
};

struct NodeResult {
  GaussianMoments moments;                  // 1-D output moments
  std::optional<GaussianMoments> parent_law;  // law of the node's bound inputs
  std::vector<std::string> parent_ids;
  std::optional<gp::PointPrediction> plain;  // GP nodes: prediction at the parent means
};

struct PropagationResult {
  std::map<std::string, NodeResult> nodes;
  std::vector<std::string> order;
  GaussianMoments joint;  // all node outputs, in `order`
};

// Topological sweep computing every node's output moments. DLM nodes with
// stochastic regressors use the MDM marginal; GP nodes use linked moments.
// Cross-covariances are carried in a joint Gaussian summary over all nodes.
PropagationResult propagate(const NodeGraph& graph, const StepInputs& inputs);

}  // namespace uqnet::network
