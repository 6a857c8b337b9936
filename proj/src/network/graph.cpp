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

#include "uqnet/network/graph.hpp"

#include <algorithm>
#include <set>

#include "uqnet/common/error.hpp"
#include "uqnet/network/linked_gp.hpp"
#include "uqnet/network/mdm.hpp"

namespace uqnet::network {

using nlohmann::json;

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kExogenous: return "exogenous";
    case NodeKind::kDlm: return "dlm";
    case NodeKind::kGp: return "gp";
  }
  return "unknown";
}

namespace {

NodeKind parse_kind(const std::string& s, const std::string& node_id) {
  if (s == "exogenous") return NodeKind::kExogenous;
  if (s == "dlm") return NodeKind::kDlm;
  if (s == "gp") return NodeKind::kGp;
  throw invalid_argument("invalid_graph", "node '" + node_id + "' has unknown type '" + s + "'",
                         {{"path", "nodes." + node_id + ".type"}});
}

Error graph_error(const std::string& message, const std::string& path) {
  return invalid_argument("invalid_graph", message, {{"path", path}});
}

}  // namespace

GraphDef graph_def_from_json(const json& doc) {
  GraphDef def;
  if (!doc.is_object()) throw graph_error("graph definition must be a JSON object", "$");
  def.id = doc.value("id", std::string{});
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw graph_error("graph needs a 'nodes' array", "nodes");
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const json& n = doc["nodes"][i];
    const std::string path = "nodes[" + std::to_string(i) + "]";
    if (!n.is_object() || !n.contains("id") || !n["id"].is_string()) throw graph_error("node needs a string 'id'", path + ".id");
    if (!n.contains("type") || !n["type"].is_string()) throw graph_error("node needs a string 'type'", path + ".type");
    NodeDef node;
    node.id = n["id"].get<std::string>();
    node.kind = parse_kind(n["type"].get<std::string>(), node.id);
    node.model = n.value("model", std::string{});
    if (n.contains("bindings")) {
      if (!n["bindings"].is_object()) throw graph_error("'bindings' must map input names to node ids", path + ".bindings");
      for (const auto& [input, source] : n["bindings"].items()) {
        if (!source.is_string()) throw graph_error("binding source must be a node id", path + ".bindings." + input);
        node.bindings[input] = source.get<std::string>();
      }
    }
    if (n.contains("value")) {
      if (!n["value"].is_number()) throw graph_error("'value' must be a number", path + ".value");
      node.profile = {n["value"].get<double>()};
    } else if (n.contains("profile")) {
      if (!n["profile"].is_array() || n["profile"].size() != 4) {
        throw graph_error("'profile' must hold four quarterly values", path + ".profile");
      }
      for (const auto& v : n["profile"]) {
        if (!v.is_number()) throw graph_error("'profile' entries must be numbers", path + ".profile");
        node.profile.push_back(v.get<double>());
      }
    }
    if (!node.profile.empty() && node.kind != NodeKind::kExogenous) {
      throw graph_error("only exogenous nodes take a value or profile", path);
    }
    def.nodes.push_back(std::move(node));
  }
  if (!doc.contains("target") || !doc["target"].is_string()) throw graph_error("graph needs a 'target' node id", "target");
  def.target = doc["target"].get<std::string>();
  return def;
}

json to_json(const GraphDef& def) {
  json doc;
  doc["version"] = 1;
  doc["id"] = def.id;
  doc["target"] = def.target;
  doc["nodes"] = json::array();
  for (const auto& n : def.nodes) {
    json node = {{"id", n.id}, {"type", to_string(n.kind)}};
    if (!n.model.empty()) node["model"] = n.model;
    if (!n.bindings.empty()) node["bindings"] = n.bindings;
    if (n.profile.size() == 1) node["value"] = n.profile[0];
    if (n.profile.size() == 4) node["profile"] = n.profile;
    doc["nodes"].push_back(node);
  }
  return doc;
}

NodeGraph NodeGraph::build(const GraphDef& def, const ModelResolver& resolver) {
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < def.nodes.size(); ++i) {
    if (def.nodes[i].id.empty()) throw graph_error("node id must not be empty", "nodes[" + std::to_string(i) + "].id");
    if (!position.emplace(def.nodes[i].id, i).second) {
      throw graph_error("duplicate node id '" + def.nodes[i].id + "'", "nodes." + def.nodes[i].id);
    }
  }
  if (!position.count(def.target)) throw graph_error("target '" + def.target + "' is not a node", "target");

  std::vector<Node> nodes;
  for (const NodeDef& d : def.nodes) {
    const std::string path = "nodes." + d.id;
    Node node;
    node.def = d;
    for (const auto& [input, source] : d.bindings) {
      if (!position.count(source)) throw graph_error("binding source '" + source + "' is not a node", path + ".bindings." + input);
      if (source == d.id) throw graph_error("node cannot bind to itself", path + ".bindings." + input);
    }
    switch (d.kind) {
      case NodeKind::kExogenous:
        if (!d.bindings.empty()) throw graph_error("exogenous nodes take no inputs", path + ".bindings");
        break;
      case NodeKind::kGp: {
        if (!resolver.gp) throw graph_error("no GP model resolver", path + ".model");
        node.emulator = resolver.gp(d.model);
        if (!node.emulator) throw graph_error("unknown GP model '" + d.model + "'", path + ".model");
        node.inputs = node.emulator->design().input_names;
        if (node.inputs.empty()) {
          for (Eigen::Index k = 0; k < node.emulator->input_dim(); ++k) node.inputs.push_back("x" + std::to_string(k + 1));
        }
        for (const auto& input : node.inputs) {
          auto it = d.bindings.find(input);
          if (it == d.bindings.end()) throw graph_error("GP input '" + input + "' is not bound", path + ".bindings." + input);
          node.sources.emplace_back(it->second);
        }
        for (const auto& [input, source] : d.bindings) {
          if (std::find(node.inputs.begin(), node.inputs.end(), input) == node.inputs.end()) {
            throw graph_error("GP model has no input named '" + input + "'", path + ".bindings." + input);
          }
        }
        break;
      }
      case NodeKind::kDlm: {
        if (!resolver.dlm_regressors) throw graph_error("no DLM model resolver", path + ".model");
        node.inputs = resolver.dlm_regressors(d.model);
        if (node.inputs.empty()) throw graph_error("unknown DLM model '" + d.model + "'", path + ".model");
        for (const auto& reg : node.inputs) {
          auto it = d.bindings.find(reg);
          node.sources.push_back(it == d.bindings.end() ? std::nullopt : std::optional<std::string>(it->second));
        }
        for (const auto& [input, source] : d.bindings) {
          if (input == "const") throw graph_error("the intercept cannot be bound", path + ".bindings.const");
          if (std::find(node.inputs.begin(), node.inputs.end(), input) == node.inputs.end()) {
            throw graph_error("DLM model has no regressor named '" + input + "'", path + ".bindings." + input);
          }
        }
        break;
      }
    }
    nodes.push_back(std::move(node));
  }

  // Kahn's algorithm, keeping definition order among ready nodes.
  std::vector<int> indegree(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> children(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::set<std::string> parents;
    for (const auto& s : nodes[i].sources) {
      if (s) parents.insert(*s);
    }
    for (const auto& s : parents) {
      children[position[s]].push_back(i);
      ++indegree[i];
    }
  }
  NodeGraph graph;
  graph.def_ = def;
  std::vector<bool> done(nodes.size(), false);
  while (graph.nodes_.size() < nodes.size()) {
    bool progressed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (done[i] || indegree[i] != 0) continue;
      done[i] = true;
      progressed = true;
      for (std::size_t c : children[i]) --indegree[c];
      graph.index_[nodes[i].def.id] = graph.nodes_.size();
      graph.nodes_.push_back(nodes[i]);
      break;
    }
    if (!progressed) throw graph_error("graph contains a cycle", "nodes");
  }
  return graph;
}

const NodeGraph::Node& NodeGraph::node(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorKind::kNotFound, "node_not_found", "no node '" + id + "'");
  return nodes_[it->second];
}

PropagationResult propagate(const NodeGraph& graph, const StepInputs& inputs) {
  const auto count = static_cast<Eigen::Index>(graph.nodes().size());
  PropagationResult result;
  result.joint.mean = Eigen::VectorXd::Zero(count);
  result.joint.cov = Eigen::MatrixXd::Zero(count, count);
  std::map<std::string, Eigen::Index> slot;

  auto edge_factor = [&](const std::string& child, const std::string& input) {
    auto it = inputs.edge_scale.find({child, input});
    return it == inputs.edge_scale.end() ? 1.0 : it->second;
  };

  for (Eigen::Index k = 0; k < count; ++k) {
    const NodeGraph::Node& node = graph.nodes()[static_cast<std::size_t>(k)];
    const std::string& id = node.def.id;
    NodeResult res;
    Eigen::VectorXd cross = Eigen::VectorXd::Zero(count);  // Cov(this, earlier nodes)

    // Parents of this node, their joint indices and per-edge factors.
    std::vector<Eigen::Index> parent_index;
    std::vector<double> factor;
    std::vector<std::size_t> input_pos;
    for (std::size_t i = 0; i < node.sources.size(); ++i) {
      if (!node.sources[i]) continue;
      parent_index.push_back(slot.at(*node.sources[i]));
      factor.push_back(edge_factor(id, node.inputs[i]));
      input_pos.push_back(i);
      res.parent_ids.push_back(*node.sources[i]);
    }
    const auto np = static_cast<Eigen::Index>(parent_index.size());
    GaussianMoments law(Eigen::VectorXd(np), Eigen::MatrixXd::Zero(np, np));
    Eigen::MatrixXd cross_to_all = Eigen::MatrixXd::Zero(np, count);  // Cov(scaled parent, every node)
    for (Eigen::Index a = 0; a < np; ++a) {
      law.mean(a) = factor[a] * result.joint.mean(parent_index[a]);
      if (inputs.zero_parent_variance) continue;
      for (Eigen::Index b = 0; b < np; ++b) {
        law.cov(a, b) = factor[a] * factor[b] * result.joint.cov(parent_index[a], parent_index[b]);
      }
      cross_to_all.row(a) = factor[a] * result.joint.cov.row(parent_index[a]);
    }

    switch (node.def.kind) {
      case NodeKind::kExogenous: {
        auto it = inputs.exogenous.find(id);
        if (it == inputs.exogenous.end()) {
          throw invalid_argument("missing_exogenous", "no value supplied for exogenous node '" + id + "'", {{"node", id}});
        }
        res.moments = GaussianMoments::scalar(it->second, 0.0);
        break;
      }
      case NodeKind::kDlm: {
        auto it = inputs.dlm.find(id);
        if (it == inputs.dlm.end()) {
          throw invalid_argument("missing_dlm_step", "no state moments supplied for DLM node '" + id + "'", {{"node", id}});
        }
        const DlmStepInput& step = it->second;
        require_same_dimension("regression vector", static_cast<long>(node.inputs.size()), step.regressors.size());
        Eigen::VectorXd mu = step.regressors;
        std::vector<Eigen::Index> slots;
        for (Eigen::Index a = 0; a < np; ++a) {
          const auto s = static_cast<Eigen::Index>(input_pos[static_cast<std::size_t>(a)]);
          mu(s) = law.mean(a);
          slots.push_back(s);
        }
        const MdmMarginal m = mdm_marginal(step.prior, step.obs_variance, mu, slots, law.cov);
        res.moments = m.moments;
        // Y = F'theta + v with theta, v independent of the parents, so
        // Cov(Y, other) = sum_s a_s Cov(F_s, other).
        for (Eigen::Index a = 0; a < np; ++a) {
          cross += step.prior.a(slots[static_cast<std::size_t>(a)]) * cross_to_all.row(a).transpose();
        }
        if (np > 0) res.parent_law = law;
        break;
      }
      case NodeKind::kGp: {
        const gp::GpEmulator& em = *node.emulator;
        // Every GP input is bound, so the parent law is the full input law.
        const LinkedMoments lm = linked_gp_moments(em, law);
        res.moments = GaussianMoments::scalar(lm.mean, lm.variance);
        res.plain = em.predict(law.mean);
        res.parent_law = law;
        // Gaussian regression of other nodes on the inputs:
        // Cov(other, Y) = Cov(other, X) Sigma^+ Cov(X, Y).
        if (np > 0 && law.cov.cwiseAbs().maxCoeff() > 0.0) {
          Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(law.cov);
          cod.setThreshold(1e-12);
          const Eigen::VectorXd coef = cod.solve(lm.input_covariance);
          cross = cross_to_all.transpose() * coef;
        }
        break;
      }
    }

    // Output shocks act on everything downstream of this node.
    const double scale = [&] {
      auto it = inputs.output_scale.find(id);
      return it == inputs.output_scale.end() ? 1.0 : it->second;
    }();
    res.moments.mean *= scale;
    res.moments.cov *= scale * scale;
    cross *= scale;

    result.joint.mean(k) = res.moments.scalar_mean();
    result.joint.cov(k, k) = res.moments.scalar_variance();
    for (Eigen::Index j = 0; j < k; ++j) result.joint.cov(k, j) = result.joint.cov(j, k) = cross(j);
    slot[id] = k;
    result.order.push_back(id);
    result.nodes.emplace(id, std::move(res));
  }
  return result;
}

}  // namespace uqnet::network
