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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "uqnet/dlm/model.hpp"
#include "uqnet/gp/emulator.hpp"
#include "uqnet/network/graph.hpp"

namespace uqnet::pipeline {

// Directory of JSON documents, one file per id, in two collections (models
// and graphs). Writes go to a temporary file and are renamed into place.
// Reads of an id are shared; writes of an id are exclusive.
class ModelStore {
 public:
  enum class Collection { kModels, kGraphs };

  explicit ModelStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Throws a conflict error if the id exists and `overwrite` is false.
  void put(Collection c, const std::string& id, const nlohmann::json& doc, bool overwrite = false);
  nlohmann::json get(Collection c, const std::string& id) const;
  bool contains(Collection c, const std::string& id) const;
  std::vector<std::string> list(Collection c) const;
  void remove(Collection c, const std::string& id);

  std::filesystem::path path_of(Collection c, const std::string& id) const;

 private:
  std::shared_mutex& lock_for(Collection c, const std::string& id) const;

  std::filesystem::path root_;
  mutable std::mutex table_mutex_;
  mutable std::map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
};

// Ids: 1-64 characters from [A-Za-z0-9._-], not starting with '.'.
void validate_id(const std::string& id);

void save_gp(ModelStore& store, const std::string& id, const gp::GpEmulator& em, bool overwrite = false);
void save_dlm(ModelStore& store, const std::string& id, const dlm::DlmModel& model, bool overwrite = false);
gp::GpEmulator load_gp(const ModelStore& store, const std::string& id);
dlm::DlmModel load_dlm(const ModelStore& store, const std::string& id);

// "gp" or "dlm".
std::string model_kind(const ModelStore& store, const std::string& id);

void save_graph(ModelStore& store, const network::GraphDef& def, bool overwrite = false);
network::GraphDef load_graph(const ModelStore& store, const std::string& id);

// Resolver reading models from the store.
network::ModelResolver store_resolver(const ModelStore& store);

}  // namespace uqnet::pipeline
