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

#include "uqnet/pipeline/store.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include "uqnet/common/error.hpp"
#include "uqnet/gp/serialize.hpp"

namespace uqnet::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* folder(ModelStore::Collection c) { return c == ModelStore::Collection::kModels ? "models" : "graphs"; }

Error not_found(ModelStore::Collection c, const std::string& id) {
  const bool model = c == ModelStore::Collection::kModels;
  return Error(ErrorKind::kNotFound, model ? "model_not_found" : "graph_not_found",
               std::string(model ? "model" : "graph") + " '" + id + "' does not exist", {{"id", id}});
}

}  // namespace

void validate_id(const std::string& id) {
  bool ok = !id.empty() && id.size() <= 64 && id.front() != '.';
  for (char ch : id) {
    ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.');
  }
  if (!ok) {
    throw invalid_argument("invalid_id", "'" + id + "' is not a valid id (1-64 of [A-Za-z0-9._-])", {{"id", id}});
  }
}

ModelStore::ModelStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (auto c : {Collection::kModels, Collection::kGraphs}) fs::create_directories(root_ / folder(c), ec);
  if (ec) {
    throw Error(ErrorKind::kInternal, "store_unavailable", "cannot create store at " + root_.string() + ": " + ec.message(),
                {{"path", root_.string()}});
  }
}

fs::path ModelStore::path_of(Collection c, const std::string& id) const {
  validate_id(id);
  return root_ / folder(c) / (id + ".json");
}

std::shared_mutex& ModelStore::lock_for(Collection c, const std::string& id) const {
  std::lock_guard guard(table_mutex_);
  auto& slot = locks_[std::string(folder(c)) + "/" + id];
  if (!slot) slot = std::make_unique<std::shared_mutex>();
  return *slot;
}

void ModelStore::put(Collection c, const std::string& id, const json& doc, bool overwrite) {
  const fs::path target = path_of(c, id);
  std::unique_lock lock(lock_for(c, id));
  if (!overwrite && fs::exists(target)) {
    throw Error(ErrorKind::kConflict, "duplicate_id", std::string(folder(c)) + " id '" + id + "' already exists",
                {{"id", id}});
  }
  static std::atomic<unsigned> counter{0};
  std::ostringstream tmp_name;
  tmp_name << '.' << id << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
  const fs::path tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::kInternal, "store_write_failed", "cannot write " + tmp.string(), {{"id", id}});
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kInternal, "store_write_failed", "cannot move document into place: " + ec.message(),
                {{"id", id}});
  }
}

json ModelStore::get(Collection c, const std::string& id) const {
  const fs::path target = path_of(c, id);
  std::shared_lock lock(lock_for(c, id));
  std::ifstream in(target, std::ios::binary);
  if (!in) throw not_found(c, id);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw parse_error("corrupt_model", "document '" + id + "' is not valid JSON: " + e.what(),
                      {{"id", id}, {"byte", std::to_string(e.byte)}});
  }
}

bool ModelStore::contains(Collection c, const std::string& id) const {
  const fs::path target = path_of(c, id);
  std::shared_lock lock(lock_for(c, id));
  return fs::exists(target);
}

std::vector<std::string> ModelStore::list(Collection c) const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root_ / folder(c))) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.front() != '.' && entry.path().extension() == ".json") {
      ids.push_back(entry.path().stem().string());
    }
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void ModelStore::remove(Collection c, const std::string& id) {
  const fs::path target = path_of(c, id);
  std::unique_lock lock(lock_for(c, id));
  if (!fs::remove(target)) throw not_found(c, id);
}

void save_gp(ModelStore& store, const std::string& id, const gp::GpEmulator& em, bool overwrite) {
  store.put(ModelStore::Collection::kModels, id, gp::to_json(em), overwrite);
}

void save_dlm(ModelStore& store, const std::string& id, const dlm::DlmModel& model, bool overwrite) {
  store.put(ModelStore::Collection::kModels, id, dlm::to_json(model), overwrite);
}

std::string model_kind(const ModelStore& store, const std::string& id) {
  const json doc = store.get(ModelStore::Collection::kModels, id);
  const std::string kind = doc.is_object() ? doc.value("kind", std::string{}) : std::string{};
  if (kind != "gp" && kind != "dlm") {
    throw parse_error("corrupt_model", "model '" + id + "' has no recognised kind", {{"id", id}});
  }
  return kind;
}

gp::GpEmulator load_gp(const ModelStore& store, const std::string& id) {
  const json doc = store.get(ModelStore::Collection::kModels, id);
  if (doc.is_object() && doc.value("kind", std::string{"gp"}) != "gp") {
    throw invalid_argument("wrong_model_kind", "model '" + id + "' is not a gp emulator", {{"id", id}});
  }
  try {
    return gp::emulator_from_json(doc);
  } catch (Error& e) {
    throw std::move(e).with("id", id);
  }
}

dlm::DlmModel load_dlm(const ModelStore& store, const std::string& id) {
  const json doc = store.get(ModelStore::Collection::kModels, id);
  if (doc.is_object() && doc.value("kind", std::string{"dlm"}) != "dlm") {
    throw invalid_argument("wrong_model_kind", "model '" + id + "' is not a dlm", {{"id", id}});
  }
  try {
    return dlm::dlm_model_from_json(doc);
  } catch (Error& e) {
    throw std::move(e).with("id", id);
  }
}

void save_graph(ModelStore& store, const network::GraphDef& def, bool overwrite) {
  store.put(ModelStore::Collection::kGraphs, def.id, network::to_json(def), overwrite);
}

network::GraphDef load_graph(const ModelStore& store, const std::string& id) {
  return network::graph_def_from_json(store.get(ModelStore::Collection::kGraphs, id));
}

network::ModelResolver store_resolver(const ModelStore& store) {
  network::ModelResolver r;
  r.gp = [&store](const std::string& id) { return std::make_shared<const gp::GpEmulator>(load_gp(store, id)); };
  r.dlm_regressors = [&store](const std::string& id) { return load_dlm(store, id).regressor_names; };
  return r;
}

}  // namespace uqnet::pipeline
