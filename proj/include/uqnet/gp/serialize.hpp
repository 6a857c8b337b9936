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

#include "json.hpp"

#include "uqnet/gp/emulator.hpp"

namespace uqnet::gp {

inline constexpr int kModelVersion = 1;

// {version, kind, domains, input_names, X, F, trend, delta, tau2, beta_hat,
// sigma2_hat, seed}. Factorizations are never written; they are rebuilt on load.
nlohmann::json to_json(const GpEmulator& emulator);

// Rebuilds the emulator and checks the stored beta_hat / sigma2_hat against the
// recomputed values to catch corrupt documents.
GpEmulator emulator_from_json(const nlohmann::json& doc);

}  // namespace uqnet::gp
