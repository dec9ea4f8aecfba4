// Copyright 2026 The namepop Authors
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

#include <string>

#include "namepop/estimators.hpp"

namespace namepop {

struct ModelIoOptions {
  // Tables with at most this many distinct full names embed their counts in
  // the model file; larger ones go to a "<path>.counts.tsv" sidecar whose
  // content hash is pinned in the model file.
  uint64_t embed_threshold = 10000;
};

// Writes a versioned, self-describing JSON model file. Reloading yields a
// model whose probabilities are bit-identical to the saved one's.
void save_model(const std::string& path, const NameModel& model,
                const ModelIoOptions& options = {});

NameModel load_model(const std::string& path);

}  // namespace namepop
