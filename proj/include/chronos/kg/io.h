// Copyright 2026 The Chronos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHRONOS_KG_IO_H_
#define CHRONOS_KG_IO_H_

#include <string>

#include "chronos/kg/change_process.h"
#include "chronos/kg/temporal_kg.h"

namespace chronos::kg {

// Edge file: a "# chronos-kg v1 nodes=.. dim=.. relations=.. launch=.." header
// followed by `u \t v \t relation \t t_created \t owner` lines (owner -1 for
// public edges). Embeddings go to a sibling file with one row per node.
void WriteKg(const TemporalKG& kg, const std::string& edges_path,
             const std::string& embeddings_path);
TemporalKG ReadKg(const std::string& edges_path,
                  const std::string& embeddings_path);

// CSV with header `edge_id,t_change`.
void WriteChangeLog(const ChangeLog& log, const std::string& path);
ChangeLog ReadChangeLog(const std::string& path);

}  // namespace chronos::kg

#endif  // CHRONOS_KG_IO_H_
