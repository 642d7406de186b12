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

#include "chronos/kg/io.h"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "chronos/common/error.h"

namespace chronos::kg {
namespace {

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << std::setprecision(17);
  return out;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

double HeaderField(const std::string& header, const std::string& name) {
  const std::string tag = name + "=";
  auto pos = header.find(tag);
  if (pos == std::string::npos) throw IoError("missing header field " + name);
  return std::stod(header.substr(pos + tag.size()));
}

}  // namespace

void WriteKg(const TemporalKG& kg, const std::string& edges_path,
             const std::string& embeddings_path) {
  std::ofstream out = OpenOut(edges_path);
  out << "# chronos-kg v1 nodes=" << kg.node_count() << " dim=" << kg.dim()
      << " relations=" << kg.relation_count() << " launch=" << kg.launch_time()
      << "\n";
  for (const Edge& e : kg.edges()) {
    out << e.u << '\t' << e.v << '\t' << e.relation << '\t' << e.t_created
        << '\t' << e.owner << '\n';
  }
  std::ofstream emb = OpenOut(embeddings_path);
  const auto& x = kg.embeddings();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      emb << (j ? "\t" : "") << x(i, j);
    }
    emb << '\n';
  }
}

TemporalKG ReadKg(const std::string& edges_path,
                  const std::string& embeddings_path) {
  std::ifstream in = OpenIn(edges_path);
  std::string header;
  std::getline(in, header);
  if (header.rfind("# chronos-kg v1", 0) != 0) {
    throw IoError("unrecognised KG header in " + edges_path);
  }
  TemporalKG kg(static_cast<std::size_t>(HeaderField(header, "nodes")),
                static_cast<std::size_t>(HeaderField(header, "dim")),
                static_cast<RelationId>(HeaderField(header, "relations")),
                HeaderField(header, "launch"));
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    NodeId u, v;
    RelationId r;
    double t;
    SellerId owner;
    if (!(ls >> u >> v >> r >> t >> owner)) {
      throw IoError("malformed edge at line " + std::to_string(lineno));
    }
    kg.AddEdge(u, v, r, t, owner);
  }
  std::ifstream emb = OpenIn(embeddings_path);
  auto& x = kg.embeddings();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (!(emb >> x(i, j))) throw IoError("short embeddings file");
    }
  }
  return kg;
}

void WriteChangeLog(const ChangeLog& log, const std::string& path) {
  std::ofstream out = OpenOut(path);
  out << "edge_id,t_change\n";
  for (const ChangeEvent& e : log) out << e.unit << ',' << e.time << '\n';
}

ChangeLog ReadChangeLog(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::string line;
  std::getline(in, line);
  if (line != "edge_id,t_change") throw IoError("bad change log header");
  ChangeLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed change log row");
    log.push_back({static_cast<uint32_t>(std::stoul(line.substr(0, comma))),
                   std::stod(line.substr(comma + 1))});
  }
  return log;
}

}  // namespace chronos::kg
