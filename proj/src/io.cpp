// Copyright 2026 The QAFD Authors
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

#include "io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "error.hpp"

namespace qafd {

std::string fmt_double(double value) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    raise(ErrorCode::Internal, "double formatting failed");
  }
  return std::string(buffer, ptr);
}

static double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorCode::Parse, where + ": bad number '" + text + "'");
  }
  return value;
}

std::vector<double> parse_vector(const std::string& csv,
                                 const std::string& where) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? std::string::npos
                                                     : comma - start);
    if (token.empty()) {
      raise(ErrorCode::Parse, where + ": empty vector component");
    }
    out.push_back(parse_double(token, where));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) {
    raise(ErrorCode::Parse, where + ": empty vector");
  }
  return out;
}

static std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

static std::string location(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line);
}

static std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::Io, "cannot open '" + path + "' for reading");
  }
  return in;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in = open_for_read(path);
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      raise(ErrorCode::Parse,
            location(path, lineno) + ": expected 'key<TAB>v1,...,vd'");
    }
    if (table.find(fields[0]) != nullptr) {
      raise(ErrorCode::Parse, location(path, lineno) + ": duplicate key '" +
                                  fields[0] + "'");
    }
    table.insert(fields[0], parse_vector(fields[1], location(path, lineno)));
  }
  return table;
}

Graph load_graph(const std::string& nodes_path, const std::string& edges_path,
                 const EmbeddingTable* table) {
  std::vector<Node> nodes;
  std::unordered_map<std::string, NodeId> by_label;
  {
    std::ifstream in = open_for_read(nodes_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.empty() || fields[0].empty() || fields.size() > 2) {
        raise(ErrorCode::Parse,
              location(nodes_path, lineno) +
                  ": expected 'label' or 'label<TAB>v1,...,vd'");
      }
      const std::string& label = fields[0];
      if (by_label.count(label)) {
        raise(ErrorCode::Parse, location(nodes_path, lineno) +
                                    ": duplicate node label '" + label + "'");
      }
      Node node;
      node.id = static_cast<NodeId>(nodes.size());
      node.label = label;
      if (fields.size() == 2) {
        node.embedding =
            parse_vector(fields[1], location(nodes_path, lineno));
      } else {
        const std::vector<double>* vec =
            table != nullptr ? table->find(label) : nullptr;
        if (vec == nullptr) {
          raise(ErrorCode::MissingEmbedding,
                location(nodes_path, lineno) + ": no embedding for '" +
                    label + "'");
        }
        node.embedding = *vec;
      }
      by_label.emplace(label, node.id);
      nodes.push_back(std::move(node));
    }
  }

  std::vector<Edge> edges;
  {
    std::ifstream in = open_for_read(edges_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.size() < 2 || fields.size() > 3) {
        raise(ErrorCode::Parse,
              location(edges_path, lineno) +
                  ": expected 'label_u<TAB>label_v[<TAB>base_weight]'");
      }
      Edge e;
      auto lookup = [&](const std::string& label) {
        auto it = by_label.find(label);
        if (it == by_label.end()) {
          raise(ErrorCode::DanglingEndpoint,
                location(edges_path, lineno) + ": unknown node label '" +
                    label + "'");
        }
        return it->second;
      };
      e.u = lookup(fields[0]);
      e.v = lookup(fields[1]);
      if (fields.size() == 3) {
        e.base_weight =
            parse_double(fields[2], location(edges_path, lineno));
      }
      edges.push_back(std::move(e));
    }
  }
  return Graph::build(std::move(nodes), std::move(edges));
}

void save_graph(const Graph& g, const std::string& nodes_path,
                const std::string& edges_path) {
  std::ofstream nodes_out(nodes_path);
  if (!nodes_out) {
    raise(ErrorCode::Io, "cannot open '" + nodes_path + "' for writing");
  }
  for (const Node& node : g.nodes()) {
    nodes_out << node.label << '\t';
    for (std::size_t i = 0; i < node.embedding.size(); ++i) {
      if (i > 0) nodes_out << ',';
      nodes_out << fmt_double(node.embedding[i]);
    }
    nodes_out << '\n';
  }
  std::ofstream edges_out(edges_path);
  if (!edges_out) {
    raise(ErrorCode::Io, "cannot open '" + edges_path + "' for writing");
  }
  for (const Edge& e : g.edges()) {
    edges_out << g.node(e.u).label << '\t' << g.node(e.v).label << '\t'
              << fmt_double(e.base_weight) << '\n';
  }
}

std::map<std::string, std::string> parse_kv(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    return s.substr(first, last - first + 1);
  };
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      raise(ErrorCode::Parse, "config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      raise(ErrorCode::Parse,
            "config line " + std::to_string(lineno) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> load_kv(const std::string& path) {
  std::ifstream in = open_for_read(path);
  return parse_kv(in);
}

}  // namespace qafd
