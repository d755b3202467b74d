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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"

using namespace qafd;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("qafd-io-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void write(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("two-line node file and one-line edge file load") {
  TempDir dir;
  write(dir.file("nodes.tsv"), "alpha\t1,0\nbeta\t0,1\n");
  write(dir.file("edges.tsv"), "alpha\tbeta\n");
  const Graph g = load_graph(dir.file("nodes.tsv").string(),
                             dir.file("edges.tsv").string());
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.node(0).label == "alpha");
  CHECK(g.edge(0).base_weight == 1.0);
}

TEST_CASE("unknown edge label reports the line number") {
  TempDir dir;
  write(dir.file("nodes.tsv"), "alpha\t1,0\n");
  write(dir.file("edges.tsv"), "alpha\tghost\n");
  try {
    load_graph(dir.file("nodes.tsv").string(),
               dir.file("edges.tsv").string());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DanglingEndpoint);
    CHECK(std::string(e.what()).find(":1") != std::string::npos);
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
}

TEST_CASE("bad vectors report file and line") {
  TempDir dir;
  write(dir.file("nodes.tsv"), "alpha\t1,0\nbeta\t1,oops\n");
  write(dir.file("edges.tsv"), "");
  try {
    load_graph(dir.file("nodes.tsv").string(),
               dir.file("edges.tsv").string());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("bare labels need an embedding table") {
  TempDir dir;
  write(dir.file("nodes.tsv"), "alpha\n");
  write(dir.file("edges.tsv"), "");
  try {
    load_graph(dir.file("nodes.tsv").string(),
               dir.file("edges.tsv").string());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingEmbedding);
  }
  write(dir.file("table.tsv"), "alpha\t0.5,0.5\n");
  const EmbeddingTable table = load_embeddings(dir.file("table.tsv").string());
  const Graph g = load_graph(dir.file("nodes.tsv").string(),
                             dir.file("edges.tsv").string(), &table);
  CHECK(g.node(0).embedding == std::vector<double>{0.5, 0.5});
}

TEST_CASE("duplicate node labels are rejected") {
  TempDir dir;
  write(dir.file("nodes.tsv"), "alpha\t1,0\nalpha\t0,1\n");
  write(dir.file("edges.tsv"), "");
  CHECK_THROWS_AS(load_graph(dir.file("nodes.tsv").string(),
                             dir.file("edges.tsv").string()),
                  Error);
}

TEST_CASE("save then load reproduces the graph") {
  std::mt19937_64 rng(71);
  const Graph g = qafd::testing::random_graph(rng, 17, 14);
  TempDir dir;
  save_graph(g, dir.file("nodes.tsv").string(),
             dir.file("edges.tsv").string());
  const Graph back = load_graph(dir.file("nodes.tsv").string(),
                                dir.file("edges.tsv").string());
  CHECK(back.same_as(g));

  // A second round trip is byte-stable.
  save_graph(back, dir.file("nodes2.tsv").string(),
             dir.file("edges2.tsv").string());
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir.file("nodes.tsv")) == slurp(dir.file("nodes2.tsv")));
  CHECK(slurp(dir.file("edges.tsv")) == slurp(dir.file("edges2.tsv")));
}

TEST_CASE("embedding files reject duplicates and bad records") {
  TempDir dir;
  write(dir.file("dup.tsv"), "a\t1,2\na\t3,4\n");
  CHECK_THROWS_AS(load_embeddings(dir.file("dup.tsv").string()), Error);
  write(dir.file("bad.tsv"), "a\n");
  CHECK_THROWS_AS(load_embeddings(dir.file("bad.tsv").string()), Error);
  CHECK_THROWS_AS(load_embeddings(dir.file("missing.tsv").string()), Error);
}

TEST_CASE("fmt_double round-trips through parsing") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int round = 0; round < 100; ++round) {
    const double value = dist(rng);
    const std::string text = fmt_double(value);
    CHECK(parse_vector(text, "test")[0] == value);
  }
  CHECK(fmt_double(0.25) == "0.25");
  CHECK(fmt_double(1e-10) == "1e-10");
}

TEST_CASE("key-value config parsing") {
  std::stringstream in(
      "# comment\nalpha = 10\n  scheme=hybrid # trailing\n\nempty_ok = \n");
  const auto kv = parse_kv(in);
  CHECK(kv.at("alpha") == "10");
  CHECK(kv.at("scheme") == "hybrid");
  CHECK(kv.at("empty_ok").empty());
  std::stringstream bad("not a pair\n");
  CHECK_THROWS_AS(parse_kv(bad), Error);
}
