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

// qafd command-line tool. Subcommands: ingest, seeds, diffuse, retrieve,
// oracle-check, recover-exp. All numeric settings resolve as
// CLI flag > config file > built-in default, with --profile switching the
// built-in defaults. QAFD_OUTPUT_DIR, when set, overrides the output
// directory. Everything is deterministic given the inputs and --seed.

#include <qafd.h>

#include <charconv>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

int exit_code_for(qafd_status status) {
  switch (status) {
    case QAFD_OK:
      return kExitOk;
    case QAFD_ERROR_INVALID_ARGUMENT:
    case QAFD_ERROR_DIMENSION_MISMATCH:
    case QAFD_ERROR_SELF_LOOP:
    case QAFD_ERROR_DUPLICATE_EDGE:
    case QAFD_ERROR_DANGLING_ENDPOINT:
    case QAFD_ERROR_UNKNOWN_NODE:
    case QAFD_ERROR_NOT_AN_EDGE:
    case QAFD_ERROR_NO_SEEDS:
    case QAFD_ERROR_PARSE:
    case QAFD_ERROR_MISSING_EMBEDDING:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

void check(qafd_status status) {
  if (status != QAFD_OK) {
    throw CliError(exit_code_for(status),
                   std::string(qafd_status_name(status)) + ": " +
                       qafd_last_error());
  }
}

std::string fmt(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

double to_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw CliError(kExitValidation,
                   "config key '" + key + "': bad number '" + text + "'");
  }
}

std::uint64_t to_u64(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw CliError(kExitValidation,
                   "config key '" + key + "': bad integer '" + text + "'");
  }
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CliError(kExitValidation, "cannot open config file '" + path + "'");
  }
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    return s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw CliError(kExitValidation,
                     path + ":" + std::to_string(lineno) +
                         ": expected 'key = value'");
    }
    out[trim(trimmed.substr(0, eq))] = trim(trimmed.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_csv_vector(const std::string& csv,
                                     const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw CliError(kExitValidation, what + ": bad number '" + token + "'");
    }
  }
  if (out.empty()) throw CliError(kExitValidation, what + ": empty vector");
  return out;
}

// All resolvable settings with their built-in defaults.
struct Settings {
  std::string nodes, edges, embeddings;
  std::string scheme = "hybrid";
  double a = 1.0, b = 0.25, c = 1.0;
  std::string combine = "mul";
  std::string sim = "cosine";
  double sim_gamma = 1.0;
  double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;  // product bandwidths
  double floor_weight = 1e-10;
  double alpha = 50.0;
  double epsilon = 0.05;
  std::uint64_t max_iterations = 1000000;
  std::uint64_t check_cadence = 100;
  std::string selection = "random";
  std::string sink = "degree";
  double uniform_capacity = 1.0;
  double support_threshold = 1e-8;
  std::uint64_t num_seeds = 40;
  std::uint64_t top_k = 0;  // 0 means all
  std::string aggregate = "max";
  std::uint64_t seed = 0;
  std::string output_dir = "qafd-out";
};

// CLI option handles for the precedence resolution.
struct Bound {
  CLI::Option* opt = nullptr;
  std::function<void()> apply_cli;
  std::string config_key;
  std::function<void(const std::string&)> apply_config;
};

class Resolver {
 public:
  explicit Resolver(Settings& settings) : s_(settings) {}

  template <typename T>
  void bind(CLI::App* cmd, const std::string& flag, const std::string& key,
            T& cli_slot, T Settings::* member, const std::string& help) {
    auto* opt = cmd->add_option(flag, cli_slot, help);
    Bound bound;
    bound.opt = opt;
    bound.config_key = key;
    Settings& s = s_;
    bound.apply_cli = [&s, member, &cli_slot]() { s.*member = cli_slot; };
    bound.apply_config = [&s, member, key](const std::string& text) {
      if constexpr (std::is_same_v<T, double>) {
        s.*member = to_double(text, key);
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        s.*member = to_u64(text, key);
      } else {
        s.*member = text;
      }
    };
    bounds_.push_back(std::move(bound));
  }

  void resolve(const std::map<std::string, std::string>& config) {
    for (const auto& bound : bounds_) {
      auto it = config.find(bound.config_key);
      if (it != config.end()) bound.apply_config(it->second);
    }
    for (const auto& bound : bounds_) {
      if (bound.opt->count() > 0) bound.apply_cli();
    }
  }

 private:
  Settings& s_;
  std::vector<Bound> bounds_;
};

void apply_profile(Settings& s, const std::string& profile) {
  if (profile.empty()) return;
  if (profile == "qa") {
    s.alpha = 50.0;
    s.num_seeds = 40;
    s.scheme = "hybrid";
    s.a = 1.0;
    s.b = 0.25;
    s.sink = "degree";
  } else if (profile == "path") {
    s.alpha = 10.0;
    s.epsilon = 0.05;
    s.sink = "uniform";
    s.uniform_capacity = 1.0;
  } else {
    throw CliError(kExitValidation, "unknown profile '" + profile + "'");
  }
}

qafd_similarity make_sim(const std::string& name, double gamma) {
  if (name == "cosine") return {QAFD_SIM_COSINE, 1.0};
  if (name == "dot") return {QAFD_SIM_DOT, 1.0};
  if (name == "rbf") return {QAFD_SIM_RBF, gamma};
  throw CliError(kExitValidation, "unknown similarity '" + name + "'");
}

qafd_weight_params make_weight_params(const Settings& s) {
  qafd_weight_params wp;
  qafd_weight_params_init(&wp);
  if (s.scheme == "mean") {
    wp.scheme = QAFD_SCHEME_MEAN;
  } else if (s.scheme == "product") {
    wp.scheme = QAFD_SCHEME_PRODUCT;
  } else if (s.scheme == "hybrid") {
    wp.scheme = QAFD_SCHEME_HYBRID;
  } else if (s.scheme == "generic") {
    wp.scheme = QAFD_SCHEME_GENERIC;
  } else {
    throw CliError(kExitValidation, "unknown scheme '" + s.scheme + "'");
  }
  wp.a = s.a;
  wp.b = s.b;
  wp.c = s.c;
  if (s.combine == "add") {
    wp.combine = QAFD_COMBINE_ADD;
  } else if (s.combine == "mul") {
    wp.combine = QAFD_COMBINE_MUL;
  } else {
    throw CliError(kExitValidation, "unknown combine '" + s.combine + "'");
  }
  wp.node_node_sim = make_sim(s.sim, s.sim_gamma);
  wp.node_query_sim = make_sim(s.sim, s.sim_gamma);
  const bool any_gamma = s.gamma1 > 0.0 || s.gamma2 > 0.0 || s.gamma3 > 0.0;
  if (any_gamma) {
    if (wp.scheme != QAFD_SCHEME_PRODUCT) {
      throw CliError(kExitValidation,
                     "gamma1..3 require the product scheme");
    }
    if (!(s.gamma1 > 0.0 && s.gamma2 > 0.0 && s.gamma3 > 0.0)) {
      throw CliError(kExitValidation,
                     "gamma1..3 must all be set and positive");
    }
    wp.use_product_bandwidths = 1;
    wp.gamma1 = s.gamma1;
    wp.gamma2 = s.gamma2;
    wp.gamma3 = s.gamma3;
  }
  wp.floor_weight = s.floor_weight;
  return wp;
}

qafd_diffusion_params make_diffusion_params(const Settings& s) {
  qafd_diffusion_params dp;
  qafd_diffusion_params_init(&dp);
  dp.alpha = s.alpha;
  if (s.sink == "degree") {
    dp.sink_mode = QAFD_SINK_DEGREE;
  } else if (s.sink == "uniform") {
    dp.sink_mode = QAFD_SINK_UNIFORM;
    dp.uniform_capacity = s.uniform_capacity;
  } else {
    throw CliError(kExitValidation, "unknown sink mode '" + s.sink + "'");
  }
  dp.epsilon = s.epsilon;
  dp.max_iterations = s.max_iterations;
  dp.check_cadence = s.check_cadence;
  if (s.selection == "random") {
    dp.selection = QAFD_SELECT_UNIFORM_RANDOM;
  } else if (s.selection == "fifo") {
    dp.selection = QAFD_SELECT_FIFO;
  } else {
    throw CliError(kExitValidation,
                   "unknown selection policy '" + s.selection + "'");
  }
  dp.rng_seed = s.seed;
  dp.support_threshold = s.support_threshold;
  dp.trace = QAFD_TRACE_CADENCE;
  return dp;
}

std::filesystem::path resolve_output_dir(const Settings& s) {
  const char* env = std::getenv("QAFD_OUTPUT_DIR");
  std::filesystem::path dir = env != nullptr ? env : s.output_dir.c_str();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw CliError(kExitRuntime,
                   "cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CliError(kExitRuntime, "cannot write '" + path.string() + "'");
  }
  return out;
}

struct GraphHandle {
  qafd_graph* graph = nullptr;
  ~GraphHandle() { qafd_graph_free(graph); }
};

struct EmbeddingsHandle {
  qafd_embeddings* table = nullptr;
  ~EmbeddingsHandle() { qafd_embeddings_free(table); }
};

void load_graph_and_table(const Settings& s, GraphHandle& graph,
                          EmbeddingsHandle& table) {
  if (s.nodes.empty() || s.edges.empty()) {
    throw CliError(kExitValidation, "--nodes and --edges are required");
  }
  if (!s.embeddings.empty()) {
    check(qafd_embeddings_load(s.embeddings.c_str(), &table.table));
  }
  check(qafd_graph_load(s.nodes.c_str(), s.edges.c_str(),
                        s.embeddings.empty() ? nullptr : s.embeddings.c_str(),
                        &graph.graph));
}

// Lowercased alphanumeric tokens minus a small stopword list; the fallback
// keyword source when none are given explicitly.
std::vector<std::string> fallback_tokens(const std::string& text) {
  static const std::set<std::string> kStopwords = {
      "a",    "an",   "and",  "are",  "as",   "at",    "be",   "by",
      "for",  "from", "how",  "in",   "is",   "it",    "of",   "on",
      "or",   "that", "the",  "their", "this", "to",   "was",  "what",
      "when", "where", "which", "who", "why",  "with"};
  std::vector<std::string> tokens;
  std::set<std::string> seen;
  std::string current;
  auto flush = [&]() {
    if (!current.empty() && kStopwords.count(current) == 0 &&
        seen.insert(current).second) {
      tokens.push_back(current);
    }
    current.clear();
  };
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

struct KeywordInputs {
  std::string inline_keywords;  // comma separated
  std::string keywords_file;
  std::string query_text;
};

// Resolves keyword embeddings: explicit keywords (inline or file) looked up
// in the table, else query tokens restricted to table entries, else empty.
std::pair<std::vector<std::string>, std::vector<double>> resolve_keywords(
    const KeywordInputs& in, const EmbeddingsHandle& table, std::size_t dim) {
  std::vector<std::string> names;
  if (!in.inline_keywords.empty()) {
    std::stringstream ss(in.inline_keywords);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (!token.empty()) names.push_back(token);
    }
  } else if (!in.keywords_file.empty()) {
    std::ifstream file(in.keywords_file);
    if (!file) {
      throw CliError(kExitValidation,
                     "cannot open keywords file '" + in.keywords_file + "'");
    }
    std::string line;
    while (std::getline(file, line)) {
      if (!line.empty()) names.push_back(line);
    }
  }

  const bool explicit_keywords = !names.empty();
  if (!explicit_keywords && !in.query_text.empty()) {
    names = fallback_tokens(in.query_text);
  }
  if (names.empty()) return {{}, {}};
  if (table.table == nullptr) {
    throw CliError(kExitValidation,
                   "keywords require --embeddings for their vectors");
  }

  std::vector<std::string> kept;
  std::vector<double> flat;
  for (const std::string& name : names) {
    const double* vec = qafd_embeddings_lookup(table.table, name.c_str());
    if (vec == nullptr) {
      if (explicit_keywords) {
        throw CliError(kExitValidation,
                       "missing_embedding: no vector for keyword '" + name +
                           "'");
      }
      continue;  // fallback tokens may be absent from the table
    }
    kept.push_back(name);
    flat.insert(flat.end(), vec, vec + dim);
  }
  return {kept, flat};
}

/* -------------------------------- ingest ------------------------------ */

int cmd_ingest(const Settings& s, const std::string& export_dir) {
  GraphHandle graph;
  EmbeddingsHandle table;
  load_graph_and_table(s, graph, table);

  std::cout << "nodes\t" << qafd_graph_node_count(graph.graph) << "\n"
            << "edges\t" << qafd_graph_edge_count(graph.graph) << "\n"
            << "dim\t" << qafd_graph_dim(graph.graph) << "\n"
            << "max_degree\t" << qafd_graph_max_degree(graph.graph) << "\n";
  if (!export_dir.empty()) {
    std::filesystem::path dir(export_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      throw CliError(kExitRuntime,
                     "cannot create export directory '" + export_dir + "'");
    }
    check(qafd_graph_save(graph.graph, (dir / "nodes.tsv").c_str(),
                          (dir / "edges.tsv").c_str()));
    std::cout << "exported\t" << (dir / "nodes.tsv").string() << "\t"
              << (dir / "edges.tsv").string() << "\n";
  }
  return kExitOk;
}

/* -------------------------------- seeds ------------------------------- */

int cmd_seeds(const Settings& s, const KeywordInputs& kw) {
  GraphHandle graph;
  EmbeddingsHandle table;
  load_graph_and_table(s, graph, table);
  const std::size_t n = qafd_graph_node_count(graph.graph);
  const std::size_t dim = qafd_graph_dim(graph.graph);

  auto [names, flat] = resolve_keywords(kw, table, dim);
  if (names.empty()) {
    throw CliError(kExitValidation,
                   "no usable keywords; pass --keywords, --keywords-file or "
                   "--query");
  }

  std::vector<double> scores(n);
  std::uint64_t evals = 0;
  check(qafd_score_nodes(graph.graph, flat.data(), names.size(),
                         make_sim(s.sim, s.sim_gamma), scores.data(),
                         &evals));
  const std::size_t count =
      std::min<std::size_t>(s.num_seeds, n);
  std::vector<uint32_t> ids(count);
  std::vector<double> seed_scores(count);
  check(qafd_select_seeds(scores.data(), n, count, ids.data(),
                          seed_scores.data()));

  const auto dir = resolve_output_dir(s);
  auto out = open_output(dir / "seeds.tsv");
  for (std::size_t i = 0; i < count; ++i) {
    const std::string line = std::to_string(ids[i]) + "\t" +
                             qafd_graph_label(graph.graph, ids[i]) + "\t" +
                             fmt(seed_scores[i]);
    out << line << "\n";
    std::cout << line << "\n";
  }
  return kExitOk;
}

/* ------------------------------- diffuse ------------------------------ */

std::vector<double> resolve_query_embedding(const Settings& s,
                                            const EmbeddingsHandle& table,
                                            std::size_t dim,
                                            const std::string& query_key,
                                            const std::string& query_csv) {
  if (!query_csv.empty()) {
    return parse_csv_vector(query_csv, "--query-embedding");
  }
  if (!query_key.empty()) {
    if (table.table == nullptr) {
      throw CliError(kExitValidation,
                     "--query-key requires --embeddings");
    }
    const double* vec = qafd_embeddings_lookup(table.table, query_key.c_str());
    if (vec == nullptr) {
      throw CliError(kExitValidation,
                     "missing_embedding: no vector for query key '" +
                         query_key + "'");
    }
    return std::vector<double>(vec, vec + dim);
  }
  throw CliError(kExitValidation,
                 "pass --query-embedding or --query-key");
}

json report_json(const qafd_result* result) {
  json trace = json::array();
  const std::size_t count = qafd_result_trace_count(result);
  for (std::size_t i = 0; i < count; ++i) {
    uint64_t iteration = 0;
    double objective = 0.0, excess = 0.0;
    qafd_result_trace_entry(result, i, &iteration, &objective, &excess);
    trace.push_back({iteration, objective, excess});
  }
  json absorbed = json::array();
  for (std::size_t i = 0; i < qafd_result_absorbed_count(result); ++i) {
    absorbed.push_back(qafd_result_absorbed(result)[i]);
  }
  return json{{"iterations", qafd_result_iterations(result)},
              {"terminated_by", qafd_result_converged(result)
                                    ? "converged"
                                    : "iteration_cap"},
              {"final_excess", qafd_result_final_excess(result)},
              {"objective", qafd_result_objective(result)},
              {"gamma_hat", qafd_result_gamma_hat(result)},
              {"eta_hat", qafd_result_eta_hat(result)},
              {"support_size", qafd_result_support_count(result)},
              {"objective_trace", trace},
              {"absorbed", absorbed}};
}

int cmd_diffuse(const Settings& s, const KeywordInputs& kw,
                const std::string& query_key, const std::string& query_csv) {
  GraphHandle graph;
  EmbeddingsHandle table;
  load_graph_and_table(s, graph, table);
  const std::size_t n = qafd_graph_node_count(graph.graph);
  const std::size_t dim = qafd_graph_dim(graph.graph);

  const std::vector<double> query =
      resolve_query_embedding(s, table, dim, query_key, query_csv);
  if (query.size() != dim) {
    throw CliError(kExitValidation,
                   "query embedding dimension " +
                       std::to_string(query.size()) +
                       " does not match graph dimension " +
                       std::to_string(dim));
  }

  KeywordInputs kw_with_query = kw;
  if (kw_with_query.query_text.empty()) kw_with_query.query_text = query_key;
  auto [names, flat] = resolve_keywords(kw_with_query, table, dim);
  if (names.empty()) {
    // Fall back to the query embedding itself as the single keyword.
    flat = query;
    names = {"<query>"};
  }

  std::vector<double> scores(n);
  check(qafd_score_nodes(graph.graph, flat.data(), names.size(),
                         make_sim(s.sim, s.sim_gamma), scores.data(),
                         nullptr));
  const std::size_t count = std::min<std::size_t>(s.num_seeds, n);
  std::vector<uint32_t> seeds(count);
  check(qafd_select_seeds(scores.data(), n, count, seeds.data(), nullptr));

  const qafd_weight_params wp = make_weight_params(s);
  const qafd_diffusion_params dp = make_diffusion_params(s);
  qafd_result* result = nullptr;
  check(qafd_diffuse(graph.graph, &wp, query.data(), seeds.data(),
                     seeds.size(), &dp, &result));
  std::unique_ptr<qafd_result, decltype(&qafd_result_free)> guard(
      result, &qafd_result_free);

  const auto dir = resolve_output_dir(s);
  {
    auto out = open_output(dir / "diffusion.tsv");
    const double* x = qafd_result_x(result);
    const double* m = qafd_result_mass(result);
    const uint32_t* support = qafd_result_support(result);
    for (std::size_t i = 0; i < qafd_result_support_count(result); ++i) {
      const uint32_t v = support[i];
      out << v << "\t" << fmt(x[v]) << "\t" << fmt(m[v]) << "\n";
    }
  }
  {
    json report = report_json(result);
    json seeds_json = json::array();
    for (uint32_t v : seeds) seeds_json.push_back(v);
    report["seeds"] = seeds_json;
    auto out = open_output(dir / "report.json");
    out << report.dump(2) << "\n";
  }
  std::cout << "support\t" << qafd_result_support_count(result) << "\n"
            << "iterations\t" << qafd_result_iterations(result) << "\n"
            << "terminated_by\t"
            << (qafd_result_converged(result) ? "converged" : "iteration_cap")
            << "\n"
            << "objective\t" << fmt(qafd_result_objective(result)) << "\n";
  return kExitOk;
}

/* ------------------------------- retrieve ----------------------------- */

int cmd_retrieve(const Settings& s, const std::string& subqueries_path) {
  GraphHandle graph;
  EmbeddingsHandle table;
  load_graph_and_table(s, graph, table);
  const std::size_t dim = qafd_graph_dim(graph.graph);

  if (subqueries_path.empty()) {
    throw CliError(kExitValidation, "--subqueries is required");
  }
  std::ifstream in(subqueries_path);
  if (!in) {
    throw CliError(kExitValidation,
                   "cannot open subqueries file '" + subqueries_path + "'");
  }
  std::vector<std::string> texts;
  std::vector<double> flat;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw CliError(kExitValidation,
                     subqueries_path + ":" + std::to_string(lineno) +
                         ": expected 'text<TAB>v1,...,vd'");
    }
    texts.push_back(line.substr(0, tab));
    const auto vec = parse_csv_vector(
        line.substr(tab + 1),
        subqueries_path + ":" + std::to_string(lineno));
    if (vec.size() != dim) {
      throw CliError(kExitValidation,
                     subqueries_path + ":" + std::to_string(lineno) +
                         ": dimension " + std::to_string(vec.size()) +
                         " does not match graph dimension " +
                         std::to_string(dim));
    }
    flat.insert(flat.end(), vec.begin(), vec.end());
  }
  if (texts.empty()) {
    throw CliError(kExitValidation, "subqueries file is empty");
  }

  const qafd_weight_params wp = make_weight_params(s);
  const qafd_diffusion_params dp = make_diffusion_params(s);
  qafd_retrieval* retrieval = nullptr;
  check(qafd_retrieve(graph.graph, &wp, flat.data(), texts.size(),
                      std::min<std::size_t>(s.num_seeds,
                                            qafd_graph_node_count(graph.graph)),
                      make_sim(s.sim, s.sim_gamma), &dp,
                      s.aggregate == "sum" ? 1 : 0, &retrieval));
  std::unique_ptr<qafd_retrieval, decltype(&qafd_retrieval_free)> guard(
      retrieval, &qafd_retrieval_free);

  const auto dir = resolve_output_dir(s);
  const std::size_t node_count = qafd_retrieval_node_count(retrieval);
  const std::size_t keep =
      s.top_k == 0 ? node_count : std::min<std::size_t>(s.top_k, node_count);
  {
    auto out = open_output(dir / "nodes.tsv");
    for (std::size_t i = 0; i < keep; ++i) {
      uint32_t id = 0;
      double score = 0.0;
      qafd_retrieval_node(retrieval, i, &id, &score);
      out << id << "\t" << qafd_retrieval_node_label(retrieval, i) << "\t"
          << fmt(score) << "\t";
      const std::size_t nk = qafd_retrieval_node_subquery_count(retrieval, i);
      for (std::size_t j = 0; j < nk; ++j) {
        std::size_t sub = 0;
        qafd_retrieval_node_subquery(retrieval, i, j, &sub);
        if (j > 0) out << ",";
        out << sub;
      }
      out << "\n";
    }
  }
  {
    auto out = open_output(dir / "edges.tsv");
    for (std::size_t i = 0; i < qafd_retrieval_edge_count(retrieval); ++i) {
      uint32_t u = 0, v = 0;
      double w = 0.0;
      qafd_retrieval_edge(retrieval, i, &u, &v, &w);
      out << u << "\t" << v << "\t" << fmt(w) << "\n";
    }
  }
  {
    json reports = json::array();
    for (std::size_t k = 0; k < qafd_retrieval_subquery_count(retrieval);
         ++k) {
      uint64_t iterations = 0;
      int converged = 0;
      double excess = 0.0;
      qafd_retrieval_report(retrieval, k, &iterations, &converged, &excess);
      reports.push_back({{"subquery", texts[k]},
                         {"iterations", iterations},
                         {"converged", converged != 0},
                         {"final_excess", excess}});
    }
    auto out = open_output(dir / "report.json");
    out << json{{"subqueries", reports}}.dump(2) << "\n";
  }
  std::cout << "retrieved_nodes\t" << node_count << "\n"
            << "retrieved_edges\t" << qafd_retrieval_edge_count(retrieval)
            << "\n";
  return kExitOk;
}

/* ----------------------------- oracle-check --------------------------- */

int cmd_oracle_check(const Settings& s, std::uint64_t instances,
                     double tolerance, double diffusion_epsilon) {
  qafd_oracle_check_params params;
  qafd_oracle_check_params_init(&params);
  params.instances = static_cast<uint32_t>(instances);
  params.seed = s.seed != 0 ? s.seed : params.seed;
  params.objective_tolerance = tolerance;
  params.diffusion_epsilon = diffusion_epsilon;

  qafd_oracle_report* report = nullptr;
  check(qafd_oracle_check_run(&params, &report));
  std::unique_ptr<qafd_oracle_report, decltype(&qafd_oracle_report_free)>
      guard(report, &qafd_oracle_report_free);

  const auto dir = resolve_output_dir(s);
  auto out = open_output(dir / "oracle_check.tsv");
  const std::string header =
      "instance\tnodes\tobjective_solver\tobjective_oracle\tabs_diff\tpass";
  out << header << "\n";
  std::cout << header << "\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < qafd_oracle_report_count(report); ++i) {
    uint64_t instance_seed = 0;
    uint32_t nodes = 0;
    double f_solver = 0.0, f_oracle = 0.0, diff = 0.0;
    int pass = 0;
    qafd_oracle_report_row(report, i, &instance_seed, &nodes, &f_solver,
                           &f_oracle, &diff, &pass);
    if (pass == 0) ++failures;
    const std::string row = std::to_string(i) + "\t" + std::to_string(nodes) +
                            "\t" + fmt(f_solver) + "\t" + fmt(f_oracle) +
                            "\t" + fmt(diff) + "\t" +
                            (pass != 0 ? "pass" : "FAIL");
    out << row << "\n";
    std::cout << row << "\n";
  }
  const std::string verdict =
      failures == 0 ? "all instances pass"
                    : std::to_string(failures) + " instances FAILED";
  out << "# " << verdict << "\n";
  std::cout << "# " << verdict << "\n";
  return failures == 0 ? kExitOk : kExitRuntime;
}

/* ------------------------------ recover-exp --------------------------- */

int cmd_recover_exp(const Settings& s, const std::string& params_path,
                    std::uint64_t trials, std::uint64_t threads) {
  qafd_synth_params sp;
  qafd_synth_params_init(&sp);
  sp.seed = s.seed;

  qafd_diffusion_params dp;
  qafd_diffusion_params_init(&dp);
  dp.source_mode = QAFD_SOURCE_RECOVERY_MASS;
  dp.epsilon = s.epsilon;
  dp.max_iterations = s.max_iterations;
  dp.trace = QAFD_TRACE_NONE;

  if (!params_path.empty()) {
    const auto params = load_config(params_path);
    for (const auto& [key, value] : params) {
      if (key == "n") sp.n = static_cast<uint32_t>(to_u64(value, key));
      else if (key == "r_k") sp.r_k = static_cast<uint32_t>(to_u64(value, key));
      else if (key == "rho1") sp.rho1 = to_double(value, key);
      else if (key == "rho2") sp.rho2 = to_double(value, key);
      else if (key == "background") sp.background = to_double(value, key);
      else if (key == "d") sp.d = static_cast<uint32_t>(to_u64(value, key));
      else if (key == "mu_gap") sp.mu_gap = to_double(value, key);
      else if (key == "sigma") sp.sigma = to_double(value, key);
      else if (key == "gamma1") sp.gamma1 = to_double(value, key);
      else if (key == "gamma2") sp.gamma2 = to_double(value, key);
      else if (key == "gamma3") sp.gamma3 = to_double(value, key);
      else if (key == "beta") sp.beta = to_double(value, key);
      else if (key == "max_iterations") {
        dp.max_iterations = to_u64(value, key);
      } else if (key == "epsilon") {
        dp.epsilon = to_double(value, key);
      } else {
        throw CliError(kExitValidation,
                       "unknown synth param '" + key + "'");
      }
    }
  }
  dp.recovery_beta = sp.beta;

  qafd_recovery_summary* summary = nullptr;
  check(qafd_recovery_suite_run(&sp, &dp, static_cast<uint32_t>(trials),
                                static_cast<uint32_t>(threads), &summary));
  std::unique_ptr<qafd_recovery_summary,
                  decltype(&qafd_recovery_summary_free)>
      guard(summary, &qafd_recovery_summary_free);

  const auto dir = resolve_output_dir(s);
  auto out = open_output(dir / "recovery.tsv");
  const std::string header =
      "trial\trecovered\tleakage\tsupport\tplant_connected\tconverged";
  out << header << "\n";
  std::cout << header << "\n";
  for (uint32_t i = 0; i < qafd_recovery_summary_trials(summary); ++i) {
    uint64_t trial_seed = 0;
    int recovered = 0, connected = 0, converged = 0;
    double leakage = 0.0;
    uint32_t support = 0;
    qafd_recovery_summary_trial(summary, i, &trial_seed, &recovered, &leakage,
                                &support, &connected, &converged);
    const std::string row =
        std::to_string(i) + "\t" + std::to_string(recovered) + "\t" +
        fmt(leakage) + "\t" + std::to_string(support) + "\t" +
        std::to_string(connected) + "\t" + std::to_string(converged);
    out << row << "\n";
    std::cout << row << "\n";
  }
  std::vector<std::pair<std::string, double>> aggregates = {
      {"recovery_rate", qafd_recovery_summary_recovery_rate(summary)},
      {"leakage_ok_rate", qafd_recovery_summary_leakage_ok_rate(summary)},
      {"leakage_p50", qafd_recovery_summary_leakage_quantile(summary, 0.5)},
      {"leakage_p95", qafd_recovery_summary_leakage_quantile(summary, 0.95)},
      {"median_within_weight",
       qafd_recovery_summary_median_within_weight(summary)},
      {"median_boundary_weight",
       qafd_recovery_summary_median_boundary_weight(summary)},
      {"connected_rate", qafd_recovery_summary_connected_rate(summary)}};
  for (const auto& [key, value] : aggregates) {
    const std::string row = "#aggregate\t" + key + "\t" + fmt(value);
    out << row << "\n";
    std::cout << row << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-aware flow diffusion over attributed graphs"};
  app.require_subcommand(1);

  Settings s;
  Settings cli;  // CLI-bound slots; merged by the resolver
  std::string config_path;
  std::string profile;
  app.add_option("--config", config_path, "key = value configuration file")
      ->expected(1);
  auto* profile_opt =
      app.add_option("--profile", profile, "preset defaults: qa or path");

  auto add_common = [&](CLI::App* cmd, Resolver& resolver) {
    resolver.bind(cmd, "--seed", "seed", cli.seed, &Settings::seed,
                  "PRNG seed");
    resolver.bind(cmd, "--output-dir", "output_dir", cli.output_dir,
                  &Settings::output_dir, "output directory");
  };
  auto add_graph = [&](CLI::App* cmd, Resolver& resolver) {
    resolver.bind(cmd, "--nodes", "nodes", cli.nodes, &Settings::nodes,
                  "node file (label<TAB>v1,...,vd)");
    resolver.bind(cmd, "--edges", "edges", cli.edges, &Settings::edges,
                  "edge file (label_u<TAB>label_v[<TAB>w])");
    resolver.bind(cmd, "--embeddings", "embeddings", cli.embeddings,
                  &Settings::embeddings,
                  "embedding table (key<TAB>v1,...,vd)");
  };
  auto add_scheme = [&](CLI::App* cmd, Resolver& resolver) {
    resolver.bind(cmd, "--scheme", "scheme", cli.scheme, &Settings::scheme,
                  "mean|product|hybrid|generic");
    resolver.bind(cmd, "--a", "a", cli.a, &Settings::a, "coefficient a");
    resolver.bind(cmd, "--b", "b", cli.b, &Settings::b, "coefficient b");
    resolver.bind(cmd, "--c", "c", cli.c, &Settings::c, "coefficient c");
    resolver.bind(cmd, "--combine", "combine", cli.combine,
                  &Settings::combine, "add|mul (generic scheme)");
    resolver.bind(cmd, "--sim", "sim", cli.sim, &Settings::sim,
                  "cosine|dot|rbf");
    resolver.bind(cmd, "--sim-gamma", "sim_gamma", cli.sim_gamma,
                  &Settings::sim_gamma, "RBF bandwidth for --sim rbf");
    resolver.bind(cmd, "--gamma1", "gamma1", cli.gamma1, &Settings::gamma1,
                  "product bandwidth (node-node)");
    resolver.bind(cmd, "--gamma2", "gamma2", cli.gamma2, &Settings::gamma2,
                  "product bandwidth (node-query, low id)");
    resolver.bind(cmd, "--gamma3", "gamma3", cli.gamma3, &Settings::gamma3,
                  "product bandwidth (node-query, high id)");
    resolver.bind(cmd, "--floor", "floor", cli.floor_weight,
                  &Settings::floor_weight, "weight floor");
  };
  auto add_diffusion = [&](CLI::App* cmd, Resolver& resolver) {
    resolver.bind(cmd, "--alpha", "alpha", cli.alpha, &Settings::alpha,
                  "source mass multiplier");
    resolver.bind(cmd, "--epsilon", "epsilon", cli.epsilon,
                  &Settings::epsilon, "total-excess stopping threshold");
    resolver.bind(cmd, "--max-iterations", "max_iterations",
                  cli.max_iterations, &Settings::max_iterations,
                  "push cap");
    resolver.bind(cmd, "--check-cadence", "check_cadence", cli.check_cadence,
                  &Settings::check_cadence, "convergence check stride");
    resolver.bind(cmd, "--selection", "selection", cli.selection,
                  &Settings::selection, "random|fifo");
    resolver.bind(cmd, "--sink", "sink", cli.sink, &Settings::sink,
                  "degree|uniform");
    resolver.bind(cmd, "--uniform-capacity", "uniform_capacity",
                  cli.uniform_capacity, &Settings::uniform_capacity,
                  "capacity for --sink uniform");
    resolver.bind(cmd, "--support-threshold", "support_threshold",
                  cli.support_threshold, &Settings::support_threshold,
                  "importance cutoff for the support");
    resolver.bind(cmd, "--num-seeds", "num_seeds", cli.num_seeds,
                  &Settings::num_seeds, "seeds per (sub)query");
  };

  // Parent options (--config, --profile) may appear after the subcommand.
  auto subcommand = [&app](const std::string& name, const std::string& desc) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->fallthrough();
    return cmd;
  };

  // ingest
  auto* ingest = subcommand("ingest", "validate a graph and report stats");
  Resolver ingest_resolver(s);
  std::string export_dir;
  add_common(ingest, ingest_resolver);
  add_graph(ingest, ingest_resolver);
  ingest->add_option("--export-dir", export_dir,
                     "write canonical nodes.tsv/edges.tsv here");

  // seeds
  auto* seeds = subcommand("seeds", "score nodes and select seeds");
  Resolver seeds_resolver(s);
  KeywordInputs seed_kw;
  add_common(seeds, seeds_resolver);
  add_graph(seeds, seeds_resolver);
  seeds_resolver.bind(seeds, "--sim", "sim", cli.sim, &Settings::sim,
                      "cosine|dot|rbf");
  seeds_resolver.bind(seeds, "--sim-gamma", "sim_gamma", cli.sim_gamma,
                      &Settings::sim_gamma, "RBF bandwidth");
  seeds_resolver.bind(seeds, "--num-seeds", "num_seeds", cli.num_seeds,
                      &Settings::num_seeds, "number of seeds");
  seeds->add_option("--keywords", seed_kw.inline_keywords,
                    "comma-separated keywords");
  seeds->add_option("--keywords-file", seed_kw.keywords_file,
                    "one keyword per line");
  seeds->add_option("--query", seed_kw.query_text,
                    "query text for fallback tokenization");

  // diffuse
  auto* diffuse = subcommand("diffuse", "single-query diffusion");
  Resolver diffuse_resolver(s);
  KeywordInputs diffuse_kw;
  std::string query_key, query_csv;
  add_common(diffuse, diffuse_resolver);
  add_graph(diffuse, diffuse_resolver);
  add_scheme(diffuse, diffuse_resolver);
  add_diffusion(diffuse, diffuse_resolver);
  diffuse->add_option("--query-key", query_key,
                      "embedding-table key for the query vector");
  diffuse->add_option("--query-embedding", query_csv,
                      "inline query vector v1,...,vd");
  diffuse->add_option("--keywords", diffuse_kw.inline_keywords,
                      "comma-separated keywords");
  diffuse->add_option("--keywords-file", diffuse_kw.keywords_file,
                      "one keyword per line");
  diffuse->add_option("--query", diffuse_kw.query_text,
                      "query text for fallback tokenization");

  // retrieve
  auto* retrieve = subcommand("retrieve",
                                      "multi-subquery retrieval");
  Resolver retrieve_resolver(s);
  std::string subqueries_path;
  add_common(retrieve, retrieve_resolver);
  add_graph(retrieve, retrieve_resolver);
  add_scheme(retrieve, retrieve_resolver);
  add_diffusion(retrieve, retrieve_resolver);
  retrieve_resolver.bind(retrieve, "--top-k", "top_k", cli.top_k,
                         &Settings::top_k, "cap on reported nodes (0 = all)");
  retrieve_resolver.bind(retrieve, "--aggregate", "aggregate", cli.aggregate,
                         &Settings::aggregate, "max|sum score fusion");
  retrieve->add_option("--subqueries", subqueries_path,
                       "file of 'text<TAB>v1,...,vd' lines");

  // oracle-check
  auto* oracle = subcommand(
      "oracle-check", "compare the solver against the dense reference");
  Resolver oracle_resolver(s);
  std::uint64_t instances = 100;
  double tolerance = 1e-6;
  double diffusion_epsilon = 1e-8;
  add_common(oracle, oracle_resolver);
  oracle->add_option("--instances", instances, "number of random instances");
  oracle->add_option("--tolerance", tolerance, "objective tolerance");
  oracle->add_option("--diffusion-epsilon", diffusion_epsilon,
                     "tightened stopping threshold");

  // recover-exp
  auto* recover = subcommand(
      "recover-exp", "synthetic planted-recovery experiment");
  Resolver recover_resolver(s);
  std::uint64_t trials = 100;
  std::uint64_t threads = 0;
  std::string params_path;
  add_common(recover, recover_resolver);
  recover_resolver.bind(recover, "--epsilon", "epsilon", cli.epsilon,
                        &Settings::epsilon, "stopping threshold");
  recover_resolver.bind(recover, "--max-iterations", "max_iterations",
                        cli.max_iterations, &Settings::max_iterations,
                        "push cap");
  recover->add_option("--trials", trials, "number of trials");
  recover->add_option("--threads", threads, "worker threads (0 = auto)");
  recover->add_option("--params", params_path, "synth parameter file");

  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::string> config;
    if (!config_path.empty()) config = load_config(config_path);

    std::string resolved_profile;
    if (auto it = config.find("profile"); it != config.end()) {
      resolved_profile = it->second;
    }
    if (profile_opt->count() > 0) resolved_profile = profile;
    apply_profile(s, resolved_profile);

    if (ingest->parsed()) {
      ingest_resolver.resolve(config);
      return cmd_ingest(s, export_dir);
    }
    if (seeds->parsed()) {
      seeds_resolver.resolve(config);
      return cmd_seeds(s, seed_kw);
    }
    if (diffuse->parsed()) {
      diffuse_resolver.resolve(config);
      return cmd_diffuse(s, diffuse_kw, query_key, query_csv);
    }
    if (retrieve->parsed()) {
      retrieve_resolver.resolve(config);
      return cmd_retrieve(s, subqueries_path);
    }
    if (oracle->parsed()) {
      oracle_resolver.resolve(config);
      return cmd_oracle_check(s, instances, tolerance, diffusion_epsilon);
    }
    if (recover->parsed()) {
      recover_resolver.resolve(config);
      return cmd_recover_exp(s, params_path, trials, threads);
    }
    std::cerr << "no subcommand given\n";
    return kExitValidation;
  } catch (const CliError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return err.exit_code();
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
}
