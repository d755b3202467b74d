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

#pragma once

#include <stdexcept>
#include <string>

namespace qafd {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  SelfLoop,
  DuplicateEdge,
  DanglingEndpoint,
  UnknownNode,
  NotAnEdge,
  NoSeeds,
  EmptyGraph,
  EmptyRetrieval,
  Parse,
  Io,
  MissingEmbedding,
  NoProgress,
  TooLarge,
  Internal
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::SelfLoop: return "self_loop";
    case ErrorCode::DuplicateEdge: return "duplicate_edge";
    case ErrorCode::DanglingEndpoint: return "dangling_endpoint";
    case ErrorCode::UnknownNode: return "unknown_node";
    case ErrorCode::NotAnEdge: return "not_an_edge";
    case ErrorCode::NoSeeds: return "no_seeds";
    case ErrorCode::EmptyGraph: return "empty_graph";
    case ErrorCode::EmptyRetrieval: return "empty_retrieval";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::MissingEmbedding: return "missing_embedding";
    case ErrorCode::NoProgress: return "no_progress";
    case ErrorCode::TooLarge: return "too_large";
    case ErrorCode::Internal: return "internal_error";
  }
  return "unknown";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qafd
