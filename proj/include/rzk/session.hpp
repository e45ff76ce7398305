#pragma once

#include <string>

#include "rzk/dsl.hpp"
#include "rzk/report.hpp"

namespace rzk {

struct RunConfig {
  std::uint64_t fuel = 10000;
  std::size_t depth = 7;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct SessionResult {
  Json report;
  int queries = 0, yes = 0, no = 0, unknown = 0, errors = 0;
  /// 0 all pass, 1 some verdict No or runtime error.
  int exit_code() const { return (no > 0 || errors > 0) ? 1 : 0; }
};

/// Execute a session: declarations in order, queries (optionally on a worker
/// pool) reported in declaration order, deterministic for a fixed config.
SessionResult run_session(const SessionAst& ast, const RunConfig& config);

}  // namespace rzk
