// Copyright 2026 The qcps Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: generate | scan | cfrac | brs | compare.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcps {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSemantic = 3;
inline constexpr int kExitTolerance = 4;

struct RunConfig {
  std::string command;
  std::string scheme_path;
  /// fibonacci | fibonacci_half, used when no scheme file is given.
  std::string preset = "fibonacci";
  std::string weight;
  std::string T = "30";
  std::string checkpoints;
  std::string out;
  int precision = 256;
  int jobs = 1;
  unsigned long long seed = 0;
  long long samples = 10000;
  long long terms = 200;
  /// cfrac input; brs slope.
  std::string number;
  std::string alpha = "1/2+1/2*sqrt(5)";
  /// brs region: square | empty | hat | strip:W | band:L | poly:X,Y;X,Y;...
  std::string region = "hat";
  std::string start = "0,0";
  /// compare: fibonacci | fibonacci_half | scheme | lattice:S | lebesgue:M
  std::string mu;
  std::string nu;
};

/// Each command writes its primary output to `out` (or to files under
/// config.out when set) and returns an exit code.
int cmd_generate(const RunConfig& c, std::ostream& out);
int cmd_scan(const RunConfig& c, std::ostream& out);
int cmd_cfrac(const RunConfig& c, std::ostream& out);
int cmd_brs(const RunConfig& c, std::ostream& out);
int cmd_compare(const RunConfig& c, std::ostream& out);

/// Parses argv, dispatches, and maps errors to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Comma-separated list; entries are exactnum numbers or integers like 1e5.
std::vector<std::string> split_list(const std::string& s, char sep);

}  // namespace qcps
