#pragma once

// Batch front-end: `catbound <verify|sweep|optimize|construct> [flags]`.
//
// Exit codes: 0 success, 1 check failure, 2 usage or I/O error,
// 3 optimizer found no feasible restart.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "catbound/serialize.hpp"

namespace catbound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotConverged = 3;

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Property suite behind `verify`: closed-form optimum, lambda(A)
/// consistency, the optimal family for canonical and seeded random
/// environment pairs of dimension `env_dim`, the isolated-qubit triplet, and
/// seeded Schmidt / partial-trace properties.
std::vector<Check> verification_suite(std::size_t env_dim, std::uint64_t seed);

/// Checks for a state file: either a bare ket or a `construct` bundle.
/// Throws FormatError for malformed documents.
std::vector<Check> state_file_checks(const Json& doc);

/// Everything `construct` emits, without the manifest.
Json construct_bundle(std::size_t env_dim, bool random_pair, std::uint64_t seed);

Json manifest(const std::string& subcommand, const Json& parameters, std::uint64_t seed);

/// Entry point; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace catbound
