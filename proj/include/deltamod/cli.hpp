#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace deltamod {

inline constexpr std::string_view kToolVersion = "deltamod 1.0.0";

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Stateless mixer used to derive independent per-index seeds from one base.
std::uint64_t splitmix64(std::uint64_t x);

// Runs one command-line invocation: result JSON/CSV on `out`, run manifest
// (or error text) on `err`. Returns the process exit code: 0 success,
// 1 certified mathematical contradiction, 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deltamod
