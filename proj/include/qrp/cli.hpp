#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qrp/states.hpp"

// Command-line front end: every reproduction pipeline as a subcommand, with
// plot-ready CSV/JSON outputs and a run manifest next to every output.
// Exit codes: 0 success, 1 computational failure, 2 usage error.

namespace qrp::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// grammar error with the offset into the spec string where parsing failed
struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message), position(position) {}
  std::size_t position;
};

// `sho:n=3,alpha=1` | `cauchy:x0=0,gamma=1` | `student:dof=2`
// | `hermite:c=[0.6,0.8i,...]` (complex entries re, re+imi, re-imi, imi)
states::StateSpec parse_state_spec(const std::string& text);

int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace qrp::cli
