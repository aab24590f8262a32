#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "popmatch/core_model.hpp"

namespace popmatch::cli {

// Exit codes: 0 yes/success, 1 no, 2 usage or validation error.
constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

// Compares the fast tests with classify_exhaustive on every matching;
// describes the first disagreement.
std::optional<std::string> check_agreement(const Instance& inst);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace popmatch::cli
