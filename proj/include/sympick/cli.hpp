#pragma once

// Command-line front end: `sympick <subcommand> [flags]`.

#include <iosfwd>
#include <string>
#include <vector>

#include "sympick/io.hpp"

namespace sympick::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitMismatch = 3;

/// Full report for one problem, including the timing member.
io::Json run_problem(const io::ProblemFile& problem);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

struct CorpusOptions {
  std::string dir;
  std::string out_dir;
  int jobs = 0;  // 0: hardware concurrency
};

int corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace sympick::cli
