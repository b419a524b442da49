// cli/cli.h

// Copyright 2026  The gemspoof Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GEM_CLI_CLI_H_
#define GEM_CLI_CLI_H_

// The `gem` command line.  Subcommands follow the experiment order:
//
//   build-manifest -> split -> extract-features -> train-expert ->
//   specialize (x4) -> train-gate -> score -> fuse -> eval -> report
//
// plus `simulate` for synthetic score sets and corpora.  Every subcommand
// takes --config, --jobs, --out and --seed; config files are `key = value`
// with '#' comments, flags override file keys, and unknown keys are errors.
//
// Exit status: 0 on success, 2 on a validation, configuration or format
// error, 1 on any other failure.

#include <ostream>
#include <string>
#include <vector>

namespace gem {

inline constexpr const char *kGemVersion = "0.1.0";

/// Runs one command.  `args` excludes the program name.  Diagnostics go to
/// `err`, human-readable summaries to `out`.
int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err);

/// main() entry point using std::cout / std::cerr.
int RunCli(int argc, const char *const *argv);

}  // namespace gem

#endif  // GEM_CLI_CLI_H_
