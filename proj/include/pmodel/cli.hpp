#pragma once

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage
// error.

#include <ostream>
#include <string>
#include <vector>

namespace pmodel::cli {

/// Runs one command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// PMODEL_CORPUS_DIR when set, otherwise the corpus shipped with the source.
std::string corpus_dir();

}  // namespace pmodel::cli
