#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace newslens::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,  // bad flags or config, missing inputs
    exit_data = 3,    // inputs violate a schema or a referential constraint
    exit_internal = 4,
};

/// Environment variable that overrides the configured output directory.
inline constexpr char const *output_dir_env = "NEWSLENS_OUTPUT_DIR";

/// Runs one pipeline stage. `args` excludes the program name. Failures are
/// reported on `err` as a single JSON object.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);
int run(int argc, char const *const *argv);

}  // namespace newslens::cli
