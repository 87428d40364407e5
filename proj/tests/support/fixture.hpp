#pragma once

#include "oracles.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace testing_support {

std::filesystem::path fixture_dir();
std::filesystem::path golden_dir();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
   public:
    explicit TempDir(std::string const &tag = "newslens");
    ~TempDir();
    TempDir(TempDir const &) = delete;
    TempDir &operator=(TempDir const &) = delete;

    std::filesystem::path const &path() const { return path_; }

   private:
    std::filesystem::path path_;
};

/// Runs the CLI in-process; throws std::runtime_error with the captured
/// stderr when the exit status is not 0.
void cli(std::vector<std::string> args);

/// Every stage from ingest through `analyze --all` on the bundled fixture.
void run_pipeline(std::filesystem::path const &out, unsigned threads = 1);

/// Inputs for the oracle, computed with the oracle's own length filter and
/// dedup and the mock annotator.
oracle::Inputs oracle_inputs();

/// Analytics options from the fixture config.
oracle::Options oracle_options();

struct EngineRun {
    std::vector<newslens::analytics::MentionFact> facts;
    std::map<std::string, newslens::report::ReportTable> tables;
};

/// Every catalogue report computed by the engine from the oracle's inputs.
EngineRun engine_reports(oracle::Inputs const &in, oracle::Options const &options);

/// Same id, columns and shape; text and integers equal, reals within `tolerance`
/// (nulls must match). On mismatch `why` describes the first difference.
bool tables_match(newslens::report::ReportTable const &a, newslens::report::ReportTable const &b, double tolerance,
                  std::string *why = nullptr);

std::string read_text(std::filesystem::path const &path);

/// Report ids of the committed goldens.
std::vector<std::string> golden_ids();

}  // namespace testing_support
