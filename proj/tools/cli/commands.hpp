#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace unitsq::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,           // found / established / valid
  kNegative = 1,     // certified NONE, invalid, incomplete, not established
  kUsage = 2,
  kIo = 3,           // unreadable or malformed input, unwritable output
  kInterrupted = 130,
};

/// Relative --out paths are resolved against this directory when set.
inline constexpr const char* kOutputDirEnv = "UNITSQ_OUTPUT_DIR";

/// Runs one command line (argv[0] is the program name). Data lines go to
/// out, diagnostics and progress to err. A set `interrupted` flag makes long
/// sweeps stop at the next search boundary, keep what is checkpointed and
/// return kInterrupted.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* interrupted = nullptr);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const std::atomic<bool>* interrupted = nullptr);

}  // namespace unitsq::cli
