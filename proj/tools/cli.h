#pragma once

#include <exception>
#include <iosfwd>

namespace srgkit::cli {

/// Process exit codes.
enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitSchema = 2,
  kExitInconclusive = 3,
  kExitPrecondition = 4,
};

/// Maps an exception to its exit code (ProfileError by its cause).
int exit_code_for(const std::exception_ptr& e);

/// Runs the srgkit command line; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace srgkit::cli
