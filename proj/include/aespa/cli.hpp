#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aespa/formats.hpp"

namespace aespa::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kInputError = 2;

/// Runs one command line (argv[0] is the program name). Tables and trees go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Compressed-matrix dump used by `verify --fixture`:
///   ccf UMCK
///   shape <rows> <cols>
///   pos <p0> <p1> ...
///   crd <c0> ...
///   values <v0> ...
/// The payload is loaded without structural checks.
StoredMatrix read_fixture(std::istream& in, const std::string& source = "<stream>");
void write_fixture(std::ostream& out, const StoredMatrix& m);

}  // namespace aespa::cli
