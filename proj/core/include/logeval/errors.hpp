#ifndef LOGEVAL_ERRORS_HPP
#define LOGEVAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace logeval {

// Error taxonomy shared by the library and the command line tool.  Each class
// maps onto a distinct process exit code so that callers can distinguish
// "you invoked me wrong" from "your data is malformed" from "the requested
// quantity is mathematically undefined on this input".

// Bad invocation: unknown flag, missing required argument, contradictory
// options.  CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data: unreadable file, CSV structure violations, invalid
// UTF-8, inconsistent line ids, conflicting template definitions.
// CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// The computation is undefined on the given input (for example a silhouette
// over fewer than two templates).  CLI exit code 3.
class ComputationUndefined : public std::runtime_error {
public:
    explicit ComputationUndefined(const std::string& what) : std::runtime_error(what) {}
};

} // namespace logeval

#endif // LOGEVAL_ERRORS_HPP
