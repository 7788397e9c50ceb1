#include "spottransit/error.hpp"

namespace spottransit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kNoSolution: return "no solution";
    case ErrorCode::kConvergence: return "convergence failure";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kInvariant: return "invariant violation";
  }
  return "unknown error";
}

}  // namespace spottransit
