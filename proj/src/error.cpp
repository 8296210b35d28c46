#include "nlheat/error.hpp"

namespace nlheat {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Structural: return "structural";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Positivity: return "positivity";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::Oracle: return "oracle";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace nlheat
