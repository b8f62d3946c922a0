#pragma once

#include <iosfwd>

#include "dnc/cli/job.hpp"

namespace dnc::cli {

/// Runs one job. The report goes to spec.output, or to `out` when no output
/// path is given; with an output path a one-line summary is written to `out`.
/// Returns 0 when every check passes, 1 when the job completed with failing
/// checks or a non-Equivalent verdict, and 2 on input errors (reported on `err`).
int run(const JobSpec& spec, std::ostream& out, std::ostream& err);

} // namespace dnc::cli
