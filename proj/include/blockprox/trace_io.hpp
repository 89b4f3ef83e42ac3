#pragma once

#include <iosfwd>
#include <string>

#include "blockprox/solvers.hpp"

namespace blockprox {

/// Trace CSV layout: `# key value` metadata comment lines, then the header
/// `k,pass,block,objective,beta_block,residual,elapsed_s`, then one row per
/// block update. The residual column is populated once per pass; elapsed_s is
/// written only when `timing` is set, keeping default output reproducible.
void write_trace_csv(std::ostream& os, const Trace& trace, bool timing = false);

Trace read_trace_csv(std::istream& is);

void save_trace_csv(const std::string& path, const Trace& trace, bool timing = false);
Trace load_trace_csv(const std::string& path);

}  // namespace blockprox
