#pragma once

#include "relaxrd/harness.hpp"
#include "relaxrd/problem.hpp"
#include "relaxrd/relax.hpp"

#include <filesystem>
#include <string>

namespace relaxrd::cli {

/// 17 significant digits, enough to round-trip a double.
std::string format_number(double v);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// `# t=<time>`, a column header, then one row per cell: x[,y] and every unknown.
std::string snapshot_csv(const Snapshot& snap, const Problem& problem, const Mesh& mesh);

/// m,error_L1,error_L2,rate_L1,rate_L2,wall_time; the first row has empty rates.
std::string report_csv(const RunReport& report, bool with_wall_time = true);

} // namespace relaxrd::cli
