#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pidmap/sim.hpp"

namespace pidmap {

/// Shortest decimal form that round-trips back to the same double.
std::string format_double(double v);

/// Column order is fixed: t,q,qdot,e1,e2,qI,u,u0,dhat,d,dtilde.
inline constexpr const char* kCsvHeader = "t,q,qdot,e1,e2,qI,u,u0,dhat,d,dtilde";

void write_csv(const SimResult& r, std::ostream& os);

/// Parses a file produced by write_csv; series values are bit-exact.
/// Throws std::invalid_argument on a malformed header or row.
SimResult read_csv(std::istream& is);

/// Run summary: {ultimate_bound, settling_time, max_control, max_dhat, settled}.
nlohmann::json summary_json(const SimResult& r);

}  // namespace pidmap
