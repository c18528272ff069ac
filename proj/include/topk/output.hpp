#pragma once

#include "topk/simulator.hpp"

#include <ostream>
#include <string>

namespace topk {

/// Shortest-safe decimal form with 17 significant digits; parses back to the
/// identical double.
std::string format_double(double x);

/// Shortest decimal form that still parses back to x. For console output.
std::string format_short(double x);

inline constexpr const char* kAggregateHeader =
    "t,consensus_error,mean_error,max_error,topk_count,frac_topk_correct";
inline constexpr const char* kReplicationHeader =
    "replication,t,consensus_error,mean_error,max_error,topk_count,frac_topk_correct";

void write_aggregate_csv(std::ostream& out, const AggregateTrace& trace);
void write_replication_csv(std::ostream& out, const ReplicationResult& run);

} // namespace topk
