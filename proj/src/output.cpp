#include "topk/output.hpp"

#include <charconv>

namespace topk {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_short(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_aggregate_csv(std::ostream& out, const AggregateTrace& trace) {
  out << kAggregateHeader << '\n';
  for (const auto& row : trace.rows) {
    out << row.t << ',' << format_double(row.consensus_error) << ','
        << format_double(row.mean_error) << ',' << format_double(row.max_error) << ','
        << format_double(row.topk_count) << ',' << format_double(row.frac_topk_correct) << '\n';
  }
}

void write_replication_csv(std::ostream& out, const ReplicationResult& run) {
  out << kReplicationHeader << '\n';
  for (const auto& rec : run.records) {
    out << run.replication << ',' << rec.t << ',' << format_double(rec.consensus_error) << ','
        << format_double(rec.mean_error) << ',' << format_double(rec.max_error) << ','
        << rec.topk_count << ',' << (rec.topk_correct ? 1 : 0) << '\n';
  }
}

} // namespace topk
