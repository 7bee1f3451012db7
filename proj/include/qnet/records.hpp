#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qnet {

/// History of one completed service.
struct DataRecord {
  std::uint64_t id_number = 0;
  /// Class held during the service (0-based).
  std::size_t customer_class = 0;
  /// 1-based node number.
  std::size_t node = 0;
  double arrival_date = 0.0;
  double waiting_time = 0.0;
  double service_start_date = 0.0;
  double service_time = 0.0;
  double service_end_date = 0.0;
  double time_blocked = 0.0;
  double exit_date = 0.0;
  /// 1-based node number of the next node, or -1 for leaving the system.
  std::int64_t destination = -1;
  /// Customers waiting (not in service) at the node just after this
  /// customer's arrival and departure were processed.
  std::size_t queue_size_at_arrival = 0;
  std::size_t queue_size_at_departure = 0;

  bool operator==(const DataRecord&) const = default;
};

inline constexpr std::int64_t kExitDestination = -1;

inline constexpr const char* kCsvHeader =
    "id_number,customer_class,node,arrival_date,waiting_time,service_start_date,service_time,"
    "service_end_date,time_blocked,exit_date,destination,queue_size_at_arrival,"
    "queue_size_at_departure";

struct RecordFilter {
  std::optional<std::size_t> node;
  std::optional<std::size_t> customer_class;
  /// Keeps records with arrival_date strictly greater than this.
  std::optional<double> min_arrival_date;

  bool matches(const DataRecord& r) const {
    return (!node || r.node == *node) && (!customer_class || r.customer_class == *customer_class) &&
           (!min_arrival_date || r.arrival_date > *min_arrival_date);
  }
};

std::vector<DataRecord> filter(std::span<const DataRecord> records, const RecordFilter& predicates);

/// Means are empty when count is zero.
struct Stats {
  std::size_t count = 0;
  std::optional<double> mean_wait;
  std::optional<double> mean_time_blocked;
  std::optional<double> mean_service_time;

  bool operator==(const Stats&) const = default;
};

struct Summary {
  Stats overall;
  std::map<std::size_t, Stats> by_node;
  std::map<std::size_t, Stats> by_class;
  /// Keyed (node, class).
  std::map<std::pair<std::size_t, std::size_t>, Stats> by_node_class;

  bool operator==(const Summary&) const = default;
};

Stats stats(std::span<const DataRecord> records);
Summary summarize(std::span<const DataRecord> records);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Writes the header and one LF-terminated row per record. Throws
/// std::ios_base::failure if the stream goes bad.
void write_csv(std::span<const DataRecord> records, std::ostream& out);

/// Inverse of write_csv. Throws std::runtime_error on malformed input.
std::vector<DataRecord> read_csv(std::istream& in);

}  // namespace qnet
