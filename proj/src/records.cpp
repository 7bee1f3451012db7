#include "qnet/records.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace qnet {

namespace {

struct Accumulator {
  std::size_t count = 0;
  double wait = 0.0;
  double blocked = 0.0;
  double service = 0.0;

  void add(const DataRecord& r) {
    ++count;
    wait += r.waiting_time;
    blocked += r.time_blocked;
    service += r.service_time;
  }

  Stats finish() const {
    Stats s;
    s.count = count;
    if (count > 0) {
      const auto n = static_cast<double>(count);
      s.mean_wait = wait / n;
      s.mean_time_blocked = blocked / n;
      s.mean_service_time = service / n;
    }
    return s;
  }
};

template <class T>
T parse_field(std::string_view text, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("records CSV line " + std::to_string(line) + ": bad field \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

std::vector<DataRecord> filter(std::span<const DataRecord> records, const RecordFilter& predicates) {
  std::vector<DataRecord> out;
  for (const auto& r : records) {
    if (predicates.matches(r)) out.push_back(r);
  }
  return out;
}

Stats stats(std::span<const DataRecord> records) {
  Accumulator acc;
  for (const auto& r : records) acc.add(r);
  return acc.finish();
}

Summary summarize(std::span<const DataRecord> records) {
  Accumulator overall;
  std::map<std::size_t, Accumulator> by_node;
  std::map<std::size_t, Accumulator> by_class;
  std::map<std::pair<std::size_t, std::size_t>, Accumulator> by_node_class;
  for (const auto& r : records) {
    overall.add(r);
    by_node[r.node].add(r);
    by_class[r.customer_class].add(r);
    by_node_class[{r.node, r.customer_class}].add(r);
  }
  Summary s;
  s.overall = overall.finish();
  for (const auto& [k, acc] : by_node) s.by_node[k] = acc.finish();
  for (const auto& [k, acc] : by_class) s.by_class[k] = acc.finish();
  for (const auto& [k, acc] : by_node_class) s.by_node_class[k] = acc.finish();
  return s;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), ptr);
}

void write_csv(std::span<const DataRecord> records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.id_number << ',' << r.customer_class << ',' << r.node << ',' << format_double(r.arrival_date) << ','
        << format_double(r.waiting_time) << ',' << format_double(r.service_start_date) << ','
        << format_double(r.service_time) << ',' << format_double(r.service_end_date) << ','
        << format_double(r.time_blocked) << ',' << format_double(r.exit_date) << ',' << r.destination << ','
        << r.queue_size_at_arrival << ',' << r.queue_size_at_departure << '\n';
  }
  out.flush();
  if (!out) throw std::ios_base::failure("failed writing records CSV");
}

std::vector<DataRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("records CSV: missing or unexpected header");
  }
  std::vector<DataRecord> out;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    std::array<std::string_view, 13> f;
    std::size_t count = 0;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      if (count == f.size()) {
        throw std::runtime_error("records CSV line " + std::to_string(line_number) + ": too many fields");
      }
      f[count++] = rest.substr(0, comma);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (count != f.size()) {
      throw std::runtime_error("records CSV line " + std::to_string(line_number) + ": expected 13 fields");
    }
    DataRecord r;
    r.id_number = parse_field<std::uint64_t>(f[0], line_number);
    r.customer_class = parse_field<std::size_t>(f[1], line_number);
    r.node = parse_field<std::size_t>(f[2], line_number);
    r.arrival_date = parse_field<double>(f[3], line_number);
    r.waiting_time = parse_field<double>(f[4], line_number);
    r.service_start_date = parse_field<double>(f[5], line_number);
    r.service_time = parse_field<double>(f[6], line_number);
    r.service_end_date = parse_field<double>(f[7], line_number);
    r.time_blocked = parse_field<double>(f[8], line_number);
    r.exit_date = parse_field<double>(f[9], line_number);
    r.destination = parse_field<std::int64_t>(f[10], line_number);
    r.queue_size_at_arrival = parse_field<std::size_t>(f[11], line_number);
    r.queue_size_at_departure = parse_field<std::size_t>(f[12], line_number);
    out.push_back(r);
  }
  return out;
}

}  // namespace qnet
