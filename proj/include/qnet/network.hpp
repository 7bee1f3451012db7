#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qnet/distributions.hpp"

namespace qnet {

/// Raised for malformed config documents and for networks that fail
/// validation. Node numbers in messages are 1-based.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<double>>;

/// One period of a cyclic schedule: `servers` are on duty until `end_time`.
struct Shift {
  double end_time;
  std::int64_t servers;
};
using Schedule = std::vector<Shift>;
using ServerSpec = std::variant<std::int64_t, Schedule>;

/// b(m): probability that an external arrival baulks when m customers are
/// already at the node.
class BaulkingFunction {
 public:
  /// b(m) = 1 if m >= n else 0.
  static BaulkingFunction threshold(std::int64_t n);
  static BaulkingFunction custom(std::function<double(std::size_t)> fn);

  double operator()(std::size_t customers_present) const;

  /// Set only for the named threshold form.
  std::optional<std::int64_t> threshold_value() const { return threshold_; }
  bool valid() const { return threshold_ ? *threshold_ >= 0 : static_cast<bool>(fn_); }

 private:
  std::optional<std::int64_t> threshold_;
  std::function<double(std::size_t)> fn_;
};

using ClassChangeSpec = std::variant<Matrix, std::vector<std::optional<Matrix>>>;

/// Unvalidated mirror of a config document. Outer vectors of per-class data
/// are indexed by class, inner ones by node (0-based).
struct NetworkConfig {
  std::vector<std::vector<Distribution>> arrival_distributions;
  std::vector<std::vector<Distribution>> service_distributions;
  std::vector<Matrix> transition_matrices;
  std::vector<ServerSpec> number_of_servers;
  /// nullopt means infinite capacity.
  std::vector<std::optional<std::int64_t>> queue_capacities;
  std::optional<std::vector<std::vector<Distribution>>> batching_distributions;
  std::optional<std::map<std::size_t, std::int64_t>> priority_classes;
  /// Either one matrix for every node, or one optional matrix per node.
  std::optional<ClassChangeSpec> class_change_matrices;
  std::optional<std::vector<std::vector<std::optional<BaulkingFunction>>>> baulking_functions;
};

struct ServiceCentre {
  ServerSpec servers;
  std::optional<std::size_t> queue_capacity;
  /// Indexed by class; nullopt means the class never baulks here.
  std::vector<std::optional<BaulkingFunction>> baulking;

  const Schedule* schedule() const { return std::get_if<Schedule>(&servers); }
};

struct CustomerClass {
  std::vector<Distribution> arrival;
  std::vector<Distribution> service;
  std::vector<Distribution> batching;
  Matrix routing;
  std::size_t priority = 0;
};

/// Validated, immutable queueing network. Only `validate` constructs one.
class Network {
 public:
  std::size_t number_of_nodes() const { return centres_.size(); }
  std::size_t number_of_classes() const { return classes_.size(); }

  const ServiceCentre& centre(std::size_t node) const { return centres_.at(node); }
  const CustomerClass& customer_class(std::size_t k) const { return classes_.at(k); }
  const std::vector<ServiceCentre>& centres() const { return centres_; }
  const std::vector<CustomerClass>& classes() const { return classes_; }

  /// Class-change matrix applied on leaving `node`, or nullptr.
  const Matrix* class_change(std::size_t node) const {
    const auto& m = class_change_.at(node);
    return m ? &*m : nullptr;
  }

  const NetworkConfig& config() const { return config_; }

 private:
  friend Network validate(const NetworkConfig& config);
  Network() = default;

  std::vector<ServiceCentre> centres_;
  std::vector<CustomerClass> classes_;
  std::vector<std::optional<Matrix>> class_change_;
  NetworkConfig config_;
};

NetworkConfig parse_config(std::string_view text);
NetworkConfig load_config(const std::filesystem::path& path);

/// JSON text for `config`; throws ConfigError for API-only content
/// (Continuous/TimeDependent distributions, custom baulking functions).
std::string serialize_config(const NetworkConfig& config);

Network validate(const NetworkConfig& config);

/// 1 - sum of the class's routing row at `node` (0-based indices).
double exit_probability(const Network& network, std::size_t node, std::size_t customer_class);

}  // namespace qnet
