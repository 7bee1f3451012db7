#include "qnet/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qnet {

using json = nlohmann::json;

namespace {

constexpr double kProbTolerance = 1e-9;

const std::set<std::string, std::less<>> kKnownKeys = {
    "arrival_distributions", "service_distributions", "transition_matrices",
    "number_of_servers",     "queue_capacities",      "batching_distributions",
    "priority_classes",      "class_change_matrices", "baulking_functions"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where.empty() ? what : where + ": " + what);
}

std::string class_key(std::size_t k) { return "Class " + std::to_string(k); }

std::size_t parse_class_key(const std::string& key, const std::string& where) {
  constexpr std::string_view prefix = "Class ";
  if (key.rfind(prefix, 0) != 0) fail(where, "expected key of the form \"Class <k>\", got \"" + key + "\"");
  std::size_t k = 0;
  const char* first = key.data() + prefix.size();
  const char* last = key.data() + key.size();
  auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec != std::errc{} || ptr != last || first == last) {
    fail(where, "expected key of the form \"Class <k>\", got \"" + key + "\"");
  }
  return k;
}

/// Splits a multi-class value into per-class values. Objects are keyed
/// "Class k" with contiguous k; anything else is a single-class shorthand.
std::vector<json> per_class(const json& value, const std::string& where) {
  if (!value.is_object()) return {value};
  std::map<std::size_t, json> by_index;
  for (const auto& [key, v] : value.items()) by_index[parse_class_key(key, where)] = v;
  std::vector<json> out;
  for (const auto& [k, v] : by_index) {
    if (k != out.size()) fail(where, "class keys must be contiguous from \"Class 0\"; missing " + class_key(out.size()));
    out.push_back(v);
  }
  if (out.empty()) fail(where, "no classes given");
  return out;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number, got " + v.dump());
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
  }
  fail(where, "expected an integer, got " + v.dump());
}

std::vector<double> as_number_list(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected a list of numbers, got " + v.dump());
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected a list, got " + v.dump());
  return v;
}

Distribution parse_distribution(const json& v, const std::string& where) {
  if (v.is_string() && v.get<std::string>() == "NoArrivals") return no_arrivals();
  if (!v.is_array() || v.empty() || !v[0].is_string()) {
    fail(where, "a distribution is a list [name, params...], got " + v.dump());
  }
  const auto name = v[0].get<std::string>();
  const std::size_t arity = v.size() - 1;
  auto need = [&](std::size_t n) {
    if (arity != n) {
      fail(where, name + " takes " + std::to_string(n) + " parameter(s), got " + std::to_string(arity));
    }
  };
  auto num = [&](std::size_t i) { return as_number(v[i], where + "[" + std::to_string(i) + "]"); };
  auto list = [&](std::size_t i) { return as_number_list(v[i], where + "[" + std::to_string(i) + "]"); };

  if (name == "Uniform") return need(2), uniform(num(1), num(2));
  if (name == "Deterministic") return need(1), deterministic(num(1));
  if (name == "Triangular") return need(3), triangular(num(1), num(2), num(3));
  if (name == "Exponential") return need(1), exponential(num(1));
  if (name == "Gamma") return need(2), gamma(num(1), num(2));
  if (name == "TruncatedNormal") return need(2), truncated_normal(num(1), num(2));
  if (name == "Lognormal") return need(2), lognormal(num(1), num(2));
  if (name == "Weibull") return need(2), weibull(num(1), num(2));
  if (name == "Discrete") return need(2), discrete(list(1), list(2));
  if (name == "Empirical") return need(1), empirical(list(1));
  if (name == "Sequential") return need(1), sequential(list(1));
  if (name == "NoArrivals") return need(0), no_arrivals();
  fail(where, "unknown distribution \"" + name + "\"");
}

std::vector<Distribution> parse_distribution_row(const json& v, const std::string& where) {
  std::vector<Distribution> out;
  for (std::size_t i = 0; i < as_array(v, where).size(); ++i) {
    out.push_back(parse_distribution(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<Distribution>> parse_per_class_distributions(const json& doc, const char* key) {
  std::vector<std::vector<Distribution>> out;
  const auto classes = per_class(doc.at(key), key);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    out.push_back(parse_distribution_row(classes[k], std::string(key) + "." + class_key(k)));
  }
  return out;
}

Matrix parse_matrix(const json& v, const std::string& where) {
  Matrix out;
  for (std::size_t i = 0; i < as_array(v, where).size(); ++i) {
    out.push_back(as_number_list(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ServerSpec parse_servers(const json& v, const std::string& where) {
  if (!v.is_array()) return as_integer(v, where);
  Schedule schedule;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto at = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != 2) fail(at, "a shift is [end_time, servers], got " + v[i].dump());
    schedule.push_back({as_number(v[i][0], at + "[0]"), as_integer(v[i][1], at + "[1]")});
  }
  return schedule;
}

std::optional<std::int64_t> parse_capacity(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "Inf") return std::nullopt;
    fail(where, "capacity must be an integer or \"Inf\", got " + v.dump());
  }
  return as_integer(v, where);
}

std::optional<BaulkingFunction> parse_baulking(const json& v, const std::string& where) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_array() || v.empty() || !v[0].is_string()) {
    fail(where, "a baulking function is [\"threshold\", n] or null, got " + v.dump());
  }
  const auto name = v[0].get<std::string>();
  if (name != "threshold") fail(where, "unknown baulking function \"" + name + "\"");
  if (v.size() != 2) fail(where, "threshold takes 1 parameter, got " + std::to_string(v.size() - 1));
  return BaulkingFunction::threshold(as_integer(v[1], where + "[1]"));
}

json distribution_to_json(const Distribution& d) {
  struct Visitor {
    json operator()(const dist::Uniform& x) const { return {"Uniform", x.lo, x.hi}; }
    json operator()(const dist::Deterministic& x) const { return {"Deterministic", x.value}; }
    json operator()(const dist::Triangular& x) const { return {"Triangular", x.lo, x.mode, x.hi}; }
    json operator()(const dist::Exponential& x) const { return {"Exponential", x.rate}; }
    json operator()(const dist::Gamma& x) const { return {"Gamma", x.shape, x.scale}; }
    json operator()(const dist::TruncatedNormal& x) const { return {"TruncatedNormal", x.mean, x.sd}; }
    json operator()(const dist::Lognormal& x) const { return {"Lognormal", x.mu, x.sigma}; }
    json operator()(const dist::Weibull& x) const { return {"Weibull", x.scale, x.shape}; }
    json operator()(const dist::Discrete& x) const { return {"Discrete", x.values, x.probs}; }
    json operator()(const dist::Empirical& x) const {
      return json::array({json("Empirical"), json(x.observations)});
    }
    json operator()(const dist::Sequential& x) const {
      return json::array({json("Sequential"), json(x.values)});
    }
    json operator()(const dist::NoArrivals&) const { return json::array({"NoArrivals"}); }
    json operator()(const dist::Continuous&) const {
      throw ConfigError("Continuous distributions cannot be written to a config document");
    }
    json operator()(const dist::TimeDependent&) const {
      throw ConfigError("TimeDependent distributions cannot be written to a config document");
    }
  };
  return std::visit(Visitor{}, d.family());
}

json per_class_json(const std::vector<std::vector<Distribution>>& rows) {
  json out = json::object();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    json row = json::array();
    for (const auto& d : rows[k]) row.push_back(distribution_to_json(d));
    out[class_key(k)] = row;
  }
  return out;
}

std::string node_name(std::size_t node) { return "node " + std::to_string(node + 1); }

std::string format_sum(double sum) {
  std::ostringstream os;
  os.precision(17);
  os << sum;
  return os.str();
}

void check_probability_matrix(const Matrix& m, std::size_t size, bool rows_sum_to_one,
                              const std::string& where) {
  if (m.size() != size) {
    fail(where, "dimension mismatch: expected " + std::to_string(size) + " rows, got " + std::to_string(m.size()));
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto row_where = where + " row " + std::to_string(i + 1);
    if (m[i].size() != size) {
      fail(row_where, "dimension mismatch: expected " + std::to_string(size) + " entries, got " +
                          std::to_string(m[i].size()));
    }
    for (double p : m[i]) {
      if (!(p >= 0.0 && p <= 1.0)) fail(row_where, "entry " + format_sum(p) + " is outside [0, 1]");
    }
    const double sum = std::accumulate(m[i].begin(), m[i].end(), 0.0);
    if (rows_sum_to_one && std::abs(sum - 1.0) > kProbTolerance) {
      fail(row_where, "row sums to " + format_sum(sum) + ", expected 1");
    }
    if (!rows_sum_to_one && sum > 1.0 + kProbTolerance) {
      fail(row_where, "row sums to " + format_sum(sum) + ", which exceeds 1");
    }
  }
}

}  // namespace

BaulkingFunction BaulkingFunction::threshold(std::int64_t n) {
  BaulkingFunction b;
  b.threshold_ = n;
  return b;
}

BaulkingFunction BaulkingFunction::custom(std::function<double(std::size_t)> fn) {
  BaulkingFunction b;
  b.fn_ = std::move(fn);
  return b;
}

double BaulkingFunction::operator()(std::size_t customers_present) const {
  if (threshold_) return static_cast<std::int64_t>(customers_present) >= *threshold_ ? 1.0 : 0.0;
  const double p = fn_(customers_present);
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("baulking function returned a value outside [0, 1]");
  return p;
}

NetworkConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown key \"" + key + "\"");
  }
  for (const char* key : {"arrival_distributions", "service_distributions", "number_of_servers", "queue_capacities"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing required key \"") + key + "\"");
  }

  NetworkConfig config;
  config.arrival_distributions = parse_per_class_distributions(doc, "arrival_distributions");
  config.service_distributions = parse_per_class_distributions(doc, "service_distributions");

  const std::size_t nodes = config.arrival_distributions.front().size();
  if (doc.contains("transition_matrices")) {
    const auto classes = per_class(doc["transition_matrices"], "transition_matrices");
    for (std::size_t k = 0; k < classes.size(); ++k) {
      config.transition_matrices.push_back(parse_matrix(classes[k], "transition_matrices." + class_key(k)));
    }
  } else {
    config.transition_matrices.assign(config.arrival_distributions.size(), Matrix(nodes, std::vector<double>(nodes, 0.0)));
  }

  const auto& servers = as_array(doc["number_of_servers"], "number_of_servers");
  for (std::size_t i = 0; i < servers.size(); ++i) {
    config.number_of_servers.push_back(parse_servers(servers[i], "number_of_servers[" + std::to_string(i) + "]"));
  }
  const auto& capacities = as_array(doc["queue_capacities"], "queue_capacities");
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    config.queue_capacities.push_back(parse_capacity(capacities[i], "queue_capacities[" + std::to_string(i) + "]"));
  }

  if (doc.contains("batching_distributions")) {
    config.batching_distributions = parse_per_class_distributions(doc, "batching_distributions");
  }
  if (doc.contains("priority_classes")) {
    const auto& pc = doc["priority_classes"];
    std::map<std::size_t, std::int64_t> priorities;
    if (pc.is_object()) {
      for (const auto& [key, v] : pc.items()) {
        priorities[parse_class_key(key, "priority_classes")] = as_integer(v, "priority_classes." + key);
      }
    } else {
      priorities[0] = as_integer(pc, "priority_classes");
    }
    config.priority_classes = std::move(priorities);
  }
  if (doc.contains("class_change_matrices")) {
    const auto& cc = as_array(doc["class_change_matrices"], "class_change_matrices");
    // A list of matrices (or nulls) is per node; a list of number rows is global.
    const bool per_node = !cc.empty() && (cc[0].is_null() || (cc[0].is_array() && !cc[0].empty() && !cc[0][0].is_number()));
    if (per_node) {
      std::vector<std::optional<Matrix>> matrices;
      for (std::size_t i = 0; i < cc.size(); ++i) {
        if (cc[i].is_null()) {
          matrices.emplace_back();
        } else {
          matrices.emplace_back(parse_matrix(cc[i], "class_change_matrices[" + std::to_string(i) + "]"));
        }
      }
      config.class_change_matrices = ClassChangeSpec(std::move(matrices));
    } else {
      config.class_change_matrices = ClassChangeSpec(parse_matrix(cc, "class_change_matrices"));
    }
  }
  if (doc.contains("baulking_functions")) {
    std::vector<std::vector<std::optional<BaulkingFunction>>> all;
    const auto classes = per_class(doc["baulking_functions"], "baulking_functions");
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const auto where = "baulking_functions." + class_key(k);
      std::vector<std::optional<BaulkingFunction>> row;
      for (std::size_t i = 0; i < as_array(classes[k], where).size(); ++i) {
        row.push_back(parse_baulking(classes[k][i], where + "[" + std::to_string(i) + "]"));
      }
      all.push_back(std::move(row));
    }
    config.baulking_functions = std::move(all);
  }
  return config;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const NetworkConfig& config) {
  json doc = json::object();
  doc["arrival_distributions"] = per_class_json(config.arrival_distributions);
  doc["service_distributions"] = per_class_json(config.service_distributions);
  json transitions = json::object();
  for (std::size_t k = 0; k < config.transition_matrices.size(); ++k) {
    transitions[class_key(k)] = config.transition_matrices[k];
  }
  doc["transition_matrices"] = transitions;

  json servers = json::array();
  for (const auto& s : config.number_of_servers) {
    if (const auto* n = std::get_if<std::int64_t>(&s)) {
      servers.push_back(*n);
    } else {
      json schedule = json::array();
      for (const auto& shift : std::get<Schedule>(s)) schedule.push_back({shift.end_time, shift.servers});
      servers.push_back(schedule);
    }
  }
  doc["number_of_servers"] = servers;

  json capacities = json::array();
  for (const auto& c : config.queue_capacities) capacities.push_back(c ? json(*c) : json("Inf"));
  doc["queue_capacities"] = capacities;

  if (config.batching_distributions) doc["batching_distributions"] = per_class_json(*config.batching_distributions);
  if (config.priority_classes) {
    json pc = json::object();
    for (const auto& [k, p] : *config.priority_classes) pc[class_key(k)] = p;
    doc["priority_classes"] = pc;
  }
  if (config.class_change_matrices) {
    if (const auto* global = std::get_if<Matrix>(&*config.class_change_matrices)) {
      doc["class_change_matrices"] = *global;
    } else {
      json per_node = json::array();
      for (const auto& m : std::get<std::vector<std::optional<Matrix>>>(*config.class_change_matrices)) {
        per_node.push_back(m ? json(*m) : json(nullptr));
      }
      doc["class_change_matrices"] = per_node;
    }
  }
  if (config.baulking_functions) {
    json all = json::object();
    for (std::size_t k = 0; k < config.baulking_functions->size(); ++k) {
      json row = json::array();
      for (const auto& b : (*config.baulking_functions)[k]) {
        if (!b) {
          row.push_back(nullptr);
        } else if (auto n = b->threshold_value()) {
          row.push_back({"threshold", *n});
        } else {
          throw ConfigError("custom baulking functions cannot be written to a config document");
        }
      }
      all[class_key(k)] = row;
    }
    doc["baulking_functions"] = all;
  }
  return doc.dump(2) + "\n";
}

Network validate(const NetworkConfig& config) {
  const std::size_t classes = config.arrival_distributions.size();
  if (classes == 0) throw ConfigError("network needs at least one customer class");
  const std::size_t nodes = config.arrival_distributions.front().size();
  if (nodes == 0) throw ConfigError("network needs at least one node");

  auto check_class_count = [&](std::size_t n, const char* key) {
    if (n != classes) {
      throw ConfigError(std::string(key) + ": dimension mismatch: " + std::to_string(n) + " classes, expected " +
                        std::to_string(classes));
    }
  };
  auto check_node_count = [&](std::size_t n, const std::string& where) {
    if (n != nodes) {
      throw ConfigError(where + ": dimension mismatch: " + std::to_string(n) + " nodes, expected " +
                        std::to_string(nodes));
    }
  };
  auto check_dists = [&](const std::vector<std::vector<Distribution>>& rows, const char* key, bool batch,
                         bool arrivals_allowed_empty) {
    check_class_count(rows.size(), key);
    for (std::size_t k = 0; k < classes; ++k) {
      const auto where = std::string(key) + "." + class_key(k);
      check_node_count(rows[k].size(), where);
      for (std::size_t i = 0; i < nodes; ++i) {
        const auto& d = rows[k][i];
        if (d.is_no_arrivals() && !arrivals_allowed_empty) {
          throw ConfigError(where + " " + node_name(i) + ": NoArrivals is only valid as an arrival distribution");
        }
        if (auto err = batch ? check_batch_distribution(d) : check_distribution(d)) {
          throw ConfigError(where + " " + node_name(i) + ": " + *err);
        }
      }
    }
  };

  check_dists(config.arrival_distributions, "arrival_distributions", false, true);
  check_dists(config.service_distributions, "service_distributions", false, false);
  if (config.batching_distributions) {
    check_dists(*config.batching_distributions, "batching_distributions", true, false);
  }

  check_class_count(config.transition_matrices.size(), "transition_matrices");
  for (std::size_t k = 0; k < classes; ++k) {
    const auto& m = config.transition_matrices[k];
    const auto where = "transition_matrices." + class_key(k);
    if (m.size() != nodes) check_node_count(m.size(), where);
    for (std::size_t i = 0; i < nodes; ++i) {
      check_node_count(m[i].size(), where + " " + node_name(i));
      for (double p : m[i]) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw ConfigError(where + " " + node_name(i) + ": entry " + format_sum(p) + " is outside [0, 1]");
        }
      }
      const double sum = std::accumulate(m[i].begin(), m[i].end(), 0.0);
      if (sum > 1.0 + kProbTolerance) {
        throw ConfigError(where + " " + node_name(i) + ": routing row sums to " + format_sum(sum) +
                          ", which exceeds 1");
      }
    }
  }

  check_node_count(config.number_of_servers.size(), "number_of_servers");
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto where = "number_of_servers " + node_name(i);
    if (const auto* n = std::get_if<std::int64_t>(&config.number_of_servers[i])) {
      if (*n < 1) throw ConfigError(where + ": number of servers must be >= 1");
      continue;
    }
    const auto& schedule = std::get<Schedule>(config.number_of_servers[i]);
    if (schedule.empty()) throw ConfigError(where + ": empty schedule");
    double previous = 0.0;
    for (const auto& shift : schedule) {
      if (!(shift.end_time > previous) || !std::isfinite(shift.end_time)) {
        throw ConfigError(where + ": shift end times must be positive and strictly increasing");
      }
      if (shift.servers < 0) throw ConfigError(where + ": shift server counts must be >= 0");
      previous = shift.end_time;
    }
  }

  check_node_count(config.queue_capacities.size(), "queue_capacities");
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto& c = config.queue_capacities[i];
    if (c && *c < 0) throw ConfigError("queue_capacities " + node_name(i) + ": negative capacity " + std::to_string(*c));
  }

  std::vector<std::size_t> priorities(classes, 0);
  if (config.priority_classes) {
    for (const auto& [k, p] : *config.priority_classes) {
      if (k >= classes) throw ConfigError("priority_classes: unknown class " + class_key(k));
      if (p < 0) throw ConfigError("priority_classes." + class_key(k) + ": priority must be >= 0");
      priorities[k] = static_cast<std::size_t>(p);
    }
    for (std::size_t k = 0; k < classes; ++k) {
      if (!config.priority_classes->contains(k)) {
        throw ConfigError("priority_classes: priority map is missing " + class_key(k));
      }
    }
  }

  std::vector<std::optional<Matrix>> class_change(nodes);
  if (config.class_change_matrices) {
    if (const auto* global = std::get_if<Matrix>(&*config.class_change_matrices)) {
      check_probability_matrix(*global, classes, true, "class_change_matrices");
      std::fill(class_change.begin(), class_change.end(), *global);
    } else {
      const auto& per_node = std::get<std::vector<std::optional<Matrix>>>(*config.class_change_matrices);
      check_node_count(per_node.size(), "class_change_matrices");
      for (std::size_t i = 0; i < nodes; ++i) {
        if (!per_node[i]) continue;
        check_probability_matrix(*per_node[i], classes, true, "class_change_matrices " + node_name(i));
        class_change[i] = per_node[i];
      }
    }
  }

  if (config.baulking_functions) {
    check_class_count(config.baulking_functions->size(), "baulking_functions");
    for (std::size_t k = 0; k < classes; ++k) {
      const auto where = "baulking_functions." + class_key(k);
      check_node_count((*config.baulking_functions)[k].size(), where);
      for (std::size_t i = 0; i < nodes; ++i) {
        const auto& b = (*config.baulking_functions)[k][i];
        if (b && !b->valid()) throw ConfigError(where + " " + node_name(i) + ": invalid baulking function");
      }
    }
  }

  Network network;
  network.config_ = config;
  network.class_change_ = std::move(class_change);
  for (std::size_t i = 0; i < nodes; ++i) {
    ServiceCentre centre;
    centre.servers = config.number_of_servers[i];
    if (const auto& c = config.queue_capacities[i]) centre.queue_capacity = static_cast<std::size_t>(*c);
    centre.baulking.resize(classes);
    if (config.baulking_functions) {
      for (std::size_t k = 0; k < classes; ++k) centre.baulking[k] = (*config.baulking_functions)[k][i];
    }
    network.centres_.push_back(std::move(centre));
  }
  for (std::size_t k = 0; k < classes; ++k) {
    CustomerClass cls;
    cls.arrival = config.arrival_distributions[k];
    cls.service = config.service_distributions[k];
    cls.batching = config.batching_distributions ? (*config.batching_distributions)[k]
                                                 : std::vector<Distribution>(nodes, deterministic(1.0));
    cls.routing = config.transition_matrices[k];
    cls.priority = priorities[k];
    network.classes_.push_back(std::move(cls));
  }
  return network;
}

double exit_probability(const Network& network, std::size_t node, std::size_t customer_class) {
  const auto& row = network.customer_class(customer_class).routing.at(node);
  const double stay = std::accumulate(row.begin(), row.end(), 0.0);
  return std::clamp(1.0 - stay, 0.0, 1.0);
}

}  // namespace qnet
