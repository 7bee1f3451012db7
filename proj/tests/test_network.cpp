#include <doctest.h>

#include <string>

#include "qnet/network.hpp"

using namespace qnet;

namespace {

const std::string kData = QNET_TEST_DATA;

std::string error_of(const std::string& text) {
  try {
    (void)validate(parse_config(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("repair clinic document") {
  const auto config = load_config(kData + "/repair_clinic.json");
  const auto net = validate(config);
  CHECK(net.number_of_nodes() == 2);
  CHECK(net.number_of_classes() == 2);
  CHECK(net.centre(0).queue_capacity == std::nullopt);
  CHECK(net.centre(1).queue_capacity == 0);
  CHECK(std::get<std::int64_t>(net.centre(0).servers) == 2);
  CHECK(std::get<std::int64_t>(net.centre(1).servers) == 1);

  CHECK(net.customer_class(1).priority == 0);
  CHECK(net.customer_class(0).priority == 1);
  CHECK(net.customer_class(1).priority < net.customer_class(0).priority);

  CHECK(net.customer_class(0).arrival[1].is_no_arrivals());
  CHECK(std::get<dist::Deterministic>(net.customer_class(0).batching[0].family()).value == 2.0);

  CHECK(exit_probability(net, 0, 0) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(exit_probability(net, 1, 0) == 1.0);
  CHECK(exit_probability(net, 1, 1) == 1.0);
}

TEST_CASE("minimal single-class document") {
  const auto config = load_config(kData + "/mm3.json");
  REQUIRE(config.transition_matrices.size() == 1);
  CHECK(config.transition_matrices[0] == Matrix{{0.0}});
  const auto net = validate(config);
  CHECK(net.number_of_nodes() == 1);
  CHECK(net.number_of_classes() == 1);
  CHECK(std::get<std::int64_t>(net.centre(0).servers) == 3);
  CHECK(net.customer_class(0).priority == 0);
  CHECK(exit_probability(net, 0, 0) == 1.0);
  CHECK(std::get<dist::Deterministic>(net.customer_class(0).batching[0].family()).value == 1.0);
}

TEST_CASE("row summing to one leaves nothing for exit") {
  const auto net = validate(parse_config(R"({
    "arrival_distributions": [["Exponential", 1.0], "NoArrivals"],
    "service_distributions": [["Exponential", 2.0], ["Exponential", 2.0]],
    "transition_matrices": [[0.25, 0.75], [0.0, 0.0]],
    "number_of_servers": [1, 1],
    "queue_capacities": ["Inf", "Inf"]
  })"));
  CHECK(exit_probability(net, 0, 0) == 0.0);
  CHECK(exit_probability(net, 1, 0) == 1.0);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(load_config(kData + "/bad_distribution.json"), doctest::Contains("unknown distribution \"Gaussian\""),
                       ConfigError);

  const std::string unknown_key = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1],
    "queue_capacities": ["Inf"], "Number_of_servers": [1]})";
  CHECK(contains(error_of(unknown_key), "unknown key \"Number_of_servers\""));

  const std::string arity = R"({"arrival_distributions": [["Exponential", 1.0, 2.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(arity), "Exponential takes 1 parameter(s), got 2"));

  const auto syntax = error_of(R"({"arrival_distributions": [["Exponential", 1.0]],})");
  CHECK(contains(syntax, "syntax error"));
  CHECK(contains(syntax, "line 1, column"));

  const std::string missing = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1]})";
  CHECK(contains(error_of(missing), "missing required key \"queue_capacities\""));

  const std::string gap = R"({"arrival_distributions": {"Class 0": [["Exponential", 1.0]], "Class 2": [["Exponential", 1.0]]},
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(gap), "missing Class 1"));
}

TEST_CASE("validation errors") {
  const std::string overfull = R"({
    "arrival_distributions": [["Exponential", 1.0], "NoArrivals"],
    "service_distributions": [["Exponential", 2.0], ["Exponential", 2.0]],
    "transition_matrices": [[0.6, 0.6], [0.0, 0.0]],
    "number_of_servers": [1, 1],
    "queue_capacities": ["Inf", "Inf"]
  })";
  const auto e = error_of(overfull);
  CHECK(contains(e, "routing row sums to 1.2"));
  CHECK(contains(e, "node 1"));
  CHECK(contains(e, "Class 0"));

  const std::string class_change = R"({
    "arrival_distributions": {"Class 0": [["Exponential", 1.0]], "Class 1": ["NoArrivals"]},
    "service_distributions": {"Class 0": [["Exponential", 2.0]], "Class 1": [["Exponential", 2.0]]},
    "class_change_matrices": [[0.5, 0.4], [0.0, 1.0]],
    "number_of_servers": [1],
    "queue_capacities": ["Inf"]
  })";
  CHECK(contains(error_of(class_change), "row sums to 0.9"));
  CHECK(contains(error_of(class_change), "expected 1"));

  const std::string negative = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1], "queue_capacities": [-1]})";
  CHECK(contains(error_of(negative), "negative capacity"));

  const std::string empty_schedule = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [[]], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(empty_schedule), "empty schedule"));

  const std::string priorities = R"({
    "arrival_distributions": {"Class 0": [["Exponential", 1.0]], "Class 1": [["Exponential", 1.0]]},
    "service_distributions": {"Class 0": [["Exponential", 2.0]], "Class 1": [["Exponential", 2.0]]},
    "priority_classes": {"Class 0": 0},
    "number_of_servers": [1],
    "queue_capacities": ["Inf"]
  })";
  CHECK(contains(error_of(priorities), "priority map is missing Class 1"));

  const std::string mismatch = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1, 1], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(mismatch), "dimension mismatch"));

  const std::string bad_batch = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "batching_distributions": [["Deterministic", 1.5]],
    "number_of_servers": [1], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(bad_batch), "batch sizes must be integers"));

  const std::string bad_rate = R"({"arrival_distributions": [["Exponential", 0.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [1], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(bad_rate), "rate must be > 0"));

  const std::string zero_servers = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [0], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(zero_servers), "number of servers must be >= 1"));

  const std::string bad_shifts = R"({"arrival_distributions": [["Exponential", 1.0]],
    "service_distributions": [["Exponential", 1.0]], "number_of_servers": [[[10, 1], [5, 2]]], "queue_capacities": ["Inf"]})";
  CHECK(contains(error_of(bad_shifts), "strictly increasing"));
}

TEST_CASE("optional features parse") {
  const auto net = validate(parse_config(R"({
    "arrival_distributions": {"Class 0": [["Exponential", 1.0], "NoArrivals"],
                              "Class 1": [["Uniform", 0.5, 1.5], ["NoArrivals"]]},
    "service_distributions": {"Class 0": [["Gamma", 2.0, 0.25], ["Sequential", [0.5, 1.0]]],
                              "Class 1": [["Triangular", 0.1, 0.2, 0.6], ["Discrete", [0.5, 1.0], [0.25, 0.75]]]},
    "transition_matrices": {"Class 0": [[0.0, 0.5], [0.0, 0.0]], "Class 1": [[0.0, 1.0], [0.0, 0.0]]},
    "class_change_matrices": [[[0.0, 1.0], [1.0, 0.0]], null],
    "baulking_functions": {"Class 0": [["threshold", 4], null], "Class 1": [null, null]},
    "number_of_servers": [[[10, 2], [20, 0]], 1],
    "queue_capacities": [5, "Inf"]
  })"));
  REQUIRE(net.class_change(0) != nullptr);
  CHECK(net.class_change(1) == nullptr);
  CHECK((*net.class_change(0))[0] == std::vector<double>{0.0, 1.0});
  REQUIRE(net.centre(0).schedule() != nullptr);
  CHECK(net.centre(0).schedule()->size() == 2);
  CHECK(net.centre(0).schedule()->back().end_time == 20.0);
  REQUIRE(net.centre(0).baulking[0].has_value());
  CHECK(net.centre(0).baulking[0]->threshold_value() == 4);
  CHECK((*net.centre(0).baulking[0])(3) == 0.0);
  CHECK((*net.centre(0).baulking[0])(4) == 1.0);
  CHECK_FALSE(net.centre(0).baulking[1].has_value());
  CHECK(net.customer_class(1).arrival[1].is_no_arrivals());

  const auto global = validate(parse_config(R"({
    "arrival_distributions": {"Class 0": [["Exponential", 1.0], "NoArrivals"], "Class 1": ["NoArrivals", "NoArrivals"]},
    "service_distributions": {"Class 0": [["Exponential", 1.0], ["Exponential", 1.0]],
                              "Class 1": [["Exponential", 1.0], ["Exponential", 1.0]]},
    "class_change_matrices": [[0.5, 0.5], [0.0, 1.0]],
    "number_of_servers": [1, 1],
    "queue_capacities": ["Inf", "Inf"]
  })"));
  REQUIRE(global.class_change(0) != nullptr);
  REQUIRE(global.class_change(1) != nullptr);
  CHECK(*global.class_change(0) == *global.class_change(1));
}

TEST_CASE("custom baulking functions are checked") {
  auto half = BaulkingFunction::custom([](std::size_t m) { return m >= 2 ? 0.5 : 0.0; });
  CHECK(half(1) == 0.0);
  CHECK(half(2) == 0.5);
  auto broken = BaulkingFunction::custom([](std::size_t) { return 1.5; });
  CHECK_THROWS(broken(0));
}

TEST_CASE("serialize then parse is the identity") {
  for (const char* file : {"/repair_clinic.json", "/mm3.json", "/two_cycle.json", "/self_loop.json"}) {
    CAPTURE(file);
    const auto config = load_config(kData + file);
    const auto text = serialize_config(config);
    const auto again = parse_config(text);
    CHECK(serialize_config(again) == text);
    const auto a = validate(config);
    const auto b = validate(again);
    CHECK(a.number_of_nodes() == b.number_of_nodes());
    CHECK(a.number_of_classes() == b.number_of_classes());
    for (std::size_t k = 0; k < a.number_of_classes(); ++k) {
      CHECK(a.customer_class(k).routing == b.customer_class(k).routing);
      CHECK(a.customer_class(k).priority == b.customer_class(k).priority);
    }
  }

  NetworkConfig api_only = load_config(kData + "/mm3.json");
  api_only.service_distributions[0][0] = continuous([](RandomStream&) { return 1.0; });
  CHECK_THROWS_AS(serialize_config(api_only), ConfigError);
}
