#pragma once

#include <cstddef>
#include <stdexcept>

namespace qnet {

/// Thrown when arrivals outpace total service capacity (lambda >= c * mu).
class UnstableQueueError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MMcParams {
  double lambda;
  double mu;
  std::size_t c;
};

/// Largest server count the floating-point factorials support.
inline constexpr std::size_t kMaxServers = 170;

/// Probability an arriving customer has to wait (Erlang C).
double erlang_c(const MMcParams& params);

/// Steady-state mean time in queue, erlang_c / (c * mu - lambda).
double mean_wait(const MMcParams& params);

}  // namespace qnet
