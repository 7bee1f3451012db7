#include "qnet/mmc.hpp"

#include <cmath>
#include <string>

namespace qnet {

namespace {

void check(const MMcParams& p) {
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) throw std::invalid_argument("arrival rate must be > 0");
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw std::invalid_argument("service rate must be > 0");
  if (p.c < 1 || p.c > kMaxServers) {
    throw std::invalid_argument("number of servers must be between 1 and " + std::to_string(kMaxServers));
  }
  const double capacity = static_cast<double>(p.c) * p.mu;
  if (p.lambda >= capacity) {
    throw UnstableQueueError("unstable queue: lambda = " + std::to_string(p.lambda) +
                             " >= c * mu = " + std::to_string(capacity));
  }
}

}  // namespace

double erlang_c(const MMcParams& params) {
  check(params);
  const double a = params.lambda / params.mu;
  const auto c = static_cast<double>(params.c);

  double term = 1.0;  // a^k / k!
  double below_c = 0.0;
  for (std::size_t k = 0; k < params.c; ++k) {
    below_c += term;
    term *= a / static_cast<double>(k + 1);
  }
  const double queued = term * c / (c - a);
  return queued / (below_c + queued);
}

double mean_wait(const MMcParams& params) {
  const double p_wait = erlang_c(params);
  return p_wait / (static_cast<double>(params.c) * params.mu - params.lambda);
}

}  // namespace qnet
