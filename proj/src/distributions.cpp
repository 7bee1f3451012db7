#include "qnet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qnet {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kProbTolerance = 1e-9;

bool all_non_negative(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return x >= 0.0 && std::isfinite(x); });
}

bool is_positive_integer(double x) { return x >= 1.0 && std::floor(x) == x && std::isfinite(x); }

bool all_positive_integers(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), is_positive_integer);
}

double checked_duration(double value, const char* family) {
  if (!(value >= 0.0)) {
    throw std::domain_error(std::string(family) + " sampler returned a negative or NaN duration");
  }
  return value;
}

double gamma_shape_ge_one(double shape, RandomStream& stream) {
  // Marsaglia & Tsang (2000). Each attempt consumes three uniforms.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = standard_normal(stream);
    const double u = stream.next_uniform();
    const double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

std::string_view Distribution::name() const {
  return std::visit(overloaded{
                        [](const dist::Uniform&) { return "Uniform"; },
                        [](const dist::Deterministic&) { return "Deterministic"; },
                        [](const dist::Triangular&) { return "Triangular"; },
                        [](const dist::Exponential&) { return "Exponential"; },
                        [](const dist::Gamma&) { return "Gamma"; },
                        [](const dist::TruncatedNormal&) { return "TruncatedNormal"; },
                        [](const dist::Lognormal&) { return "Lognormal"; },
                        [](const dist::Weibull&) { return "Weibull"; },
                        [](const dist::Discrete&) { return "Discrete"; },
                        [](const dist::Continuous&) { return "Continuous"; },
                        [](const dist::Empirical&) { return "Empirical"; },
                        [](const dist::Sequential&) { return "Sequential"; },
                        [](const dist::TimeDependent&) { return "TimeDependent"; },
                        [](const dist::NoArrivals&) { return "NoArrivals"; },
                    },
                    family_);
}

Distribution uniform(double lo, double hi) { return dist::Uniform{lo, hi}; }
Distribution deterministic(double value) { return dist::Deterministic{value}; }
Distribution triangular(double lo, double mode, double hi) { return dist::Triangular{lo, mode, hi}; }
Distribution exponential(double rate) { return dist::Exponential{rate}; }
Distribution gamma(double shape, double scale) { return dist::Gamma{shape, scale}; }
Distribution truncated_normal(double mean, double sd) { return dist::TruncatedNormal{mean, sd}; }
Distribution lognormal(double mu, double sigma) { return dist::Lognormal{mu, sigma}; }
Distribution weibull(double scale, double shape) { return dist::Weibull{scale, shape}; }
Distribution discrete(std::vector<double> values, std::vector<double> probs) {
  return dist::Discrete{std::move(values), std::move(probs)};
}
Distribution continuous(std::function<double(RandomStream&)> sampler) {
  return dist::Continuous{std::move(sampler)};
}
Distribution empirical(std::vector<double> observations) {
  return dist::Empirical{std::move(observations)};
}
Distribution sequential(std::vector<double> values) { return dist::Sequential{std::move(values), 0}; }
Distribution time_dependent(std::function<double(double)> duration_at) {
  return dist::TimeDependent{std::move(duration_at)};
}
Distribution no_arrivals() { return dist::NoArrivals{}; }

std::optional<std::string> check_distribution(const Distribution& d) {
  using R = std::optional<std::string>;
  return std::visit(
      overloaded{
          [](const dist::Uniform& u) -> R {
            if (!(u.lo >= 0.0 && u.lo <= u.hi && std::isfinite(u.hi)))
              return "Uniform requires 0 <= lo <= hi";
            return std::nullopt;
          },
          [](const dist::Deterministic& x) -> R {
            if (!(x.value >= 0.0 && std::isfinite(x.value))) return "Deterministic value must be >= 0";
            return std::nullopt;
          },
          [](const dist::Triangular& t) -> R {
            if (!(t.lo >= 0.0 && t.lo <= t.mode && t.mode <= t.hi && std::isfinite(t.hi)))
              return "Triangular requires 0 <= lo <= mode <= hi";
            return std::nullopt;
          },
          [](const dist::Exponential& e) -> R {
            if (!(e.rate > 0.0 && std::isfinite(e.rate))) return "Exponential rate must be > 0";
            return std::nullopt;
          },
          [](const dist::Gamma& g) -> R {
            if (!(g.shape > 0.0 && g.scale > 0.0)) return "Gamma shape and scale must be > 0";
            return std::nullopt;
          },
          [](const dist::TruncatedNormal& n) -> R {
            if (!(n.sd > 0.0 && std::isfinite(n.mean))) return "TruncatedNormal sd must be > 0";
            return std::nullopt;
          },
          [](const dist::Lognormal& l) -> R {
            if (!(l.sigma > 0.0 && std::isfinite(l.mu))) return "Lognormal sigma must be > 0";
            return std::nullopt;
          },
          [](const dist::Weibull& w) -> R {
            if (!(w.scale > 0.0 && w.shape > 0.0)) return "Weibull scale and shape must be > 0";
            return std::nullopt;
          },
          [](const dist::Discrete& x) -> R {
            if (x.values.empty() || x.values.size() != x.probs.size())
              return "Discrete needs equally long, non-empty value and probability lists";
            if (!all_non_negative(x.values)) return "Discrete values must be >= 0";
            for (double p : x.probs)
              if (!(p >= 0.0 && p <= 1.0)) return "Discrete probabilities must lie in [0, 1]";
            const double total = std::accumulate(x.probs.begin(), x.probs.end(), 0.0);
            if (std::abs(total - 1.0) > kProbTolerance)
              return "Discrete probabilities sum to " + std::to_string(total) + ", expected 1";
            return std::nullopt;
          },
          [](const dist::Continuous& c) -> R {
            if (!c.sampler) return "Continuous needs a sampler";
            return std::nullopt;
          },
          [](const dist::Empirical& e) -> R {
            if (e.observations.empty() || !all_non_negative(e.observations))
              return "Empirical needs a non-empty list of observations >= 0";
            return std::nullopt;
          },
          [](const dist::Sequential& s) -> R {
            if (s.values.empty() || !all_non_negative(s.values))
              return "Sequential needs a non-empty list of values >= 0";
            return std::nullopt;
          },
          [](const dist::TimeDependent& t) -> R {
            if (!t.duration_at) return "TimeDependent needs a function";
            return std::nullopt;
          },
          [](const dist::NoArrivals&) -> R { return std::nullopt; },
      },
      d.family());
}

std::optional<std::string> check_batch_distribution(const Distribution& d) {
  if (auto err = check_distribution(d)) return err;
  using R = std::optional<std::string>;
  const R not_integer = std::string(d.name()) + " batch sizes must be integers >= 1";
  return std::visit(overloaded{
                        [&](const dist::Deterministic& x) -> R {
                          return is_positive_integer(x.value) ? std::nullopt : not_integer;
                        },
                        [&](const dist::Discrete& x) -> R {
                          return all_positive_integers(x.values) ? std::nullopt : not_integer;
                        },
                        [&](const dist::Empirical& x) -> R {
                          return all_positive_integers(x.observations) ? std::nullopt : not_integer;
                        },
                        [&](const dist::Sequential& x) -> R {
                          return all_positive_integers(x.values) ? std::nullopt : not_integer;
                        },
                        [&](const auto&) -> R {
                          return std::string(d.name()) + " cannot be used as a batch size distribution";
                        },
                    },
                    d.family());
}

double standard_normal(RandomStream& stream) {
  const double u1 = stream.next_uniform();
  const double u2 = stream.next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample(Distribution& d, RandomStream& stream, double now) {
  return std::visit(
      overloaded{
          [&](const dist::Uniform& u) { return u.lo + (u.hi - u.lo) * stream.next_uniform(); },
          [](const dist::Deterministic& x) { return x.value; },
          [&](const dist::Triangular& t) {
            const double u = stream.next_uniform();
            const double width = t.hi - t.lo;
            if (width == 0.0) return t.lo;
            const double split = (t.mode - t.lo) / width;
            if (u < split) return t.lo + std::sqrt(u * width * (t.mode - t.lo));
            return t.hi - std::sqrt((1.0 - u) * width * (t.hi - t.mode));
          },
          [&](const dist::Exponential& e) { return -std::log(stream.next_uniform()) / e.rate; },
          [&](const dist::Gamma& g) {
            if (g.shape >= 1.0) return g.scale * gamma_shape_ge_one(g.shape, stream);
            const double boosted = gamma_shape_ge_one(g.shape + 1.0, stream);
            return g.scale * boosted * std::pow(stream.next_uniform(), 1.0 / g.shape);
          },
          [&](const dist::TruncatedNormal& n) {
            for (;;) {
              const double x = n.mean + n.sd * standard_normal(stream);
              if (x >= 0.0) return x;
            }
          },
          [&](const dist::Lognormal& l) { return std::exp(l.mu + l.sigma * standard_normal(stream)); },
          [&](const dist::Weibull& w) {
            return w.scale * std::pow(-std::log(stream.next_uniform()), 1.0 / w.shape);
          },
          [&](const dist::Discrete& x) {
            const double u = stream.next_uniform();
            double cumulative = 0.0;
            for (std::size_t i = 0; i < x.values.size(); ++i) {
              cumulative += x.probs[i];
              if (u < cumulative) return x.values[i];
            }
            return x.values.back();
          },
          [&](const dist::Continuous& c) { return checked_duration(c.sampler(stream), "Continuous"); },
          [&](const dist::Empirical& e) {
            auto index = static_cast<std::size_t>(stream.next_uniform() *
                                                  static_cast<double>(e.observations.size()));
            return e.observations[std::min(index, e.observations.size() - 1)];
          },
          [](dist::Sequential& s) {
            const double value = s.values[s.cursor];
            s.cursor = (s.cursor + 1) % s.values.size();
            return value;
          },
          [&](const dist::TimeDependent& t) {
            return checked_duration(t.duration_at(now), "TimeDependent");
          },
          [](const dist::NoArrivals&) -> double {
            throw std::logic_error("NoArrivals distribution cannot be sampled");
          },
      },
      d.family());
}

std::size_t sample_batch_size(Distribution& d, RandomStream& stream) {
  const double value = sample(d, stream, 0.0);
  if (!is_positive_integer(value)) {
    throw std::logic_error("batch size draw is not an integer >= 1");
  }
  return static_cast<std::size_t>(value);
}

}  // namespace qnet
