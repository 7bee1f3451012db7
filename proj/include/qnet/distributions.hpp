#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace qnet {

/// Seeded source of uniform variates. The engine is std::mt19937_64, whose
/// output sequence is fixed by the C++ standard, and the conversion to
/// doubles below is done by hand so that a seed reproduces the same draws on
/// every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double next_uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline RandomStream seed_stream(std::uint64_t seed) { return RandomStream(seed); }

namespace dist {

struct Uniform {
  double lo;
  double hi;
};
struct Deterministic {
  double value;
};
struct Triangular {
  double lo;
  double mode;
  double hi;
};
struct Exponential {
  double rate;
};
struct Gamma {
  double shape;
  double scale;
};
struct TruncatedNormal {
  double mean;
  double sd;
};
struct Lognormal {
  double mu;
  double sigma;
};
struct Weibull {
  double scale;
  double shape;
};
struct Discrete {
  std::vector<double> values;
  std::vector<double> probs;
};
/// User sampler; must return a non-negative value.
struct Continuous {
  std::function<double(RandomStream&)> sampler;
};
struct Empirical {
  std::vector<double> observations;
};
/// Cycles through `values`; the cursor is per-instance state.
struct Sequential {
  std::vector<double> values;
  std::size_t cursor = 0;
};
/// Duration given directly as a function of the current simulation time.
struct TimeDependent {
  std::function<double(double)> duration_at;
};
struct NoArrivals {};

}  // namespace dist

/// Tagged family of variate generators. Parameters are stored as given;
/// `check_distribution` reports constraint violations.
class Distribution {
 public:
  using Variant =
      std::variant<dist::Uniform, dist::Deterministic, dist::Triangular, dist::Exponential,
                   dist::Gamma, dist::TruncatedNormal, dist::Lognormal, dist::Weibull,
                   dist::Discrete, dist::Continuous, dist::Empirical, dist::Sequential,
                   dist::TimeDependent, dist::NoArrivals>;

  Distribution() : family_(dist::NoArrivals{}) {}
  template <class Family>
    requires std::is_constructible_v<Variant, Family>
  Distribution(Family family) : family_(std::move(family)) {}  // NOLINT(implicit)

  const Variant& family() const { return family_; }
  Variant& family() { return family_; }

  bool is_no_arrivals() const { return std::holds_alternative<dist::NoArrivals>(family_); }

  /// Config name of the family ("Exponential", "NoArrivals", ...).
  std::string_view name() const;

 private:
  Variant family_;
};

Distribution uniform(double lo, double hi);
Distribution deterministic(double value);
Distribution triangular(double lo, double mode, double hi);
Distribution exponential(double rate);
Distribution gamma(double shape, double scale);
Distribution truncated_normal(double mean, double sd);
Distribution lognormal(double mu, double sigma);
Distribution weibull(double scale, double shape);
Distribution discrete(std::vector<double> values, std::vector<double> probs);
Distribution continuous(std::function<double(RandomStream&)> sampler);
Distribution empirical(std::vector<double> observations);
Distribution sequential(std::vector<double> values);
Distribution time_dependent(std::function<double(double)> duration_at);
Distribution no_arrivals();

/// Returns a description of the first violated parameter constraint, if any.
std::optional<std::string> check_distribution(const Distribution& d);

/// Like check_distribution, additionally requiring support on integers >= 1.
std::optional<std::string> check_batch_distribution(const Distribution& d);

/// One non-negative draw. Sequential advances its cursor; TimeDependent is
/// evaluated at `now`. Sampling NoArrivals throws std::logic_error.
double sample(Distribution& d, RandomStream& stream, double now = 0.0);

/// Batch size draw; `d` must satisfy check_batch_distribution.
std::size_t sample_batch_size(Distribution& d, RandomStream& stream);

/// Standard normal from two uniforms (Box-Muller, cosine branch).
double standard_normal(RandomStream& stream);

}  // namespace qnet
