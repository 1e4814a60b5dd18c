#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace stackopt {

enum class Source { Onshore, Offshore, Solar };

inline constexpr Source kAllSources[] = {Source::Onshore, Source::Offshore, Source::Solar};

std::string_view to_string(Source source);
Source parse_source(std::string_view name);

/// Hourly availability factors of one PPA source. Only constructible through
/// the validating factory, so every instance satisfies 0 <= f <= 1 and dt > 0.
class CapacityFactorSeries {
 public:
  static CapacityFactorSeries create(Source source, std::vector<double> values, double dt_hours = 1.0);

  Source source() const { return source_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double dt_hours() const { return dt_hours_; }
  double operator[](std::size_t t) const { return values_[t]; }

 private:
  CapacityFactorSeries(Source source, std::vector<double> values, double dt_hours)
      : source_(source), values_(std::move(values)), dt_hours_(dt_hours) {}

  Source source_;
  std::vector<double> values_;
  double dt_hours_;
};

/// Hydrogen offtake per step in kg/h; all values non-negative.
class DemandSeries {
 public:
  static DemandSeries create(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }
  // Mass delivered over the series, kg.
  double total_mass(double dt_hours) const;

 private:
  explicit DemandSeries(std::vector<double> values) : values_(std::move(values)) {}

  std::vector<double> values_;
};

// CSV schema: header `hour,value`, rows hour = 0..T-1.
CapacityFactorSeries load_capacity_factors(const std::filesystem::path& path, Source source,
                                           std::size_t horizon, double dt_hours = 1.0);
CapacityFactorSeries parse_capacity_factors(std::istream& in, Source source, std::size_t horizon,
                                            double dt_hours = 1.0);
void write_capacity_factors(std::ostream& out, const CapacityFactorSeries& series);

// CSV schema: header `hour,kg_per_h`.
DemandSeries load_demand(const std::filesystem::path& path, std::size_t horizon);
DemandSeries parse_demand(std::istream& in, std::size_t horizon);
void write_demand(std::ostream& out, const DemandSeries& series);

DemandSeries constant_demand(double rate_kg_per_h, std::size_t horizon);

// Deterministic stand-in for measured weather-year data: seeded AR(1) wind
// speeds through a turbine power curve, and a clear-sky solar model with
// correlated cloud cover (northern-German latitude). `start_hour` is the
// hour-of-year of the first step.
CapacityFactorSeries synthetic_capacity_factors(Source source, std::size_t horizon, std::uint64_t seed,
                                                std::size_t start_hour = 0, double dt_hours = 1.0);

}  // namespace stackopt
