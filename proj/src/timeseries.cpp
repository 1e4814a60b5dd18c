#include "stackopt/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "stackopt/error.hpp"

namespace stackopt {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, std::size_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Reads a two-column `hour,<value_name>` CSV into a value vector; enforces
// the header, consecutive hour indices and exactly `horizon` rows.
std::vector<double> read_hourly_csv(std::istream& in, std::string_view value_name, std::size_t horizon) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> values;
  values.reserve(horizon);
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      auto comma = row.find(',');
      if (comma == std::string_view::npos || trim(row.substr(0, comma)) != "hour" ||
          trim(row.substr(comma + 1)) != value_name) {
        throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": expected header 'hour," +
                                                 std::string(value_name) + "'");
      }
      continue;
    }
    auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": expected two columns");
    }
    std::size_t hour = 0;
    double value = 0.0;
    if (!parse_index(row.substr(0, comma), hour)) {
      throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": non-numeric hour");
    }
    if (!parse_double(row.substr(comma + 1), value)) {
      throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": non-numeric value");
    }
    if (hour != values.size()) {
      throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": expected hour " +
                                               std::to_string(values.size()) + ", got " + std::to_string(hour));
    }
    values.push_back(value);
  }
  if (!header_seen) throw Error(ErrorKind::MalformedRow, "empty file, missing header");
  if (values.size() != horizon) {
    throw Error(ErrorKind::LengthMismatch,
                "expected " + std::to_string(horizon) + " rows, found " + std::to_string(values.size()));
  }
  return values;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open '" + path.string() + "'");
  return in;
}

void write_hourly_csv(std::ostream& out, std::string_view value_name, std::span<const double> values) {
  out << "hour," << value_name << '\n';
  char buf[64];
  for (std::size_t t = 0; t < values.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, values[t]);
    out << buf;
  }
}

// Standard normal from raw engine output; std::normal_distribution is not
// specified bit-for-bit across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  // (0, 1], 53 random bits
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct TurbineModel {
  double mean_speed;  // m/s, annual
  double seasonal_amplitude;
  double cut_in, rated, cut_out;
};

double turbine_output(const TurbineModel& m, double v) {
  if (v < m.cut_in || v >= m.cut_out) return 0.0;
  if (v >= m.rated) return 1.0;
  double num = v * v * v - m.cut_in * m.cut_in * m.cut_in;
  double den = m.rated * m.rated * m.rated - m.cut_in * m.cut_in * m.cut_in;
  return num / den;
}

std::vector<double> synthetic_wind(const TurbineModel& m, std::size_t horizon, std::uint64_t seed,
                                   std::size_t start_hour, double dt) {
  constexpr double kPersistence = 0.97;
  constexpr double kSpread = 0.42;
  Gaussian noise(seed);
  std::vector<double> out(horizon);
  double z = noise();
  const double innovation = std::sqrt(1.0 - kPersistence * kPersistence);
  auto steps_before = static_cast<std::size_t>(std::llround(static_cast<double>(start_hour) / dt));
  for (std::size_t s = 0; s < steps_before + horizon; ++s) {
    z = kPersistence * z + innovation * noise();
    if (s < steps_before) continue;
    double hour = static_cast<double>(start_hour) + static_cast<double>(s - steps_before) * dt;
    double day = std::fmod(hour / 24.0, 365.0);
    double seasonal = 1.0 + m.seasonal_amplitude * std::cos(2.0 * std::numbers::pi * day / 365.0);
    double v = m.mean_speed * seasonal * std::exp(kSpread * z - 0.5 * kSpread * kSpread);
    out[s - steps_before] = turbine_output(m, v);
  }
  return out;
}

std::vector<double> synthetic_solar(std::size_t horizon, std::uint64_t seed, std::size_t start_hour, double dt) {
  constexpr double kLatitude = 53.2 * std::numbers::pi / 180.0;
  constexpr double kPersistence = 0.95;
  constexpr double kPeak = 0.82;
  Gaussian noise(seed);
  std::vector<double> out(horizon);
  double z = noise();
  const double innovation = std::sqrt(1.0 - kPersistence * kPersistence);
  auto steps_before = static_cast<std::size_t>(std::llround(static_cast<double>(start_hour) / dt));
  for (std::size_t s = 0; s < steps_before + horizon; ++s) {
    z = kPersistence * z + innovation * noise();
    if (s < steps_before) continue;
    double hour = static_cast<double>(start_hour) + static_cast<double>(s - steps_before) * dt;
    double day = std::fmod(std::floor(hour / 24.0), 365.0);
    double hour_of_day = std::fmod(hour, 24.0) + 0.5 * dt;
    double declination = 23.44 * std::numbers::pi / 180.0 * std::sin(2.0 * std::numbers::pi * (284.0 + day) / 365.0);
    double hour_angle = (hour_of_day - 12.0) * 15.0 * std::numbers::pi / 180.0;
    double sin_elev = std::sin(kLatitude) * std::sin(declination) +
                      std::cos(kLatitude) * std::cos(declination) * std::cos(hour_angle);
    if (sin_elev <= 0.0) {
      out[s - steps_before] = 0.0;
      continue;
    }
    double clearness = 0.25 + 0.75 / (1.0 + std::exp(-1.6 * z));
    out[s - steps_before] = std::clamp(kPeak * std::pow(sin_elev, 1.15) * clearness, 0.0, 1.0);
  }
  return out;
}

}  // namespace

std::string_view to_string(Source source) {
  switch (source) {
    case Source::Onshore: return "onshore";
    case Source::Offshore: return "offshore";
    case Source::Solar: return "solar";
  }
  return "unknown";
}

Source parse_source(std::string_view name) {
  for (Source s : kAllSources) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::OutOfRange, "unknown source '" + std::string(name) + "'");
}

CapacityFactorSeries CapacityFactorSeries::create(Source source, std::vector<double> values, double dt_hours) {
  if (!(dt_hours > 0.0) || !std::isfinite(dt_hours)) {
    throw Error(ErrorKind::OutOfRange, "dt_hours must be > 0");
  }
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!(values[t] >= 0.0 && values[t] <= 1.0)) {
      throw Error(ErrorKind::OutOfRange, std::string(to_string(source)) + " capacity factor at hour " +
                                             std::to_string(t) + " = " + std::to_string(values[t]) +
                                             " outside [0,1]");
    }
  }
  return CapacityFactorSeries(source, std::move(values), dt_hours);
}

DemandSeries DemandSeries::create(std::vector<double> values) {
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (!(values[t] >= 0.0) || !std::isfinite(values[t])) {
      throw Error(ErrorKind::NegativeRate, "demand at hour " + std::to_string(t) + " must be >= 0");
    }
  }
  return DemandSeries(std::move(values));
}

double DemandSeries::total_mass(double dt_hours) const {
  double total = 0.0;
  for (double v : values_) total += v * dt_hours;
  return total;
}

CapacityFactorSeries parse_capacity_factors(std::istream& in, Source source, std::size_t horizon, double dt_hours) {
  return CapacityFactorSeries::create(source, read_hourly_csv(in, "value", horizon), dt_hours);
}

CapacityFactorSeries load_capacity_factors(const std::filesystem::path& path, Source source, std::size_t horizon,
                                           double dt_hours) {
  auto in = open_or_throw(path);
  try {
    return parse_capacity_factors(in, source, horizon, dt_hours);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_capacity_factors(std::ostream& out, const CapacityFactorSeries& series) {
  write_hourly_csv(out, "value", series.values());
}

DemandSeries parse_demand(std::istream& in, std::size_t horizon) {
  return DemandSeries::create(read_hourly_csv(in, "kg_per_h", horizon));
}

DemandSeries load_demand(const std::filesystem::path& path, std::size_t horizon) {
  auto in = open_or_throw(path);
  try {
    return parse_demand(in, horizon);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_demand(std::ostream& out, const DemandSeries& series) { write_hourly_csv(out, "kg_per_h", series.values()); }

DemandSeries constant_demand(double rate_kg_per_h, std::size_t horizon) {
  if (!(rate_kg_per_h >= 0.0) || !std::isfinite(rate_kg_per_h)) {
    throw Error(ErrorKind::NegativeRate, "demand rate must be >= 0");
  }
  return DemandSeries::create(std::vector<double>(horizon, rate_kg_per_h));
}

CapacityFactorSeries synthetic_capacity_factors(Source source, std::size_t horizon, std::uint64_t seed,
                                                std::size_t start_hour, double dt_hours) {
  if (!(dt_hours > 0.0)) throw Error(ErrorKind::OutOfRange, "dt_hours must be > 0");
  std::vector<double> values;
  switch (source) {
    case Source::Onshore:
      values = synthetic_wind({7.2, 0.18, 3.0, 12.5, 25.0}, horizon, seed, start_hour, dt_hours);
      break;
    case Source::Offshore:
      values = synthetic_wind({9.6, 0.15, 3.0, 13.0, 25.0}, horizon, seed, start_hour, dt_hours);
      break;
    case Source::Solar:
      values = synthetic_solar(horizon, seed, start_hour, dt_hours);
      break;
  }
  return CapacityFactorSeries::create(source, std::move(values), dt_hours);
}

}  // namespace stackopt
