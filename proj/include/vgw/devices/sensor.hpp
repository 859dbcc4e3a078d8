#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "vgw/dataplane/messages.hpp"
#include "vgw/sim/event_loop.hpp"
#include "vgw/sim/random.hpp"

namespace vgw::devices {

using dataplane::Decimal;

/// A decimal with one fractional digit, from an integer count of tenths.
inline Decimal tenths(std::int64_t t) {
  const bool neg = t < 0;
  const auto a = neg ? -t : t;
  std::string s = (neg && a != 0 ? "-" : "") + std::to_string(a / 10) + "." + std::to_string(a % 10);
  return Decimal::of(s);
}

/// Produces the value of one quantity at one instant.
class ValueSource {
 public:
  virtual ~ValueSource() = default;
  virtual Decimal value(Quantity q, SimTime t, sim::Rng& rng) = 0;
};

/// Temperature goes to `peak_cel` (plus non-negative noise) inside [start, end).
struct FireSpike {
  SimTime start{};
  SimTime end = SimTime::max();
  double peak_cel = 80.0;
};

/// Baseline plus uniform noise, with optional fire spikes on temperature.
class SyntheticSource : public ValueSource {
 public:
  struct Config {
    std::map<Quantity, double> baseline = {{Quantity::Temperature, 22.0}, {Quantity::Humidity, 45.0},
                                           {Quantity::Co2, 400.0},        {Quantity::WindSpeed, 3.0},
                                           {Quantity::Rain, 0.0}};
    double noise = 0.5;  // amplitude, same unit as the quantity
    std::vector<FireSpike> spikes;
  };

  explicit SyntheticSource(Config c) : config_(std::move(c)) {}

  Decimal value(Quantity q, SimTime t, sim::Rng& rng) override {
    const auto noise = static_cast<std::int64_t>(std::llround(config_.noise * 10));
    if (q == Quantity::Temperature) {
      for (const auto& s : config_.spikes) {
        if (t >= s.start && t < s.end) return tenths(std::llround(s.peak_cel * 10) + rng.uniform_int(0, noise));
      }
    }
    auto it = config_.baseline.find(q);
    const double base = it == config_.baseline.end() ? 0.0 : it->second;
    auto v = std::llround(base * 10) + rng.uniform_int(-noise, noise);
    // Rain and concentrations never go negative.
    if (q != Quantity::Temperature && v < 0) v = 0;
    return tenths(v);
  }

  const Config& config() const { return config_; }

 private:
  Config config_;
};

/// Replays a CSV trace with header "timestampS,quantity,value,unit". The
/// value at time t is the latest row at or before t; before the first row
/// the first row's value is used.
class TraceSource : public ValueSource {
 public:
  struct Row {
    double timestamp_s = 0;
    Quantity quantity = Quantity::Temperature;
    Decimal value;
  };

  static TraceSource parse(std::istream& in) {
    TraceSource src;
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestampS,quantity,value,unit") {
      fail(ErrorCode::ParseError, "trace header must be timestampS,quantity,value,unit");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      line = trim(line);
      if (line.empty()) continue;
      std::vector<std::string> cols;
      std::stringstream ss(line);
      std::string col;
      while (std::getline(ss, col, ',')) cols.push_back(trim(col));
      if (cols.size() != 4) fail(ErrorCode::ParseError, "trace line " + std::to_string(lineno) + ": 4 columns");
      Row r;
      try {
        r.timestamp_s = std::stod(cols[0]);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "trace line " + std::to_string(lineno) + ": bad timestamp");
      }
      r.quantity = kQuantityNames.parse_or_throw(cols[1], "quantity");
      r.value = Decimal::of(cols[2]);
      if (cols[3] != unit_for(r.quantity)) {
        fail(ErrorCode::ParseError, "trace line " + std::to_string(lineno) + ": unit " + cols[3]);
      }
      src.rows_[r.quantity].push_back(r);
    }
    for (auto& [q, rows] : src.rows_) {
      std::stable_sort(rows.begin(), rows.end(),
                       [](const Row& a, const Row& b) { return a.timestamp_s < b.timestamp_s; });
    }
    return src;
  }

  static TraceSource load(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::IoError, "cannot open trace " + path);
    return parse(f);
  }

  bool covers(Quantity q) const { return rows_.contains(q); }

  Decimal value(Quantity q, SimTime t, sim::Rng&) override {
    auto it = rows_.find(q);
    if (it == rows_.end()) fail(ErrorCode::NotFound, "trace has no " + std::string(to_string(q)));
    const double ts = to_ms(t) / 1000.0;
    const Row* pick = &it->second.front();
    for (const auto& r : it->second) {
      if (r.timestamp_s > ts) break;
      pick = &r;
    }
    return pick->value;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  }

  std::map<Quantity, std::vector<Row>> rows_;
};

struct SensorConfig {
  std::string sensor_id;
  DeviceBrand brand = DeviceBrand::Sunspot;
  std::vector<Quantity> quantities = {Quantity::Temperature};
  SimDuration period = from_ms(100);
  std::uint32_t epoch_base_s = 1'700'000'000;  // payload clock at virtual time zero
};

/// One emission: the CoAP message plus the instant it left the sensor.
struct Emission {
  std::string sensor_id;
  DeviceBrand brand = DeviceBrand::Sunspot;
  std::uint64_t seq = 0;
  SimTime emitted{};
  dataplane::CoapMessage message;
};

/// Emits one message per period carrying one reading per quantity, first at
/// t = period. Independent actor with its own random stream.
class SensorEmulator {
 public:
  using Sink = std::function<void(const Emission&)>;

  SensorEmulator(sim::EventLoop& loop, SensorConfig config, std::shared_ptr<ValueSource> source,
                 std::uint64_t seed)
      : loop_(loop), config_(std::move(config)), source_(std::move(source)), rng_(seed) {
    if (config_.brand == DeviceBrand::LegoNxt) fail(ErrorCode::MalformedRequest, "a robot is not a sensor");
    if (config_.quantities.empty()) fail(ErrorCode::MalformedRequest, "sensor without quantities");
    if (config_.period <= SimDuration::zero()) fail(ErrorCode::MalformedRequest, "period must be positive");
  }

  const SensorConfig& config() const { return config_; }
  std::uint64_t emitted() const { return seq_; }

  /// Schedules emissions at period, 2*period, ... up to and including `until`.
  void start(SimTime until, Sink sink) {
    sink_ = std::move(sink);
    until_ = until;
    schedule(loop_.now() + config_.period);
  }

  /// The readings this sensor reports at t.
  std::vector<dataplane::RawMeasurement> readings(SimTime t) {
    std::vector<dataplane::RawMeasurement> out;
    const auto stamp = config_.epoch_base_s + static_cast<std::uint32_t>((t - kEpoch) / std::chrono::seconds(1));
    for (auto q : config_.quantities) {
      out.push_back({config_.sensor_id, config_.brand, q, source_->value(q, t, rng_), std::string(unit_for(q)), stamp});
    }
    return out;
  }

 private:
  void schedule(SimTime at) {
    if (at > until_) return;
    loop_.post_at(at, [this, at] {
      Emission e;
      e.sensor_id = config_.sensor_id;
      e.brand = config_.brand;
      e.seq = ++seq_;
      e.emitted = at;
      e.message.type = dataplane::CoapType::Non;
      e.message.code = dataplane::CoapCode::Content205;
      e.message.message_id = static_cast<std::uint16_t>(e.seq);
      e.message.uri_path = "sensors/" + config_.sensor_id;
      e.message.payload = dataplane::encode_raw(config_.brand, readings(at));
      if (sink_) sink_(e);
      schedule(at + config_.period);
    });
  }

  sim::EventLoop& loop_;
  SensorConfig config_;
  std::shared_ptr<ValueSource> source_;
  sim::Rng rng_;
  Sink sink_;
  SimTime until_{};
  std::uint64_t seq_ = 0;
};

}  // namespace vgw::devices
