#include <gtest/gtest.h>

#include <sstream>

#include "support/sim_fixture.hpp"
#include "vgw/devices/apps.hpp"

namespace vgw::testing {
namespace {

using namespace vgw::devices;
using dataplane::Decimal;

SensorConfig sensor_cfg(std::string id, DeviceBrand brand, SimDuration period = from_ms(100)) {
  SensorConfig c;
  c.sensor_id = std::move(id);
  c.brand = brand;
  c.period = period;
  return c;
}

std::shared_ptr<SyntheticSource> fire_from(SimTime start, SimTime end = SimTime::max()) {
  SyntheticSource::Config c;
  c.spikes.push_back({start, end, 80.0});
  return std::make_shared<SyntheticSource>(c);
}

std::vector<store::VnfImage> images_of(const store::VnfStore& s, const std::vector<std::string>& ids) {
  std::vector<store::VnfImage> out;
  for (const auto& id : ids) out.push_back(*s.find(id));
  return out;
}

const std::vector<std::string> kUplink{"pc-coap-http-sunspot", "im-sunspot-senml"};
const std::vector<std::string> kDownlink{"im-senml-lcp", "pc-http-lcp"};

// ---- sensors ---------------------------------------------------------------

TEST(Sensor, EmitsOncePerPeriodUpToTheHorizon) {
  sim::EventLoop loop;
  SensorEmulator s(loop, sensor_cfg("s1", DeviceBrand::Sunspot, from_ms(1000)),
                   std::make_shared<SyntheticSource>(SyntheticSource::Config{}), 1);
  std::vector<double> at;
  s.start(at_ms(5000), [&](const Emission& e) { at.push_back(to_ms(e.emitted)); });
  loop.run();
  EXPECT_EQ(at, (std::vector<double>{1000, 2000, 3000, 4000, 5000}));
  EXPECT_EQ(s.emitted(), 5u);
}

TEST(Sensor, OneReadingPerQuantityPerMessage) {
  sim::EventLoop loop;
  auto cfg = sensor_cfg("s1", DeviceBrand::Sunspot);
  cfg.quantities = {Quantity::Temperature, Quantity::Humidity, Quantity::Co2};
  SensorEmulator s(loop, cfg, std::make_shared<SyntheticSource>(SyntheticSource::Config{}), 3);
  int messages = 0;
  s.start(at_ms(1000), [&](const Emission& e) {
    ++messages;
    const auto ms = dataplane::decode_raw(DeviceBrand::Sunspot, e.message.payload);
    ASSERT_EQ(ms.size(), 3u);
    EXPECT_EQ(ms[0].quantity, Quantity::Temperature);
    EXPECT_EQ(ms[1].quantity, Quantity::Humidity);
    EXPECT_EQ(ms[2].quantity, Quantity::Co2);
  });
  loop.run();
  EXPECT_EQ(messages, 10);
}

TEST(Sensor, FireSpikeReachesThresholdFromItsStart) {
  sim::EventLoop loop;
  SensorEmulator s(loop, sensor_cfg("s1", DeviceBrand::Sunspot), fire_from(at_ms(3000)), 9);
  s.start(at_ms(6000), [&](const Emission& e) {
    const double v = dataplane::decode_raw(DeviceBrand::Sunspot, e.message.payload)[0].value.to_double();
    if (e.emitted >= at_ms(3000)) {
      EXPECT_GE(v, 60.0) << to_ms(e.emitted);
    } else {
      EXPECT_LT(v, 60.0) << to_ms(e.emitted);
    }
  });
  loop.run();
}

TEST(Sensor, AdvanticsysPayloadDecodesToTraceValues) {
  std::istringstream csv(
      "timestampS,quantity,value,unit\n"
      "0,TEMPERATURE,21.5,Cel\n"
      "2,TEMPERATURE,64.25,Cel\n"
      "0,HUMIDITY,40,%RH\n");
  auto trace = std::make_shared<TraceSource>(TraceSource::parse(csv));
  sim::EventLoop loop;
  auto cfg = sensor_cfg("adv-1", DeviceBrand::Advanticsys, from_ms(1000));
  cfg.quantities = {Quantity::Temperature, Quantity::Humidity};
  SensorEmulator s(loop, cfg, trace, 1);
  std::vector<std::string> temps;
  s.start(at_ms(3000), [&](const Emission& e) {
    const auto ms = dataplane::decode_raw(DeviceBrand::Advanticsys, e.message.payload);
    ASSERT_EQ(ms.size(), 2u);
    temps.push_back(ms[0].value.text());
    EXPECT_EQ(ms[1].value.text(), "40");
    EXPECT_EQ(ms[0].timestamp_s, cfg.epoch_base_s + static_cast<std::uint32_t>(to_ms(e.emitted) / 1000));
    EXPECT_EQ(ms, s.readings(e.emitted));
  });
  loop.run();
  EXPECT_EQ(temps, (std::vector<std::string>{"21.5", "64.25", "64.25"}));
}

TEST(Sensor, TraceRejectsBadInput) {
  const std::vector<std::string> bad{
      "time,quantity,value,unit\n",
      "timestampS,quantity,value,unit\n0,TEMPERATURE,20,%RH\n",
      "timestampS,quantity,value,unit\n0,HEAT,20,Cel\n",
      "timestampS,quantity,value,unit\nx,TEMPERATURE,20,Cel\n",
      "timestampS,quantity,value,unit\n0,TEMPERATURE,20\n",
      "timestampS,quantity,value,unit\n0,TEMPERATURE,2e,Cel\n",
  };
  for (const auto& text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(TraceSource::parse(in), Error) << text;
  }
}

TEST(Sensor, TenthsFormatting) {
  EXPECT_EQ(tenths(0).text(), "0.0");
  EXPECT_EQ(tenths(7).text(), "0.7");
  EXPECT_EQ(tenths(-7).text(), "-0.7");
  EXPECT_EQ(tenths(-120).text(), "-12.0");
  EXPECT_EQ(tenths(805).text(), "80.5");
}

// ---- fire detection --------------------------------------------------------

std::vector<std::pair<std::size_t, FireSignal>> run_detector(const std::vector<double>& xs, FirePolicy p) {
  FireDetector d(p);
  std::vector<std::pair<std::size_t, FireSignal>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (auto s = d.feed(xs[i])) out.emplace_back(i, *s);
  }
  return out;
}

TEST(Fire, DetectsOnTheCompletingSample) {
  const auto got = run_detector({25, 61, 62}, {60, 2});
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].first, 2u);
  EXPECT_EQ(got[0].second, FireSignal::Detected);
  EXPECT_TRUE(run_detector({25, 30, 59.9, 12}, {60, 2}).empty());
  EXPECT_EQ(run_detector({60, 60}, {60, 2}).size(), 1u);
  EXPECT_THROW(FireDetector({0, 2}), Error);
  EXPECT_THROW(FireDetector({60, 0}), Error);
}

TEST(Fire, MatchesSlidingWindowOracle) {
  sim::Rng rng(5);
  for (int round = 0; round < 300; ++round) {
    const FirePolicy p{60, static_cast<int>(rng.uniform_int(1, 4))};
    std::vector<double> xs(static_cast<std::size_t>(rng.uniform_int(0, 40)));
    for (auto& x : xs) x = rng.uniform_int(0, 2) == 0 ? 60.0 : static_cast<double>(rng.uniform_int(40, 80));

    // Oracle: every maximal run of values >= threshold with length >= n
    // fires at its n-th element and clears at the first value after it.
    std::vector<std::pair<std::size_t, FireSignal>> want;
    std::size_t i = 0;
    while (i < xs.size()) {
      if (xs[i] < p.threshold_cel) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < xs.size() && xs[j] >= p.threshold_cel) ++j;
      if (j - i >= static_cast<std::size_t>(p.consecutive_samples)) {
        want.emplace_back(i + p.consecutive_samples - 1, FireSignal::Detected);
        if (j < xs.size()) want.emplace_back(j, FireSignal::Cleared);
      }
      i = j;
    }
    ASSERT_EQ(run_detector(xs, p), want) << "round " << round;
  }
}

// ---- robot -----------------------------------------------------------------

dataplane::Bytes frame(const std::string& command) {
  return dataplane::frame_lcp(dataplane::encode_lcp(dataplane::make_lcp(command, "extinguisher")));
}

TEST(Robot, GrabThenDeploy) {
  sim::EventLoop loop;
  sim::EventLog log;
  RobotEmulator robot(loop, log);
  std::vector<std::pair<double, RobotState>> trail;
  robot.on_state([&](RobotState s, SimTime t, std::uint64_t) { trail.emplace_back(to_ms(t), s); });
  loop.post_at(at_ms(1000), [&] {
    EXPECT_FALSE(robot.receive(frame("grab")));
    EXPECT_FALSE(robot.receive(frame("deploy")));
  });
  loop.run();
  const std::vector<std::pair<double, RobotState>> want{
      {1000, RobotState::Moving}, {1200, RobotState::Grabbed}, {1400, RobotState::Deployed}};
  EXPECT_EQ(trail, want);
}

TEST(Robot, BusyWhileDeployed) {
  sim::EventLoop loop;
  sim::EventLog log;
  RobotEmulator robot(loop, log);
  robot.receive(frame("grab"));
  robot.receive(frame("deploy"));
  loop.run();
  ASSERT_EQ(robot.state(), RobotState::Deployed);
  EXPECT_EQ(robot.receive(frame("grab")), ErrorCode::RobotBusy);
  loop.run();
  EXPECT_EQ(robot.state(), RobotState::Deployed);
  EXPECT_EQ(robot.receive(frame("deploy")), ErrorCode::RobotBusy);
  EXPECT_FALSE(robot.receive(frame("stop")));
  loop.run();
  EXPECT_EQ(robot.state(), RobotState::Idle);
}

TEST(Robot, StatusRepliesAndGarbageIsRejected) {
  sim::EventLoop loop;
  sim::EventLog log;
  RobotEmulator robot(loop, log);
  std::optional<RobotState> reply;
  robot.on_reply([&](RobotState s, SimTime) { reply = s; });
  robot.receive(frame("status"));
  loop.run();
  EXPECT_EQ(reply, RobotState::Idle);
  EXPECT_EQ(robot.receive(std::string("\x01\x00\x09", 3)), ErrorCode::UnknownCommand);
  EXPECT_EQ(robot.receive("\x05"), ErrorCode::ParseError);
  EXPECT_EQ(robot.state(), RobotState::Idle);
}

// Random command streams: every state change is caused by exactly one
// accepted command and follows the documented transitions.
TEST(Robot, EveryStateChangeIsJustified) {
  const std::vector<std::string> commands{"grab", "deploy", "stop", "status"};
  sim::Rng rng(17);
  for (int round = 0; round < 100; ++round) {
    sim::EventLoop loop;
    sim::EventLog log;
    RobotEmulator robot(loop, log);
    const int n = static_cast<int>(rng.uniform_int(1, 25));
    for (int k = 0; k < n; ++k) {
      const auto cmd = commands[static_cast<std::size_t>(rng.uniform_int(0, 3))];
      loop.post_at(at_ms(rng.uniform_int(0, 3000)), [&robot, cmd] { robot.receive(frame(cmd)); });
    }
    loop.run();
    std::map<std::uint64_t, std::string> accepted;
    std::map<std::uint64_t, std::vector<std::string>> changes;
    for (const auto& e : robot.events()) {
      if (e.kind == "ACCEPTED") accepted[e.command_seq] = e.command;
      if (e.kind == "STATE") changes[e.command_seq].push_back(e.detail);
    }
    RobotState s = RobotState::Idle;
    for (const auto& e : robot.events()) {
      if (e.kind != "STATE") continue;
      ASSERT_TRUE(accepted.contains(e.command_seq)) << "round " << round;
      const auto& cmd = accepted.at(e.command_seq);
      const auto to = *kRobotStateNames.parse(e.detail);
      const bool legal = (cmd == "grab" && ((s == RobotState::Idle && to == RobotState::Moving) ||
                                            (s == RobotState::Moving && to == RobotState::Grabbed))) ||
                         (cmd == "deploy" && s == RobotState::Grabbed && to == RobotState::Deployed) ||
                         (cmd == "stop" && s != RobotState::Idle && to == RobotState::Idle);
      EXPECT_TRUE(legal) << "round " << round << " " << cmd << " " << to_string(s) << "->" << e.detail;
      s = to;
    }
    for (const auto& [seq, list] : changes) {
      const auto& cmd = accepted.at(seq);
      EXPECT_EQ(list.size(), cmd == "grab" ? 2u : 1u) << cmd;
    }
  }
}

// ---- agent and applications ------------------------------------------------

/// A wildfire deployment over the direct bypass: one sensor, one robot.
struct DirectDeployment {
  sim::EventLoop loop;
  sim::EventLog log;
  store::VnfStore store;
  SensorActuatorAgent agent{loop, log};
  RobotEmulator robot{loop, log};
  WildfireApp app{loop, log, agent};
  std::optional<SimTime> deployed;

  DirectDeployment() {
    for (const auto& img : store::default_catalog()) store.register_image(img);
    agent.add_robot(robot);
    agent.subscribe("wildfire", [this](const Uplink& u) { app.consume(u); });
    agent.bind_uplink("wildfire", DeviceBrand::Sunspot, std::make_unique<DirectPath>(images_of(store, kUplink)));
    agent.bind_downlink("wildfire", "nxt-1", std::make_unique<DirectPath>(images_of(store, kDownlink)));
    robot.on_state([this](RobotState s, SimTime t, std::uint64_t) {
      if (s == RobotState::Deployed && !deployed) deployed = t;
    });
  }
};

TEST(Wildfire, DirectE2EIsTheSumOfConfiguredSpans) {
  DirectDeployment d;
  SensorEmulator s(d.loop, sensor_cfg("s1", DeviceBrand::Sunspot), fire_from(kEpoch), 1);
  s.start(at_ms(2000), [&](const Emission& e) { d.agent.ingest(e); });
  d.agent.start("wildfire");
  d.loop.run();
  ASSERT_TRUE(d.deployed);
  // Second sample (t=200 ms) completes the detection.
  const LinkLatency l;
  const SimDuration direct_uplink = from_ms(2);    // two images at 1 ms
  const SimDuration direct_downlink = from_ms(2);
  const SimDuration robot = from_ms(400);          // grab, then deploy
  const auto expected = l.coap + direct_uplink + l.http + l.http + direct_downlink + l.lcp + robot;
  EXPECT_EQ(*d.deployed - at_ms(200), expected);
  int detected = 0;
  for (const auto& e : d.log.events()) {
    if (e.transition != "FIRE_DETECTED") continue;
    ++detected;
    EXPECT_EQ(e.detail.at("emittedUs"), to_us(at_ms(200)));
  }
  EXPECT_EQ(detected, 1);
}

TEST(Wildfire, SecondEpisodeAfterStop) {
  DirectDeployment d;
  SyntheticSource::Config c;
  c.spikes = {{at_ms(0), at_ms(1000), 80}, {at_ms(3000), at_ms(4000), 80}};
  SensorEmulator s(d.loop, sensor_cfg("s1", DeviceBrand::Sunspot), std::make_shared<SyntheticSource>(c), 1);
  std::vector<std::string> trail;
  d.robot.on_state([&](RobotState st, SimTime, std::uint64_t) { trail.emplace_back(to_string(st)); });
  s.start(at_ms(6000), [&](const Emission& e) { d.agent.ingest(e); });
  d.agent.start("wildfire");
  d.loop.run();
  EXPECT_EQ(d.app.episodes(), 2);
  const std::vector<std::string> cycle{"MOVING", "GRABBED", "DEPLOYED", "IDLE"};
  std::vector<std::string> want = cycle;
  want.insert(want.end(), cycle.begin(), cycle.end());
  EXPECT_EQ(trail, want);
}

TEST(Agent, BuffersUntilStartThenFlushesDropTail) {
  sim::EventLoop loop;
  sim::EventLog log;
  store::VnfStore store;
  for (const auto& img : store::default_catalog()) store.register_image(img);
  SensorActuatorAgent agent(loop, log, {}, 3);
  std::vector<std::uint64_t> seqs;
  agent.subscribe("forest", [&](const Uplink& u) { seqs.push_back(u.seq); });
  agent.bind_uplink("forest", DeviceBrand::Sunspot, std::make_unique<DirectPath>(images_of(store, kUplink)));
  SensorEmulator s(loop, sensor_cfg("s1", DeviceBrand::Sunspot), fire_from(SimTime::max()), 1);
  s.start(at_ms(1000), [&](const Emission& e) { agent.ingest(e); });
  loop.run_until(at_ms(600));
  agent.start("forest");
  loop.run();
  // 1..3 were buffered, 4 and 5 overflowed, 6.. flow live.
  EXPECT_EQ(seqs, (std::vector<std::uint64_t>{1, 2, 3, 6, 7, 8, 9, 10}));
  const auto c = agent.counts("forest", "s1");
  EXPECT_EQ(c.received, 8u);
  EXPECT_EQ(c.dropped, 2u);
  EXPECT_EQ(c.received + c.dropped, s.emitted());
}

/// Builds a two-VNF chain at the gateway provider, ready on return.
nfvi::ChainId ready_chain(SimFixture& f, const std::vector<std::string>& images, Direction dir) {
  std::vector<nfvi::InstanceId> ids;
  for (const auto& img : images) ids.push_back(f.running(img));
  const auto chain = f.nfvi->chain(ids, dir);
  f.loop.run();
  return chain;
}

nfvi::MigrationPlan live_plan(SimDuration transfer, std::vector<SimDuration> downtime) {
  nfvi::MigrationPlan p;
  p.transfer_delay = transfer;
  p.per_instance_downtime = std::move(downtime);
  return p;
}

TEST(Wildfire, ActuationDuringDowntimeIsRetriedAfterMigration) {
  SimFixture f;
  const auto down = ready_chain(f, kDownlink, Direction::Downlink);
  dataplane::Pipeline pipeline(*f.nfvi);
  SensorActuatorAgent agent(f.loop, f.log);
  RobotEmulator robot(f.loop, f.log);
  agent.add_robot(robot);
  WildfireApp app(f.loop, f.log, agent);
  agent.subscribe("wildfire", [&](const Uplink& u) { app.consume(u); });
  agent.bind_uplink("wildfire", DeviceBrand::Sunspot, std::make_unique<DirectPath>(images_of(f.store, kUplink)));
  agent.bind_downlink("wildfire", "nxt-1", std::make_unique<ChainPath>(pipeline, down));

  const SimTime t0 = f.loop.now();
  // Both VMs are DOWN in [t0 + 2 s, t0 + 5 s); the switchover is at t0 + 5 s.
  f.nfvi->migrate(down, live_plan(from_ms(5000), {from_ms(3000), from_ms(3000)}));
  std::optional<SimTime> deployed;
  robot.on_state([&](RobotState s, SimTime t, std::uint64_t) {
    if (s == RobotState::Deployed) deployed = t;
  });
  // Fire is seen by the sensor from t0 + 2 s, inside the DOWN window.
  SensorEmulator s(f.loop, sensor_cfg("s1", DeviceBrand::Sunspot), fire_from(t0 + from_ms(2000)), 1);
  s.start(t0 + from_ms(9000), [&](const Emission& e) { agent.ingest(e); });
  agent.start("wildfire");

  f.loop.run_until(t0 + from_ms(4900));
  EXPECT_EQ(robot.state(), RobotState::Idle);
  EXPECT_GT(agent.actuation_drops(), 0u);
  EXPECT_GT(pipeline.drops(down), 0u);
  f.loop.run();
  ASSERT_TRUE(deployed);
  EXPECT_GE(*deployed, t0 + from_ms(5000));
  EXPECT_LT(*deployed, t0 + from_ms(5000) + from_ms(500) + from_ms(500));
}

// Two applications consume the same emissions; each sees every emission
// either delivered or dropped.
TEST(Agent, SharedSensorsConserveEmissions) {
  SimFixture f;
  const auto up = ready_chain(f, kUplink, Direction::Uplink);
  dataplane::Pipeline pipeline(*f.nfvi);
  SensorActuatorAgent agent(f.loop, f.log);
  ForestMonitoringApp forest;
  std::uint64_t wildfire_seen = 0;
  agent.subscribe("forest", [&](const Uplink& u) { forest.consume(u); });
  agent.subscribe("wildfire", [&](const Uplink&) { ++wildfire_seen; });
  agent.bind_uplink("forest", DeviceBrand::Sunspot, std::make_unique<DirectPath>(images_of(f.store, kUplink)));
  agent.bind_uplink("wildfire", DeviceBrand::Sunspot, std::make_unique<ChainPath>(pipeline, up));

  const SimTime t0 = f.loop.now();
  f.nfvi->migrate(up, live_plan(from_ms(5000), {from_ms(2000), from_ms(4000)}));
  std::vector<std::unique_ptr<SensorEmulator>> sensors;
  for (int i = 0; i < 2; ++i) {
    sensors.push_back(std::make_unique<SensorEmulator>(
        f.loop, sensor_cfg("s" + std::to_string(i), DeviceBrand::Sunspot, from_ms(100 + 30 * i)),
        std::make_shared<SyntheticSource>(SyntheticSource::Config{}), 100 + i));
    sensors.back()->start(t0 + from_ms(8000), [&](const Emission& e) { agent.ingest(e); });
  }
  agent.start("forest");
  agent.start("wildfire");
  f.loop.run();
  std::uint64_t wildfire_counted = 0;
  for (const auto& s : sensors) {
    const auto id = s->config().sensor_id;
    for (const std::string app : {"forest", "wildfire"}) {
      const auto c = agent.counts(app, id);
      EXPECT_EQ(c.received + c.dropped, s->emitted()) << app << " " << id;
    }
    EXPECT_EQ(forest.received(id), s->emitted());
    EXPECT_GT(agent.counts("wildfire", id).dropped, 0u);
    wildfire_counted += agent.counts("wildfire", id).received;
  }
  EXPECT_EQ(wildfire_seen, wildfire_counted);
  EXPECT_EQ(forest.undecoded(), 0u);
  EXPECT_TRUE(forest.latest().contains("s0/temperature"));
}

}  // namespace
}  // namespace vgw::testing
