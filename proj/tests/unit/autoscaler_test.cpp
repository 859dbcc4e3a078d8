#include <gtest/gtest.h>

#include <set>

#include "support/scaling_oracle.hpp"
#include "support/sim_fixture.hpp"
#include "vgw/harness/load.hpp"

namespace vgw::testing {
namespace {

using autoscaler::Autoscaler;
using autoscaler::ReplicaGroup;
using autoscaler::ScalingAction;
using autoscaler::ScalingPolicy;
using autoscaler::UtilizationSample;

ReplicaGroup group_with(std::map<std::string, std::uint64_t> dispatched, double cost_ms = 10) {
  ReplicaGroup g;
  g.chain_id = "chain-1";
  g.image_id = "pc-coap-http-sunspot";
  g.cost = from_ms(cost_ms);
  for (const auto& [id, n] : dispatched) g.instances.push_back(id);
  g.dispatched = std::move(dispatched);
  return g;
}

std::vector<UtilizationSample> samples_of(std::initializer_list<double> us) {
  std::vector<UtilizationSample> out;
  int i = 0;
  for (double u : us) out.push_back({"vnf-" + std::to_string(++i), 0, 0, u});
  return out;
}

TEST(Utilization, IsDispatchedWorkOverThePeriod) {
  const auto one = autoscaler::sample_utilization(group_with({{"a", 500}}), 0, from_ms(10000));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0].utilization, 0.50);
  EXPECT_DOUBLE_EQ(autoscaler::sample_utilization(group_with({{"a", 0}}), 0, from_ms(10000))[0].utilization, 0.0);
  for (const auto& s : autoscaler::sample_utilization(group_with({{"a", 700}, {"b", 700}}), 3, from_ms(10000))) {
    EXPECT_DOUBLE_EQ(s.utilization, 0.70);
    EXPECT_EQ(s.period_index, 3u);
  }
  EXPECT_DOUBLE_EQ(autoscaler::sample_utilization(group_with({{"a", 5000}}), 0, from_ms(10000))[0].utilization, 1.0);
}

TEST(Decide, StrictlyAboveThreshold) {
  const ScalingPolicy p;
  EXPECT_EQ(autoscaler::decide(samples_of({0.71}), p, std::nullopt, 0), ScalingAction::ScaleOut);
  EXPECT_EQ(autoscaler::decide(samples_of({0.70}), p, std::nullopt, 0), ScalingAction::None);
  EXPECT_EQ(autoscaler::decide(samples_of({0.30, 0.30, 0.30}), p, std::nullopt, 0), ScalingAction::None);
  EXPECT_EQ(autoscaler::decide(samples_of({0.2, 0.9}), p, std::nullopt, 0), ScalingAction::ScaleOut);
  EXPECT_EQ(autoscaler::decide({}, p, std::nullopt, 0), ScalingAction::None);
}

TEST(Decide, CooldownCountsFromTheJoinPeriod) {
  ScalingPolicy p;
  EXPECT_EQ(autoscaler::decide(samples_of({0.9}), p, 4, 4), ScalingAction::None);
  EXPECT_EQ(autoscaler::decide(samples_of({0.9}), p, 4, 5), ScalingAction::ScaleOut);
  p.cooldown_periods = 3;
  EXPECT_EQ(autoscaler::decide(samples_of({0.9}), p, 4, 6), ScalingAction::None);
  EXPECT_EQ(autoscaler::decide(samples_of({0.9}), p, 4, 7), ScalingAction::ScaleOut);
}

TEST(Policy, Validation) {
  EXPECT_THROW(ScalingPolicy({from_ms(0), 0.7, 1}).validate(), Error);
  EXPECT_THROW(ScalingPolicy({from_ms(10), 1.0, 1}).validate(), Error);
  EXPECT_THROW(ScalingPolicy({from_ms(10), 0.0, 1}).validate(), Error);
  EXPECT_THROW(ScalingPolicy({from_ms(10), 0.7, -1}).validate(), Error);
  EXPECT_NO_THROW(ScalingPolicy({from_ms(10), 0.7, 0}).validate());
}

/// Group of `n` running replicas of the first uplink image.
struct DispatchFixture : SimFixture {
  std::unique_ptr<Autoscaler> scaler;
  nfvi::ChainId chain;

  explicit DispatchFixture(int n) {
    std::vector<nfvi::InstanceId> ids{running("pc-coap-http-sunspot"), running("im-sunspot-senml")};
    chain = nfvi->chain(ids, Direction::Uplink);
    loop.run();
    scaler = std::make_unique<Autoscaler>(loop, log, *nfvi);
    scaler->manage(chain);
    for (int i = 1; i < n; ++i) group().instances.push_back(running("pc-coap-http-sunspot"));
  }

  ReplicaGroup& group() { return scaler->group(chain, 0); }
};

TEST(Dispatch, RoundRobin) {
  DispatchFixture f(2);
  const auto a = f.group().instances[0];
  const auto b = f.group().instances[1];
  std::vector<std::string> got;
  for (int i = 0; i < 4; ++i) got.push_back(f.scaler->dispatch(f.group()));
  EXPECT_EQ(got, (std::vector<std::string>{a, b, a, b}));
}

TEST(Dispatch, SkipsReplicasThatCannotServe) {
  DispatchFixture f(2);
  const auto a = f.group().instances[0];
  f.nfvi->terminate(f.group().instances[1]);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(f.scaler->dispatch(f.group()), a);
  f.nfvi->terminate(a);
  EXPECT_THROW(
      {
        try {
          f.scaler->dispatch(f.group());
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::AllDown);
          throw;
        }
      },
      Error);
  EXPECT_EQ(f.group().all_down, 1u);
}

TEST(Dispatch, TenThousandOverThreeIsBalanced) {
  DispatchFixture f(3);
  std::map<std::string, int> counts;
  for (int i = 0; i < 10000; ++i) ++counts[f.scaler->dispatch(f.group())];
  ASSERT_EQ(counts.size(), 3u);
  int lo = 10000, hi = 0;
  for (const auto& [id, n] : counts) {
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  EXPECT_LE(hi - lo, 1);
}

// Random serving masks between dispatches: each pick is the first serving
// replica at or after the cursor, wrapping around.
TEST(Dispatch, MatchesCursorOracleUnderFailures) {
  sim::Rng rng(21);
  for (int round = 0; round < 20; ++round) {
    DispatchFixture f(4);
    auto& g = f.group();
    const auto ids = g.instances;
    std::set<std::string> dead;
    std::size_t cursor = 0;
    for (int step = 0; step < 60; ++step) {
      if (rng.uniform_int(0, 9) == 0 && dead.size() + 1 < ids.size()) {
        const auto victim = ids[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        if (dead.insert(victim).second) f.nfvi->terminate(victim);
      }
      std::size_t want = cursor;
      while (dead.contains(ids[want])) want = (want + 1) % ids.size();
      ASSERT_EQ(f.scaler->dispatch(g), ids[want]) << "round " << round << " step " << step;
      cursor = (want + 1) % ids.size();
    }
  }
}

TEST(Load, UniformSpacingIsExact) {
  const auto at = harness::uniform_arrivals(kEpoch, from_ms(10000), 500, 1);
  ASSERT_EQ(at.size(), 500u);
  for (std::size_t i = 1; i < at.size(); ++i) EXPECT_EQ(at[i] - at[i - 1], from_ms(20));
  const auto odd = harness::uniform_arrivals(kEpoch, from_ms(10000), 700, 2);
  ASSERT_EQ(odd.size(), 1400u);
  EXPECT_LT(odd.back(), at_ms(20000));
  EXPECT_EQ(odd[700], at_ms(10000));
}

TEST(Load, RampScheduleShape) {
  const auto s = harness::ramp_schedule({500, 1000, 2000}, 1.07, 3);
  std::vector<std::uint64_t> measured;
  std::uint64_t prev = 0;
  for (const auto& step : s.steps) {
    EXPECT_GE(step.requests_per_period, prev);
    if (prev) {
      EXPECT_LE(static_cast<double>(step.requests_per_period), prev * 1.07 + 1);
    }
    prev = step.requests_per_period;
    if (step.measured) {
      measured.push_back(step.requests_per_period);
      EXPECT_EQ(step.periods, 3u);
    }
  }
  EXPECT_EQ(measured, (std::vector<std::uint64_t>{500, 1000, 2000}));
  EXPECT_THROW(harness::ramp_schedule({}, 1.07, 3), Error);
  EXPECT_THROW(harness::ramp_schedule({500}, 1.0, 3), Error);
}

// ---- whole-loop properties ---------------------------------------------------

TEST(Ramp, ScaleOutsAreExactlyThePredicate) {
  sim::Rng rng(8);
  for (int round = 0; round < 6; ++round) {
    harness::RampConfig cfg;
    cfg.seed = 100 + round;
    cfg.policy.cooldown_periods = static_cast<int>(rng.uniform_int(0, 3));
    cfg.policy.cpu_threshold = rng.uniform_real(0.5, 0.9);
    cfg.schedule = harness::ramp_schedule({400, 800, 1600, 3200}, rng.uniform_real(1.05, 1.3), 2);
    const auto r = harness::run_load_ramp(cfg, true);
    EXPECT_EQ(logged_scale_outs(r.events), expected_scale_outs(r.events, cfg.policy)) << "round " << round;
    EXPECT_TRUE(replicas_non_decreasing(r.replica_trace)) << "round " << round;
  }
}

TEST(Ramp, DisabledScalerNeverScales) {
  harness::RampConfig cfg;
  cfg.schedule = harness::ramp_schedule({1000, 2000}, 1.2, 1);
  const auto r = harness::run_load_ramp(cfg, false);
  EXPECT_TRUE(logged_scale_outs(r.events).empty());
  EXPECT_EQ(r.replica_trace.size(), 2u);
}

// Constant overload: once a replica has joined, the next full period's
// per-replica peak is no larger than the peak before the join.
TEST(Ramp, JoinedReplicaSplitsConstantLoad) {
  harness::RampConfig cfg;
  cfg.schedule.steps = {{1800, 12, true}};
  const auto r = harness::run_load_ramp(cfg, true);
  std::map<std::pair<std::size_t, std::uint64_t>, double> peak;
  for (const auto& e : r.events) {
    if (e.transition != "UTILIZATION_SAMPLED") continue;
    auto& v = peak[{e.detail.at("position").get<std::size_t>(), e.detail.at("period").get<std::uint64_t>()}];
    v = std::max(v, e.detail.at("utilization").get<double>());
  }
  int checked = 0;
  for (const auto& e : r.events) {
    if (e.transition != "REPLICA_JOINED") continue;
    const auto pos = e.detail.at("position").get<std::size_t>();
    const auto q = e.detail.at("period").get<std::uint64_t>();
    if (q == 0 || !peak.contains({pos, q + 1})) continue;
    EXPECT_LE(peak.at({pos, q + 1}), peak.at({pos, q - 1}) + 1e-12) << pos << " " << q;
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Ramp, HalfLoadHasNoQueueingInEitherMode) {
  harness::RampConfig cfg;
  cfg.schedule.steps = {{500, 4, true}};
  for (bool scaling : {true, false}) {
    const auto r = harness::run_load_ramp(cfg, scaling);
    // Two 10 ms VNFs plus one inter-VNF hop, no waiting.
    EXPECT_DOUBLE_EQ(r.steps[0].mean_response_ms, 20.5);
    EXPECT_DOUBLE_EQ(r.steps[0].max_response_ms, 20.5);
  }
}

}  // namespace
}  // namespace vgw::testing
