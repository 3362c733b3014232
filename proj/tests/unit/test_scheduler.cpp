#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "semcomm/error.hpp"
#include "semcomm/scheduler.hpp"

namespace semcomm {
namespace {

// Grid powers: user 1 direct 6, key-info 3; user 2 direct 5, key-info 2.
std::vector<UserRequest> two_users() { return {{1, 2.0, 1.0, 1.5}, {2, 3.0, 1.0, 0.5}}; }

SchedulerParams two_user_params() {
  SchedulerParams p;
  p.gain = 1.0;
  p.loss = 1.5;
  p.deadline = 1.0;
  p.p_max = 10.0;
  p.alpha = 0.5;
  p.p_quantum = 1.0;
  return p;
}

std::vector<UserRequest> random_users(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> bits(1e3, 2e4), frac(0.05, 0.9), noise(1e-3, 2.0);
  std::vector<UserRequest> users;
  for (int i = 0; i < n; ++i) {
    const double d = bits(rng);
    users.push_back({i + 1, d, d * frac(rng), noise(rng)});
  }
  return users;
}

SchedulerParams random_params(std::mt19937& rng) {
  SchedulerParams p;
  p.gain = std::uniform_real_distribution<double>(0.5, 4.0)(rng);
  p.loss = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
  p.deadline = 1e3;
  p.p_max = std::uniform_real_distribution<double>(1.0, 30.0)(rng);
  p.alpha = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
  p.p_quantum = p.p_max / 500.0;
  return p;
}

std::vector<Mode> modes(const SchedulePlan& plan) {
  std::vector<Mode> out;
  for (const auto& d : plan.decisions) out.push_back(d.x);
  return out;
}

TEST(RequiredPower, Examples) {
  EXPECT_EQ(required_power(0.0, 1.0, 1.0, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(required_power(1.0, 1.0, 1.0, 0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(required_power(2.0, 1.5, 1.0, 1.5, 1.0), 6.0);
  EXPECT_DOUBLE_EQ(required_power(3.0, 0.5, 1.0, 1.5, 1.0), 5.0);
}

TEST(RequiredPower, InvertsShannonRate) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double d = std::pow(10.0, 7.0 * u(rng) - 2.0);
    const double noise = std::pow(10.0, 4.0 * u(rng) - 2.0);
    const double gain = std::pow(10.0, 2.0 * u(rng) - 1.0);
    const double loss = 2.0 * u(rng);
    const double deadline = std::pow(10.0, 4.0 * u(rng) - 1.0);
    if (d / deadline > 900.0) continue;  // keeps 2^(d/T) inside double range
    const double p = required_power(d, noise, gain, loss, deadline);
    // Independent forward formula.
    const double rate = std::log2(1.0 + (p * gain - loss) / noise);
    EXPECT_NEAR(rate * deadline / d, 1.0, 1e-9) << d << " " << deadline;
  }
}

TEST(RequiredPower, RejectsBadInputs) {
  EXPECT_THROW(required_power(1.0, 1.0, 0.0, 0.0, 1.0), ParameterError);
  EXPECT_THROW(required_power(1.0, 1.0, 1.0, 0.0, 0.0), ParameterError);
  EXPECT_THROW(required_power(-1.0, 1.0, 1.0, 0.0, 1.0), ParameterError);
}

TEST(Optimize, TwoUserExample) {
  const SchedulePlan plan = optimize(two_users(), two_user_params());
  EXPECT_DOUBLE_EQ(plan.total_quality, 1.5);
  ASSERT_EQ(plan.decisions.size(), 2u);
  EXPECT_EQ(plan.decisions[0].x, Mode::kDirect);
  EXPECT_EQ(plan.decisions[1].x, Mode::kKeyInfo);
  EXPECT_DOUBLE_EQ(plan.decisions[0].power, 6.0);
  EXPECT_DOUBLE_EQ(plan.decisions[1].power, 2.0);
  EXPECT_DOUBLE_EQ(plan.total_power, 8.0);
}

TEST(Optimize, TwoUserExampleAgreesWithEnumeration) {
  // All 9 decision vectors, by hand.
  const double direct[2] = {6, 5}, key[2] = {3, 2};
  double best = 0.0;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      double power = 0.0, quality = 0.0;
      const int x[2] = {a, b};
      for (int u = 0; u < 2; ++u) {
        if (x[u] == 0) power += direct[u], quality += 1.0;
        if (x[u] == 1) power += key[u], quality += 0.5;
      }
      if (power <= 10.0) best = std::max(best, quality);
    }
  EXPECT_DOUBLE_EQ(best, 1.5);
  EXPECT_DOUBLE_EQ(brute_force(two_users(), two_user_params()).total_quality, best);
  EXPECT_EQ(modes(brute_force(two_users(), two_user_params())), modes(optimize(two_users(), two_user_params())));
}

TEST(Optimize, InfeasibleSingleUserIsSkipped) {
  SchedulerParams p = two_user_params();
  p.p_max = 2.5;
  const SchedulePlan plan = optimize({two_users()[0]}, p);
  ASSERT_EQ(plan.decisions.size(), 1u);
  EXPECT_EQ(plan.decisions[0].x, Mode::kSkip);
  EXPECT_EQ(plan.total_quality, 0.0);
  EXPECT_EQ(plan.decisions[0].power, 0.0);
}

TEST(Optimize, AmpleBudgetSendsEveryoneDirect) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto users = random_users(rng, 6);
    SchedulerParams p = random_params(rng);
    double total = 0.0;
    for (const auto& u : users) total += required_power(u.d_direct, u.noise, p.gain, p.loss, p.deadline);
    p.p_max = total * 1.01 + 1.0;
    p.p_quantum = p.p_max / 1e4;
    const SchedulePlan plan = optimize(users, p);
    EXPECT_DOUBLE_EQ(plan.total_quality, 6.0);
    for (const auto& d : plan.decisions) EXPECT_EQ(d.x, Mode::kDirect);
  }
}

TEST(Optimize, EmptyUsers) {
  EXPECT_EQ(optimize({}, two_user_params()).total_quality, 0.0);
  EXPECT_EQ(brute_force({}, two_user_params()).total_quality, 0.0);
}

TEST(Optimize, MatchesBruteForceOnRandomInstances) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto users = random_users(rng, n);
    const SchedulerParams p = random_params(rng);
    const SchedulePlan dp = optimize(users, p);
    const SchedulePlan bf = brute_force(users, p);
    EXPECT_EQ(dp.total_quality, bf.total_quality) << "trial " << trial;
    EXPECT_EQ(modes(dp), modes(bf)) << "trial " << trial;
  }
}

TEST(Optimize, FeasibleAndGridConsistent) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto users = random_users(rng, 10);
    const SchedulerParams p = random_params(rng);
    const SchedulePlan plan = optimize(users, p);
    double sum = 0.0, quality = 0.0;
    for (const auto& d : plan.decisions) {
      sum += d.power;
      if (d.x == Mode::kSkip) {
        EXPECT_EQ(d.power, 0.0);
        EXPECT_EQ(d.quality, 0.0);
        continue;
      }
      EXPECT_GE(d.power, d.required_power);
      EXPECT_LT(d.power - d.required_power, p.p_quantum * (1.0 + 1e-9));
      const double steps = d.power / p.p_quantum;
      EXPECT_NEAR(steps, std::round(steps), 1e-6);
      quality += d.quality;
    }
    EXPECT_LE(sum, p.p_max * (1.0 + 1e-12));
    EXPECT_NEAR(plan.total_power, sum, 1e-9 * std::max(1.0, sum));
    EXPECT_NEAR(plan.total_quality, quality, 1e-12);
  }
}

TEST(Optimize, MoreBudgetNeverHurts) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto users = random_users(rng, 8);
    SchedulerParams p = random_params(rng);
    p.p_quantum = 0.05;
    double previous = -1.0;
    for (double pmax = 0.5; pmax <= 40.0; pmax += 0.75) {
      p.p_max = pmax;
      const double q = optimize(users, p).total_quality;
      EXPECT_GE(q, previous);
      previous = q;
    }
  }
}

TEST(Optimize, DecisionsInvariantUnderConsistentScaling) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const auto users = random_users(rng, 7);
    const SchedulerParams p = random_params(rng);
    const auto base = modes(optimize(users, p));
    for (double k : {0.25, 2.0, 8.0}) {
      // Powers scale by k: noise and loss by k, or gain by 1/k, with p_max and
      // the grid step following.
      auto scaled_users = users;
      for (auto& u : scaled_users) u.noise *= k;
      SchedulerParams sp = p;
      sp.loss *= k;
      sp.p_max *= k;
      sp.p_quantum *= k;
      EXPECT_EQ(modes(optimize(scaled_users, sp)), base) << "k " << k;

      SchedulerParams gp = p;
      gp.gain /= k;
      gp.p_max *= k;
      gp.p_quantum *= k;
      EXPECT_EQ(modes(optimize(users, gp)), base) << "gain k " << k;
    }
  }
}

TEST(BruteForce, RefusesLargeInstances) {
  std::mt19937 rng(7);
  EXPECT_THROW(brute_force(random_users(rng, 17), random_params(rng)), SizeError);
}

TEST(Validation, BadUsersAndParams) {
  SchedulerParams p = two_user_params();
  EXPECT_THROW(optimize({{1, 1.0, 2.0, 1.0}}, p), ParameterError);
  EXPECT_THROW(optimize({{1, 2.0, 1.0, 0.0}}, p), ParameterError);
  p.alpha = 1.0;
  EXPECT_THROW(optimize(two_users(), p), ParameterError);
  p = two_user_params();
  p.p_max = 0.0;
  EXPECT_THROW(optimize(two_users(), p), ParameterError);
  p = two_user_params();
  p.p_quantum = 1e-9;
  EXPECT_THROW(optimize(two_users(), p), ParameterError);
}

TEST(JobJson, ParseAndPlanOutput) {
  const std::string job = R"({
    "users": [{"id": 1, "d_direct_bits": 2, "d_keyinfo_bits": 1, "noise": 1.5},
              {"id": 2, "d_direct_bits": 3, "d_keyinfo_bits": 1, "noise": 0.5}],
    "gain": 1, "loss": 1.5, "deadline_s": 1, "p_max": 10, "alpha": 0.5, "p_quantum": 1})";
  const ScheduleJob parsed = parse_schedule_job(job);
  ASSERT_EQ(parsed.users.size(), 2u);
  EXPECT_EQ(parsed.users[1].id, 2);
  EXPECT_EQ(parsed.params.p_quantum, 1.0);

  const auto plan = nlohmann::json::parse(plan_to_json(optimize(parsed.users, parsed.params)));
  EXPECT_DOUBLE_EQ(plan["total_quality"].get<double>(), 1.5);
  ASSERT_EQ(plan["decisions"].size(), 2u);
  EXPECT_EQ(plan["decisions"][0]["x"].get<int>(), 0);
  EXPECT_EQ(plan["decisions"][1]["x"].get<int>(), 1);
  EXPECT_EQ(plan["decisions"][1]["mode"].get<std::string>(), "keyinfo");
}

TEST(JobJson, DefaultQuantumAndErrors) {
  const ScheduleJob job = parse_schedule_job(
      R"({"users": [], "gain": 1, "loss": 0, "deadline_s": 1, "p_max": 3, "alpha": 0.5})");
  EXPECT_LE(job.params.p_quantum, 0.0);
  EXPECT_THROW(parse_schedule_job("not json"), InputError);
  EXPECT_THROW(parse_schedule_job(R"({"users": []})"), InputError);
  EXPECT_THROW(parse_schedule_job(
                   R"({"users": [{"id": 1}], "gain": 1, "loss": 0, "deadline_s": 1, "p_max": 3, "alpha": 0.5})"),
               InputError);
}

}  // namespace
}  // namespace semcomm
