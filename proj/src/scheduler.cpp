#include "semcomm/scheduler.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "semcomm/error.hpp"

namespace semcomm {

namespace {

constexpr std::array<Mode, 3> kPreference{Mode::kDirect, Mode::kKeyInfo, Mode::kSkip};

// Quality is tracked as (direct count, key-info count) so both solvers
// compare exactly the same double, a + b * alpha.
struct Score {
  int direct = 0;
  int keyinfo = 0;
};

double value_of(Score s, double alpha) { return s.direct + s.keyinfo * alpha; }

Score plus(Score s, Mode m) {
  if (m == Mode::kDirect) ++s.direct;
  if (m == Mode::kKeyInfo) ++s.keyinfo;
  return s;
}

void validate(const SchedulerParams& p) {
  if (!(p.gain > 0.0)) throw ParameterError("gain must be > 0");
  if (!(p.deadline > 0.0)) throw ParameterError("deadline must be > 0");
  if (!(p.p_max > 0.0)) throw ParameterError("p_max must be > 0");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw ParameterError("alpha must be in (0, 1)");
  if (!(p.loss >= 0.0)) throw ParameterError("loss must be >= 0");
  if (!std::isfinite(p.p_quantum)) throw ParameterError("p_quantum must be finite");
}

void validate(const UserRequest& u) {
  if (!(u.noise > 0.0)) throw ParameterError("user noise must be > 0");
  if (!(u.d_keyinfo > 0.0 && u.d_keyinfo < u.d_direct)) {
    throw ParameterError("user requires 0 < d_keyinfo < d_direct");
  }
}

double quantum_of(const SchedulerParams& p) {
  return p.p_quantum > 0.0 ? p.p_quantum : p.p_max / kDefaultQuantumDivisor;
}

// Grid form of one user's two transmission options.
struct GridUser {
  double p_direct;
  double p_keyinfo;
  std::int64_t q_direct;  // grid units, or > capacity when unaffordable
  std::int64_t q_keyinfo;
};

struct Grid {
  double quantum;
  std::int64_t capacity;
  std::vector<GridUser> users;
};

std::int64_t to_units(double power, double quantum, std::int64_t capacity) {
  const double units = std::ceil(power / quantum);
  if (!std::isfinite(units) || units > static_cast<double>(capacity)) return capacity + 1;
  return static_cast<std::int64_t>(units);
}

Grid make_grid(const std::vector<UserRequest>& users, const SchedulerParams& p) {
  validate(p);
  Grid g;
  g.quantum = quantum_of(p);
  const double cap = std::floor(p.p_max / g.quantum);
  if (cap > 1e8) throw ParameterError("power grid too fine: p_max / p_quantum exceeds 1e8");
  g.capacity = static_cast<std::int64_t>(cap);
  for (const auto& u : users) {
    validate(u);
    GridUser gu;
    gu.p_direct = required_power(u.d_direct, u.noise, p.gain, p.loss, p.deadline);
    gu.p_keyinfo = required_power(u.d_keyinfo, u.noise, p.gain, p.loss, p.deadline);
    gu.q_direct = to_units(gu.p_direct, g.quantum, g.capacity);
    gu.q_keyinfo = to_units(gu.p_keyinfo, g.quantum, g.capacity);
    g.users.push_back(gu);
  }
  return g;
}

std::int64_t units_for(const GridUser& u, Mode m) {
  switch (m) {
    case Mode::kDirect: return u.q_direct;
    case Mode::kKeyInfo: return u.q_keyinfo;
    case Mode::kSkip: return 0;
  }
  return 0;
}

SchedulePlan make_plan(const std::vector<UserRequest>& users, const Grid& g,
                       const std::vector<Mode>& modes, double alpha) {
  SchedulePlan plan;
  Score score;
  std::int64_t units = 0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    Decision d;
    d.user_id = users[i].id;
    d.x = modes[i];
    const auto q = units_for(g.users[i], modes[i]);
    units += q;
    d.power = static_cast<double>(q) * g.quantum;
    d.required_power = modes[i] == Mode::kDirect    ? g.users[i].p_direct
                       : modes[i] == Mode::kKeyInfo ? g.users[i].p_keyinfo
                                                    : 0.0;
    d.quality = modes[i] == Mode::kDirect ? 1.0 : modes[i] == Mode::kKeyInfo ? alpha : 0.0;
    score = plus(score, modes[i]);
    plan.decisions.push_back(d);
  }
  plan.total_quality = value_of(score, alpha);
  plan.total_power = static_cast<double>(units) * g.quantum;
  return plan;
}

}  // namespace

double required_power(double d, double noise, double gain, double loss, double deadline) {
  if (!(gain > 0.0)) throw ParameterError("gain must be > 0");
  if (!(deadline > 0.0)) throw ParameterError("deadline must be > 0");
  if (!(d >= 0.0)) throw ParameterError("data amount must be >= 0");
  if (d == 0.0) return 0.0;
  const double rate = d / deadline;
  // exp2 is exact on integers; expm1 keeps precision for small rates.
  const double growth = rate < 0.5 ? std::expm1(rate * std::numbers::ln2) : std::exp2(rate) - 1.0;
  return (noise * growth + loss) / gain;
}

double shannon_rate(double power, double noise, double gain, double loss) {
  return std::log1p((power * gain - loss) / noise) / std::numbers::ln2;
}

SchedulePlan optimize(const std::vector<UserRequest>& users, const SchedulerParams& params) {
  const Grid g = make_grid(users, params);
  const std::size_t n = users.size();
  const auto width = static_cast<std::size_t>(g.capacity) + 1;

  // best[i][P]: best score for users i..n-1 within P grid units. This is the
  // F[P][n] recurrence run from the back of the list so the reconstruction
  // below can walk users in input order.
  std::vector<std::vector<Score>> best(n + 1, std::vector<Score>(width));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t budget = 0; budget < width; ++budget) {
      Score chosen = best[i + 1][budget];
      double chosen_value = value_of(chosen, params.alpha);
      for (Mode m : {Mode::kDirect, Mode::kKeyInfo}) {
        const auto q = units_for(g.users[i], m);
        if (q > static_cast<std::int64_t>(budget)) continue;
        const Score s = plus(best[i + 1][budget - static_cast<std::size_t>(q)], m);
        const double v = value_of(s, params.alpha);
        if (v > chosen_value) {
          chosen = s;
          chosen_value = v;
        }
      }
      best[i][budget] = chosen;
    }
  }

  std::vector<Mode> modes(n, Mode::kSkip);
  auto remaining = static_cast<std::size_t>(g.capacity);
  Score prefix;
  const double target = value_of(best[0][remaining], params.alpha);
  for (std::size_t i = 0; i < n; ++i) {
    for (Mode m : kPreference) {
      const auto q = units_for(g.users[i], m);
      if (q > static_cast<std::int64_t>(remaining)) continue;
      const auto left = remaining - static_cast<std::size_t>(q);
      const Score with = plus(prefix, m);
      const Score total{with.direct + best[i + 1][left].direct, with.keyinfo + best[i + 1][left].keyinfo};
      if (value_of(total, params.alpha) == target) {
        modes[i] = m;
        prefix = with;
        remaining = left;
        break;
      }
    }
  }
  return make_plan(users, g, modes, params.alpha);
}

SchedulePlan brute_force(const std::vector<UserRequest>& users, const SchedulerParams& params) {
  if (users.size() > static_cast<std::size_t>(kBruteForceMaxUsers)) {
    throw SizeError("brute force supports at most 16 users");
  }
  const Grid g = make_grid(users, params);
  const std::size_t n = users.size();

  std::vector<int> digits(n, 0);  // index into kPreference
  std::vector<Mode> best_modes(n, Mode::kSkip);
  double best_value = -1.0;
  // Enumerate in lexicographic preference order so the first optimum found
  // is the preferred one.
  while (true) {
    std::int64_t units = 0;
    Score score;
    for (std::size_t i = 0; i < n; ++i) {
      units += units_for(g.users[i], kPreference[digits[i]]);
      score = plus(score, kPreference[digits[i]]);
    }
    if (units <= g.capacity) {
      const double v = value_of(score, params.alpha);
      if (v > best_value) {
        best_value = v;
        for (std::size_t i = 0; i < n; ++i) best_modes[i] = kPreference[digits[i]];
      }
    }
    std::size_t pos = n;
    while (pos > 0 && digits[pos - 1] == 2) digits[--pos] = 0;
    if (pos == 0) break;
    ++digits[pos - 1];
  }
  return make_plan(users, g, best_modes, params.alpha);
}

ScheduleJob parse_schedule_job(const std::string& json_text) {
  ScheduleJob job;
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& u : j.at("users")) {
      UserRequest r;
      r.id = u.at("id").get<std::int64_t>();
      r.d_direct = u.at("d_direct_bits").get<double>();
      r.d_keyinfo = u.at("d_keyinfo_bits").get<double>();
      r.noise = u.at("noise").get<double>();
      validate(r);
      job.users.push_back(r);
    }
    job.params.gain = j.at("gain").get<double>();
    job.params.loss = j.at("loss").get<double>();
    job.params.deadline = j.at("deadline_s").get<double>();
    job.params.p_max = j.at("p_max").get<double>();
    job.params.alpha = j.at("alpha").get<double>();
    job.params.p_quantum = j.value("p_quantum", 0.0);
    validate(job.params);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("schedule job JSON: ") + e.what());
  }
  return job;
}

std::string plan_to_json(const SchedulePlan& plan) {
  nlohmann::ordered_json j;
  j["decisions"] = nlohmann::ordered_json::array();
  for (const auto& d : plan.decisions) {
    const char* mode = d.x == Mode::kDirect ? "direct" : d.x == Mode::kKeyInfo ? "keyinfo" : "skip";
    j["decisions"].push_back({{"id", d.user_id},
                              {"x", static_cast<int>(d.x)},
                              {"mode", mode},
                              {"power", d.power},
                              {"required_power", d.required_power},
                              {"quality", d.quality}});
  }
  j["total_quality"] = plan.total_quality;
  j["total_power"] = plan.total_power;
  return j.dump(2) + "\n";
}

}  // namespace semcomm
