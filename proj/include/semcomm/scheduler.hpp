#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semcomm {

struct UserRequest {
  std::int64_t id = 0;
  double d_direct = 0.0;   // bits for full-frame transmission
  double d_keyinfo = 0.0;  // bits for the key-information crop, < d_direct
  double noise = 1.0;      // linear noise power
};

struct SchedulerParams {
  double gain = 1.0;
  double loss = 0.0;
  double deadline = 1.0;  // seconds
  double p_max = 1.0;
  double alpha = 0.5;       // quality of a key-information transmission
  double p_quantum = 0.0;   // <= 0 selects p_max / 1e4
};

enum class Mode : int { kSkip = -1, kDirect = 0, kKeyInfo = 1 };

struct Decision {
  std::int64_t user_id = 0;
  Mode x = Mode::kSkip;
  double power = 0.0;          // grid-rounded power charged against the budget
  double required_power = 0.0; // continuous Shannon requirement
  double quality = 0.0;
};

struct SchedulePlan {
  std::vector<Decision> decisions;
  double total_quality = 0.0;
  double total_power = 0.0;
};

inline constexpr int kBruteForceMaxUsers = 16;
inline constexpr double kDefaultQuantumDivisor = 1e4;

// Power that makes a d-bit transmission finish exactly at the deadline:
// (noise * (2^(d/deadline) - 1) + loss) / gain, and 0 for d = 0.
double required_power(double d, double noise, double gain, double loss, double deadline);

// Shannon rate log2(1 + (P G - L) / N) in bits per second.
double shannon_rate(double power, double noise, double gain, double loss);

// Knapsack DP over the quantised power grid maximising total quality.
// Among optimal plans the first user (in input order) prefers direct, then
// key-info, then skip, and so on down the list.
SchedulePlan optimize(const std::vector<UserRequest>& users, const SchedulerParams& params);

// 3^n enumeration on the same grid with the same tie-break. n <= 16.
SchedulePlan brute_force(const std::vector<UserRequest>& users, const SchedulerParams& params);

// Job/plan JSON as used by the `schedule` command.
struct ScheduleJob {
  std::vector<UserRequest> users;
  SchedulerParams params;
};
ScheduleJob parse_schedule_job(const std::string& json_text);
std::string plan_to_json(const SchedulePlan& plan);

}  // namespace semcomm
