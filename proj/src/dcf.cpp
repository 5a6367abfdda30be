#include "linkmodel/dcf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace linkmodel::dcf {

namespace {

bool is_pow2_minus_1(int v) { return v > 0 && (v & (v + 1)) == 0; }

}  // namespace

void DcfParams::validate() const {
  if (slot_us <= 0.0 || sifs_us <= 0.0 || difs_us <= 0.0) {
    throw std::invalid_argument("slot, SIFS and DIFS must be positive");
  }
  if (retry_limit < 1) {
    throw std::invalid_argument("retry limit must be >= 1");
  }
  if (!is_pow2_minus_1(cw_min) || !is_pow2_minus_1(cw_max) || cw_min >= cw_max) {
    throw std::invalid_argument(
        "contention windows must be of the form 2^k - 1 with cw_min < cw_max");
  }
}

AttemptPlan AttemptPlan::constant(int payload_octets, double snr_db,
                                  const phy::Mode& m, int attempts) {
  if (attempts < 1) throw std::invalid_argument("need at least one attempt");
  AttemptPlan plan;
  plan.payload_octets = payload_octets;
  plan.snr_db.assign(static_cast<std::size_t>(attempts), snr_db);
  plan.modes.assign(static_cast<std::size_t>(attempts), m);
  return plan;
}

namespace detail {

void check_plan(const AttemptPlan& plan, const DcfParams& p) {
  p.validate();
  if (plan.snr_db.size() != plan.modes.size()) {
    throw std::invalid_argument("per-attempt snr and mode lists differ in length");
  }
  if (plan.attempts() != p.retry_limit) {
    throw std::invalid_argument("plan covers " + std::to_string(plan.attempts()) +
                                " attempts but the retry limit is " +
                                std::to_string(p.retry_limit));
  }
  if (plan.payload_octets < 1 || plan.payload_octets > phy::kMaxPayloadOctets) {
    throw std::invalid_argument("payload must be 1..2304 octets");
  }
}

}  // namespace detail

int contention_window(int attempt, const DcfParams& p) {
  if (attempt < 1) throw std::invalid_argument("attempt numbering starts at 1");
  const int doublings = std::min(attempt - 1, 30);
  const long grown = static_cast<long>(p.cw_min + 1) << doublings;
  return static_cast<int>(std::min<long>(grown, p.cw_max + 1)) - 1;
}

double mean_backoff_us(int attempt, const DcfParams& p) {
  p.validate();
  if (attempt < 1 || attempt > p.retry_limit) {
    throw std::invalid_argument("backoff attempt must be 1..retry_limit");
  }
  return p.slot_us * contention_window(attempt, p) / 2.0;
}

double mean_wait_us(int attempt, const AttemptPlan& plan, const DcfParams& p) {
  detail::check_plan(plan, p);
  if (attempt < 2 || attempt > p.retry_limit + 1) {
    throw std::invalid_argument("no wait precedes attempt 1; valid range is 2..retry_limit+1");
  }
  const phy::Mode& prev = plan.modes[static_cast<std::size_t>(attempt - 2)];
  return p.sifs_us + phy::t_ack_us(phy::ack_mode_for(prev)) + p.difs_us;
}

std::vector<double> attempt_success_probs(const AttemptPlan& plan) {
  return attempt_success_probs(plan, phy::CodeSpectrumTable::builtin());
}

std::vector<double> attempt_success_probs(const AttemptPlan& plan,
                                          const phy::CodeSpectrumTable& table) {
  std::vector<double> q(plan.modes.size());
  for (std::size_t i = 0; i < plan.modes.size(); ++i) {
    q[i] = 1.0 - phy::packet_error_rate(plan.payload_octets, plan.snr_db[i],
                                        plan.modes[i], table);
  }
  return q;
}

SuccessProbabilities success_probabilities(std::span<const double> q) {
  SuccessProbabilities out;
  out.at_attempt.resize(q.size());
  double all_fail = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < 0.0 || q[i] > 1.0) {
      throw std::invalid_argument("attempt success probabilities must be in [0, 1]");
    }
    out.at_attempt[i] = all_fail * q[i];
    all_fail *= 1.0 - q[i];
  }
  out.p_succ = 1.0 - all_fail;
  return out;
}

SuccessProbabilities p_success(const AttemptPlan& plan, const DcfParams& p) {
  detail::check_plan(plan, p);
  return success_probabilities(attempt_success_probs(plan));
}

namespace detail {

StateWeights StateWeights::unit(int attempts) {
  StateWeights w;
  w.idle = 1.0;
  w.tx_per_attempt.assign(static_cast<std::size_t>(attempts), 1.0);
  w.rx_per_attempt.assign(static_cast<std::size_t>(attempts), 1.0);
  return w;
}

ExpectedCost expected_cost(const AttemptPlan& plan, const DcfParams& p,
                           const SuccessProbabilities& probs,
                           const StateWeights& w) {
  const int n_max = p.retry_limit;
  const auto idx = [](int attempt) { return static_cast<std::size_t>(attempt - 1); };

  std::vector<double> t_data(static_cast<std::size_t>(n_max));
  std::vector<double> t_ack(static_cast<std::size_t>(n_max));
  for (int i = 1; i <= n_max; ++i) {
    const phy::Mode& m = plan.modes[idx(i)];
    t_data[idx(i)] = phy::t_data_us(plan.payload_octets, m);
    t_ack[idx(i)] = phy::t_ack_us(phy::ack_mode_for(m));
  }

  ExpectedCost cost;

  // Failure path: every attempt is followed by its ACK-timeout wait.
  for (int i = 1; i <= n_max; ++i) {
    const double wait = p.sifs_us + t_ack[idx(i)] + p.difs_us;
    cost.fail += w.idle * (mean_backoff_us(i, p) + wait) +
                 w.tx_per_attempt[idx(i)] * t_data[idx(i)];
  }

  // Success path: attempts 2..n each add backoff + data + the wait that
  // preceded them; the successful attempt n closes with SIFS + ACK + DIFS.
  double prefix = 0.0;
  double weighted_sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    if (n >= 2) {
      const double wait = p.sifs_us + t_ack[idx(n - 1)] + p.difs_us;
      prefix += w.idle * (mean_backoff_us(n, p) + wait) +
                w.tx_per_attempt[idx(n)] * t_data[idx(n)];
    }
    const double attempt_n = prefix +
                             w.idle * (mean_backoff_us(1, p) + p.sifs_us + p.difs_us) +
                             w.tx_per_attempt[idx(1)] * t_data[idx(1)] +
                             w.rx_per_attempt[idx(n)] * t_ack[idx(n)];
    weighted_sum += probs.at_attempt[idx(n)] * attempt_n;
  }
  if (probs.p_succ > 0.0) {
    cost.success = weighted_sum / probs.p_succ;
  }
  return cost;
}

}  // namespace detail

double duration_success_us(const AttemptPlan& plan, const DcfParams& p) {
  detail::check_plan(plan, p);
  const auto probs = p_success(plan, p);
  const auto cost = detail::expected_cost(plan, p, probs,
                                          detail::StateWeights::unit(p.retry_limit));
  if (!cost.success) {
    throw DegenerateInputError(
        "duration of a successful transmission is undefined when p_succ = 0");
  }
  return *cost.success;
}

double duration_fail_us(const AttemptPlan& plan, const DcfParams& p) {
  detail::check_plan(plan, p);
  const auto probs = success_probabilities(std::vector<double>(
      static_cast<std::size_t>(p.retry_limit), 0.0));
  return detail::expected_cost(plan, p, probs,
                               detail::StateWeights::unit(p.retry_limit))
      .fail;
}

GoodputBreakdown goodput(const AttemptPlan& plan, const DcfParams& p) {
  detail::check_plan(plan, p);
  const auto probs = p_success(plan, p);
  const auto cost = detail::expected_cost(plan, p, probs,
                                          detail::StateWeights::unit(p.retry_limit));
  GoodputBreakdown bd;
  bd.p_succ = probs.p_succ;
  bd.p_succ_at_attempt = probs.at_attempt;
  bd.duration_fail_us = cost.fail;
  bd.duration_success_us = cost.success;
  bd.expected_duration_us = (1.0 - bd.p_succ) * bd.duration_fail_us;
  if (cost.success) {
    bd.expected_duration_us += bd.p_succ * *cost.success;
  }
  if (bd.p_succ > 0.0) {
    // bits over us is Mbps
    bd.goodput_mbps = bd.p_succ * 8.0 * plan.payload_octets / bd.expected_duration_us;
  }
  return bd;
}

}  // namespace linkmodel::dcf
