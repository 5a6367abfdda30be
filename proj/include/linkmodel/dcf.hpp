#pragma once

#include <optional>
#include <span>
#include <vector>

#include "linkmodel/phy.hpp"

namespace linkmodel::dcf {

/// 802.11a DCF MAC parameters.
struct DcfParams {
  double slot_us = 9.0;
  double sifs_us = 16.0;
  double difs_us = 34.0;
  int cw_min = 15;
  int cw_max = 1023;
  int retry_limit = 7;  // n_max

  void validate() const;
};

/// Per-attempt channel state and MCS for the up to retry_limit attempts
/// of one frame. Both lists have one entry per attempt.
struct AttemptPlan {
  int payload_octets = 1500;
  std::vector<double> snr_db;
  std::vector<phy::Mode> modes;

  /// The evaluation assumption of interest: one (snr, mode) pair held
  /// constant across all retries.
  static AttemptPlan constant(int payload_octets, double snr_db,
                              const phy::Mode& m, int attempts);

  int attempts() const { return static_cast<int>(modes.size()); }
};

struct SuccessProbabilities {
  double p_succ = 0.0;
  std::vector<double> at_attempt;  // Pr[success exactly at attempt n]
};

struct GoodputBreakdown {
  double p_succ = 0.0;
  std::vector<double> p_succ_at_attempt;
  std::optional<double> duration_success_us;  // absent when p_succ == 0
  double duration_fail_us = 0.0;
  double expected_duration_us = 0.0;  // E[D_data]
  double goodput_mbps = 0.0;
};

/// Mean backoff before attempt i (1-based): slot * CW(i) / 2 with the
/// contention window doubling from cw_min and saturating at cw_max.
double mean_backoff_us(int attempt, const DcfParams& p);

/// Contention window used for attempt i.
int contention_window(int attempt, const DcfParams& p);

/// Mean wait preceding attempt i (2 <= i <= retry_limit + 1): the ACK
/// timeout window SIFS + T_ACK + DIFS after the failed attempt i - 1.
double mean_wait_us(int attempt, const AttemptPlan& plan, const DcfParams& p);

/// Per-attempt success probabilities q_i = 1 - PER(l, s_i, m_i).
std::vector<double> attempt_success_probs(const AttemptPlan& plan);
std::vector<double> attempt_success_probs(const AttemptPlan& plan,
                                          const phy::CodeSpectrumTable& table);

/// Attempt-count distribution for independent per-attempt successes.
SuccessProbabilities success_probabilities(std::span<const double> q);

SuccessProbabilities p_success(const AttemptPlan& plan, const DcfParams& p);

/// Mean duration of a successful transmission, conditioned on success.
/// DegenerateInputError when p_succ is exactly zero.
double duration_success_us(const AttemptPlan& plan, const DcfParams& p);

/// Time spent when all retry_limit attempts fail.
double duration_fail_us(const AttemptPlan& plan, const DcfParams& p);

/// Expected effective goodput with the full breakdown.
GoodputBreakdown goodput(const AttemptPlan& plan, const DcfParams& p);

namespace detail {

/// Weights applied to the idle, transmit and receive intervals of the
/// attempt process. Unit weights give durations in us; power weights in
/// W give energies in uJ.
struct StateWeights {
  double idle = 1.0;
  std::vector<double> tx_per_attempt;   // on t_data of attempt i
  std::vector<double> rx_per_attempt;   // on t_ack when success is at attempt n

  static StateWeights unit(int attempts);
};

struct ExpectedCost {
  std::optional<double> success;  // conditional on success; absent if p_succ == 0
  double fail = 0.0;
};

/// Shared accumulation of the success/failure attempt processes.
ExpectedCost expected_cost(const AttemptPlan& plan, const DcfParams& p,
                           const SuccessProbabilities& probs,
                           const StateWeights& w);

void check_plan(const AttemptPlan& plan, const DcfParams& p);

}  // namespace detail

}  // namespace linkmodel::dcf
