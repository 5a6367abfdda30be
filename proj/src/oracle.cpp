#include "linkmodel/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace linkmodel::oracle {

namespace {

// Engine output is standard-specified; the mappings below avoid the
// library-dependent std distributions so results are portable.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

bool bernoulli(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return static_cast<double>(rng() >> 11) * 0x1p-53 < p;
}

}  // namespace

SimResult simulate(const SimConfig& config) {
  if (config.frames < 1) throw std::invalid_argument("need at least one frame");
  dcf::detail::check_plan(config.plan, config.dcf);

  const int n_max = config.dcf.retry_limit;
  const double txp_mw = energy::dbm_to_mw(config.txp_dbm);
  const double rho_id = config.profile.rho_id_w;

  // Per-attempt constants.
  std::vector<double> q = dcf::attempt_success_probs(config.plan);
  std::vector<double> t_data(q.size()), t_ack(q.size()), wait_after(q.size());
  std::vector<double> rho_tx(q.size()), rho_rx(q.size());
  std::vector<std::uint64_t> cw(q.size());
  for (int i = 0; i < n_max; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const phy::Mode& m = config.plan.modes[k];
    t_data[k] = phy::t_data_us(config.plan.payload_octets, m);
    t_ack[k] = phy::t_ack_us(phy::ack_mode_for(m));
    wait_after[k] = config.dcf.sifs_us + t_ack[k] + config.dcf.difs_us;
    rho_tx[k] = energy::rho_tx_w(config.profile, m.rate_mbps, txp_mw);
    rho_rx[k] = energy::rho_rx_w(config.profile, m.rate_mbps);
    cw[k] = static_cast<std::uint64_t>(dcf::contention_window(i + 1, config.dcf));
  }

  std::mt19937_64 rng(config.seed);

  const double payload_bits = 8.0 * config.plan.payload_octets;
  double sum_bits = 0.0, sum_dur = 0.0;
  double sum_bits2 = 0.0, sum_dur2 = 0.0, sum_bits_dur = 0.0;
  double sum_e = 0.0, sum_e2 = 0.0;
  std::uint64_t successes = 0;

  for (std::uint64_t frame = 0; frame < config.frames; ++frame) {
    double duration_us = 0.0;
    double energy_uj = config.profile.gamma_xg_mj * 1000.0;
    bool delivered = false;
    for (int i = 0; i < n_max; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const double backoff_us =
          static_cast<double>(bounded_uniform(rng, cw[k] + 1)) * config.dcf.slot_us;
      duration_us += backoff_us + t_data[k];
      energy_uj += rho_id * backoff_us + rho_tx[k] * t_data[k];
      if (bernoulli(rng, q[k])) {
        duration_us += config.dcf.sifs_us + t_ack[k] + config.dcf.difs_us;
        energy_uj += rho_id * (config.dcf.sifs_us + config.dcf.difs_us) +
                     rho_rx[k] * t_ack[k];
        delivered = true;
        break;
      }
      duration_us += wait_after[k];
      energy_uj += rho_id * wait_after[k];
    }
    const double bits = delivered ? payload_bits : 0.0;
    if (delivered) ++successes;
    sum_bits += bits;
    sum_dur += duration_us;
    sum_bits2 += bits * bits;
    sum_dur2 += duration_us * duration_us;
    sum_bits_dur += bits * duration_us;
    sum_e += energy_uj;
    sum_e2 += energy_uj * energy_uj;
  }

  const double n = static_cast<double>(config.frames);
  const double mean_bits = sum_bits / n;
  const double mean_dur = sum_dur / n;
  const double mean_e = sum_e / n;

  SimResult result;
  result.p_succ_est = static_cast<double>(successes) / n;
  result.goodput_est_mbps = sum_bits / sum_dur;  // bits over us
  result.e_frame_est_mj = mean_e / 1000.0;

  if (config.frames > 1) {
    const double denom = n - 1.0;
    const double var_bits = (sum_bits2 - n * mean_bits * mean_bits) / denom;
    const double var_dur = (sum_dur2 - n * mean_dur * mean_dur) / denom;
    const double cov = (sum_bits_dur - n * mean_bits * mean_dur) / denom;
    const double ratio = result.goodput_est_mbps;
    // delta-method variance of the ratio-of-means estimator
    const double var_ratio =
        (var_bits - 2.0 * ratio * cov + ratio * ratio * var_dur) /
        (mean_dur * mean_dur * n);
    result.stderr_goodput_mbps = std::sqrt(std::max(0.0, var_ratio));
    const double var_e = (sum_e2 - n * mean_e * mean_e) / denom;
    result.stderr_e_frame_mj = std::sqrt(std::max(0.0, var_e / n)) / 1000.0;
  }
  return result;
}

}  // namespace linkmodel::oracle
