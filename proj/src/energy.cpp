#include "linkmodel/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace linkmodel::energy {

void DeviceProfile::validate() const {
  if (rho_id_w <= 0.0) throw std::invalid_argument("rho_id must be positive");
  if (gamma_xg_mj < 0.0 || gamma_xr_mj < 0.0) {
    throw std::invalid_argument("cross-factors must be non-negative");
  }
  // The fitted models must stay positive over the operating box
  // MCS in [6, 54] Mbps, TXP in [1, 1000] mW; both are linear, so the
  // corners suffice.
  for (double mcs : {6.0, 54.0}) {
    for (double mw : {1.0, 1000.0}) {
      if (rho_tx_w(*this, mcs, mw) <= 0.0) {
        throw std::invalid_argument("rho_tx model non-positive at MCS " +
                                    std::to_string(mcs) + " Mbps, " +
                                    std::to_string(mw) + " mW");
      }
    }
    if (rho_rx_w(*this, mcs) <= 0.0) {
      throw std::invalid_argument("rho_rx model non-positive at MCS " +
                                  std::to_string(mcs) + " Mbps");
    }
  }
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double rho_tx_w(const DeviceProfile& profile, double mcs_mbps, double txp_mw) {
  if (txp_mw <= 0.0) {
    throw std::invalid_argument("the transmit power model is fitted in mW; txp must be > 0");
  }
  return profile.tx.alpha0_w + profile.tx.alpha1_w_per_mbps * mcs_mbps +
         profile.tx.alpha2_w_per_mw * txp_mw;
}

double rho_rx_w(const DeviceProfile& profile, double mcs_mbps) {
  return profile.rx.beta0_w + profile.rx.beta1_w_per_mbps * mcs_mbps;
}

void TrafficLoad::validate() const {
  if (tau_tx < 0.0 || tau_rx < 0.0 || lambda_g_fps < 0.0 || lambda_r_fps < 0.0) {
    throw std::invalid_argument("traffic load terms must be non-negative");
  }
  if (tau_tx + tau_rx > 1.0) {
    throw std::invalid_argument("airtime fractions must sum to at most 1");
  }
}

namespace {

/// Power weights for the attempt process: idle at rho_id, data airtime of
/// attempt i at rho_tx(MCS_i, TXP), the closing ACK of a success at
/// attempt n at rho_rx(MCS_n).
dcf::detail::StateWeights power_weights(const dcf::AttemptPlan& plan,
                                        const DeviceProfile& profile,
                                        double txp_mw) {
  dcf::detail::StateWeights w;
  w.idle = profile.rho_id_w;
  w.tx_per_attempt.resize(plan.modes.size());
  w.rx_per_attempt.resize(plan.modes.size());
  for (std::size_t i = 0; i < plan.modes.size(); ++i) {
    w.tx_per_attempt[i] = rho_tx_w(profile, plan.modes[i].rate_mbps, txp_mw);
    w.rx_per_attempt[i] = rho_rx_w(profile, plan.modes[i].rate_mbps);
  }
  return w;
}

dcf::detail::ExpectedCost energy_cost_uj(const dcf::AttemptPlan& plan,
                                         const dcf::DcfParams& p,
                                         const dcf::SuccessProbabilities& probs,
                                         const DeviceProfile& profile,
                                         double txp_mw) {
  return dcf::detail::expected_cost(plan, p, probs,
                                    power_weights(plan, profile, txp_mw));
}

}  // namespace

double energy_success_mj(const dcf::AttemptPlan& plan, const dcf::DcfParams& p,
                         const DeviceProfile& profile, double txp_mw) {
  dcf::detail::check_plan(plan, p);
  const auto probs = dcf::p_success(plan, p);
  const auto cost = energy_cost_uj(plan, p, probs, profile, txp_mw);
  if (!cost.success) {
    throw DegenerateInputError(
        "energy of a successful transmission is undefined when p_succ = 0");
  }
  return *cost.success / 1000.0;
}

double energy_fail_mj(const dcf::AttemptPlan& plan, const dcf::DcfParams& p,
                      const DeviceProfile& profile, double txp_mw) {
  dcf::detail::check_plan(plan, p);
  const dcf::SuccessProbabilities none{
      0.0, std::vector<double>(static_cast<std::size_t>(p.retry_limit), 0.0)};
  return energy_cost_uj(plan, p, none, profile, txp_mw).fail / 1000.0;
}

EnergyBreakdown energy_per_frame(const dcf::AttemptPlan& plan,
                                 const dcf::DcfParams& p,
                                 const DeviceProfile& profile, double txp_mw) {
  dcf::detail::check_plan(plan, p);
  const auto probs = dcf::p_success(plan, p);
  const auto cost = energy_cost_uj(plan, p, probs, profile, txp_mw);

  EnergyBreakdown eb;
  eb.p_succ = probs.p_succ;
  eb.energy_fail_mj = cost.fail / 1000.0;
  if (cost.success) eb.energy_success_mj = *cost.success / 1000.0;
  eb.energy_per_frame_mj =
      profile.gamma_xg_mj + (1.0 - eb.p_succ) * eb.energy_fail_mj;
  if (eb.energy_success_mj) {
    eb.energy_per_frame_mj += eb.p_succ * *eb.energy_success_mj;
  }
  if (eb.p_succ > 0.0) {
    eb.efficiency_bpj = eb.p_succ * 8.0 * plan.payload_octets /
                        (eb.energy_per_frame_mj * 1e-3);
  }
  return eb;
}

double average_power_w(const DeviceProfile& profile, const TrafficLoad& load,
                       double mcs_mbps, double txp_mw) {
  load.validate();
  return profile.rho_id_w + rho_tx_w(profile, mcs_mbps, txp_mw) * load.tau_tx +
         rho_rx_w(profile, mcs_mbps) * load.tau_rx +
         profile.gamma_xg_mj * 1e-3 * load.lambda_g_fps +
         profile.gamma_xr_mj * 1e-3 * load.lambda_r_fps;
}

}  // namespace linkmodel::energy
