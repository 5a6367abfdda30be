#pragma once

#include <optional>
#include <string>

#include "linkmodel/dcf.hpp"

namespace linkmodel::energy {

struct TxPowerCoeffs {
  double alpha0_w = 0.0;
  double alpha1_w_per_mbps = 0.0;
  double alpha2_w_per_mw = 0.0;
};

struct RxPowerCoeffs {
  double beta0_w = 0.0;
  double beta1_w_per_mbps = 0.0;
};

/// The five per-device energy parameters: idle power, per-frame
/// generation/reception cross-factors, and the fitted linear transmit and
/// receive power models.
struct DeviceProfile {
  std::string name;
  double rho_id_w = 0.0;
  double gamma_xg_mj = 0.0;  // per generated frame
  double gamma_xr_mj = 0.0;  // per received frame
  TxPowerCoeffs tx;
  RxPowerCoeffs rx;
  // rho_id and the cross-factors are not part of the fitted models; true
  // for profiles whose values are stand-ins rather than measurements.
  bool placeholder_energy_constants = false;

  void validate() const;
};

/// mW = 10^(dBm / 10). The one place where the dBm domain of the channel
/// math meets the mW domain of the fitted power models.
double dbm_to_mw(double dbm);

/// Transmit-state power alpha0 + alpha1 * MCS + alpha2 * TXP[mW].
double rho_tx_w(const DeviceProfile& profile, double mcs_mbps, double txp_mw);

/// Receive-state power beta0 + beta1 * MCS.
double rho_rx_w(const DeviceProfile& profile, double mcs_mbps);

struct TrafficLoad {
  double tau_tx = 0.0;       // transmit airtime fraction
  double tau_rx = 0.0;       // receive airtime fraction
  double lambda_g_fps = 0.0;  // generated frames per second
  double lambda_r_fps = 0.0;  // received frames per second

  void validate() const;
};

struct EnergyBreakdown {
  double p_succ = 0.0;
  std::optional<double> energy_success_mj;  // absent when p_succ == 0
  double energy_fail_mj = 0.0;
  double energy_per_frame_mj = 0.0;  // E[E_data], includes gamma_xg
  double efficiency_bpj = 0.0;       // mu
};

/// Mean energy of a successful transmission, conditioned on success:
/// idle intervals weighted by rho_id, data airtime by rho_tx, the final
/// ACK by rho_rx evaluated at the data MCS.
double energy_success_mj(const dcf::AttemptPlan& plan, const dcf::DcfParams& p,
                         const DeviceProfile& profile, double txp_mw);

/// Energy wasted when all attempts fail.
double energy_fail_mj(const dcf::AttemptPlan& plan, const dcf::DcfParams& p,
                      const DeviceProfile& profile, double txp_mw);

/// Expected energy per transmitted frame and the resulting energy
/// efficiency in bits per Joule. The reception cross-factor gamma_xr does
/// not enter: ACKs are handled in the network card alone.
EnergyBreakdown energy_per_frame(const dcf::AttemptPlan& plan,
                                 const dcf::DcfParams& p,
                                 const DeviceProfile& profile, double txp_mw);

/// Average device power under a steady traffic load.
double average_power_w(const DeviceProfile& profile, const TrafficLoad& load,
                       double mcs_mbps, double txp_mw);

}  // namespace linkmodel::energy
