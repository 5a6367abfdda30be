#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "linkmodel/energy.hpp"

namespace linkmodel::explorer {

/// Channel, payload and retry configuration of one evaluated link.
struct LinkScenario {
  phy::ChannelModel channel;
  int payload_octets = 1500;
  int retry_limit = 7;

  dcf::DcfParams dcf_params() const;
  dcf::AttemptPlan plan(const phy::Mode& m, double snr_db) const;

  /// TXP that produces the given receiver SNR on this channel (the
  /// inverse of snr_from_txp).
  double txp_for_snr_dbm(double snr_db) const;
};

/// TXP sweep range and the mode subset to evaluate.
struct SweepGrid {
  double txp_min_dbm = 0.0;
  double txp_max_dbm = 30.0;
  double txp_step_db = 0.1;
  std::vector<int> mode_indices = {1, 2, 3, 4, 5, 6, 7, 8};

  void validate() const;
  std::vector<double> txp_points_dbm() const;

  /// Grid anchored on receiver SNR instead of TXP.
  static SweepGrid from_snr(double snr_min_db, double snr_max_db, double step_db,
                            const LinkScenario& scenario);
};

/// Bundled closed-form outputs of one (mode, TXP) configuration.
struct LinkMetrics {
  double p_succ = 0.0;
  double expected_duration_us = 0.0;
  double goodput_mbps = 0.0;
  double e_frame_mj = 0.0;
  double efficiency_bpj = 0.0;
};

LinkMetrics evaluate(const LinkScenario& scenario,
                     const energy::DeviceProfile& profile, const phy::Mode& m,
                     double txp_dbm);

struct EnvelopePoint {
  double snr_db = 0.0;
  double txp_dbm = 0.0;
  int best_mode = 0;
  double goodput_mbps = 0.0;
  double efficiency_bpj = 0.0;
  double e_frame_mj = 0.0;
};

/// Goodput-argmax mode per grid point, ties broken toward the lower mode
/// index, with the metrics of the winning configuration.
std::vector<EnvelopePoint> optimal_envelope(const SweepGrid& grid,
                                            const LinkScenario& scenario,
                                            const energy::DeviceProfile& profile);

struct SurfaceCell {
  int mode = 0;
  double txp_dbm = 0.0;
  double e_frame_mj = 0.0;
};

/// Expected energy per frame over mode x TXP.
std::vector<SurfaceCell> energy_surface(const SweepGrid& grid,
                                        const LinkScenario& scenario,
                                        const energy::DeviceProfile& profile);

/// The optimal-goodput envelope together with the context needed to
/// refine transitions.
struct TradeoffCurve {
  std::vector<EnvelopePoint> points;
  LinkScenario scenario;
  energy::DeviceProfile profile;
};

/// Efficiency at the goodput-optimal configuration, per grid point.
TradeoffCurve efficiency_vs_goodput(const SweepGrid& grid,
                                    const LinkScenario& scenario,
                                    const energy::DeviceProfile& profile);

struct TxpCurvePoint {
  int mode = 0;
  double txp_dbm = 0.0;
  double goodput_mbps = 0.0;
  double efficiency_bpj = 0.0;
  int best_mode = 0;  // goodput-argmax mode at this TXP
};

/// Per-mode efficiency against TXP, annotated with the goodput-optimal
/// mode per grid point.
std::vector<TxpCurvePoint> efficiency_vs_txp(const SweepGrid& grid,
                                             const LinkScenario& scenario,
                                             const energy::DeviceProfile& profile);

struct TransitionDrop {
  int from_mode = 0;
  int to_mode = 0;
  double snr_db = 0.0;  // goodput crossing of the two modes, bisected
  // Efficiency jump between the two modes' branches at the crossing SNR.
  double delta_efficiency_bpj = 0.0;
  // Envelope goodput change across the enclosing grid step.
  double delta_goodput_mbps = 0.0;
};

/// One record per consecutive best-mode change along the curve.
std::vector<TransitionDrop> transition_drops(const TradeoffCurve& curve);

enum class EnergyParameter { kRhoId, kRhoTx, kRhoRx, kGammaXg };

EnergyParameter parse_energy_parameter(std::string_view name);
std::string to_string(EnergyParameter parameter);

/// Profile with one energy parameter scaled by the given factor. For the
/// rho_tx / rho_rx models every coefficient of that model is scaled.
energy::DeviceProfile scaled_profile(const energy::DeviceProfile& profile,
                                     EnergyParameter parameter, double factor);

struct SensitivityResult {
  TradeoffCurve curve;
  std::vector<TransitionDrop> drops;
};

/// Trade-off curve and drops recomputed under the scaled profile. The
/// goodput-argmax mode per grid point is unaffected by energy parameters.
SensitivityResult sensitivity_scan(const energy::DeviceProfile& profile,
                                   EnergyParameter parameter, double factor,
                                   const SweepGrid& grid,
                                   const LinkScenario& scenario);

/// Scenario files: plain-text key-value records.
struct ScenarioFile {
  LinkScenario scenario;
  SweepGrid grid;
};

ScenarioFile parse_scenario(std::istream& in);
ScenarioFile load_scenario(const std::string& path);

}  // namespace linkmodel::explorer
