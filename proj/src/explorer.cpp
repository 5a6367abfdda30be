#include "linkmodel/explorer.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace linkmodel::explorer {

dcf::DcfParams LinkScenario::dcf_params() const {
  dcf::DcfParams p;
  p.retry_limit = retry_limit;
  return p;
}

dcf::AttemptPlan LinkScenario::plan(const phy::Mode& m, double snr_db) const {
  return dcf::AttemptPlan::constant(payload_octets, snr_db, m, retry_limit);
}

double LinkScenario::txp_for_snr_dbm(double snr_db) const {
  return snr_db + phy::path_loss_db(channel) + channel.noise_floor_dbm;
}

void SweepGrid::validate() const {
  if (txp_step_db <= 0.0) throw std::invalid_argument("grid step must be positive");
  if (txp_max_dbm < txp_min_dbm) {
    throw std::invalid_argument("grid range is empty");
  }
  if (mode_indices.empty()) throw std::invalid_argument("mode subset is empty");
  for (int idx : mode_indices) phy::mode(idx);  // bounds check
}

std::vector<double> SweepGrid::txp_points_dbm() const {
  validate();
  const int count =
      static_cast<int>(std::floor((txp_max_dbm - txp_min_dbm) / txp_step_db + 0.5)) + 1;
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    points.push_back(txp_min_dbm + i * txp_step_db);
  }
  return points;
}

SweepGrid SweepGrid::from_snr(double snr_min_db, double snr_max_db, double step_db,
                              const LinkScenario& scenario) {
  SweepGrid grid;
  grid.txp_min_dbm = scenario.txp_for_snr_dbm(snr_min_db);
  grid.txp_max_dbm = scenario.txp_for_snr_dbm(snr_max_db);
  grid.txp_step_db = step_db;
  grid.validate();
  return grid;
}

LinkMetrics evaluate(const LinkScenario& scenario,
                     const energy::DeviceProfile& profile, const phy::Mode& m,
                     double txp_dbm) {
  const double snr_db = phy::snr_from_txp_db(txp_dbm, scenario.channel);
  const auto plan = scenario.plan(m, snr_db);
  const auto params = scenario.dcf_params();
  const auto bd = dcf::goodput(plan, params);
  const auto eb = energy::energy_per_frame(plan, params, profile,
                                           energy::dbm_to_mw(txp_dbm));
  LinkMetrics out;
  out.p_succ = bd.p_succ;
  out.expected_duration_us = bd.expected_duration_us;
  out.goodput_mbps = bd.goodput_mbps;
  out.e_frame_mj = eb.energy_per_frame_mj;
  out.efficiency_bpj = eb.efficiency_bpj;
  return out;
}

namespace {

// Equality within 1e-12 relative counts as a tie; ties keep the lower
// mode index.
bool beats(double candidate, double incumbent) {
  const double scale = std::max(std::abs(candidate), std::abs(incumbent));
  return candidate > incumbent + 1e-12 * scale;
}

EnvelopePoint best_at(const SweepGrid& grid, const LinkScenario& scenario,
                      const energy::DeviceProfile& profile, double txp_dbm) {
  EnvelopePoint point;
  point.txp_dbm = txp_dbm;
  point.snr_db = phy::snr_from_txp_db(txp_dbm, scenario.channel);
  bool first = true;
  for (int idx : grid.mode_indices) {
    const auto metrics = evaluate(scenario, profile, phy::mode(idx), txp_dbm);
    if (first || beats(metrics.goodput_mbps, point.goodput_mbps)) {
      point.best_mode = idx;
      point.goodput_mbps = metrics.goodput_mbps;
      point.efficiency_bpj = metrics.efficiency_bpj;
      point.e_frame_mj = metrics.e_frame_mj;
      first = false;
    }
  }
  return point;
}

}  // namespace

std::vector<EnvelopePoint> optimal_envelope(const SweepGrid& grid,
                                            const LinkScenario& scenario,
                                            const energy::DeviceProfile& profile) {
  std::vector<EnvelopePoint> envelope;
  for (double txp : grid.txp_points_dbm()) {
    envelope.push_back(best_at(grid, scenario, profile, txp));
  }
  return envelope;
}

std::vector<SurfaceCell> energy_surface(const SweepGrid& grid,
                                        const LinkScenario& scenario,
                                        const energy::DeviceProfile& profile) {
  std::vector<SurfaceCell> cells;
  const auto points = grid.txp_points_dbm();
  for (int idx : grid.mode_indices) {
    const phy::Mode& m = phy::mode(idx);
    for (double txp : points) {
      cells.push_back({idx, txp, evaluate(scenario, profile, m, txp).e_frame_mj});
    }
  }
  return cells;
}

TradeoffCurve efficiency_vs_goodput(const SweepGrid& grid,
                                    const LinkScenario& scenario,
                                    const energy::DeviceProfile& profile) {
  TradeoffCurve curve;
  curve.points = optimal_envelope(grid, scenario, profile);
  curve.scenario = scenario;
  curve.profile = profile;
  return curve;
}

std::vector<TxpCurvePoint> efficiency_vs_txp(const SweepGrid& grid,
                                             const LinkScenario& scenario,
                                             const energy::DeviceProfile& profile) {
  std::vector<TxpCurvePoint> points;
  for (double txp : grid.txp_points_dbm()) {
    int best_mode = 0;
    double best_goodput = 0.0;
    std::vector<TxpCurvePoint> row;
    bool first = true;
    for (int idx : grid.mode_indices) {
      const auto metrics = evaluate(scenario, profile, phy::mode(idx), txp);
      row.push_back({idx, txp, metrics.goodput_mbps, metrics.efficiency_bpj, 0});
      if (first || beats(metrics.goodput_mbps, best_goodput)) {
        best_mode = idx;
        best_goodput = metrics.goodput_mbps;
        first = false;
      }
    }
    for (auto& p : row) {
      p.best_mode = best_mode;
      points.push_back(p);
    }
  }
  return points;
}

std::vector<TransitionDrop> transition_drops(const TradeoffCurve& curve) {
  std::vector<TransitionDrop> drops;
  const auto goodput_at = [&curve](int mode_idx, double snr_db) {
    const auto plan = curve.scenario.plan(phy::mode(mode_idx), snr_db);
    return dcf::goodput(plan, curve.scenario.dcf_params()).goodput_mbps;
  };
  const auto efficiency_at = [&curve](int mode_idx, double snr_db) {
    const double txp = curve.scenario.txp_for_snr_dbm(snr_db);
    return evaluate(curve.scenario, curve.profile, phy::mode(mode_idx), txp)
        .efficiency_bpj;
  };

  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const auto& before = curve.points[i];
    const auto& after = curve.points[i + 1];
    if (before.best_mode == after.best_mode) continue;

    TransitionDrop drop;
    drop.from_mode = before.best_mode;
    drop.to_mode = after.best_mode;
    drop.delta_goodput_mbps = after.goodput_mbps - before.goodput_mbps;

    // Bisect the goodput crossing of the two branches inside the grid
    // step; both branches are continuous in SNR.
    const auto gap = [&](double snr) {
      return goodput_at(drop.to_mode, snr) - goodput_at(drop.from_mode, snr);
    };
    double lo = before.snr_db;
    double hi = after.snr_db;
    if (gap(lo) >= 0.0) {
      drop.snr_db = lo;
    } else if (gap(hi) <= 0.0) {
      drop.snr_db = hi;
    } else {
      for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? hi : lo) = mid;
      }
      drop.snr_db = 0.5 * (lo + hi);
    }
    drop.delta_efficiency_bpj = efficiency_at(drop.to_mode, drop.snr_db) -
                                efficiency_at(drop.from_mode, drop.snr_db);
    drops.push_back(drop);
  }
  return drops;
}

EnergyParameter parse_energy_parameter(std::string_view name) {
  if (name == "rho_id") return EnergyParameter::kRhoId;
  if (name == "rho_tx") return EnergyParameter::kRhoTx;
  if (name == "rho_rx") return EnergyParameter::kRhoRx;
  if (name == "gamma_xg") return EnergyParameter::kGammaXg;
  throw ConfigError("unknown energy parameter '" + std::string(name) +
                    "'; expected rho_id, rho_tx, rho_rx or gamma_xg");
}

std::string to_string(EnergyParameter parameter) {
  switch (parameter) {
    case EnergyParameter::kRhoId:
      return "rho_id";
    case EnergyParameter::kRhoTx:
      return "rho_tx";
    case EnergyParameter::kRhoRx:
      return "rho_rx";
    case EnergyParameter::kGammaXg:
      return "gamma_xg";
  }
  throw std::invalid_argument("unknown energy parameter");
}

energy::DeviceProfile scaled_profile(const energy::DeviceProfile& profile,
                                     EnergyParameter parameter, double factor) {
  if (factor <= 0.0) throw std::invalid_argument("scale factor must be positive");
  energy::DeviceProfile scaled = profile;
  switch (parameter) {
    case EnergyParameter::kRhoId:
      scaled.rho_id_w *= factor;
      break;
    case EnergyParameter::kRhoTx:
      scaled.tx.alpha0_w *= factor;
      scaled.tx.alpha1_w_per_mbps *= factor;
      scaled.tx.alpha2_w_per_mw *= factor;
      break;
    case EnergyParameter::kRhoRx:
      scaled.rx.beta0_w *= factor;
      scaled.rx.beta1_w_per_mbps *= factor;
      break;
    case EnergyParameter::kGammaXg:
      scaled.gamma_xg_mj *= factor;
      break;
  }
  return scaled;
}

SensitivityResult sensitivity_scan(const energy::DeviceProfile& profile,
                                   EnergyParameter parameter, double factor,
                                   const SweepGrid& grid,
                                   const LinkScenario& scenario) {
  const auto scaled = scaled_profile(profile, parameter, factor);
  SensitivityResult result;
  result.curve = efficiency_vs_goodput(grid, scenario, scaled);
  result.drops = transition_drops(result.curve);
  return result;
}

namespace {

double parse_scenario_number(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad value '" + text + "' for scenario key '" + key + "'");
  }
}

}  // namespace

ScenarioFile parse_scenario(std::istream& in) {
  ScenarioFile file;
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    std::string value;
    if (!(fields >> value)) {
      throw ConfigError("scenario key '" + key + "' has no value");
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError("duplicate scenario key '" + key + "'");
    }
  }
  for (const auto& [key, text] : values) {
    if (key == "noise_floor_dbm") {
      file.scenario.channel.noise_floor_dbm = parse_scenario_number(text, key);
    } else if (key == "frequency_mhz") {
      file.scenario.channel.frequency_mhz = parse_scenario_number(text, key);
    } else if (key == "distance_m") {
      file.scenario.channel.distance_m = parse_scenario_number(text, key);
    } else if (key == "payload_octets") {
      file.scenario.payload_octets =
          static_cast<int>(parse_scenario_number(text, key));
    } else if (key == "retry_limit") {
      file.scenario.retry_limit = static_cast<int>(parse_scenario_number(text, key));
    } else if (key == "txp_min_dbm") {
      file.grid.txp_min_dbm = parse_scenario_number(text, key);
    } else if (key == "txp_max_dbm") {
      file.grid.txp_max_dbm = parse_scenario_number(text, key);
    } else if (key == "txp_step_db") {
      file.grid.txp_step_db = parse_scenario_number(text, key);
    } else {
      throw ConfigError("unknown scenario key '" + key + "'");
    }
  }
  if (file.scenario.payload_octets < 1 ||
      file.scenario.payload_octets > phy::kMaxPayloadOctets) {
    throw ConfigError("scenario key 'payload_octets' must be 1..2304");
  }
  if (file.scenario.retry_limit < 1) {
    throw ConfigError("scenario key 'retry_limit' must be >= 1");
  }
  try {
    phy::path_loss_db(file.scenario.channel);
    file.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario '" + path + "'");
  return parse_scenario(in);
}

}  // namespace linkmodel::explorer
