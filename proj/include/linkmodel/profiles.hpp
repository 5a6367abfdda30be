#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkmodel/energy.hpp"

namespace linkmodel::profiles {

/// One measured operating point of a device's radio power draw.
struct MeasurementRecord {
  double mcs_mbps = 0.0;
  double txp_mw = 0.0;
  double rho_tx_w = 0.0;
  std::optional<double> rho_rx_w;  // may be absent per record
};

struct FitCoefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
};

struct FitResult {
  std::vector<FitCoefficient> coefficients;
  double adjusted_r2 = 0.0;
};

/// The five bundled device profiles. rho_id and the cross-factors carry
/// documented placeholder values (2.0 W, 0.25 mJ); the power-model
/// coefficients are measured.
std::span<const energy::DeviceProfile> builtin_profiles();

/// Builtin profile by name, or nullptr.
const energy::DeviceProfile* find_builtin(std::string_view name);

/// Least-squares fit of rho_tx = a0 + a1 * MCS + a2 * TXP[mW].
FitResult fit_tx(std::span<const MeasurementRecord> records);

/// Least-squares fit of rho_rx = b0 + b1 * MCS over the records that
/// carry a reception measurement.
FitResult fit_rx(std::span<const MeasurementRecord> records);

/// CSV with header mcs_mbps,txp_mw,rho_tx_w,rho_rx_w (rho_rx_w may be
/// empty per row).
std::vector<MeasurementRecord> parse_measurements_csv(std::istream& in);
std::vector<MeasurementRecord> load_measurements_csv(const std::string& path);

/// coefficient,estimate,stderr rows plus an adjusted_r2 summary line.
void write_fit_report_csv(std::ostream& out, const FitResult& fit);

/// Plain-text key-value profile files.
energy::DeviceProfile parse_profile(std::istream& in);
energy::DeviceProfile load_profile(const std::string& path);
void write_profile(std::ostream& out, const energy::DeviceProfile& profile);

/// Builtin name, or a path to a profile file.
energy::DeviceProfile resolve_profile(const std::string& name_or_path);

}  // namespace linkmodel::profiles
