#include "linkmodel/profiles.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "linkmodel/csv.hpp"

namespace linkmodel::profiles {

namespace {

constexpr double kPlaceholderRhoIdW = 2.0;
constexpr double kPlaceholderGammaXgMj = 0.25;
constexpr double kPlaceholderGammaXrMj = 0.25;

energy::DeviceProfile make_builtin(std::string name, energy::TxPowerCoeffs tx,
                                   energy::RxPowerCoeffs rx) {
  energy::DeviceProfile p;
  p.name = std::move(name);
  p.rho_id_w = kPlaceholderRhoIdW;
  p.gamma_xg_mj = kPlaceholderGammaXgMj;
  p.gamma_xr_mj = kPlaceholderGammaXrMj;
  p.tx = tx;
  p.rx = rx;
  p.placeholder_energy_constants = true;
  return p;
}

const std::array<energy::DeviceProfile, 5>& builtin_array() {
  static const std::array<energy::DeviceProfile, 5> profiles = {
      make_builtin("htc-legend-example", {0.354, 0.0052, 0.021}, {0.013, 0.00643}),
      make_builtin("linksys-wrt54g-example", {0.540, 0.0028, 0.075}, {0.14, 0.0130}),
      make_builtin("raspberrypi-example", {0.478, 0.0008, 0.044}, {-0.0062, 0.00146}),
      make_builtin("galaxy-note-10.1-example", {0.572, 0.0017, 0.0105}, {0.0409, 0.00173}),
      make_builtin("soekris-net4826-48-example", {0.17, 0.0170, 0.101}, {0.010, 0.0237}),
  };
  return profiles;
}

}  // namespace

std::span<const energy::DeviceProfile> builtin_profiles() { return builtin_array(); }

const energy::DeviceProfile* find_builtin(std::string_view name) {
  for (const auto& p : builtin_array()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

FitResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
              const std::vector<std::string>& names) {
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();

  // A regressor with no variation cannot be separated from the intercept.
  for (Eigen::Index j = 1; j < k; ++j) {
    if (design.col(j).maxCoeff() == design.col(j).minCoeff()) {
      throw ConfigError("regressor '" + names[static_cast<std::size_t>(j)] +
                        "' is constant across records; the design matrix is rank-deficient");
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k) {
    const auto perm = qr.colsPermutation().indices();
    std::string culprits;
    for (Eigen::Index j = qr.rank(); j < k; ++j) {
      if (!culprits.empty()) culprits += ", ";
      culprits += names[static_cast<std::size_t>(perm[j])];
    }
    throw ConfigError("design matrix is rank-deficient; collinear regressor(s): " + culprits);
  }

  const Eigen::VectorXd beta = qr.solve(response);
  const Eigen::VectorXd residuals = response - design * beta;
  const double rss = residuals.squaredNorm();
  const double sigma2 = rss / static_cast<double>(n - k);
  const Eigen::MatrixXd xtx_inv =
      (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(k, k));

  FitResult fit;
  fit.coefficients.resize(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    auto& c = fit.coefficients[static_cast<std::size_t>(j)];
    c.name = names[static_cast<std::size_t>(j)];
    c.estimate = beta[j];
    c.std_error = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
  }

  const double tss = (response.array() - response.mean()).square().sum();
  const double r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  fit.adjusted_r2 =
      1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(n - k);
  return fit;
}

}  // namespace

FitResult fit_tx(std::span<const MeasurementRecord> records) {
  std::set<std::pair<double, double>> distinct;
  for (const auto& r : records) distinct.emplace(r.mcs_mbps, r.txp_mw);
  if (distinct.size() < 4) {
    throw ConfigError("fitting rho_tx needs at least 4 distinct (mcs, txp) points, got " +
                      std::to_string(distinct.size()));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd response(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = r.mcs_mbps;
    design(i, 2) = r.txp_mw;
    response(i) = r.rho_tx_w;
  }
  return ols(design, response, {"intercept", "mcs_mbps", "txp_mw"});
}

FitResult fit_rx(std::span<const MeasurementRecord> records) {
  std::vector<const MeasurementRecord*> usable;
  for (const auto& r : records) {
    if (r.rho_rx_w) usable.push_back(&r);
  }
  std::set<double> distinct;
  for (const auto* r : usable) distinct.insert(r->mcs_mbps);
  if (distinct.size() < 3) {
    throw ConfigError("fitting rho_rx needs at least 3 distinct MCS points with "
                      "reception measurements, got " + std::to_string(distinct.size()));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(usable.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd response(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = *usable[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = r.mcs_mbps;
    response(i) = *r.rho_rx_w;
  }
  return ols(design, response, {"intercept", "mcs_mbps"});
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, const std::string& what, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line_no) + ": bad value '" + text +
                      "' for " + what);
  }
}

}  // namespace

std::vector<MeasurementRecord> parse_measurements_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "mcs_mbps,txp_mw,rho_tx_w,rho_rx_w") {
    throw ConfigError("measurement CSV must start with header "
                      "'mcs_mbps,txp_mw,rho_tx_w,rho_rx_w'");
  }
  std::vector<MeasurementRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 4 fields");
    }
    MeasurementRecord r;
    r.mcs_mbps = parse_number(fields[0], "mcs_mbps", line_no);
    r.txp_mw = parse_number(fields[1], "txp_mw", line_no);
    r.rho_tx_w = parse_number(fields[2], "rho_tx_w", line_no);
    if (!fields[3].empty()) {
      r.rho_rx_w = parse_number(fields[3], "rho_rx_w", line_no);
    }
    if (r.mcs_mbps <= 0.0 || r.txp_mw <= 0.0 || r.rho_tx_w <= 0.0 ||
        (r.rho_rx_w && *r.rho_rx_w <= 0.0)) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": measurements must be positive");
    }
    records.push_back(r);
  }
  return records;
}

std::vector<MeasurementRecord> load_measurements_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open measurement CSV '" + path + "'");
  return parse_measurements_csv(in);
}

void write_fit_report_csv(std::ostream& out, const FitResult& fit) {
  out << "coefficient,estimate,stderr\n";
  for (const auto& c : fit.coefficients) {
    out << c.name << ',' << csv::format_double(c.estimate) << ','
        << csv::format_double(c.std_error) << '\n';
  }
  out << "adjusted_r2," << csv::format_double(fit.adjusted_r2) << '\n';
}

namespace {

const std::set<std::string>& profile_keys() {
  static const std::set<std::string> keys = {
      "name",     "rho_id_w",           "gamma_xg_mj",     "gamma_xr_mj",
      "alpha0_w", "alpha1_w_per_mbps",  "alpha2_w_per_mw", "beta0_w",
      "beta1_w_per_mbps"};
  return keys;
}

}  // namespace

energy::DeviceProfile parse_profile(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    if (!profile_keys().count(key)) {
      throw ConfigError("unknown profile key '" + key + "'");
    }
    std::string value;
    if (!(fields >> value)) {
      throw ConfigError("profile key '" + key + "' has no value");
    }
    std::string trailing;
    if (fields >> trailing) {
      throw ConfigError("profile key '" + key + "' has trailing content");
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError("duplicate profile key '" + key + "'");
    }
  }

  auto require = [&values](const std::string& key) -> const std::string& {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("profile is missing key '" + key + "'");
    return it->second;
  };
  auto number = [&](const std::string& key) {
    return parse_number(require(key), key, 0);
  };

  energy::DeviceProfile p;
  p.name = require("name");
  p.rho_id_w = number("rho_id_w");
  p.gamma_xg_mj = number("gamma_xg_mj");
  p.gamma_xr_mj = values.count("gamma_xr_mj") ? number("gamma_xr_mj") : 0.0;
  p.tx.alpha0_w = number("alpha0_w");
  p.tx.alpha1_w_per_mbps = number("alpha1_w_per_mbps");
  p.tx.alpha2_w_per_mw = number("alpha2_w_per_mw");
  p.rx.beta0_w = number("beta0_w");
  p.rx.beta1_w_per_mbps = number("beta1_w_per_mbps");
  p.validate();
  return p;
}

energy::DeviceProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile '" + path + "'");
  return parse_profile(in);
}

void write_profile(std::ostream& out, const energy::DeviceProfile& profile) {
  out << "name " << profile.name << '\n'
      << "rho_id_w " << csv::format_double(profile.rho_id_w) << '\n'
      << "gamma_xg_mj " << csv::format_double(profile.gamma_xg_mj) << '\n'
      << "gamma_xr_mj " << csv::format_double(profile.gamma_xr_mj) << '\n'
      << "alpha0_w " << csv::format_double(profile.tx.alpha0_w) << '\n'
      << "alpha1_w_per_mbps " << csv::format_double(profile.tx.alpha1_w_per_mbps) << '\n'
      << "alpha2_w_per_mw " << csv::format_double(profile.tx.alpha2_w_per_mw) << '\n'
      << "beta0_w " << csv::format_double(profile.rx.beta0_w) << '\n'
      << "beta1_w_per_mbps " << csv::format_double(profile.rx.beta1_w_per_mbps) << '\n';
}

energy::DeviceProfile resolve_profile(const std::string& name_or_path) {
  if (const auto* builtin = find_builtin(name_or_path)) return *builtin;
  if (name_or_path.find('/') != std::string::npos ||
      name_or_path.find('.') != std::string::npos) {
    return load_profile(name_or_path);
  }
  std::string known;
  for (const auto& p : builtin_array()) {
    if (!known.empty()) known += ", ";
    known += p.name;
  }
  throw ConfigError("unknown profile '" + name_or_path + "'; builtin profiles: " + known);
}

}  // namespace linkmodel::profiles
