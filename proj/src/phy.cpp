#include "linkmodel/phy.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace linkmodel::phy {

namespace detail {
const char* builtin_spectra_text();
}

int bits_per_subcarrier(Modulation mod) {
  switch (mod) {
    case Modulation::kBpsk:
      return 1;
    case Modulation::kQpsk:
      return 2;
    case Modulation::kQam16:
      return 4;
    case Modulation::kQam64:
      return 6;
  }
  throw std::invalid_argument("unknown modulation");
}

std::string to_string(CodeRate rate) {
  switch (rate) {
    case CodeRate::kHalf:
      return "1/2";
    case CodeRate::kTwoThirds:
      return "2/3";
    case CodeRate::kThreeQuarters:
      return "3/4";
  }
  throw std::invalid_argument("unknown code rate");
}

CodeRate parse_code_rate(std::string_view text) {
  if (text == "1/2") return CodeRate::kHalf;
  if (text == "2/3") return CodeRate::kTwoThirds;
  if (text == "3/4") return CodeRate::kThreeQuarters;
  throw ConfigError("unknown code rate '" + std::string(text) + "'");
}

double as_double(CodeRate rate) {
  switch (rate) {
    case CodeRate::kHalf:
      return 0.5;
    case CodeRate::kTwoThirds:
      return 2.0 / 3.0;
    case CodeRate::kThreeQuarters:
      return 0.75;
  }
  throw std::invalid_argument("unknown code rate");
}

namespace {

constexpr std::array<Mode, 8> kModes{{
    {1, 6.0, Modulation::kBpsk, CodeRate::kHalf, 24},
    {2, 9.0, Modulation::kBpsk, CodeRate::kThreeQuarters, 36},
    {3, 12.0, Modulation::kQpsk, CodeRate::kHalf, 48},
    {4, 18.0, Modulation::kQpsk, CodeRate::kThreeQuarters, 72},
    {5, 24.0, Modulation::kQam16, CodeRate::kHalf, 96},
    {6, 36.0, Modulation::kQam16, CodeRate::kThreeQuarters, 144},
    {7, 48.0, Modulation::kQam64, CodeRate::kTwoThirds, 192},
    {8, 54.0, Modulation::kQam64, CodeRate::kThreeQuarters, 216},
}};

}  // namespace

std::span<const Mode> all_modes() { return kModes; }

const Mode& mode(int index) {
  if (index < 1 || index > static_cast<int>(kModes.size())) {
    throw std::invalid_argument("mode index must be 1..8, got " +
                                std::to_string(index));
  }
  return kModes[static_cast<std::size_t>(index - 1)];
}

double t_data_us(int payload_octets, const Mode& m) {
  if (payload_octets < 1 || payload_octets > kMaxPayloadOctets) {
    throw std::invalid_argument("payload must be 1.." +
                                std::to_string(kMaxPayloadOctets) +
                                " octets, got " + std::to_string(payload_octets));
  }
  const OfdmTiming t;
  const int bits = t.service_bits + t.tail_bits + 8 * payload_octets;
  const int symbols = (bits + m.data_bits_per_symbol - 1) / m.data_bits_per_symbol;
  return t.preamble_us + t.signal_us + t.symbol_us * symbols;
}

const Mode& ack_mode_for(const Mode& m) {
  const Mode* best = &kModes[0];
  for (int idx : {1, 3, 5}) {
    const Mode& candidate = kModes[static_cast<std::size_t>(idx - 1)];
    if (candidate.rate_mbps <= m.rate_mbps) best = &candidate;
  }
  return *best;
}

double t_ack_us(const Mode& ack_mode) {
  if (ack_mode.index != 1 && ack_mode.index != 3 && ack_mode.index != 5) {
    throw std::invalid_argument(
        "ACKs are sent at the mandatory rates only (modes 1, 3, 5); got mode " +
        std::to_string(ack_mode.index));
  }
  return t_data_us(kAckOctets, ack_mode);
}

double path_loss_db(const ChannelModel& ch) {
  if (ch.frequency_mhz <= 0.0) {
    throw std::invalid_argument("frequency must be positive");
  }
  if (ch.distance_m < 1.0) {
    throw std::invalid_argument("path-loss model requires distance >= 1 m");
  }
  return 20.0 * std::log10(ch.frequency_mhz) +
         ch.distance_power_coefficient * std::log10(ch.distance_m) +
         ch.floor_penetration_db - 28.0;
}

double snr_from_txp_db(double txp_dbm, const ChannelModel& ch) {
  return txp_dbm - path_loss_db(ch) - ch.noise_floor_dbm;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bit_error_rate(double snr_db, const Mode& m) {
  const double es_n0 = std::pow(10.0, snr_db / 10.0);
  const int k = bits_per_subcarrier(m.modulation);
  const double eb_n0 = es_n0 / k;
  switch (m.modulation) {
    case Modulation::kBpsk:
    case Modulation::kQpsk:
      return q_function(std::sqrt(2.0 * eb_n0));
    case Modulation::kQam16:
    case Modulation::kQam64: {
      const double points = k == 4 ? 16.0 : 64.0;
      return (4.0 / k) * (1.0 - 1.0 / std::sqrt(points)) *
             q_function(std::sqrt(3.0 * k * eb_n0 / (points - 1.0)));
    }
  }
  throw std::invalid_argument("unknown modulation");
}

namespace {

// Exact for the d <= 40 range used here (values stay below 2^53).
double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double pairwise_error_probability(int d, double bit_error_rate) {
  if (d < 1) throw std::invalid_argument("spectrum distance must be >= 1");
  if (bit_error_rate <= 0.0) return 0.0;
  if (bit_error_rate >= 1.0) return 1.0;
  const double rho = bit_error_rate;
  const int k_min = (d + 2) / 2;  // ceil((d + 1) / 2)
  double sum = 0.0;
  for (int k = d; k >= k_min; --k) {
    sum += binomial(d, k) * std::pow(rho, k) * std::pow(1.0 - rho, d - k);
  }
  if (d % 2 == 0) {
    sum += 0.5 * binomial(d, d / 2) * std::pow(rho * (1.0 - rho), d / 2);
  }
  return sum;
}

double union_bound(double bit_error_rate, const CodeSpectrum& spectrum) {
  double sum = 0.0;
  for (const auto& [d, a_d] : spectrum.weights) {
    sum += a_d * pairwise_error_probability(d, bit_error_rate);
  }
  return std::min(sum, 1.0);
}

double per_from_union_bound(double union_bound_p, int payload_octets) {
  if (payload_octets < 1 || payload_octets > kMaxPayloadOctets) {
    throw std::invalid_argument("payload must be 1..2304 octets");
  }
  if (union_bound_p >= 1.0) return 1.0;
  if (union_bound_p <= 0.0) return 0.0;
  return -std::expm1(8.0 * payload_octets * std::log1p(-union_bound_p));
}

double packet_error_rate(int payload_octets, double snr_db, const Mode& m) {
  return packet_error_rate(payload_octets, snr_db, m, CodeSpectrumTable::builtin());
}

double packet_error_rate(int payload_octets, double snr_db, const Mode& m,
                         const CodeSpectrumTable& table) {
  const CodeSpectrum& spectrum = table.spectrum(m.code_rate);
  const double rho = bit_error_rate(snr_db, m);
  return per_from_union_bound(union_bound(rho, spectrum), payload_octets);
}

namespace {

int expected_d_free(CodeRate rate) {
  switch (rate) {
    case CodeRate::kHalf:
      return 10;
    case CodeRate::kTwoThirds:
      return 6;
    case CodeRate::kThreeQuarters:
      return 5;
  }
  throw std::invalid_argument("unknown code rate");
}

}  // namespace

const CodeSpectrumTable& CodeSpectrumTable::builtin() {
  static const CodeSpectrumTable table = parse(detail::builtin_spectra_text());
  return table;
}

CodeSpectrumTable CodeSpectrumTable::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  CodeSpectrumTable table;

  auto find = [&table](CodeRate rate) -> CodeSpectrum* {
    for (auto& s : table.spectra_) {
      if (s.code_rate == rate) return &s;
    }
    return nullptr;
  };

  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;  // blank
    if (!header_seen) {
      if (first != "spectra-v1") {
        throw ConfigError("spectrum table must start with a 'spectra-v1' header");
      }
      header_seen = true;
      continue;
    }
    int d = 0;
    double a_d = 0.0;
    if (!(fields >> d >> a_d)) {
      throw ConfigError("spectrum table line " + std::to_string(line_no) +
                        ": expected 'code_rate d a_d'");
    }
    const CodeRate rate = parse_code_rate(first);
    if (d < 1 || a_d <= 0.0) {
      throw ConfigError("spectrum table line " + std::to_string(line_no) +
                        ": d and a_d must be positive");
    }
    CodeSpectrum* spectrum = find(rate);
    if (spectrum == nullptr) {
      table.spectra_.push_back(CodeSpectrum{rate, {}});
      spectrum = &table.spectra_.back();
    }
    if (!spectrum->weights.empty() && d <= spectrum->weights.back().first) {
      throw ConfigError("spectrum table line " + std::to_string(line_no) +
                        ": distances must be strictly increasing per code rate");
    }
    spectrum->weights.emplace_back(d, a_d);
  }
  if (!header_seen) {
    throw ConfigError("spectrum table must start with a 'spectra-v1' header");
  }
  for (const auto& s : table.spectra_) {
    if (s.d_free() != expected_d_free(s.code_rate)) {
      throw ConfigError("spectrum for rate " + to_string(s.code_rate) +
                        " must start at d_free = " +
                        std::to_string(expected_d_free(s.code_rate)));
    }
    if (s.weights.size() < 10) {
      throw ConfigError("spectrum for rate " + to_string(s.code_rate) +
                        " needs at least 10 terms");
    }
  }
  return table;
}

CodeSpectrumTable CodeSpectrumTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spectrum table '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

bool CodeSpectrumTable::has(CodeRate rate) const {
  for (const auto& s : spectra_) {
    if (s.code_rate == rate) return true;
  }
  return false;
}

const CodeSpectrum& CodeSpectrumTable::spectrum(CodeRate rate) const {
  for (const auto& s : spectra_) {
    if (s.code_rate == rate) return s;
  }
  throw ConfigError("no code spectrum for rate " + to_string(rate));
}

}  // namespace linkmodel::phy
