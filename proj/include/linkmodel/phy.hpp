#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkmodel/errors.hpp"

namespace linkmodel::phy {

enum class Modulation { kBpsk, kQpsk, kQam16, kQam64 };

/// Coded bits carried per OFDM subcarrier per symbol.
int bits_per_subcarrier(Modulation mod);

enum class CodeRate { kHalf, kTwoThirds, kThreeQuarters };

std::string to_string(CodeRate rate);      // "1/2", "2/3", "3/4"
CodeRate parse_code_rate(std::string_view text);
double as_double(CodeRate rate);

/// One row of the 802.11a PHY mode table.
struct Mode {
  int index;                 // 1..8
  double rate_mbps;          // 6..54
  Modulation modulation;
  CodeRate code_rate;
  int data_bits_per_symbol;  // N_DBPS
};

/// The eight 802.11a modes, ordered by index.
std::span<const Mode> all_modes();

/// Mode by table index (1..8).
const Mode& mode(int index);

/// 802.11a OFDM timing constants (20 MHz channelization).
struct OfdmTiming {
  double preamble_us = 16.0;
  double signal_us = 4.0;
  double symbol_us = 4.0;
  int service_bits = 16;
  int tail_bits = 6;
};

inline constexpr int kMaxPayloadOctets = 2304;
inline constexpr int kAckOctets = 14;

/// Static link budget mapping TXP to receiver SNR through an ITU-style
/// indoor path-loss model.
struct ChannelModel {
  double noise_floor_dbm = -85.0;
  double frequency_mhz = 5200.0;
  double distance_m = 18.0;
  double distance_power_coefficient = 31.0;
  double floor_penetration_db = 0.0;
};

/// PPDU airtime of a data frame with an l-octet MPDU at mode m.
double t_data_us(int payload_octets, const Mode& m);

/// ACK airtime. The mode must be one of the mandatory control rates
/// (modes 1, 3, 5 = 6/12/24 Mbps).
double t_ack_us(const Mode& ack_mode);

/// Control-response rate: the highest mandatory rate not above the data
/// rate of m.
const Mode& ack_mode_for(const Mode& m);

/// Indoor path loss in dB. Valid for distance >= 1 m.
double path_loss_db(const ChannelModel& ch);

/// Receiver SNR for a given transmission power. Affine in txp_dbm with
/// unit slope.
double snr_from_txp_db(double txp_dbm, const ChannelModel& ch);

/// Gaussian tail probability Q(x).
double q_function(double x);

/// Raw (pre-decoding) bit error probability on an AWGN channel. The
/// per-subcarrier Es/N0 is taken equal to the link SNR.
double bit_error_rate(double snr_db, const Mode& m);

/// Distance spectrum of one convolutional code: (d, a_d) pairs sorted by
/// strictly increasing d, starting at d_free.
struct CodeSpectrum {
  CodeRate code_rate;
  std::vector<std::pair<int, double>> weights;

  int d_free() const { return weights.empty() ? 0 : weights.front().first; }
};

/// Spectra for the code rates of the mode table, parsed from the
/// `spectra-v1` plain-text format.
class CodeSpectrumTable {
 public:
  /// Table compiled in from data/spectra-v1.txt.
  static const CodeSpectrumTable& builtin();

  static CodeSpectrumTable parse(std::string_view text);
  static CodeSpectrumTable load_file(const std::string& path);

  bool has(CodeRate rate) const;
  const CodeSpectrum& spectrum(CodeRate rate) const;  // ConfigError if absent

  std::span<const CodeSpectrum> all() const { return spectra_; }

 private:
  std::vector<CodeSpectrum> spectra_;
};

/// Probability that a hard-decision Viterbi decoder picks a wrong path at
/// Hamming distance d when the channel crossover probability is
/// bit_error_rate (the classical first-event bound term P_d).
double pairwise_error_probability(int d, double bit_error_rate);

/// First-event error probability union bound, clamped to 1.
double union_bound(double bit_error_rate, const CodeSpectrum& spectrum);

/// 1 - (1 - p_u)^(8 l), evaluated in log space below the clamp.
double per_from_union_bound(double union_bound_p, int payload_octets);

double packet_error_rate(int payload_octets, double snr_db, const Mode& m);
double packet_error_rate(int payload_octets, double snr_db, const Mode& m,
                         const CodeSpectrumTable& table);

}  // namespace linkmodel::phy
