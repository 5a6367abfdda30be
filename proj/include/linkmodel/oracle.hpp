#pragma once

#include <cstdint>

#include "linkmodel/energy.hpp"

namespace linkmodel::oracle {

/// Configuration of one Monte-Carlo run over the DCF retry process.
struct SimConfig {
  std::uint64_t frames = 100000;
  std::uint64_t seed = 1;
  dcf::AttemptPlan plan;
  dcf::DcfParams dcf;
  energy::DeviceProfile profile;
  double txp_dbm = 15.0;
};

struct SimResult {
  double p_succ_est = 0.0;
  double goodput_est_mbps = 0.0;
  double e_frame_est_mj = 0.0;
  double stderr_goodput_mbps = 0.0;
  double stderr_e_frame_mj = 0.0;
};

/// Samples actual backoffs and Bernoulli attempt outcomes per frame,
/// accumulating time and energy with the same state weighting as the
/// closed forms. A fixed seed reproduces results bit for bit.
SimResult simulate(const SimConfig& config);

}  // namespace linkmodel::oracle
