#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "linkmodel/csv.hpp"
#include "linkmodel/explorer.hpp"
#include "linkmodel/oracle.hpp"
#include "linkmodel/profiles.hpp"

namespace {

using linkmodel::csv::format_double;
namespace explorer = linkmodel::explorer;
namespace profiles = linkmodel::profiles;
namespace oracle = linkmodel::oracle;
namespace phy = linkmodel::phy;

struct CommonOptions {
  std::string scenario_path;
  std::string profile = "raspberrypi-example";
  std::string out_path;
  bool plot = false;
  std::optional<double> txp_min;
  std::optional<double> txp_max;
  std::optional<double> txp_step;
  std::vector<int> modes;
};

void add_grid_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--txp-min", opt.txp_min, "Grid start [dBm]");
  cmd->add_option("--txp-max", opt.txp_max, "Grid end [dBm]");
  cmd->add_option("--txp-step", opt.txp_step, "Grid step [dB]");
  cmd->add_option("--modes", opt.modes, "Mode subset (indices 1..8)");
}

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool with_profile = true) {
  cmd->add_option("--scenario", opt.scenario_path,
                  "Scenario file (key-value; defaults to the bundled office scenario)");
  if (with_profile) {
    cmd->add_option("--profile", opt.profile,
                    "Builtin profile name or profile file path");
  }
  cmd->add_option("-o,--out", opt.out_path, "Output CSV path (default: stdout)");
  cmd->add_flag("--plot", opt.plot,
                "Also write a gnuplot script next to the output CSV");
}

struct RunContext {
  explorer::LinkScenario scenario;
  explorer::SweepGrid grid;
  linkmodel::energy::DeviceProfile profile;
};

RunContext make_context(const CommonOptions& opt, bool needs_profile = true) {
  RunContext ctx;
  if (!opt.scenario_path.empty()) {
    const auto file = explorer::load_scenario(opt.scenario_path);
    ctx.scenario = file.scenario;
    ctx.grid = file.grid;
  }
  if (opt.txp_min) ctx.grid.txp_min_dbm = *opt.txp_min;
  if (opt.txp_max) ctx.grid.txp_max_dbm = *opt.txp_max;
  if (opt.txp_step) ctx.grid.txp_step_db = *opt.txp_step;
  if (!opt.modes.empty()) ctx.grid.mode_indices = opt.modes;
  ctx.grid.validate();
  if (needs_profile) {
    ctx.profile = profiles::resolve_profile(opt.profile);
    if (ctx.profile.placeholder_energy_constants) {
      std::cerr << "note: profile '" << ctx.profile.name
                << "' uses placeholder rho_id/gamma_x values ("
                << format_double(ctx.profile.rho_id_w) << " W, "
                << format_double(ctx.profile.gamma_xg_mj)
                << " mJ); they are not measurements\n";
    }
  }
  return ctx;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw linkmodel::ConfigError("cannot write output file '" + path + "'");
  out << text;
}

void maybe_write_plot(const CommonOptions& opt, const std::string& body) {
  if (!opt.plot) return;
  if (opt.out_path.empty()) {
    throw linkmodel::ConfigError("--plot needs --out so the script can reference the CSV");
  }
  const std::string path = opt.out_path + ".gp";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw linkmodel::ConfigError("cannot write plot script '" + path + "'");
  out << "set datafile separator ','\nset grid\n" << body;
}

std::string csv_name(const CommonOptions& opt) {
  return std::filesystem::path(opt.out_path).filename().string();
}

int run_envelope(const CommonOptions& opt) {
  const auto ctx = make_context(opt);
  const auto env = explorer::optimal_envelope(ctx.grid, ctx.scenario, ctx.profile);
  std::ostringstream out;
  out << "snr_db,best_mode,goodput_mbps,efficiency_bpj,e_frame_mj\n";
  for (const auto& p : env) {
    out << format_double(p.snr_db) << ',' << p.best_mode << ','
        << format_double(p.goodput_mbps) << ',' << format_double(p.efficiency_bpj)
        << ',' << format_double(p.e_frame_mj) << '\n';
  }
  write_text(opt.out_path, out.str());
  maybe_write_plot(opt,
                   "set xlabel 'SNR [dB]'\nset ylabel 'Goodput [Mbps]'\n"
                   "plot '" + csv_name(opt) + "' using 1:3 with lines title 'optimal goodput'\n");
  return 0;
}

int run_surface(const CommonOptions& opt) {
  const auto ctx = make_context(opt);
  const auto cells = explorer::energy_surface(ctx.grid, ctx.scenario, ctx.profile);
  std::ostringstream out;
  out << "mode,txp_dbm,e_frame_mj\n";
  for (const auto& c : cells) {
    out << c.mode << ',' << format_double(c.txp_dbm) << ','
        << format_double(c.e_frame_mj) << '\n';
  }
  write_text(opt.out_path, out.str());
  maybe_write_plot(opt,
                   "set xlabel 'TXP [dBm]'\nset ylabel 'Energy per frame [mJ]'\n"
                   "set logscale y\n"
                   "plot for [m=1:8] '" + csv_name(opt) +
                       "' using ($1==m?$2:1/0):3 with lines title sprintf('mode %d', m)\n");
  return 0;
}

std::string drops_csv(const std::vector<explorer::TransitionDrop>& drops) {
  std::ostringstream out;
  out << "from_mode,to_mode,snr_db,delta_efficiency_bpj\n";
  for (const auto& d : drops) {
    out << d.from_mode << ',' << d.to_mode << ',' << format_double(d.snr_db) << ','
        << format_double(d.delta_efficiency_bpj) << '\n';
  }
  return out.str();
}

int run_tradeoff(const CommonOptions& opt, const std::string& drops_path) {
  const auto ctx = make_context(opt);
  const auto curve = explorer::efficiency_vs_goodput(ctx.grid, ctx.scenario, ctx.profile);
  std::ostringstream out;
  out << "goodput_mbps,efficiency_bpj,best_mode\n";
  for (const auto& p : curve.points) {
    out << format_double(p.goodput_mbps) << ',' << format_double(p.efficiency_bpj)
        << ',' << p.best_mode << '\n';
  }
  write_text(opt.out_path, out.str());
  if (!drops_path.empty()) {
    write_text(drops_path, drops_csv(explorer::transition_drops(curve)));
  }
  maybe_write_plot(opt,
                   "set xlabel 'Optimal goodput [Mbps]'\nset ylabel 'Efficiency [bits/J]'\n"
                   "plot '" + csv_name(opt) + "' using 1:2 with lines title 'efficiency'\n");
  return 0;
}

int run_txp_curves(const CommonOptions& opt) {
  const auto ctx = make_context(opt);
  const auto points = explorer::efficiency_vs_txp(ctx.grid, ctx.scenario, ctx.profile);
  std::ostringstream out;
  out << "mode,txp_dbm,goodput_mbps,efficiency_bpj,best_mode\n";
  for (const auto& p : points) {
    out << p.mode << ',' << format_double(p.txp_dbm) << ','
        << format_double(p.goodput_mbps) << ',' << format_double(p.efficiency_bpj)
        << ',' << p.best_mode << '\n';
  }
  write_text(opt.out_path, out.str());
  maybe_write_plot(opt,
                   "set xlabel 'TXP [dBm]'\nset ylabel 'Efficiency [bits/J]'\n"
                   "plot for [m=1:8] '" + csv_name(opt) +
                       "' using ($1==m?$2:1/0):4 with lines title sprintf('mode %d', m)\n");
  return 0;
}

int run_sensitivity(const CommonOptions& opt, const std::string& param,
                    const std::vector<double>& factors, const std::string& drops_path) {
  const auto ctx = make_context(opt);
  std::vector<explorer::EnergyParameter> params;
  if (param.empty()) {
    params = {explorer::EnergyParameter::kRhoId, explorer::EnergyParameter::kRhoTx,
              explorer::EnergyParameter::kRhoRx, explorer::EnergyParameter::kGammaXg};
  } else {
    params = {explorer::parse_energy_parameter(param)};
  }
  std::ostringstream out, drops_out;
  out << "param,factor,snr_db,efficiency_bpj\n";
  drops_out << "param,factor,from_mode,to_mode,snr_db,delta_efficiency_bpj\n";
  for (const auto p : params) {
    for (const double factor : factors) {
      const auto result =
          explorer::sensitivity_scan(ctx.profile, p, factor, ctx.grid, ctx.scenario);
      const std::string tag = explorer::to_string(p) + ',' + format_double(factor);
      for (const auto& point : result.curve.points) {
        out << tag << ',' << format_double(point.snr_db) << ','
            << format_double(point.efficiency_bpj) << '\n';
      }
      for (const auto& d : result.drops) {
        drops_out << tag << ',' << d.from_mode << ',' << d.to_mode << ','
                  << format_double(d.snr_db) << ','
                  << format_double(d.delta_efficiency_bpj) << '\n';
      }
    }
  }
  write_text(opt.out_path, out.str());
  if (!drops_path.empty()) write_text(drops_path, drops_out.str());
  maybe_write_plot(opt,
                   "set xlabel 'SNR [dB]'\nset ylabel 'Efficiency [bits/J]'\n"
                   "plot '" + csv_name(opt) + "' using 3:4 with points title 'scaled runs'\n");
  return 0;
}

int run_fit(const std::string& measurements_path, const std::string& model,
            const std::string& out_path) {
  const auto records = profiles::load_measurements_csv(measurements_path);
  profiles::FitResult fit;
  if (model == "tx") {
    fit = profiles::fit_tx(records);
  } else if (model == "rx") {
    fit = profiles::fit_rx(records);
  } else {
    throw std::invalid_argument("--model must be tx or rx");
  }
  std::ostringstream out;
  profiles::write_fit_report_csv(out, fit);
  write_text(out_path, out.str());
  return 0;
}

int run_simulate(const CommonOptions& opt, int mode_index,
                 std::optional<double> snr_db, std::optional<double> txp_dbm,
                 std::uint64_t frames, std::uint64_t seed) {
  const auto ctx = make_context(opt);
  if (snr_db.has_value() == txp_dbm.has_value()) {
    throw std::invalid_argument("give exactly one of --snr or --txp");
  }
  const double snr = snr_db ? *snr_db
                            : phy::snr_from_txp_db(*txp_dbm, ctx.scenario.channel);
  const double txp = txp_dbm ? *txp_dbm : ctx.scenario.txp_for_snr_dbm(snr);

  oracle::SimConfig config;
  config.frames = frames;
  config.seed = seed;
  config.plan = ctx.scenario.plan(phy::mode(mode_index), snr);
  config.dcf = ctx.scenario.dcf_params();
  config.profile = ctx.profile;
  config.txp_dbm = txp;
  const auto result = oracle::simulate(config);

  std::ostringstream out;
  out << "mode,snr_db,frames,seed,p_succ,goodput_mbps,e_frame_mj,"
         "goodput_stderr_mbps,e_frame_stderr_mj\n";
  out << mode_index << ',' << format_double(snr) << ',' << frames << ',' << seed
      << ',' << format_double(result.p_succ_est) << ','
      << format_double(result.goodput_est_mbps) << ','
      << format_double(result.e_frame_est_mj) << ','
      << format_double(result.stderr_goodput_mbps) << ','
      << format_double(result.stderr_e_frame_mj) << '\n';
  write_text(opt.out_path, out.str());
  return 0;
}

int run_profiles(const std::string& out_path) {
  std::ostringstream out;
  out << "name,rho_id_w,gamma_xg_mj,gamma_xr_mj,alpha0_w,alpha1_w_per_mbps,"
         "alpha2_w_per_mw,beta0_w,beta1_w_per_mbps\n";
  for (const auto& p : profiles::builtin_profiles()) {
    out << p.name << ',' << format_double(p.rho_id_w) << ','
        << format_double(p.gamma_xg_mj) << ',' << format_double(p.gamma_xr_mj) << ','
        << format_double(p.tx.alpha0_w) << ',' << format_double(p.tx.alpha1_w_per_mbps)
        << ',' << format_double(p.tx.alpha2_w_per_mw) << ','
        << format_double(p.rx.beta0_w) << ',' << format_double(p.rx.beta1_w_per_mbps)
        << '\n';
  }
  write_text(out_path, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical goodput / energy model of a single-stream 802.11a link"};
  app.require_subcommand(1);

  CommonOptions env_opt;
  auto* envelope = app.add_subcommand(
      "envelope", "Optimal-goodput envelope over the SNR grid");
  add_common_options(envelope, env_opt);
  add_grid_options(envelope, env_opt);

  CommonOptions surf_opt;
  auto* surface = app.add_subcommand(
      "surface", "Energy per frame over mode x TXP");
  add_common_options(surface, surf_opt);
  add_grid_options(surface, surf_opt);

  CommonOptions trade_opt;
  std::string trade_drops;
  auto* tradeoff = app.add_subcommand(
      "tradeoff", "Efficiency at the goodput-optimal configuration");
  add_common_options(tradeoff, trade_opt);
  add_grid_options(tradeoff, trade_opt);
  tradeoff->add_option("--drops", trade_drops,
                       "Also write the mode-transition efficiency drops CSV");

  CommonOptions txpc_opt;
  auto* txp_curves = app.add_subcommand(
      "txp-curves", "Per-mode efficiency against TXP");
  add_common_options(txp_curves, txpc_opt);
  add_grid_options(txp_curves, txpc_opt);

  CommonOptions sens_opt;
  std::string sens_param;
  std::vector<double> sens_factors{3.0, 1.0 / 3.0};
  std::string sens_drops;
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "Trade-off curves under scaled energy parameters");
  add_common_options(sensitivity, sens_opt);
  add_grid_options(sensitivity, sens_opt);
  sensitivity->add_option("--param", sens_param,
                          "rho_id, rho_tx, rho_rx or gamma_xg (default: all)");
  sensitivity->add_option("--factor", sens_factors,
                          "Scale factors (default: 3 and 1/3)");
  sensitivity->add_option("--drops", sens_drops,
                          "Also write the per-run transition drops CSV");

  std::string fit_measurements, fit_model = "tx", fit_out;
  auto* fit = app.add_subcommand(
      "fit", "Least-squares fit of the power models from measurements");
  fit->add_option("--measurements", fit_measurements,
                  "CSV with header mcs_mbps,txp_mw,rho_tx_w,rho_rx_w")
      ->required();
  fit->add_option("--model", fit_model, "tx or rx");
  fit->add_option("-o,--out", fit_out, "Output CSV path (default: stdout)");

  CommonOptions sim_opt;
  int sim_mode = 1;
  std::optional<double> sim_snr, sim_txp;
  std::uint64_t sim_frames = 100000, sim_seed = 1;
  auto* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo run of the DCF retry process");
  add_common_options(simulate, sim_opt);
  simulate->add_option("--mode", sim_mode, "Mode index 1..8")->required();
  simulate->add_option("--snr", sim_snr, "Receiver SNR [dB]");
  simulate->add_option("--txp", sim_txp, "Transmit power [dBm]");
  simulate->add_option("--frames", sim_frames, "Frames to simulate");
  simulate->add_option("--seed", sim_seed, "RNG seed");

  std::string profiles_out;
  auto* profiles_cmd = app.add_subcommand(
      "profiles", "List the builtin device profiles");
  profiles_cmd->add_option("-o,--out", profiles_out, "Output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(envelope)) return run_envelope(env_opt);
    if (app.got_subcommand(surface)) return run_surface(surf_opt);
    if (app.got_subcommand(tradeoff)) return run_tradeoff(trade_opt, trade_drops);
    if (app.got_subcommand(txp_curves)) return run_txp_curves(txpc_opt);
    if (app.got_subcommand(sensitivity)) {
      return run_sensitivity(sens_opt, sens_param, sens_factors, sens_drops);
    }
    if (app.got_subcommand(fit)) return run_fit(fit_measurements, fit_model, fit_out);
    if (app.got_subcommand(simulate)) {
      return run_simulate(sim_opt, sim_mode, sim_snr, sim_txp, sim_frames, sim_seed);
    }
    if (app.got_subcommand(profiles_cmd)) return run_profiles(profiles_out);
    std::cerr << "error: no command selected\n";
    return 1;
  } catch (const linkmodel::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
