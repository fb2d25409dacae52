// Command-line harness: single protocol sessions, grid sweeps to CSV, and
// pulse-sequence compilation reports.
//
// Exit codes: 0 success, 1 verification/protocol/I-O failure, 2 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rsp/rsp.hpp"

namespace {

using namespace rsp;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct CommonOpts {
  std::string config_path;
  textio::Config config;

  void load() {
    if (!config_path.empty()) config = textio::Config::load(config_path);
  }
};

// Flags override config-file values; config overrides defaults.
template <typename T, typename Getter>
void adopt(const CLI::Option* opt, T& value, Getter&& get) {
  if (opt->count() == 0) {
    if (auto v = get()) value = static_cast<T>(*v);
  }
}

void print_matrix(std::ostream& out, const CMat<4>& m, const char* indent) {
  for (std::size_t r = 0; r < 4; ++r) {
    out << indent;
    for (std::size_t c = 0; c < 4; ++c) {
      char buf[64];
      const cx e = m(r, c);
      std::snprintf(buf, sizeof buf, "%+10.6f%+10.6fi", e.real(), e.imag());
      out << buf << (c + 1 < 4 ? "  " : "");
    }
    out << '\n';
  }
}

void print_report(std::ostream& out, const nmr::PulseSequence& seq,
                  const nmr::VerificationReport& rep,
                  const nmr::PhysicalConstants& pc, const char* mode_label) {
  out << "sequence: " << seq.text() << '\n';
  out << "pulses:\n";
  for (std::size_t i = 0; i < seq.ops.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", rep.durations_s[i] * 1e3);
    out << "  [" << i << "] " << seq.ops[i].text() << "  duration " << buf
        << " ms\n";
    print_matrix(out, nmr::pulse_unitary(seq.ops[i]).matrix(), "      ");
  }
  out << "composed:\n";
  print_matrix(out, rep.composed.matrix(), "  ");
  char dist[64], total[64];
  std::snprintf(dist, sizeof dist, "%.6e", rep.distance);
  std::snprintf(total, sizeof total, "%.6f", rep.total_duration_s * 1e3);
  out << "verification: mode=" << mode_label << " distance=" << dist
      << " tolerance=" << rep.tolerance
      << " verdict=" << (rep.pass ? "pass" : "fail") << '\n';
  out << "timing: total " << total << " ms at J=" << pc.j_coupling_hz
      << " Hz (J evolutions only; hard pulses ideal)\n";
}

int cmd_run(const std::string& theta_s, const std::string& phi0_s,
            std::uint64_t seed, int trials, const std::string& mode_s) {
  const QubitParams p(textio::parse_angle(theta_s), textio::parse_angle(phi0_s));
  std::cout << "run mode=" << mode_s << " theta=" << textio::format_fixed(p.theta)
            << " phi0=" << textio::format_fixed(p.phi) << " seed=" << seed
            << " trials=" << trials << "\n";
  if (mode_s == "coherent") {
    const auto r = locc::run_rsp_coherent(p);
    std::cout << r.transcript;
    std::cout << "readout Ix=" << textio::format_fixed(r.readout.ix)
              << " Iy=" << textio::format_fixed(r.readout.iy)
              << " Iz=" << textio::format_fixed(r.readout.iz) << "\n";
    std::cout << "fidelity=" << textio::format_fixed(r.bob_fidelity) << "\n";
    const bool ok = r.bob_fidelity >= 1.0 - 1e-9;
    std::cout << "result=" << (ok ? "ok" : "protocol-failure") << "\n";
    return ok ? kOk : kFailure;
  }
  const auto r = locc::run_rsp_measured(p, seed, trials);
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    std::cout << "--- trial " << t << "\n" << r.trials[t].transcript;
  }
  std::cout << "--- summary\n";
  std::cout << "trials=" << trials << " outcome0=" << r.outcome0_count
            << " outcome0_freq=" << textio::format_fixed(r.outcome0_frequency())
            << " min_fidelity=" << textio::format_fixed(r.min_fidelity)
            << " mean_fidelity=" << textio::format_fixed(r.mean_fidelity)
            << "\n";
  const bool ok = r.min_fidelity >= 1.0 - 1e-9;
  std::cout << "result=" << (ok ? "ok" : "protocol-failure") << "\n";
  return ok ? kOk : kFailure;
}

template <typename Rows, typename Writer>
int write_csv_file(const std::string& path, const Rows& rows, Writer&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return kFailure;
  }
  write(out, rows);
  out.flush();
  if (!out) {
    std::cerr << "error: write failed: " << path << "\n";
    return kFailure;
  }
  return kOk;
}

int cmd_compile(const std::string& which, const std::string& theta_s,
                const std::string& phi0_s, double tolerance,
                const nmr::PhysicalConstants& pc) {
  nmr::PulseSequence seq;
  std::optional<nmr::VerificationReport> rep;
  const char* mode_label = "";
  if (which == "epr") {
    seq = nmr::epr_sequence();
    rep = nmr::verify_state_prep(seq, singlet(), tolerance, pc);
    mode_label = "state-prep";
  } else if (which == "rplus") {
    const QubitParams p(textio::parse_angle(theta_s),
                        textio::parse_angle(phi0_s));
    seq = nmr::rotation_sequence(p);
    rep = nmr::verify_sequence(seq, embed(alice_rotation(p), Slot::A),
                               nmr::VerifyMode::global_phase, {}, tolerance, pc);
    mode_label = "global-phase";
  } else if (which == "s") {
    const double phi0 = textio::parse_angle(phi0_s);
    seq = nmr::conditional_sequence(phi0);
    rep = nmr::verify_sequence(seq, nmr::conditional_target(phi0),
                               nmr::VerifyMode::state_level, {}, tolerance, pc);
    mode_label = "state-level";
  } else {
    throw CLI::ValidationError("compile",
                               "sequence must be one of: epr, rplus, s");
  }
  print_report(std::cout, seq, *rep, pc, mode_label);
  return rep->pass ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit remote-state-preparation/measurement simulator "
               "with an NMR pulse-sequence compiler"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--config", common.config_path,
                 "key=value configuration file (flags take precedence)");

  // run
  auto* run = app.add_subcommand("run", "Run single protocol sessions");
  std::string theta_s, phi0_s = "0", mode_s = "measured";
  std::uint64_t seed = 0;
  int trials = 1;
  run->add_option("--theta", theta_s, "polar angle in [0, pi] (accepts pi-expressions)")
      ->required();
  run->add_option("--phi0", phi0_s, "azimuthal angle (accepts pi-expressions)");
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
  auto* trials_opt = run->add_option("--trials", trials, "number of sessions")
                         ->check(CLI::PositiveNumber);
  run->add_option("--mode", mode_s, "measured | coherent")
      ->check(CLI::IsMember({"measured", "coherent"}));

  // sweeps
  auto* rsp_sweep = app.add_subcommand(
      "rsp-sweep", "Preparation sweep over the 13x17 grid, CSV output");
  std::string rsp_out;
  rsp_sweep->add_option("--out", rsp_out, "output CSV path")->required();

  auto* rsm_sweep = app.add_subcommand(
      "rsm-sweep", "Remote-measurement sweep over the grid x {x,y,z}, CSV output");
  std::string rsm_out;
  rsm_sweep->add_option("--out", rsm_out, "output CSV path")->required();

  // compile
  auto* compile = app.add_subcommand(
      "compile", "Compose a pulse sequence, verify it, report timing");
  std::string which, c_theta = "0", c_phi0 = "0";
  compile->add_option("sequence", which, "epr | rplus | s")->required();
  compile->add_option("--theta", c_theta, "polar angle (rplus)");
  compile->add_option("--phi0", c_phi0, "azimuthal angle (rplus, s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    common.load();
    adopt(seed_opt, seed, [&] { return common.config.get_uint("seed"); });
    adopt(trials_opt, trials, [&] { return common.config.get_uint("trials"); });
    nmr::PhysicalConstants pc;
    if (auto j = common.config.get_double("j_coupling_hz"))
      pc = nmr::PhysicalConstants(*j);
    double tolerance = kSequenceTol;
    if (auto t = common.config.get_double("tol_sequence")) tolerance = *t;

    if (run->parsed())
      return cmd_run(theta_s, phi0_s, seed, trials, mode_s);
    if (rsp_sweep->parsed())
      return write_csv_file(rsp_out, sweep::rsp_sweep(),
                            [](std::ostream& o, const auto& r) {
                              sweep::write_rsp_csv(o, r);
                            });
    if (rsm_sweep->parsed())
      return write_csv_file(rsm_out, sweep::rsm_sweep(),
                            [](std::ostream& o, const auto& r) {
                              sweep::write_rsm_csv(o, r);
                            });
    if (compile->parsed())
      return cmd_compile(which, c_theta, c_phi0, tolerance, pc);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\nsee --help for usage\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
