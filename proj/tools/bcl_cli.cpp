// bcl: capacities, channel decompositions, plot data and the verification suite.
//
// Exit codes: 0 success / all checks passed, 1 invalid input or I/O failure,
// 2 a verification check failed, 3 truncation budget exceeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bcl/capacity.hpp"
#include "bcl/channel.hpp"
#include "bcl/parallel.hpp"
#include "bcl/report_json.hpp"
#include "bcl/verification.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kFailed = 2, kBudget = 3 };

struct ChannelFlags {
  std::string channel;
  std::optional<double> eta, N, n, kappa;
};

void add_channel_flags(CLI::App* cmd, ChannelFlags& f) {
  cmd->add_option("--channel", f.channel, "Channel family")
      ->required()
      ->check(CLI::IsMember({"thermal", "addnoise", "amp", "contra-amp"}));
  cmd->add_option("--eta", f.eta, "Transmissivity in [0, 1] (thermal)");
  cmd->add_option("--N", f.N, "Environment thermal photon number >= 0 (thermal, amp, contra-amp)");
  cmd->add_option("--n", f.n, "Added noise photons >= 0 (addnoise)");
  cmd->add_option("--kappa", f.kappa, "Gain >= 1 (amp, contra-amp)");
}

double need(const std::optional<double>& v, const char* flag, const std::string& channel) {
  if (!v) throw bcl::InvalidParameter(std::string(flag) + " is required for --channel " + channel);
  return *v;
}

void reject(const std::optional<double>& v, const char* flag, const std::string& channel) {
  if (v) throw bcl::InvalidParameter(std::string(flag) + " does not apply to --channel " + channel);
}

bcl::ChannelFamily make_family(const ChannelFlags& f) {
  const std::string& c = f.channel;
  if (c == "thermal") {
    reject(f.n, "--n", c);
    reject(f.kappa, "--kappa", c);
    return bcl::ChannelFamily::thermal(need(f.eta, "--eta", c), need(f.N, "--N", c));
  }
  if (c == "addnoise") {
    reject(f.eta, "--eta", c);
    reject(f.N, "--N", c);
    reject(f.kappa, "--kappa", c);
    return bcl::ChannelFamily::additive_noise(need(f.n, "--n", c));
  }
  reject(f.eta, "--eta", c);
  reject(f.n, "--n", c);
  if (c == "amp") return bcl::ChannelFamily::amplifier(need(f.kappa, "--kappa", c), need(f.N, "--N", c));
  return bcl::ChannelFamily::contra_amplifier(need(f.kappa, "--kappa", c), need(f.N, "--N", c));
}

/// Writes to a sibling temp file, then renames over the target.
void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-insensitive Gaussian channels: capacities, decompositions, plot data and verification."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string format = "text";

  // capacity
  auto* capacity = app.add_subcommand("capacity", "Energy-constrained classical capacity and output entropies");
  ChannelFlags cap_flags;
  double energy = 0.0;
  add_channel_flags(capacity, cap_flags);
  capacity->add_option("--energy", energy, "Mean input photon number E >= 0")->required();
  capacity->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  // decompose
  auto* decompose = app.add_subcommand("decompose", "Quantum-limited loss/amplifier decomposition (eta0, kappa0)");
  ChannelFlags dec_flags;
  add_channel_flags(decompose, dec_flags);
  decompose->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  // plot
  auto* plot = app.add_subcommand("plot", "Emit plot data as CSV (panel,series,x,value)");
  std::string panel;
  std::string out_path;
  plot->add_option("--panel", panel, "Panel")->required()->check(CLI::IsMember({"fig2a", "fig2b", "fig2c", "fig2d"}));
  plot->add_option("--out", out_path, "Output CSV path (written atomically); stdout when omitted");

  // verify
  auto* verify = app.add_subcommand("verify", "Run verification checks and emit JSON reports");
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::string report_path;
  std::string threads_text = "1";
  bcl::RunAllConfig run;
  bool timing = false;
  std::vector<std::string> suites{"all"};
  for (const auto& s : bcl::suite_names()) suites.push_back(s);
  verify->add_option("--suite", suite, "all | conjecture | transposition | spectra | mixing | chain | additivity | eof | relent")
      ->check(CLI::IsMember(suites))
      ->capture_default_str();
  verify->add_option("--seed", seed, "Seed; with --suite all, per-check seeds derive from it")->capture_default_str();
  verify->add_option("--report", report_path, "Also write the JSON report to this path (atomically)");
  verify->add_option("--kappa", run.kappa, "Gain (conjecture 1.5, transposition 2, spectra 1.5, chain 1.5, additivity 1.5, eof 2, relent 1.5)");
  verify->add_option("--dim", run.dim, "Fock dimension (conjecture 16, transposition 40, spectra 16, mixing 8, chain 8, additivity 8, eof 50, relent 8)");
  verify->add_option("--samples", run.samples, "Random samples (conjecture 1000, transposition 20, spectra 100, chain 50, additivity 100, relent 50)");
  verify->add_option("--tolerance", run.tolerance, "Pass threshold on -worst_margin (per-check defaults in the README)");
  verify->add_option("--eta", run.eta, "Mixing transmissivity (0.7)");
  verify->add_option("--N", run.N, "EoF thermal photon number (1)");
  verify->add_option("--q-max", run.q_max, "Mixing iterations (40); chain uses powers of two up to this (32)");
  verify->add_option("--budget", run.budget, "Truncation budget per state")->capture_default_str();
  verify->add_option("--threads", threads_text, "Worker threads or 'auto'; BCL_THREADS overrides")->capture_default_str();
  verify->add_flag("--timing", timing, "Record elapsed_seconds (otherwise 0 so output is reproducible byte for byte)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*capacity) {
      const bcl::CapacityResult r = bcl::classical_capacity(make_family(cap_flags), energy);
      if (format == "json") {
        nlohmann::ordered_json j;
        j["channel"] = r.family.name();
        j["energy"] = r.energy_E;
        j["capacity_bits"] = r.capacity_bits;
        j["min_output_entropy_bits"] = r.min_output_entropy_bits;
        j["max_output_entropy_bits"] = r.max_output_entropy_bits;
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << "channel: " << r.family.name() << '\n'
                  << "energy: " << bcl::format_double(r.energy_E) << '\n'
                  << "capacity_bits: " << bcl::format_double(r.capacity_bits) << '\n'
                  << "min_output_entropy_bits: " << bcl::format_double(r.min_output_entropy_bits) << '\n'
                  << "max_output_entropy_bits: " << bcl::format_double(r.max_output_entropy_bits) << '\n';
      }
      return kOk;
    }
    if (*decompose) {
      const bcl::ChannelFamily family = make_family(dec_flags);
      const bcl::Decomposition d = bcl::decompose(family);
      const bcl::ChannelParams p = bcl::canonical_params(family);
      if (format == "json") {
        nlohmann::ordered_json j;
        j["channel"] = family.name();
        j["tau"] = p.tau;
        j["y"] = p.y;
        j["eta0"] = d.eta0;
        j["kappa0"] = d.kappa0;
        j["conjugating"] = d.conjugating;
        std::cout << j.dump(2) << '\n';
      } else {
        std::cout << "channel: " << family.name() << '\n'
                  << "tau: " << bcl::format_double(p.tau) << '\n'
                  << "y: " << bcl::format_double(p.y) << '\n'
                  << "eta0: " << bcl::format_double(d.eta0) << '\n'
                  << "kappa0: " << bcl::format_double(d.kappa0) << '\n'
                  << "conjugating: " << (d.conjugating ? "true" : "false") << '\n';
      }
      return kOk;
    }
    if (*plot) {
      std::ostringstream csv;
      bcl::write_csv(csv, bcl::plot_data(bcl::plot_panel_from_string(panel)));
      if (out_path.empty()) std::cout << csv.str();
      else write_atomic(out_path, csv.str());
      return kOk;
    }
    if (*verify) {
      if (threads_text == "auto") run.threads = bcl::resolve_threads(0);
      else run.threads = bcl::resolve_threads(std::stoi(threads_text));
      run.master_seed = seed;
      std::vector<bcl::VerificationReport> reports;
      if (suite == "all") {
        for (const auto& name : bcl::suite_names()) {
          reports.push_back(bcl::run_suite(name, run, bcl::derive_seed(seed, name)));
        }
      } else {
        reports.push_back(bcl::run_suite(suite, run, seed));
      }
      for (auto& r : reports) {
        if (timing) std::cerr << r.test_name << ": " << r.elapsed_seconds << " s\n";
        else r.elapsed_seconds = 0.0;
      }
      const nlohmann::ordered_json j = suite == "all" ? bcl::to_json(reports) : bcl::to_json(reports.front());
      const std::string text = j.dump(2) + "\n";
      std::cout << text;
      if (!report_path.empty()) write_atomic(report_path, text);
      return bcl::all_passed(reports) ? kOk : kFailed;
    }
  } catch (const bcl::TruncationBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
