// collabsim: generate synthetic datasets, run scheme sweeps, inspect rounds.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "collab/dataset.hpp"
#include "collab/harness.hpp"

using namespace collab;

namespace {

struct Overrides {
  std::string config;
  std::string scheme;
  std::string n;
  std::string gamma;
  std::string seed;
  std::string snr;
  std::string dataset;
  std::string synthetic;
  std::string repeats;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "key = value configuration file");
  cmd->add_option("--scheme", o.scheme, "comma-separated schemes, or 'all'");
  cmd->add_option("--n", o.n, "node counts, e.g. 1..6 or 1,3,6");
  cmd->add_option("--gamma", o.gamma, "thresholds for selective schemes");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--snr", o.snr, "noise SNR points in dB ('none' for noiseless)");
  cmd->add_option("--dataset", o.dataset, "manifest path");
  cmd->add_option("--synthetic", o.synthetic, "synthetic spec as key=value,key=value");
  cmd->add_option("--repeats", o.repeats, "repeats per point");
  cmd->add_option("--set", o.set, "any configuration key=value");
}

harness::ExperimentConfig resolve(const Overrides& o) {
  harness::ExperimentConfig c = o.config.empty() ? harness::ExperimentConfig{} : harness::load_config(o.config);
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) harness::apply_setting(c, key, v);
  };
  put("dataset", o.dataset);
  if (!o.synthetic.empty()) {
    std::stringstream in(o.synthetic);
    std::string kv;
    while (std::getline(in, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--synthetic expects key=value pairs");
      harness::apply_setting(c, "synthetic." + kv.substr(0, eq), kv.substr(eq + 1));
    }
    c.dataset.reset();
  }
  put("schemes", o.scheme);
  put("n", o.n);
  put("gamma", o.gamma);
  put("seed", o.seed);
  put("snr", o.snr);
  put("repeats", o.repeats);
  for (const auto& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--set expects key=value");
    harness::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

void write_rows(const std::vector<harness::MetricsRow>& rows, const std::string& out) {
  if (out.empty() || out == "-") {
    harness::write_csv(rows, std::cout);
  } else {
    harness::emit_csv(rows, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative multi-view inference simulator"};
  app.require_subcommand(1);

  Overrides gen_o, run_o, sweep_o, insp_o;
  std::string gen_out, run_out, sweep_out;

  auto* gen = app.add_subcommand("generate", "render a synthetic dataset to PPM files and a manifest");
  add_common(gen, gen_o);
  gen->add_option("-o,--out", gen_out, "output directory")->required();

  auto* run = app.add_subcommand("run", "run an experiment and write metrics CSV");
  add_common(run, run_o);
  run->add_option("-o,--out", run_out, "CSV path (stdout when omitted)");

  std::string sweep_gammas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  auto* sweep = app.add_subcommand("sweep", "threshold sweep over the selective schemes");
  add_common(sweep, sweep_o);
  sweep->add_option("-o,--out", sweep_out, "CSV path (stdout when omitted)");
  sweep->add_option("--grid", sweep_gammas, "threshold grid")->capture_default_str();

  std::size_t insp_instance = 0;
  int insp_repeat = 0;
  auto* insp = app.add_subcommand("inspect", "print the message trace of one round");
  add_common(insp, insp_o);
  insp->add_option("--instance", insp_instance, "instance index")->capture_default_str();
  insp->add_option("--repeat", insp_repeat, "repeat index")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto c = resolve(gen_o);
      if (c.dataset) throw Error(ErrorCode::InvalidConfig, "generate works on synthetic specs only");
      c.synthetic.validate();
      const auto m = dataset::write_dataset(dataset::generate_synthetic(c.synthetic), gen_out);
      std::cerr << "wrote " << m.entries.size() << " instances to " << (std::filesystem::path(gen_out) / "manifest.tsv")
                << '\n';
    } else if (run->parsed()) {
      write_rows(harness::run_experiment(resolve(run_o)), run_out);
    } else if (sweep->parsed()) {
      auto c = resolve(sweep_o);
      harness::apply_setting(c, "gamma", sweep_gammas);
      std::vector<harness::MetricsRow> rows;
      for (auto& [g, rs] : harness::sweep_threshold(c, c.gammas)) rows.insert(rows.end(), rs.begin(), rs.end());
      harness::sort_rows(rows);
      write_rows(rows, sweep_out);
    } else if (insp->parsed()) {
      const auto c = resolve(insp_o);
      const SchemeId scheme = c.schemes.size() == 1 ? c.schemes.front() : SchemeId::CI;
      const int n = c.n_values.size() == 1 ? c.n_values.front() : 6;
      std::optional<double> gamma;
      if (!c.gammas.empty()) gamma = c.gammas.front();
      const auto r = harness::inspect_round(c, scheme, n, gamma, insp_instance, insp_repeat);
      std::cout << "scheme " << to_string(scheme) << " n " << n << '\n';
      harness::print_trace(r, c.transport, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
