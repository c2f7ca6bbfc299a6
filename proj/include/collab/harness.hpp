#pragma once

// Experiment runner: sweeps schemes over a dataset across node counts,
// thresholds, noise levels and failure counts, repeats with derived seeds,
// and aggregates per-round metrics into CSV rows.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "collab/catalogue.hpp"
#include "collab/dataset.hpp"
#include "collab/models.hpp"
#include "collab/network.hpp"
#include "collab/schemes.hpp"

namespace collab::harness {

namespace fs = std::filesystem;

enum class DroppedPolicy { CountAsError, Exclude };
enum class Backend { Auto, Toy, Precomputed };

struct ExperimentConfig {
  std::optional<fs::path> dataset;  // manifest; synthetic data when unset
  dataset::SyntheticSpec synthetic;

  std::vector<SchemeId> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<int> n_values{1, 2, 3, 4, 5, 6};
  // Applied to selective schemes only; empty means each scheme's default.
  std::vector<double> gammas;
  int repeats = 12;
  std::uint64_t seed = 1;
  // nullopt is the noiseless point.
  std::vector<std::optional<double>> snr_db{std::nullopt};
  dataset::SignalPower signal_power = dataset::SignalPower::MeanSquare;
  // Number of randomly chosen offline nodes per round.
  std::vector<int> failures{0};
  DroppedPolicy dropped_policy = DroppedPolicy::CountAsError;

  bool split_context = true;
  int context_size = 6;
  int bins = 32;

  Backend backend = Backend::Auto;
  std::optional<fs::path> centroids;  // MVE1 file, one row per class
  ToyModelParams toy;

  network::RadioConfig radio;
  double radio_snr_min_db = 0.0;
  double radio_snr_max_db = 20.0;
  network::TransportModel transport;
  network::ProcessingProfile profile = network::ProcessingProfile::defaults();
  network::ComputeCostModel cost;
  MessageCatalogue wire;

  void validate() const;
};

// Applies one `key = value` setting; throws InvalidConfig on unknown keys or
// unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

// Flat `key = value` lines; '#' starts a comment.
ExperimentConfig load_config(const fs::path& path);
void apply_config_text(ExperimentConfig& config, const std::string& text);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across repeats
};

struct MetricsRow {
  SchemeId scheme = SchemeId::CI;
  int n = 0;
  std::optional<double> gamma;
  std::optional<double> snr_db;
  int failures = 0;
  int rounds = 0;  // per repeat

  Stat accuracy;  // under the configured dropped-round policy
  Stat accuracy_counted;
  Stat accuracy_excluded;
  Stat gain;
  Stat overhead_bytes;
  Stat latency_ms;
  Stat dropped_rate;
  Stat source_flops;
  Stat source_flops_max;  // busiest source node
  Stat controller_flops;
};

struct RoundRecord {
  SchemeId scheme;
  int n;
  std::optional<double> gamma;
  std::optional<double> snr_db;
  int failures;
  int repeat;
  std::size_t instance;
  Prediction truth;
  const RoundOutcome& outcome;
};

using RoundObserver = std::function<void(const RoundRecord&)>;

// The models a run evaluates with, built from the config and dataset.
struct ModelBundle {
  std::unique_ptr<BackboneModel> backbone;
  std::unique_ptr<HeadModel> head;
};

ModelBundle build_models(const ExperimentConfig& config, const dataset::Dataset& data);
dataset::Dataset open_dataset(const ExperimentConfig& config);

std::vector<MetricsRow> run_experiment(const ExperimentConfig& config, const RoundObserver& observer = {});

// Runs the selective schemes of `config` (SCI-E when it has none) once per
// gamma and groups the rows by gamma.
std::map<double, std::vector<MetricsRow>> sweep_threshold(ExperimentConfig config, const std::vector<double>& gammas);

// Rows sorted by (scheme, N, gamma, snr, failures).
void sort_rows(std::vector<MetricsRow>& rows);
void write_csv(const std::vector<MetricsRow>& rows, std::ostream& out);
void emit_csv(std::vector<MetricsRow> rows, const fs::path& path);

// One round of `scheme`, as the harness would run it for (repeat, instance).
struct InspectResult {
  MultiViewInstance instance;
  RoundOutcome outcome;
  double latency_ms = 0.0;
  std::uint64_t overhead_bytes = 0;
};

InspectResult inspect_round(const ExperimentConfig& config, SchemeId scheme, int n, std::optional<double> gamma,
                            std::size_t instance_index, int repeat = 0);
void print_trace(const InspectResult& r, const network::TransportModel& tm, std::ostream& out);

}  // namespace collab::harness
