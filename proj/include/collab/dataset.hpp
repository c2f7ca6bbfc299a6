#pragma once

// Multi-view datasets on disk and in memory: PPM rasters, a tab-separated
// manifest, float32 embedding sidecars, a seeded synthetic generator,
// view sampling and additive Gaussian noise.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collab/types.hpp"

namespace collab::dataset {

namespace fs = std::filesystem;

// ---- rasters -------------------------------------------------------------

// Binary PPM (P6, maxval 255). Throws MissingFile / MalformedRaster / IoError.
View read_ppm(const fs::path& path);
void write_ppm(const fs::path& path, const View& view);

// ---- embedding sidecars --------------------------------------------------

// Layout: "MVE1", u32 rows, u32 dim, u32 reserved, then rows*dim float32,
// all little-endian.
void write_sidecar(const fs::path& path, std::span<const Embedding> rows);
std::vector<Embedding> read_sidecar(const fs::path& path);

// ---- synthetic data ------------------------------------------------------

struct SyntheticSpec {
  int num_classes = 40;
  int instances_per_class = 5;
  int views_per_instance = 12;
  int width = 64;
  int height = 64;
  int colors_per_class = 4;
  int regions = 8;
  // Dirichlet concentration of each view's mixture over the class colors;
  // small values make views of one object look different.
  double mixture_concentration = 1.5;
  // Histogram resolution at which class colors are kept apart.
  int palette_bins = 32;
  double within_class_noise = 0.0;
  std::uint64_t signature_seed = 1;
  std::uint64_t seed = 1;

  void validate() const;
};

using Palette = std::vector<std::vector<Rgb>>;  // [class][color]

// Per-class chroma signatures. Colors of different classes never share an
// (a*, b*) bucket at palette_bins, and are kept out of each other's
// neighbouring buckets whenever the gamut allows it.
Palette class_palette(const SyntheticSpec& spec);

// Equal-area stripes of each class color: the class's canonical appearance.
View class_prototype(const SyntheticSpec& spec, const Palette& palette, int label);

// Deterministic rendering of one view: Voronoi regions painted with the
// class colors under a per-view mixture; within_class_noise jitters colors
// and swaps in colors of other classes.
View render_view(const SyntheticSpec& spec, const Palette& palette, std::size_t instance_index, int label,
                 std::size_t view_index);

// ---- manifests -----------------------------------------------------------

struct ManifestEntry {
  std::string instance_id;
  Prediction label;
  std::vector<fs::path> view_paths;  // empty for in-memory synthetic entries
  std::optional<fs::path> sidecar;
};

struct DatasetManifest {
  fs::path root;
  std::vector<ManifestEntry> entries;
  int num_classes = 0;
  int width = 0;
  int height = 0;
  // Set when the views are (or were) produced by the synthetic generator.
  std::optional<SyntheticSpec> synthetic;
};

DatasetManifest generate_synthetic(const SyntheticSpec& spec);

// Line format: instance_id <TAB> label <TAB> path[,path...] [<TAB> sidecar].
// Lines starting with '#' are comments; "# key=value" comments carry the
// class count, view size and synthetic provenance.
DatasetManifest load_dataset(const fs::path& manifest_path);
void write_manifest(const DatasetManifest& manifest, const fs::path& manifest_path);

// Renders every view of `manifest` to PPM under `dir` and writes
// dir/manifest.tsv. Returns the on-disk manifest.
DatasetManifest write_dataset(const DatasetManifest& manifest, const fs::path& dir);

// Materializes views (decoding or rendering on demand).
class Dataset {
 public:
  explicit Dataset(DatasetManifest manifest);

  std::size_t size() const { return manifest_.entries.size(); }
  const DatasetManifest& manifest() const { return manifest_; }
  const ManifestEntry& entry(std::size_t i) const { return manifest_.entries.at(i); }

  std::vector<View> views(std::size_t i) const;
  std::optional<std::vector<Embedding>> embeddings(std::size_t i) const;
  const Palette* palette() const { return palette_ ? &*palette_ : nullptr; }

 private:
  DatasetManifest manifest_;
  std::optional<Palette> palette_;
};

// ---- sampling ------------------------------------------------------------

struct ViewSample {
  std::vector<std::size_t> current;
  std::vector<std::size_t> context;
};

// Seeded sampling without replacement. With split_context, `context_size`
// views are held out first and `n` current views are drawn from the rest.
ViewSample sample_views(std::size_t available, int n, bool split_context, std::uint64_t seed,
                        int context_size = 6);

// ---- noise ---------------------------------------------------------------

enum class SignalPower { MeanSquare, Variance };

struct NoiseSpec {
  std::optional<double> sigma;          // per-channel std-dev in 8-bit units
  std::optional<double> target_snr_db;  // solve sigma from this instead
  SignalPower power = SignalPower::MeanSquare;

  static NoiseSpec with_sigma(double s) { return {s, std::nullopt, SignalPower::MeanSquare}; }
  static NoiseSpec with_snr(double db) { return {std::nullopt, db, SignalPower::MeanSquare}; }
};

struct NoisyView {
  View view;
  double sigma = 0.0;
  double achieved_snr_db = 0.0;  // +inf when sigma == 0
};

double signal_power(const View& view, SignalPower power);

// Zero-mean Gaussian added independently per pixel and channel, then
// rounded and clamped to [0, 255].
NoisyView add_noise(const View& view, const NoiseSpec& spec, std::uint64_t seed);

}  // namespace collab::dataset
