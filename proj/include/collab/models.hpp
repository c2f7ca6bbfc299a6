#pragma once

// Split classification pipeline: a single-view backbone producing embeddings,
// an orderless view-pooling step, and a classification head shared by the
// single-view and multi-view paths.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "collab/types.hpp"

namespace collab {

class BackboneModel {
 public:
  virtual ~BackboneModel() = default;
  virtual Embedding extract(const View& view) const = 0;
  virtual std::size_t dim() const = 0;
};

class HeadModel {
 public:
  virtual ~HeadModel() = default;
  virtual Prediction classify(const Embedding& e) const = 0;
  virtual int num_classes() const = 0;
  virtual std::size_t dim() const = 0;
};

// Element-wise maximum; throws EmptyInput or DimensionMismatch.
Embedding view_pool(std::span<const Embedding> es);

Prediction classify_single(const HeadModel& head, const Embedding& e);
Prediction classify_multi(const HeadModel& head, std::span<const Embedding> es);

// Nearest centroid under cosine similarity, ties to the lowest class index.
class CentroidHead final : public HeadModel {
 public:
  explicit CentroidHead(std::vector<Embedding> centroids);

  Prediction classify(const Embedding& e) const override;
  int num_classes() const override { return static_cast<int>(centroids_.size()); }
  std::size_t dim() const override { return dim_; }
  const std::vector<Embedding>& centroids() const { return centroids_; }

 private:
  std::vector<Embedding> centroids_;
  std::vector<double> inv_norms_;
  std::size_t dim_ = 0;
};

struct ToyModelParams {
  std::uint64_t seed = 7;
  // Total embedding width: a chroma block followed by a layout block.
  std::size_t dim = 2048 + 1024;
  int num_classes = 40;
  // Chroma histogram resolution the backbone reads (B per axis).
  int bins = 32;
  // Non-zero rows per chroma bucket in the projection.
  int fanout = 2;
  // Projection weights are drawn from [1 - spread, 1 + spread].
  double centroid_spread = 0.5;
  // Spatial grid (grid x grid cells) for the layout block.
  int layout_grid = 16;
  std::size_t layout_dim = 1024;
  double layout_weight = 0.3;
};

// Deterministic stand-in for a convolutional backbone. The chroma block is a
// sparse non-negative projection of the view's a*b* histogram; the layout
// block projects per-cell oriented color contrast (region boundaries), which
// varies with viewpoint but carries no class information. All entries are
// non-negative.
class ToyBackbone final : public BackboneModel {
 public:
  static constexpr int kDirections = 4;

  explicit ToyBackbone(ToyModelParams params);

  Embedding extract(const View& view) const override;
  std::size_t dim() const override { return params_.dim; }

  // Chroma-only embedding of a histogram (layout block left at zero).
  Embedding chroma_embedding(const ColorHistogram& h) const;

  const ToyModelParams& params() const { return params_; }
  std::size_t chroma_dim() const { return params_.dim - params_.layout_dim; }

 private:
  struct Tap {
    std::uint32_t row;
    double weight;
  };

  void project_chroma(const ColorHistogram& h, std::vector<double>& out) const;

  ToyModelParams params_;
  std::vector<std::vector<Tap>> chroma_taps_;  // per histogram bucket
  std::vector<Tap> layout_taps_;                // per layout feature
};

// Toy head: one centroid per class, the chroma embedding of that class's
// prototype histogram.
CentroidHead make_toy_head(const ToyBackbone& backbone, std::span<const ColorHistogram> class_prototypes);

// Serves embeddings exported offline, keyed by (instance id, view index).
// Pixels are never inspected.
class PrecomputedBackbone final : public BackboneModel {
 public:
  explicit PrecomputedBackbone(std::size_t dim) : dim_(dim) {}

  void add(const std::string& instance_id, std::size_t view_index, Embedding e);
  Embedding extract(const View& view) const override;
  std::size_t dim() const override { return dim_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::size_t dim_;
  std::map<std::pair<std::string, std::size_t>, Embedding> table_;
};

}  // namespace collab
