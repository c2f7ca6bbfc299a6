#include "collab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "collab/descriptors.hpp"
#include "collab/random.hpp"

namespace collab {

Embedding view_pool(std::span<const Embedding> es) {
  if (es.empty()) throw Error(ErrorCode::EmptyInput, "view pooling needs at least one embedding");
  Embedding pooled = es.front();
  for (const auto& e : es.subspan(1)) {
    if (e.dim() != pooled.dim()) {
      throw Error(ErrorCode::DimensionMismatch,
                  std::to_string(e.dim()) + " vs " + std::to_string(pooled.dim()));
    }
    for (std::size_t i = 0; i < e.dim(); ++i) pooled.values[i] = std::max(pooled.values[i], e.values[i]);
  }
  return pooled;
}

Prediction classify_single(const HeadModel& head, const Embedding& e) {
  if (e.dim() != head.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "embedding has " + std::to_string(e.dim()) + " values, head expects " +
                    std::to_string(head.dim()));
  }
  return head.classify(e);
}

Prediction classify_multi(const HeadModel& head, std::span<const Embedding> es) {
  return classify_single(head, view_pool(es));
}

CentroidHead::CentroidHead(std::vector<Embedding> centroids) : centroids_(std::move(centroids)) {
  if (centroids_.size() < 2 || centroids_.size() > static_cast<std::size_t>(Prediction::kMaxClasses)) {
    throw Error(ErrorCode::InvalidLabel, "a head needs between 2 and 256 classes");
  }
  dim_ = centroids_.front().dim();
  for (const auto& c : centroids_) {
    if (c.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "centroids differ in dimension");
    const double n = std::sqrt(std::inner_product(c.values.begin(), c.values.end(), c.values.begin(), 0.0));
    inv_norms_.push_back(n > 0.0 ? 1.0 / n : 0.0);
  }
}

Prediction CentroidHead::classify(const Embedding& e) const {
  // |e| is common to every class, so ranking by dot / |c| ranks by cosine.
  std::uint16_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centroids_.size(); ++k) {
    const auto& c = centroids_[k].values;
    const double score = std::inner_product(c.begin(), c.end(), e.values.begin(), 0.0) * inv_norms_[k];
    if (score > best_score) {
      best_score = score;
      best = static_cast<std::uint16_t>(k);
    }
  }
  return Prediction{best};
}

ToyBackbone::ToyBackbone(ToyModelParams params) : params_(params) {
  if (params_.num_classes < 2) throw Error(ErrorCode::InvalidConfig, "toy model needs K >= 2");
  if (params_.bins < 1 || params_.fanout < 1 || params_.layout_grid < 1) {
    throw Error(ErrorCode::InvalidConfig, "toy model bins, fanout and grid must be >= 1");
  }
  if (params_.dim <= params_.layout_dim) {
    throw Error(ErrorCode::InvalidConfig, "toy model dim must exceed layout_dim");
  }
  if (params_.centroid_spread < 0.0 || params_.centroid_spread >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "centroid_spread must be in [0, 1)");
  }

  auto rng = make_rng({params_.seed, 0x70797UL});
  std::uniform_real_distribution<double> weight(1.0 - params_.centroid_spread, 1.0 + params_.centroid_spread);

  // Distinct buckets get disjoint rows whenever the chroma block is wide
  // enough; otherwise rows are drawn with replacement.
  const std::size_t buckets = static_cast<std::size_t>(params_.bins) * params_.bins;
  const std::size_t rows = chroma_dim();
  const std::size_t taps = buckets * params_.fanout;
  std::vector<std::uint32_t> slots(std::max(rows, taps));
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = static_cast<std::uint32_t>(i % rows);
  std::shuffle(slots.begin(), slots.end(), rng);
  chroma_taps_.resize(buckets);
  for (std::size_t b = 0; b < buckets; ++b)
    for (int f = 0; f < params_.fanout; ++f)
      chroma_taps_[b].push_back({slots[b * params_.fanout + f], weight(rng)});

  const std::size_t features = static_cast<std::size_t>(params_.layout_grid) * params_.layout_grid * kDirections;
  std::vector<std::uint32_t> layout_slots(std::max(params_.layout_dim, features));
  for (std::size_t i = 0; i < layout_slots.size(); ++i)
    layout_slots[i] = static_cast<std::uint32_t>(rows + i % params_.layout_dim);
  std::shuffle(layout_slots.begin(), layout_slots.end(), rng);
  for (std::size_t f = 0; f < features; ++f) layout_taps_.push_back({layout_slots[f], weight(rng)});
}

void ToyBackbone::project_chroma(const ColorHistogram& h, std::vector<double>& out) const {
  if (h.bins != params_.bins) {
    throw Error(ErrorCode::BinCountMismatch, "toy backbone reads " + std::to_string(params_.bins) + " bins");
  }
  for (std::size_t b = 0; b < h.mass.size(); ++b) {
    if (h.mass[b] == 0.0) continue;
    for (const auto& tap : chroma_taps_[b]) out[tap.row] += tap.weight * h.mass[b];
  }
}

Embedding ToyBackbone::chroma_embedding(const ColorHistogram& h) const {
  Embedding e{std::vector<double>(params_.dim, 0.0)};
  project_chroma(h, e.values);
  return e;
}

Embedding ToyBackbone::extract(const View& view) const {
  const int grid = params_.layout_grid;
  if (view.width() < grid || view.height() < grid) {
    throw Error(ErrorCode::UnsupportedDimensions,
                "toy backbone needs at least " + std::to_string(grid) + "x" + std::to_string(grid) + " pixels");
  }
  const auto lab = descriptors::rgb_to_lab(view);
  Embedding e{std::vector<double>(params_.dim, 0.0)};
  project_chroma(descriptors::hist(lab, params_.bins), e.values);

  // Mean color per grid cell, then the contrast (Delta-E / 100) between each
  // cell and its E, S, SE and SW neighbours.
  const int w = view.width(), h = view.height();
  std::vector<descriptors::LabPixel> cells(static_cast<std::size_t>(grid) * grid);
  std::vector<int> counts(cells.size(), 0);
  for (int y = 0; y < h; ++y) {
    const int cy = y * grid / h;
    for (int x = 0; x < w; ++x) {
      const auto& p = lab[static_cast<std::size_t>(y) * w + x];
      const std::size_t c = static_cast<std::size_t>(cy * grid + x * grid / w);
      cells[c].L += p.L;
      cells[c].a += p.a;
      cells[c].b += p.b;
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].L /= counts[c];
    cells[c].a /= counts[c];
    cells[c].b /= counts[c];
  }
  constexpr int kStep[kDirections][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
  const double share = params_.layout_weight / 100.0;
  for (int cy = 0; cy < grid; ++cy) {
    for (int cx = 0; cx < grid; ++cx) {
      const auto& p = cells[static_cast<std::size_t>(cy) * grid + cx];
      for (int d = 0; d < kDirections; ++d) {
        const int nx = cx + kStep[d][0], ny = cy + kStep[d][1];
        if (nx < 0 || nx >= grid || ny >= grid) continue;
        const auto& q = cells[static_cast<std::size_t>(ny) * grid + nx];
        const double contrast =
            std::sqrt((p.L - q.L) * (p.L - q.L) + (p.a - q.a) * (p.a - q.a) + (p.b - q.b) * (p.b - q.b));
        if (contrast == 0.0) continue;
        const auto& tap = layout_taps_[(static_cast<std::size_t>(cy) * grid + cx) * kDirections + d];
        e.values[tap.row] += tap.weight * contrast * share;
      }
    }
  }
  return e;
}

CentroidHead make_toy_head(const ToyBackbone& backbone, std::span<const ColorHistogram> class_prototypes) {
  if (static_cast<int>(class_prototypes.size()) != backbone.params().num_classes) {
    throw Error(ErrorCode::InvalidConfig, "expected one prototype per class");
  }
  std::vector<Embedding> centroids;
  centroids.reserve(class_prototypes.size());
  for (const auto& h : class_prototypes) centroids.push_back(backbone.chroma_embedding(h));
  return CentroidHead(std::move(centroids));
}

void PrecomputedBackbone::add(const std::string& instance_id, std::size_t view_index, Embedding e) {
  if (e.dim() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "stored embedding has " + std::to_string(e.dim()) + " values, expected " + std::to_string(dim_));
  }
  table_[{instance_id, view_index}] = std::move(e);
}

Embedding PrecomputedBackbone::extract(const View& view) const {
  if (!view.origin()) throw Error(ErrorCode::MissingEmbedding, "view carries no dataset origin");
  const auto it = table_.find({view.origin()->instance_id, view.origin()->view_index});
  if (it == table_.end()) {
    throw Error(ErrorCode::MissingEmbedding, "no stored embedding for " + view.origin()->instance_id + "#" +
                                                 std::to_string(view.origin()->view_index));
  }
  return it->second;
}

}  // namespace collab
