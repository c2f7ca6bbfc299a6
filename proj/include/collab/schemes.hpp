#pragma once

// The six collaborative inference protocols, each executing one time period
// as an explicit sequence of steps. A step is a set of actions that nodes
// perform in parallel; steps run one after another. Every round returns the
// final prediction (or a dropped marker), the application-layer message
// trace, and a log of which processing stage ran where and when.

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "collab/catalogue.hpp"
#include "collab/models.hpp"
#include "collab/types.hpp"

namespace collab {

enum class SchemeId { CI, SCI_E, SCI_CH, EI, SEI_E, SEI_CH };

inline constexpr SchemeId kAllSchemes[] = {SchemeId::CI, SchemeId::EI,    SchemeId::SCI_E,
                                           SchemeId::SCI_CH, SchemeId::SEI_E, SchemeId::SEI_CH};

std::string_view to_string(SchemeId id);
SchemeId parse_scheme(std::string_view name);  // accepts "SCI_E" and "SCI-E"

bool is_selective(SchemeId id);
bool is_centralized(SchemeId id);
bool uses_histograms(SchemeId id);
bool uses_embedding_context(SchemeId id);

// 0.4 for embedding-gated schemes, 0.7 for histogram-gated ones, none otherwise.
std::optional<double> default_gamma(SchemeId id);

struct SchemeConfig {
  SchemeId scheme = SchemeId::CI;
  std::optional<double> gamma;  // defaults per scheme when unset
  int bins = 32;
  // Indexed by NodeId::index; nodes past the end are available.
  std::vector<bool> availability;
  MessageCatalogue wire;

  bool available(NodeId node) const {
    return node.index >= availability.size() || availability[node.index];
  }
  double effective_gamma() const;
};

enum class Stage { Extract, Head, Pool, Hist, HistAverage, Gate, Consensus };

std::string_view to_string(Stage stage);

struct NodeOp {
  NodeId node;
  Stage stage;
  int step = 0;
};

struct RoundOutcome {
  std::optional<Prediction> prediction;  // nullopt: dropped round
  MessageTrace trace;
  int transmitted_views = 0;
  int available_views = 0;
  std::vector<NodeOp> ops;
  Context next_context;

  bool dropped() const { return !prediction.has_value(); }
};

// Memoizes per-view features by pixel buffer. The views must outlive the
// cached entries; call clear() before their buffers are released. Not
// thread-safe: one cache per worker.
class FeatureCache {
 public:
  const Embedding& embedding(const BackboneModel& backbone, const View& view);
  const ColorHistogram& histogram(const View& view, int bins);
  void clear();

 private:
  std::map<const void*, Embedding> embeddings_;
  std::map<std::pair<const void*, int>, ColorHistogram> histograms_;
};

struct Pipeline {
  const BackboneModel& backbone;
  const HeadModel& head;
  FeatureCache* cache = nullptr;

  Embedding embed(const View& view) const;
  ColorHistogram histogram(const View& view, int bins) const;
};

enum class GateDecision { Keep, Discard };

// Keep iff similarity < gamma.
GateDecision quality_gate(double similarity, double gamma);

// Most frequent label; ties go to the lowest class index.
Prediction consensus(std::span<const Prediction> preds);

RoundOutcome run_ci(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline);
RoundOutcome run_sci_e(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline,
                       const Context& prev_context);
RoundOutcome run_sci_ch(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline);
RoundOutcome run_ei(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline);
RoundOutcome run_sei_e(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline,
                       const Context& prev_context);
RoundOutcome run_sei_ch(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline);

// Dispatches on config.scheme; prev_context is ignored by schemes without
// cross-period state.
RoundOutcome run_scheme(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline,
                        const Context& prev_context = {});

}  // namespace collab
