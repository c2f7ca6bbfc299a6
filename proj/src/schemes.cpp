#include "collab/schemes.hpp"

#include <algorithm>
#include <string>

#include "collab/descriptors.hpp"

namespace collab {

std::string_view to_string(SchemeId id) {
  switch (id) {
    case SchemeId::CI: return "CI";
    case SchemeId::SCI_E: return "SCI-E";
    case SchemeId::SCI_CH: return "SCI-CH";
    case SchemeId::EI: return "EI";
    case SchemeId::SEI_E: return "SEI-E";
    case SchemeId::SEI_CH: return "SEI-CH";
  }
  return "?";
}

SchemeId parse_scheme(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '_', '-');
  std::transform(norm.begin(), norm.end(), norm.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto id : kAllSchemes)
    if (to_string(id) == norm) return id;
  throw Error(ErrorCode::InvalidConfig, "unknown scheme '" + std::string(name) + "'");
}

bool is_selective(SchemeId id) { return id != SchemeId::CI && id != SchemeId::EI; }
bool is_centralized(SchemeId id) { return id == SchemeId::CI || id == SchemeId::SCI_E || id == SchemeId::SCI_CH; }
bool uses_histograms(SchemeId id) { return id == SchemeId::SCI_CH || id == SchemeId::SEI_CH; }
bool uses_embedding_context(SchemeId id) { return id == SchemeId::SCI_E || id == SchemeId::SEI_E; }

std::optional<double> default_gamma(SchemeId id) {
  if (uses_embedding_context(id)) return 0.4;
  if (uses_histograms(id)) return 0.7;
  return std::nullopt;
}

double SchemeConfig::effective_gamma() const {
  if (!is_selective(scheme)) {
    throw Error(ErrorCode::InvalidConfig, std::string(to_string(scheme)) + " has no similarity threshold");
  }
  const double g = gamma.value_or(*default_gamma(scheme));
  if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must lie in [0, 1]");
  return g;
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Extract: return "extract";
    case Stage::Head: return "head";
    case Stage::Pool: return "pool";
    case Stage::Hist: return "hist";
    case Stage::HistAverage: return "hist-average";
    case Stage::Gate: return "gate";
    case Stage::Consensus: return "consensus";
  }
  return "?";
}

const Embedding& FeatureCache::embedding(const BackboneModel& backbone, const View& view) {
  auto it = embeddings_.find(view.buffer_id());
  if (it == embeddings_.end()) it = embeddings_.emplace(view.buffer_id(), backbone.extract(view)).first;
  return it->second;
}

const ColorHistogram& FeatureCache::histogram(const View& view, int bins) {
  const auto key = std::make_pair(view.buffer_id(), bins);
  auto it = histograms_.find(key);
  if (it == histograms_.end()) it = histograms_.emplace(key, descriptors::hist(view, bins)).first;
  return it->second;
}

void FeatureCache::clear() {
  embeddings_.clear();
  histograms_.clear();
}

Embedding Pipeline::embed(const View& view) const {
  return cache ? cache->embedding(backbone, view) : backbone.extract(view);
}

ColorHistogram Pipeline::histogram(const View& view, int bins) const {
  return cache ? cache->histogram(view, bins) : descriptors::hist(view, bins);
}

GateDecision quality_gate(double similarity, double gamma) {
  return similarity < gamma ? GateDecision::Keep : GateDecision::Discard;
}

Prediction consensus(std::span<const Prediction> preds) {
  if (preds.empty()) throw Error(ErrorCode::EmptyInput, "consensus needs at least one prediction");
  std::map<std::uint16_t, int> votes;
  for (const auto& p : preds) ++votes[p.label];
  // std::map iterates labels in increasing order, so the first maximum wins ties.
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it)
    if (it->second > best->second) best = it;
  return Prediction{best->first};
}

namespace {

constexpr NodeId kController = NodeId::controller();

class Round {
 public:
  Round(const MultiViewInstance& instance, const SchemeConfig& config) : config_(config) {
    for (const auto& nv : instance.views)
      if (config.available(nv.node)) nodes_.push_back(&nv);
    if (nodes_.empty()) {
      throw Error(ErrorCode::NoAvailableNodes, "instance '" + instance.instance_id + "' has no available node");
    }
    period_ = nodes_.front()->view.period();
    out_.available_views = static_cast<int>(nodes_.size());
  }

  const std::vector<const NodeView*>& nodes() const { return nodes_; }

  void send(NodeId from, NodeId to, MessageKind kind, Phase phase, int step,
            MessageCatalogue::ContextKind ctx = MessageCatalogue::ContextKind::Embedding) {
    out_.trace.append(Message{from, to, kind, config_.wire.payload(kind, ctx, config_.bins), period_}, phase, step);
  }

  void op(NodeId node, Stage stage, int step) { out_.ops.push_back({node, stage, step}); }

  void broadcast(MessageKind kind, Phase phase, int step,
                 MessageCatalogue::ContextKind ctx = MessageCatalogue::ContextKind::Embedding) {
    for (const auto* nv : nodes_) send(kController, nv->node, kind, phase, step, ctx);
  }

  RoundOutcome& outcome() { return out_; }
  RoundOutcome finish() { return std::move(out_); }

 private:
  const SchemeConfig& config_;
  std::vector<const NodeView*> nodes_;
  TimePeriod period_;
  RoundOutcome out_;
};

const Embedding* embedding_context(const Context& ctx) {
  if (is_empty(ctx)) return nullptr;
  if (const auto* e = std::get_if<Embedding>(&ctx)) return e;
  throw Error(ErrorCode::InvalidConfig, "embedding-gated schemes need an embedding context");
}

// Histogram phase shared by SCI-CH and SEI-CH: histograms up, average back
// down as context, then per-node gating with the keep-at-least-one rule.
// Returns indices into round.nodes() of the nodes that pass.
std::vector<std::size_t> histogram_gating(Round& round, const SchemeConfig& config, const Pipeline& pipeline,
                                          int first_step) {
  const auto& nodes = round.nodes();
  std::vector<ColorHistogram> hs;
  hs.reserve(nodes.size());
  for (const auto* nv : nodes) {
    round.op(nv->node, Stage::Hist, first_step);
    hs.push_back(pipeline.histogram(nv->view, config.bins));
    round.send(nv->node, kController, MessageKind::Histogram, Phase::Upstream, first_step);
  }
  round.op(kController, Stage::HistAverage, first_step + 1);
  const ColorHistogram avg = descriptors::average_histograms(hs);
  round.broadcast(MessageKind::Context, Phase::ContextDissemination, first_step + 2,
                  MessageCatalogue::ContextKind::Histogram);

  const double gamma = config.effective_gamma();
  std::vector<std::size_t> kept;
  std::size_t least_similar = 0;
  double least_similarity = 2.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    round.op(nodes[i]->node, Stage::Gate, first_step + 3);
    const double sim = descriptors::nhi(hs[i], avg);
    if (quality_gate(sim, gamma) == GateDecision::Keep) kept.push_back(i);
    if (sim < least_similarity || (sim == least_similarity && nodes[i]->node < nodes[least_similar]->node)) {
      least_similarity = sim;
      least_similar = i;
    }
  }
  if (kept.empty()) kept.push_back(least_similar);
  return kept;
}

}  // namespace

RoundOutcome run_ci(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline) {
  Round round(instance, config);
  std::vector<Embedding> es;
  for (const auto* nv : round.nodes()) round.send(nv->node, kController, MessageKind::View, Phase::Upstream, 0);
  for (const auto* nv : round.nodes()) {
    round.op(kController, Stage::Extract, 1);
    es.push_back(pipeline.embed(nv->view));
  }
  round.op(kController, Stage::Pool, 1);
  round.op(kController, Stage::Head, 1);
  round.outcome().prediction = classify_multi(pipeline.head, es);
  round.outcome().transmitted_views = static_cast<int>(es.size());
  round.broadcast(MessageKind::FinalPrediction, Phase::Downstream, 2);
  return round.finish();
}

RoundOutcome run_sci_e(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline,
                       const Context& prev_context) {
  Round round(instance, config);
  const Embedding* ctx = embedding_context(prev_context);
  const double gamma = config.effective_gamma();
  if (ctx) round.broadcast(MessageKind::Context, Phase::ContextDissemination, 0);

  std::vector<Embedding> received;
  for (const auto* nv : round.nodes()) {
    round.op(nv->node, Stage::Extract, 1);
    Embedding e = pipeline.embed(nv->view);
    bool keep = true;
    if (ctx) {
      round.op(nv->node, Stage::Gate, 1);
      keep = quality_gate(descriptors::cosine(*ctx, e), gamma) == GateDecision::Keep;
    }
    if (keep) {
      round.send(nv->node, kController, MessageKind::Embedding, Phase::Upstream, 1);
      received.push_back(std::move(e));
    }
  }

  auto& out = round.outcome();
  out.transmitted_views = static_cast<int>(received.size());
  if (received.empty()) {
    out.next_context = prev_context;
    return round.finish();
  }
  round.op(kController, Stage::Pool, 2);
  round.op(kController, Stage::Head, 2);
  Embedding pooled = view_pool(received);
  out.prediction = classify_single(pipeline.head, pooled);
  out.next_context = std::move(pooled);
  round.broadcast(MessageKind::FinalPrediction, Phase::Downstream, 3);
  return round.finish();
}

RoundOutcome run_sci_ch(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline) {
  Round round(instance, config);
  const auto kept = histogram_gating(round, config, pipeline, 0);
  const auto& nodes = round.nodes();

  std::vector<Embedding> es;
  for (auto i : kept) round.send(nodes[i]->node, kController, MessageKind::View, Phase::Upstream, 3);
  for (auto i : kept) {
    round.op(kController, Stage::Extract, 4);
    es.push_back(pipeline.embed(nodes[i]->view));
  }
  round.op(kController, Stage::Pool, 4);
  round.op(kController, Stage::Head, 4);
  auto& out = round.outcome();
  out.prediction = classify_multi(pipeline.head, es);
  out.transmitted_views = static_cast<int>(kept.size());
  round.broadcast(MessageKind::FinalPrediction, Phase::Downstream, 5);
  return round.finish();
}

RoundOutcome run_ei(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline) {
  Round round(instance, config);
  std::vector<Prediction> local;
  for (const auto* nv : round.nodes()) {
    round.op(nv->node, Stage::Extract, 0);
    round.op(nv->node, Stage::Head, 0);
    local.push_back(classify_single(pipeline.head, pipeline.embed(nv->view)));
    round.send(nv->node, kController, MessageKind::LocalPrediction, Phase::Upstream, 0);
  }
  round.op(kController, Stage::Consensus, 1);
  auto& out = round.outcome();
  out.prediction = consensus(local);
  out.transmitted_views = static_cast<int>(local.size());
  round.broadcast(MessageKind::FinalPrediction, Phase::Downstream, 2);
  return round.finish();
}

RoundOutcome run_sei_e(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline,
                       const Context& prev_context) {
  Round round(instance, config);
  const Embedding* ctx = embedding_context(prev_context);
  const double gamma = config.effective_gamma();
  if (ctx) round.broadcast(MessageKind::Context, Phase::ContextDissemination, 0);

  std::vector<Embedding> es;
  for (const auto* nv : round.nodes()) {
    round.op(nv->node, Stage::Extract, 1);
    es.push_back(pipeline.embed(nv->view));
    round.send(nv->node, kController, MessageKind::Embedding, Phase::Upstream, 1);
  }

  std::vector<Prediction> local;
  const auto& nodes = round.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (ctx) {
      round.op(nodes[i]->node, Stage::Gate, 2);
      if (quality_gate(descriptors::cosine(*ctx, es[i]), gamma) == GateDecision::Discard) continue;
    }
    round.op(nodes[i]->node, Stage::Head, 2);
    local.push_back(classify_single(pipeline.head, es[i]));
    round.send(nodes[i]->node, kController, MessageKind::LocalPrediction, Phase::Upstream, 2);
  }

  auto& out = round.outcome();
  round.op(kController, Stage::Pool, 3);
  out.next_context = view_pool(es);
  out.transmitted_views = static_cast<int>(local.size());
  if (local.empty()) return round.finish();
  round.op(kController, Stage::Consensus, 3);
  out.prediction = consensus(local);
  round.broadcast(MessageKind::FinalPrediction, Phase::Downstream, 4);
  return round.finish();
}

RoundOutcome run_sei_ch(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline) {
  Round round(instance, config);
  const auto kept = histogram_gating(round, config, pipeline, 0);
  const auto& nodes = round.nodes();

  std::vector<Prediction> local;
  for (auto i : kept) {
    round.op(nodes[i]->node, Stage::Extract, 3);
    round.op(nodes[i]->node, Stage::Head, 3);
    local.push_back(classify_single(pipeline.head, pipeline.embed(nodes[i]->view)));
    round.send(nodes[i]->node, kController, MessageKind::LocalPrediction, Phase::Upstream, 3);
  }
  round.op(kController, Stage::Consensus, 4);
  auto& out = round.outcome();
  out.prediction = consensus(local);
  out.transmitted_views = static_cast<int>(local.size());
  round.broadcast(MessageKind::FinalPrediction, Phase::Downstream, 5);
  return round.finish();
}

RoundOutcome run_scheme(const MultiViewInstance& instance, const SchemeConfig& config, const Pipeline& pipeline,
                        const Context& prev_context) {
  switch (config.scheme) {
    case SchemeId::CI: return run_ci(instance, config, pipeline);
    case SchemeId::SCI_E: return run_sci_e(instance, config, pipeline, prev_context);
    case SchemeId::SCI_CH: return run_sci_ch(instance, config, pipeline);
    case SchemeId::EI: return run_ei(instance, config, pipeline);
    case SchemeId::SEI_E: return run_sei_e(instance, config, pipeline, prev_context);
    case SchemeId::SEI_CH: return run_sei_ch(instance, config, pipeline);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown scheme");
}

}  // namespace collab
