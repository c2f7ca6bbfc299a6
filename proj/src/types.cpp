#include "collab/types.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace collab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BinCountMismatch: return "BinCountMismatch";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::UnsupportedDimensions: return "UnsupportedDimensions";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::NoAvailableNodes: return "NoAvailableNodes";
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedRaster: return "MalformedRaster";
    case ErrorCode::MalformedManifest: return "MalformedManifest";
    case ErrorCode::SidecarShapeMismatch: return "SidecarShapeMismatch";
    case ErrorCode::NotEnoughViews: return "NotEnoughViews";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string to_string(NodeId node) {
  if (node.is_controller()) return "controller";
  return "n" + std::to_string(node.index);
}

View::View(int width, int height, std::vector<std::uint8_t> pixels, NodeId node, TimePeriod period,
           std::optional<ViewOrigin> origin)
    : width_(width), height_(height), node_(node), period_(period), origin_(std::move(origin)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::DimensionMismatch, "view must have at least one pixel");
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height * kChannels) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer holds " + std::to_string(pixels.size()) + " bytes, expected " +
                    std::to_string(static_cast<std::size_t>(width) * height * kChannels));
  }
  pixels_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(pixels));
}

View View::filled(int width, int height, Rgb color) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * kChannels);
  for (std::size_t i = 0; i < px.size(); i += kChannels) {
    px[i] = color.r;
    px[i + 1] = color.g;
    px[i + 2] = color.b;
  }
  return View(width, height, std::move(px));
}

std::span<const std::uint8_t> View::pixels() const {
  if (!pixels_) return {};
  return {pixels_->data(), pixels_->size()};
}

Rgb View::at(std::size_t pixel) const {
  const auto& px = *pixels_;
  return {px[pixel * kChannels], px[pixel * kChannels + 1], px[pixel * kChannels + 2]};
}

View View::with_node(NodeId node, TimePeriod period) const {
  View copy = *this;
  copy.node_ = node;
  copy.period_ = period;
  return copy;
}

View View::with_pixels(std::vector<std::uint8_t> pixels) const {
  View copy(width_, height_, std::move(pixels), node_, period_, origin_);
  return copy;
}

ColorHistogram ColorHistogram::zeros(int bins) {
  if (bins < 1) throw Error(ErrorCode::BinCountMismatch, "bin count must be >= 1");
  return ColorHistogram{bins, std::vector<double>(static_cast<std::size_t>(bins) * bins, 0.0)};
}

double ColorHistogram::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

std::uint8_t encode_prediction(Prediction p) {
  if (p.label >= Prediction::kMaxClasses) {
    throw Error(ErrorCode::InvalidLabel, "label " + std::to_string(p.label) + " does not fit one byte");
  }
  return static_cast<std::uint8_t>(p.label);
}

Prediction decode_prediction(std::uint8_t byte) { return Prediction{byte}; }

const MultiViewInstance& validate_instance(const MultiViewInstance& instance,
                                           const ScenarioParams& params) {
  if (params.num_classes < 1 || params.num_classes > Prediction::kMaxClasses) {
    throw Error(ErrorCode::InvalidLabel, "class count must be in [1, 256]");
  }
  if (instance.views.empty()) {
    throw Error(ErrorCode::EmptyCollection, "instance '" + instance.instance_id + "' has no views");
  }
  if (instance.true_label.label >= params.num_classes) {
    throw Error(ErrorCode::InvalidLabel, "label " + std::to_string(instance.true_label.label) +
                                             " outside [0, " + std::to_string(params.num_classes) + ")");
  }
  std::set<NodeId> seen;
  auto check_dims = [&](const View& v) {
    if (v.width() != params.view_width || v.height() != params.view_height) {
      throw Error(ErrorCode::DimensionMismatch,
                  "view is " + std::to_string(v.width()) + "x" + std::to_string(v.height()) +
                      ", scenario expects " + std::to_string(params.view_width) + "x" +
                      std::to_string(params.view_height));
    }
  };
  for (const auto& nv : instance.views) {
    if (nv.node.is_controller()) {
      throw Error(ErrorCode::DuplicateNode, "the controller cannot capture views");
    }
    if (!seen.insert(nv.node).second) {
      throw Error(ErrorCode::DuplicateNode, "node " + to_string(nv.node) + " holds more than one view");
    }
    check_dims(nv.view);
  }
  for (const auto& v : instance.context_views) check_dims(v);
  return instance;
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::View: return "ViewMsg";
    case MessageKind::Embedding: return "EmbeddingMsg";
    case MessageKind::Histogram: return "HistogramMsg";
    case MessageKind::Context: return "ContextMsg";
    case MessageKind::LocalPrediction: return "LocalPredictionMsg";
    case MessageKind::FinalPrediction: return "FinalPredictionMsg";
  }
  return "?";
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::ContextDissemination: return "context";
    case Phase::Upstream: return "upstream";
    case Phase::Downstream: return "downstream";
  }
  return "?";
}

void MessageTrace::append(const Message& message, Phase phase, int step) {
  entries_.push_back({message, phase, step});
}

std::size_t MessageTrace::count(MessageKind kind) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [&](const TracedMessage& m) { return m.message.kind == kind; }));
}

}  // namespace collab
