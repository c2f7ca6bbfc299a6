#pragma once

// Domain vocabulary shared by every module: nodes, periods, views,
// intermediate representations, contexts, predictions and message traces.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "collab/error.hpp"

namespace collab {

struct NodeId {
  static constexpr std::uint32_t kControllerIndex = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t index = 0;

  static constexpr NodeId controller() { return NodeId{kControllerIndex}; }
  constexpr bool is_controller() const { return index == kControllerIndex; }

  auto operator<=>(const NodeId&) const = default;
};

std::string to_string(NodeId node);

struct TimePeriod {
  std::uint64_t tick = 0;
  auto operator<=>(const TimePeriod&) const = default;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

// Where a view came from inside a dataset; used by lookup-based backends.
struct ViewOrigin {
  std::string instance_id;
  std::size_t view_index = 0;
  bool operator==(const ViewOrigin&) const = default;
};

// An 8-bit RGB raster, row-major, interleaved. Pixel storage is shared and
// immutable so copies of a View are cheap.
class View {
 public:
  static constexpr int kChannels = 3;
  static constexpr int kDefaultWidth = 224;
  static constexpr int kDefaultHeight = 224;

  View() = default;
  View(int width, int height, std::vector<std::uint8_t> pixels, NodeId node = {},
       TimePeriod period = {}, std::optional<ViewOrigin> origin = std::nullopt);

  static View filled(int width, int height, Rgb color);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::span<const std::uint8_t> pixels() const;
  Rgb at(std::size_t pixel) const;

  NodeId node() const { return node_; }
  TimePeriod period() const { return period_; }
  const std::optional<ViewOrigin>& origin() const { return origin_; }

  View with_node(NodeId node, TimePeriod period) const;
  View with_pixels(std::vector<std::uint8_t> pixels) const;

  // Identity of the pixel buffer, stable across copies of the same view.
  const void* buffer_id() const { return pixels_.get(); }

 private:
  int width_ = 0;
  int height_ = 0;
  std::shared_ptr<const std::vector<std::uint8_t>> pixels_;
  NodeId node_{};
  TimePeriod period_{};
  std::optional<ViewOrigin> origin_;
};

struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const Embedding&) const = default;
};

// B x B chromaticity histogram over (a*, b*); row index is the a* bucket.
struct ColorHistogram {
  int bins = 0;
  std::vector<double> mass;

  static ColorHistogram zeros(int bins);
  double& at(int a_bucket, int b_bucket) { return mass[static_cast<std::size_t>(a_bucket) * bins + b_bucket]; }
  double at(int a_bucket, int b_bucket) const { return mass[static_cast<std::size_t>(a_bucket) * bins + b_bucket]; }
  double total() const;
  bool operator==(const ColorHistogram&) const = default;
};

using Context = std::variant<std::monostate, Embedding, ColorHistogram>;

inline bool is_empty(const Context& c) { return std::holds_alternative<std::monostate>(c); }

struct Prediction {
  static constexpr int kMaxClasses = 256;
  std::uint16_t label = 0;
  auto operator<=>(const Prediction&) const = default;
};

std::uint8_t encode_prediction(Prediction p);
Prediction decode_prediction(std::uint8_t byte);

struct NodeView {
  NodeId node;
  View view;
};

struct MultiViewInstance {
  std::string instance_id;
  Prediction true_label;
  std::vector<NodeView> views;
  std::vector<View> context_views;
};

struct ScenarioParams {
  int view_width = View::kDefaultWidth;
  int view_height = View::kDefaultHeight;
  int num_classes = 40;
};

// Throws Error{EmptyCollection | DuplicateNode | DimensionMismatch | InvalidLabel}.
const MultiViewInstance& validate_instance(const MultiViewInstance& instance,
                                           const ScenarioParams& params);

enum class MessageKind {
  View,
  Embedding,
  Histogram,
  Context,
  LocalPrediction,
  FinalPrediction,
};

std::string_view to_string(MessageKind kind);

enum class Phase { ContextDissemination, Upstream, Downstream };

std::string_view to_string(Phase phase);

struct Message {
  NodeId sender;
  NodeId receiver;
  MessageKind kind = MessageKind::View;
  std::uint64_t payload_bytes = 0;
  TimePeriod period;
};

struct TracedMessage {
  Message message;
  Phase phase = Phase::Upstream;
  int step = 0;
};

// Append-only record of one round's application-layer messages, in protocol order.
class MessageTrace {
 public:
  void append(const Message& message, Phase phase, int step);

  const std::vector<TracedMessage>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t count(MessageKind kind) const;

 private:
  std::vector<TracedMessage> entries_;
};

}  // namespace collab
