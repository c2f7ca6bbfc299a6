#pragma once

#include <cstdint>

#include "collab/types.hpp"

namespace collab {

// Application-layer payload sizes. Views and embeddings travel as float32;
// predictions as one byte. Defaults give 602,112 B views, 100,352 B
// embeddings and 4,096 B histograms (32 x 32 bins).
struct MessageCatalogue {
  static constexpr std::uint64_t kFloatBytes = 4;

  int view_width = View::kDefaultWidth;
  int view_height = View::kDefaultHeight;
  std::size_t embedding_dim = 25088;

  std::uint64_t view_payload() const {
    return static_cast<std::uint64_t>(view_width) * view_height * View::kChannels * kFloatBytes;
  }
  std::uint64_t embedding_payload() const { return embedding_dim * kFloatBytes; }
  static std::uint64_t histogram_payload(int bins) {
    return static_cast<std::uint64_t>(bins) * bins * kFloatBytes;
  }
  static std::uint64_t prediction_payload() { return 1; }

  enum class ContextKind { Embedding, Histogram };

  // Payload for `kind`; `context` selects the Context variant and `bins` the
  // histogram resolution where they matter.
  std::uint64_t payload(MessageKind kind, ContextKind context = ContextKind::Embedding, int bins = 32) const {
    switch (kind) {
      case MessageKind::View: return view_payload();
      case MessageKind::Embedding: return embedding_payload();
      case MessageKind::Histogram: return histogram_payload(bins);
      case MessageKind::Context:
        return context == ContextKind::Embedding ? embedding_payload() : histogram_payload(bins);
      case MessageKind::LocalPrediction:
      case MessageKind::FinalPrediction: return prediction_payload();
    }
    return 0;
  }
};

}  // namespace collab
