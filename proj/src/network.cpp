#include "collab/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "collab/random.hpp"

namespace collab::network {

void TransportModel::validate() const {
  if (mss < 1) throw Error(ErrorCode::InvalidConfig, "mss must be >= 1");
  if (ack_every < 1) throw Error(ErrorCode::InvalidConfig, "ack_every must be >= 1");
}

std::uint64_t segments(std::uint64_t payload_bytes, const TransportModel& tm) {
  return std::max<std::uint64_t>(1, (payload_bytes + tm.mss - 1) / tm.mss);
}

std::uint64_t wire_bytes(std::uint64_t payload_bytes, const TransportModel& tm) {
  tm.validate();
  const auto segs = segments(payload_bytes, tm);
  return payload_bytes + segs * tm.header_per_segment + (segs / tm.ack_every) * tm.ack_size +
         tm.per_connection_setup;
}

std::uint64_t round_overhead(const MessageTrace& trace, const TransportModel& tm) {
  std::uint64_t total = 0;
  for (const auto& m : trace.entries()) total += wire_bytes(m.message, tm);
  return total;
}

double transmission_gain(int baseline_views, int transmitted_views) {
  if (baseline_views < 1 || transmitted_views < 0 || transmitted_views > baseline_views) {
    throw Error(ErrorCode::InvalidCounts, "transmitted " + std::to_string(transmitted_views) + " of " +
                                              std::to_string(baseline_views) + " views");
  }
  return 100.0 * (1.0 - static_cast<double>(transmitted_views) / baseline_views);
}

std::vector<double> draw_snr_db(std::size_t count, std::uint64_t seed, double min_db, double max_db) {
  auto rng = make_rng({seed, 0x534e52UL});
  std::uniform_real_distribution<double> u(min_db, max_db);
  std::vector<double> out(count);
  for (auto& s : out) s = u(rng);
  return out;
}

double spectral_efficiency(const RadioConfig& radio, double snr_db) {
  const double linear = std::pow(10.0, snr_db / 10.0);
  return std::min(std::log2(1.0 + linear), radio.max_spectral_efficiency) * radio.overhead_factor;
}

double node_throughput(const RadioConfig& radio, NodeId node, int active_nodes) {
  if (active_nodes < 1) throw Error(ErrorCode::InvalidCounts, "at least one active node is required");
  const double rbs = radio.total_rbs / active_nodes;
  return rbs * radio.subcarriers_per_rb * radio.scs_hz * radio.mimo_layers *
         spectral_efficiency(radio, radio.snr_for(node));
}

ProcessingProfile ProcessingProfile::defaults() {
  // Source figures put an EI round at ~20.5 ms; the controller is an order of
  // magnitude faster per stage.
  ProcessingProfile p;
  p.source = StageTimes{.extract_ms = 18.3, .head_ms = 2.1, .pool_ms = 0.1, .hist_ms = 1.2, .consensus_ms = 0.01};
  p.controller = StageTimes{.extract_ms = 3.6, .head_ms = 0.4, .pool_ms = 0.05, .hist_ms = 0.1, .consensus_ms = 0.01};
  return p;
}

double ProcessingProfile::stage_ms(NodeId node, Stage stage) const {
  const StageTimes& t = node.is_controller() ? controller : source;
  switch (stage) {
    case Stage::Extract: return t.extract_ms;
    case Stage::Head: return t.head_ms;
    case Stage::Pool: return t.pool_ms;
    case Stage::Hist:
    case Stage::HistAverage: return t.hist_ms;
    case Stage::Consensus: return t.consensus_ms;
    case Stage::Gate: return 0.0;
  }
  return 0.0;
}

double round_latency_ms(const RoundOutcome& outcome, const RadioConfig& radio, const ProcessingProfile& profile,
                        const TransportModel& tm) {
  // step -> actor -> busy time
  std::map<int, std::map<NodeId, double>> busy;
  for (const auto& op : outcome.ops) busy[op.step][op.node] += profile.stage_ms(op.node, op.stage);
  const int active = std::max(outcome.available_views, 1);
  for (const auto& entry : outcome.trace.entries()) {
    const auto& m = entry.message;
    const NodeId link = m.sender.is_controller() ? m.receiver : m.sender;
    const double bits = 8.0 * static_cast<double>(wire_bytes(m, tm));
    busy[entry.step][link] += 1e3 * bits / node_throughput(radio, link, active);
  }
  double total = 0.0;
  for (const auto& [step, actors] : busy) {
    double longest = 0.0;
    for (const auto& [node, ms] : actors) longest = std::max(longest, ms);
    total += longest;
  }
  return total;
}

double RoundFlops::source_total() const {
  double sum = 0.0;
  for (const auto& [node, f] : source) sum += f;
  return sum;
}

RoundFlops round_flops(const RoundOutcome& outcome, const ComputeCostModel& cost) {
  RoundFlops out;
  for (const auto& op : outcome.ops) {
    double f = 0.0;
    switch (op.stage) {
      case Stage::Extract: f = cost.backbone_flops; break;
      case Stage::Pool: f = cost.pool_flops; break;
      case Stage::Head: f = cost.head_flops; break;
      default: break;
    }
    if (op.node.is_controller()) {
      out.controller += f;
    } else {
      out.source[op.node] += f;
    }
  }
  return out;
}

}  // namespace collab::network
