#pragma once

// Communication and compute accounting for a round: transport-level wire
// bytes, per-node radio throughput on an evenly shared 5G slice, phase-wise
// latency, and FLOP placement.

#include <cstdint>
#include <map>
#include <vector>

#include "collab/schemes.hpp"
#include "collab/types.hpp"

namespace collab::network {

// Static TCP/IP cost model: per-segment headers plus delayed ACKs.
struct TransportModel {
  std::uint64_t mss = 1460;
  std::uint64_t header_per_segment = 40;
  std::uint64_t ack_every = 2;
  std::uint64_t ack_size = 40;
  std::uint64_t per_connection_setup = 0;

  void validate() const;
};

// A zero-byte payload still occupies one bare segment.
std::uint64_t segments(std::uint64_t payload_bytes, const TransportModel& tm);
std::uint64_t wire_bytes(std::uint64_t payload_bytes, const TransportModel& tm);
inline std::uint64_t wire_bytes(const Message& msg, const TransportModel& tm) {
  return wire_bytes(msg.payload_bytes, tm);
}

std::uint64_t round_overhead(const MessageTrace& trace, const TransportModel& tm);

// 100 * (1 - transmitted / baseline); throws InvalidCounts.
double transmission_gain(int baseline_views, int transmitted_views);

struct RadioConfig {
  double carrier_hz = 3.5e9;
  double bandwidth_hz = 50e6;
  double scs_hz = 15e3;
  int mimo_layers = 2;
  double total_rbs = 50;
  int subcarriers_per_rb = 12;
  double max_spectral_efficiency = 7.4;
  double overhead_factor = 0.75;
  // Per-node SNR in dB, indexed by NodeId::index. Nodes without an entry use
  // fallback_snr_db.
  std::vector<double> snr_db;
  double fallback_snr_db = 20.0;

  double snr_for(NodeId node) const {
    return node.index < snr_db.size() ? snr_db[node.index] : fallback_snr_db;
  }
};

// Uniform draws in [min_db, max_db] for nodes 0..count-1.
std::vector<double> draw_snr_db(std::size_t count, std::uint64_t seed, double min_db = 0.0, double max_db = 20.0);

double spectral_efficiency(const RadioConfig& radio, double snr_db);

// Bits per second available to `node` when the slice is split evenly among
// `active_nodes`.
double node_throughput(const RadioConfig& radio, NodeId node, int active_nodes);

struct StageTimes {
  double extract_ms = 0.0;
  double head_ms = 0.0;
  double pool_ms = 0.0;
  double hist_ms = 0.0;
  double consensus_ms = 0.0;
};

struct ProcessingProfile {
  StageTimes source;
  StageTimes controller;

  static ProcessingProfile defaults();
  static ProcessingProfile zero() { return {}; }
  double stage_ms(NodeId node, Stage stage) const;
};

// Steps run in order; within a step every actor works in parallel, and an
// actor's time is its processing plus the airtime of the step's messages on
// its link. The controller has no link of its own.
double round_latency_ms(const RoundOutcome& outcome, const RadioConfig& radio, const ProcessingProfile& profile,
                        const TransportModel& tm);

struct ComputeCostModel {
  double backbone_flops = 30.7e9;  // per view
  double pool_flops = 0.3e6;       // per inference
  double head_flops = 239.4e6;     // per inference
};

struct RoundFlops {
  std::map<NodeId, double> source;  // one entry per node that computed anything
  double controller = 0.0;

  double source_total() const;
};

RoundFlops round_flops(const RoundOutcome& outcome, const ComputeCostModel& cost);

}  // namespace collab::network
