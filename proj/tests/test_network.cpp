#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "collab/network.hpp"
#include "support.hpp"

using namespace collab;
using namespace collab::network;

namespace {

RoundOutcome outcome_with(std::vector<std::tuple<std::uint32_t, std::uint32_t, MessageKind, std::uint64_t, int>> msgs,
                          int available) {
  RoundOutcome r;
  r.available_views = available;
  for (auto [from, to, kind, bytes, step] : msgs)
    r.trace.append(Message{NodeId{from}, NodeId{to}, kind, bytes, {}}, Phase::Upstream, step);
  return r;
}

constexpr std::uint32_t C = NodeId::kControllerIndex;

}  // namespace

TEST_CASE("wire_bytes examples") {
  const TransportModel tm;
  CHECK(wire_bytes(1, tm) == 41);
  CHECK(wire_bytes(602112, tm) == 626872);
  CHECK(602112 + 413 * 40 + 206 * 40 == 626872);
  CHECK(wire_bytes(0, tm) == 40);
  CHECK(segments(0, tm) == 1);
}

TEST_CASE("wire_bytes matches the reference and is monotone") {
  const TransportModel tm;
  std::uint64_t prev = 0;
  for (std::uint64_t p = 0; p < 20000; p += 7) {
    const auto w = wire_bytes(p, tm);
    CHECK(w == oracle::tcp_bytes(p));
    CHECK(w >= prev);
    prev = w;
  }
  // linear inside a segment
  for (std::uint64_t p = 1461; p < 2920; ++p) CHECK(wire_bytes(p + 1, tm) - wire_bytes(p, tm) == 1);

  TransportModel custom;
  custom.mss = 100;
  custom.ack_every = 3;
  custom.ack_size = 52;
  custom.per_connection_setup = 7;
  for (std::uint64_t p = 0; p < 1000; p += 13)
    CHECK(wire_bytes(p, custom) == oracle::tcp_bytes(p, 100, 40, 3, 52) + 7);

  TransportModel broken;
  broken.mss = 0;
  CHECK_THROWS_AS(wire_bytes(10, broken), Error);
}

TEST_CASE("round_overhead examples") {
  const TransportModel tm;
  CHECK(round_overhead(MessageTrace{}, tm) == 0);

  const auto ci = outcome_with({{0, C, MessageKind::View, 602112, 0}, {C, 0, MessageKind::FinalPrediction, 1, 2}}, 1);
  CHECK(round_overhead(ci.trace, tm) == 626913);
  CHECK(std::abs(626913.0 / 1000.0 - 623.58) / 623.58 < 0.03);

  const auto ei = outcome_with({{0, C, MessageKind::LocalPrediction, 1, 0}, {C, 0, MessageKind::FinalPrediction, 1, 2}}, 1);
  CHECK(round_overhead(ei.trace, tm) == 82);
}

TEST_CASE("transmission_gain examples") {
  CHECK(transmission_gain(6, 6) == 0.0);
  CHECK(transmission_gain(6, 3) == 50.0);
  CHECK(transmission_gain(4, 0) == 100.0);
  CHECK_THROWS_AS(transmission_gain(0, 0), Error);
  CHECK_THROWS_AS(transmission_gain(3, 4), Error);
  CHECK_THROWS_AS(transmission_gain(3, -1), Error);
}

TEST_CASE("node throughput") {
  RadioConfig radio;
  radio.snr_db = {20.0};
  const double t = node_throughput(radio, NodeId{0}, 1);
  CHECK(std::abs(t - 50 * 12 * 15e3 * 2 * std::log2(101.0) * 0.75) < 1e-3);
  CHECK(std::abs(t / 1e6 - 89.88) < 0.01);

  CHECK(spectral_efficiency(radio, 300.0) == doctest::Approx(7.4 * 0.75));
  CHECK(spectral_efficiency(radio, 80.0) == doctest::Approx(7.4 * 0.75));

  for (int n = 1; n <= 8; ++n) {
    CHECK(node_throughput(radio, NodeId{0}, 2 * n) == doctest::Approx(node_throughput(radio, NodeId{0}, n) / 2));
    CHECK(node_throughput(radio, NodeId{0}, n) * n == doctest::Approx(t));
  }
  CHECK(node_throughput(radio, NodeId{5}, 1) == doctest::Approx(t));  // fallback SNR is 20 dB
  CHECK_THROWS_AS(node_throughput(radio, NodeId{0}, 0), Error);
}

TEST_CASE("SNR draws are uniform in range and seeded") {
  const auto a = draw_snr_db(500, 9);
  CHECK(a == draw_snr_db(500, 9));
  CHECK(a != draw_snr_db(500, 10));
  CHECK(std::all_of(a.begin(), a.end(), [](double s) { return s >= 0.0 && s <= 20.0; }));
}

TEST_CASE("latency of a single message is its airtime") {
  RadioConfig radio;
  radio.snr_db = {12.0};
  const TransportModel tm;
  const auto r = outcome_with({{0, C, MessageKind::LocalPrediction, 1, 0}}, 1);
  const double want = 1e3 * 41 * 8 / node_throughput(radio, NodeId{0}, 1);
  CHECK(round_latency_ms(r, radio, ProcessingProfile::zero(), tm) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("latency sums steps and takes the slowest actor within a step") {
  RadioConfig radio;
  radio.snr_db = {5.0, 15.0, 10.0};
  const TransportModel tm;
  ProcessingProfile prof = ProcessingProfile::zero();
  prof.source.extract_ms = 3.0;
  prof.controller.head_ms = 0.5;

  auto r = outcome_with({{0, C, MessageKind::View, 50000, 0},
                         {1, C, MessageKind::View, 50000, 0},
                         {2, C, MessageKind::View, 20000, 0},
                         {C, 0, MessageKind::FinalPrediction, 1, 1},
                         {C, 1, MessageKind::FinalPrediction, 1, 1},
                         {C, 2, MessageKind::FinalPrediction, 1, 1}},
                        3);
  r.ops = {{NodeId{0}, Stage::Extract, 0}, {NodeId{1}, Stage::Extract, 0}, {NodeId::controller(), Stage::Head, 1}};

  auto air = [&](std::uint32_t n, std::uint64_t bytes) {
    return 1e3 * 8.0 * wire_bytes(bytes, tm) / node_throughput(radio, NodeId{n}, 3);
  };
  const double step0 = std::max({3.0 + air(0, 50000), 3.0 + air(1, 50000), air(2, 20000)});
  const double step1 = std::max({0.5, air(0, 1), air(1, 1), air(2, 1)});
  const double got = round_latency_ms(r, radio, prof, tm);
  CHECK(got == doctest::Approx(step0 + step1).epsilon(1e-12));

  // reversing messages inside each step changes nothing
  RoundOutcome rev = r;
  rev.trace = MessageTrace{};
  auto entries = r.trace.entries();
  std::reverse(entries.begin(), entries.end());
  std::stable_sort(entries.begin(), entries.end(), [](auto& a, auto& b) { return a.step < b.step; });
  for (const auto& e : entries) rev.trace.append(e.message, e.phase, e.step);
  CHECK(round_latency_ms(rev, radio, prof, tm) == doctest::Approx(got).epsilon(1e-12));
}

TEST_CASE("FLOP placement") {
  const ComputeCostModel cost;
  RoundOutcome ci;
  for (int i = 0; i < 6; ++i) ci.ops.push_back({NodeId::controller(), Stage::Extract, 1});
  ci.ops.push_back({NodeId::controller(), Stage::Pool, 1});
  ci.ops.push_back({NodeId::controller(), Stage::Head, 1});
  const auto f = round_flops(ci, cost);
  CHECK(f.controller == 6 * 30.7e9 + 0.3e6 + 239.4e6);
  CHECK(f.source.empty());
  CHECK(f.source_total() == 0.0);

  RoundOutcome ei;
  ei.ops = {{NodeId{0}, Stage::Extract, 0}, {NodeId{0}, Stage::Head, 0}, {NodeId::controller(), Stage::Consensus, 1}};
  const auto g = round_flops(ei, cost);
  CHECK(g.source.at(NodeId{0}) == 30.7e9 + 239.4e6);
  CHECK(g.controller == 0.0);

  RoundOutcome hist_only;
  hist_only.ops = {{NodeId{0}, Stage::Hist, 0}, {NodeId{1}, Stage::Hist, 0}, {NodeId::controller(), Stage::HistAverage, 1}};
  const auto h = round_flops(hist_only, cost);
  CHECK(h.source_total() == 0.0);
  CHECK(h.controller == 0.0);
}
