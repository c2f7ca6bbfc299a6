#include "doctest.h"

#include <algorithm>
#include <set>

#include "collab/descriptors.hpp"
#include "collab/schemes.hpp"
#include "support.hpp"

using namespace collab;

namespace {

constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kBlue{0, 0, 255};
constexpr Rgb kGreen{0, 200, 0};

// A round whose embeddings are supplied by hand through a lookup backbone;
// pixel colors only matter to the histogram-based schemes.
struct Bench {
  std::size_t dim;
  PrecomputedBackbone backbone;
  CentroidHead head;
  MultiViewInstance instance;

  Bench(std::vector<Embedding> centroids, std::vector<std::pair<Embedding, Rgb>> views)
      : dim(centroids.front().dim()), backbone(dim), head(std::move(centroids)) {
    instance.instance_id = "obj";
    for (std::size_t i = 0; i < views.size(); ++i) {
      backbone.add("obj", i, views[i].first);
      const View v = View::filled(4, 4, views[i].second);
      instance.views.push_back({NodeId{static_cast<std::uint32_t>(i)},
                                View(4, 4, std::vector<std::uint8_t>(v.pixels().begin(), v.pixels().end()), {}, {},
                                     ViewOrigin{"obj", i})});
    }
  }

  Pipeline pipeline() const { return Pipeline{backbone, head, nullptr}; }

  RoundOutcome run(SchemeId id, std::optional<double> gamma = std::nullopt, const Context& ctx = {}) const {
    SchemeConfig c;
    c.scheme = id;
    c.gamma = gamma;
    return run_scheme(instance, c, pipeline(), ctx);
  }
};

Embedding vec(std::initializer_list<double> v) { return Embedding{std::vector<double>(v)}; }

std::vector<Embedding> axes(std::size_t k) {
  std::vector<Embedding> out;
  for (std::size_t i = 0; i < k; ++i) {
    Embedding e{std::vector<double>(k, 0.0)};
    e.values[i] = 1.0;
    out.push_back(e);
  }
  return out;
}

std::set<MessageKind> kinds(const RoundOutcome& r) {
  std::set<MessageKind> out;
  for (const auto& t : r.trace.entries()) out.insert(t.message.kind);
  return out;
}

std::vector<std::uint32_t> senders(const RoundOutcome& r, MessageKind kind) {
  std::vector<std::uint32_t> out;
  for (const auto& t : r.trace.entries())
    if (t.message.kind == kind) out.push_back(t.message.sender.index);
  return out;
}

bool same_outcome(const RoundOutcome& a, const RoundOutcome& b) {
  if (a.prediction != b.prediction || a.transmitted_views != b.transmitted_views ||
      a.available_views != b.available_views || a.next_context != b.next_context)
    return false;
  if (a.trace.size() != b.trace.size() || a.ops.size() != b.ops.size()) return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    const auto &x = a.trace.entries()[i], &y = b.trace.entries()[i];
    if (x.message.sender != y.message.sender || x.message.receiver != y.message.receiver ||
        x.message.kind != y.message.kind || x.message.payload_bytes != y.message.payload_bytes ||
        x.phase != y.phase || x.step != y.step)
      return false;
  }
  for (std::size_t i = 0; i < a.ops.size(); ++i)
    if (a.ops[i].node != b.ops[i].node || a.ops[i].stage != b.ops[i].stage || a.ops[i].step != b.ops[i].step)
      return false;
  return true;
}

// Random instance: embeddings drawn per node, a few flat colors per view.
Bench random_bench(std::mt19937_64& rng, int nodes, std::size_t dim = 8, int classes = 5) {
  std::vector<Embedding> cs;
  for (int k = 0; k < classes; ++k) cs.push_back(gen::random_embedding(rng, dim));
  std::uniform_int_distribution<int> c(0, 255);
  std::vector<std::pair<Embedding, Rgb>> views;
  for (int i = 0; i < nodes; ++i)
    views.push_back({gen::random_embedding(rng, dim),
                     Rgb{static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)),
                         static_cast<std::uint8_t>(c(rng))}});
  Bench b(std::move(cs), std::move(views));
  // replace flat views with patchy ones so histograms overlap partially
  for (auto& nv : b.instance.views) {
    const auto p = gen::patchy_view(rng, 6, 6, 3);
    nv.view = View(6, 6, std::vector<std::uint8_t>(p.pixels().begin(), p.pixels().end()), nv.node, {},
                   nv.view.origin());
  }
  return b;
}

}  // namespace

TEST_CASE("quality_gate is strict") {
  CHECK(quality_gate(0.39, 0.4) == GateDecision::Keep);
  CHECK(quality_gate(0.4, 0.4) == GateDecision::Discard);
  CHECK(quality_gate(1.0, 1.0) == GateDecision::Discard);
  CHECK(quality_gate(0.0, 0.0) == GateDecision::Discard);
}

TEST_CASE("consensus examples") {
  auto p = [](std::initializer_list<int> ls) {
    std::vector<Prediction> out;
    for (int l : ls) out.push_back(Prediction{static_cast<std::uint16_t>(l)});
    return out;
  };
  CHECK(consensus(p({7})) == Prediction{7});
  CHECK(consensus(p({2, 5, 2})) == Prediction{2});
  CHECK(consensus(p({9, 1, 1, 9})) == Prediction{1});
  CHECK(consensus(p({1, 1, 4, 4})) == Prediction{1});
  CHECK_THROWS_AS(consensus(std::vector<Prediction>{}), Error);
}

TEST_CASE("scheme names and defaults") {
  for (auto id : kAllSchemes) CHECK(parse_scheme(to_string(id)) == id);
  CHECK(parse_scheme("SCI_E") == SchemeId::SCI_E);
  CHECK(parse_scheme("sei-ch") == SchemeId::SEI_CH);
  CHECK(default_gamma(SchemeId::SCI_E) == 0.4);
  CHECK(default_gamma(SchemeId::SEI_E) == 0.4);
  CHECK(default_gamma(SchemeId::SCI_CH) == 0.7);
  CHECK(default_gamma(SchemeId::SEI_CH) == 0.7);
  CHECK_FALSE(default_gamma(SchemeId::CI));
  CHECK_FALSE(default_gamma(SchemeId::EI));
}

TEST_CASE("CI: one view up and one prediction down per node") {
  std::vector<std::pair<Embedding, Rgb>> views;
  for (int i = 0; i < 6; ++i) views.push_back({vec({1, 0.1 * i, 0}), kRed});
  const Bench b(axes(3), views);
  const auto r = b.run(SchemeId::CI);
  CHECK(r.trace.count(MessageKind::View) == 6);
  CHECK(r.trace.count(MessageKind::FinalPrediction) == 6);
  CHECK(r.trace.size() == 12);
  CHECK(kinds(r) == std::set{MessageKind::View, MessageKind::FinalPrediction});
  CHECK(r.transmitted_views == 6);
  CHECK(is_empty(r.next_context));
  CHECK(r.prediction == Prediction{0});
}

TEST_CASE("CI with one node reduces to single-view classification") {
  const Bench b(axes(3), {{vec({0.2, 0.1, 0.9}), kRed}});
  const auto r = b.run(SchemeId::CI);
  CHECK(r.prediction == classify_single(b.head, vec({0.2, 0.1, 0.9})));
}

TEST_CASE("SCI-E gating examples") {
  const Bench b(axes(3), {{vec({1, 0, 0}), kRed}, {vec({0, 1, 0}), kBlue}, {vec({0, 0.2, 1}), kGreen}});

  const auto open = b.run(SchemeId::SCI_E, 1.0, vec({1, 0, 0}));
  CHECK(open.transmitted_views == 2);  // node 0 matches the context exactly

  const auto all = b.run(SchemeId::SCI_E, 1.0, vec({1, 1, 1}));
  CHECK(all.transmitted_views == 3);

  const Context prev = vec({0.5, 0.5, 0.5});
  const auto closed = b.run(SchemeId::SCI_E, 0.0, prev);
  CHECK(closed.dropped());
  CHECK(closed.transmitted_views == 0);
  CHECK(closed.next_context == prev);
  CHECK(closed.trace.count(MessageKind::FinalPrediction) == 0);

  // context is node 0's own embedding: cosine 1 there, 0 for node 1
  const Bench two(axes(3), {{vec({1, 0, 0}), kRed}, {vec({0, 1, 0}), kBlue}});
  const auto r = two.run(SchemeId::SCI_E, 0.5, vec({1, 0, 0}));
  CHECK(senders(r, MessageKind::Embedding) == std::vector<std::uint32_t>{1});
  CHECK(r.prediction == Prediction{1});
  CHECK(r.next_context == Context{vec({0, 1, 0})});
  CHECK(r.trace.count(MessageKind::Context) == 2);

  const auto cold = two.run(SchemeId::SCI_E, 0.0);
  CHECK(cold.transmitted_views == 2);
  CHECK(cold.trace.count(MessageKind::Context) == 0);
  CHECK(cold.next_context == Context{vec({1, 1, 0})});
}

TEST_CASE("SCI-CH examples") {
  const Bench single(axes(2), {{vec({0, 1}), kRed}});
  for (double g : {0.0, 0.3, 0.7, 1.0}) {
    const auto r = single.run(SchemeId::SCI_CH, g);
    CHECK_FALSE(r.dropped());
    CHECK(r.transmitted_views == 1);
    CHECK(r.prediction == Prediction{1});
  }

  const Bench same(axes(2), {{vec({1, 0}), kRed}, {vec({0, 1}), kRed}, {vec({0, 1}), kRed}});
  const auto r = same.run(SchemeId::SCI_CH, 0.7);
  CHECK(r.transmitted_views == 1);
  CHECK(senders(r, MessageKind::View) == std::vector<std::uint32_t>{0});

  const Bench disjoint(axes(2), {{vec({1, 0}), kRed}, {vec({0, 1}), kBlue}});
  const auto h0 = descriptors::hist(disjoint.instance.views[0].view, 32);
  const auto h1 = descriptors::hist(disjoint.instance.views[1].view, 32);
  const auto avg = descriptors::average_histograms(std::vector{h0, h1});
  CHECK(descriptors::nhi(h0, avg) == doctest::Approx(0.5));
  const auto d = disjoint.run(SchemeId::SCI_CH, 0.7);
  CHECK(d.transmitted_views == 2);
  CHECK(d.trace.count(MessageKind::Histogram) == 2);
  CHECK(d.trace.count(MessageKind::Context) == 2);
  CHECK(d.trace.entries()[2].message.payload_bytes == 4096);
  CHECK(kinds(d) == std::set{MessageKind::Histogram, MessageKind::Context, MessageKind::View,
                             MessageKind::FinalPrediction});
}

TEST_CASE("EI examples") {
  auto run_with = [](std::vector<int> labels) {
    std::vector<std::pair<Embedding, Rgb>> views;
    for (int l : labels) views.push_back({axes(6)[l], kRed});
    return Bench(axes(6), views).run(SchemeId::EI);
  };
  CHECK(run_with({3, 3, 3}).prediction == Prediction{3});
  CHECK(run_with({2, 2, 5}).prediction == Prediction{2});
  const auto tie = run_with({1, 1, 4, 4});
  CHECK(tie.prediction == Prediction{1});
  CHECK(kinds(tie) == std::set{MessageKind::LocalPrediction, MessageKind::FinalPrediction});
  CHECK(tie.trace.size() == 8);
}

TEST_CASE("SEI-E examples") {
  const Bench b(axes(3), {{vec({0, 1, 0.1}), kRed}, {vec({1, 0, 0}), kBlue}, {vec({0.6, 1, 0}), kGreen}});

  const auto open = b.run(SchemeId::SEI_E, 1.0);
  const auto ei = b.run(SchemeId::EI);
  CHECK(open.prediction == ei.prediction);
  CHECK(open.trace.count(MessageKind::Embedding) == 3);
  CHECK(open.trace.count(MessageKind::LocalPrediction) == 3);

  // cosines to (1,0,0): 0, 1, 0.514
  const auto r = b.run(SchemeId::SEI_E, 0.8, vec({1, 0, 0}));
  CHECK(senders(r, MessageKind::LocalPrediction) == std::vector<std::uint32_t>{0, 2});
  CHECK(r.transmitted_views == 2);
  CHECK(r.prediction == Prediction{1});
  CHECK(r.next_context == Context{vec({1, 1, 0.1})});

  const auto dropped = b.run(SchemeId::SEI_E, 0.0, vec({1, 1, 1}));
  CHECK(dropped.dropped());
  CHECK(dropped.trace.count(MessageKind::Embedding) == 3);
  CHECK(dropped.next_context == Context{vec({1, 1, 0.1})});
}

TEST_CASE("SEI-CH examples") {
  const Bench single(axes(3), {{vec({0, 0, 1}), kGreen}});
  CHECK(single.run(SchemeId::SEI_CH, 0.0).prediction == Prediction{2});

  const Bench disjoint(axes(2), {{vec({1, 0}), kRed}, {vec({0, 1}), kBlue}});
  const auto r = disjoint.run(SchemeId::SEI_CH, 0.7);
  CHECK(r.transmitted_views == 2);
  CHECK(r.prediction == Prediction{0});
  CHECK(kinds(r) == std::set{MessageKind::Histogram, MessageKind::Context, MessageKind::LocalPrediction,
                             MessageKind::FinalPrediction});

  const auto open = disjoint.run(SchemeId::SEI_CH, 1.0);
  CHECK(open.prediction == disjoint.run(SchemeId::EI).prediction);
}

TEST_CASE("unavailable nodes send nothing and leave the average") {
  Bench b(axes(2), {{vec({1, 0}), kRed}, {vec({0, 1}), kBlue}, {vec({0, 1}), kBlue}});
  SchemeConfig c;
  c.scheme = SchemeId::SCI_CH;
  c.availability = {true, false, false};
  const auto r = run_scheme(b.instance, c, b.pipeline());
  CHECK(r.available_views == 1);
  CHECK(r.trace.count(MessageKind::Histogram) == 1);
  CHECK(r.prediction == Prediction{0});

  c.availability = {false, false, false};
  try {
    run_scheme(b.instance, c, b.pipeline());
    FAIL("expected NoAvailableNodes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoAvailableNodes);
  }
}

TEST_CASE("transmitted views never decrease as gamma grows") {
  std::mt19937_64 rng(53);
  const SchemeId selective[] = {SchemeId::SCI_E, SchemeId::SCI_CH, SchemeId::SEI_E, SchemeId::SEI_CH};
  for (int trial = 0; trial < 60; ++trial) {
    const auto b = random_bench(rng, 1 + trial % 6);
    const Context ctx = gen::random_embedding(rng, b.dim);
    for (auto id : selective) {
      int prev = -1;
      for (int g = 0; g <= 20; ++g) {
        const auto r = b.run(id, g / 20.0, ctx);
        CHECK(r.transmitted_views >= prev);
        CHECK(r.transmitted_views <= r.available_views);
        prev = r.transmitted_views;
      }
    }
    CHECK(b.run(SchemeId::CI).transmitted_views == b.run(SchemeId::CI).available_views);
    CHECK(b.run(SchemeId::EI).transmitted_views == b.run(SchemeId::EI).available_views);
  }
}

TEST_CASE("gamma = 1 reduces the E-schemes to their ungated counterparts") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const auto b = random_bench(rng, 1 + trial % 6);
    const Context ctx = gen::random_embedding(rng, b.dim);
    CHECK(b.run(SchemeId::SCI_E, 1.0, ctx).prediction == b.run(SchemeId::CI).prediction);
    CHECK(b.run(SchemeId::SEI_E, 1.0, ctx).prediction == b.run(SchemeId::EI).prediction);
  }
}

TEST_CASE("CH schemes never drop and rounds are pure") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const auto b = random_bench(rng, 1 + trial % 6);
    const Context ctx = gen::random_embedding(rng, b.dim);
    for (auto id : kAllSchemes) {
      for (double g : {0.0, 0.4, 0.7, 1.0}) {
        const auto gamma = is_selective(id) ? std::optional(g) : std::nullopt;
        const auto r = b.run(id, gamma, ctx);
        if (!is_selective(id) || uses_histograms(id)) CHECK_FALSE(r.dropped());
        if (r.dropped()) CHECK(r.transmitted_views == 0);
        CHECK(same_outcome(r, b.run(id, gamma, ctx)));
      }
    }
  }
}

TEST_CASE("trace steps follow protocol order") {
  std::mt19937_64 rng(67);
  const auto b = random_bench(rng, 4);
  const Context ctx = gen::random_embedding(rng, b.dim);
  for (auto id : kAllSchemes) {
    const auto r = b.run(id, is_selective(id) ? std::optional(1.0) : std::nullopt, ctx);
    int last = -1;
    for (const auto& t : r.trace.entries()) {
      CHECK(t.step >= last);
      last = t.step;
    }
    CHECK(r.trace.entries().back().message.kind == MessageKind::FinalPrediction);
  }
}
