#include "collab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "collab/descriptors.hpp"
#include "collab/random.hpp"

namespace collab::harness {
namespace {

constexpr std::uint64_t kSampleTag = 0x73616d70;
constexpr std::uint64_t kNoiseTag = 0x6e6f6973;
constexpr std::uint64_t kFailTag = 0x6661696c;

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Error bad_value(const std::string& key, const std::string& value) {
  return Error(ErrorCode::InvalidConfig, "bad value for '" + key + "': '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw bad_value(key, v);
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw bad_value(key, v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  const auto l = lower(v);
  if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
  if (l == "0" || l == "false" || l == "no" || l == "off") return false;
  throw bad_value(key, v);
}

// "1..6", "1,2,4" or a mix.
std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& tok : split_list(v)) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(to_int(key, tok)));
      continue;
    }
    const auto lo = to_int(key, tok.substr(0, dots));
    const auto hi = to_int(key, tok.substr(dots + 2));
    if (hi < lo) throw bad_value(key, v);
    for (auto i = lo; i <= hi; ++i) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split_list(v)) out.push_back(to_double(key, tok));
  return out;
}

std::string fmt(double v, int precision = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::uint64_t derive(std::initializer_list<std::uint64_t> key) { return make_rng(key)(); }

std::uint64_t repeat_seed(const ExperimentConfig& c, int repeat) {
  return c.seed + static_cast<std::uint64_t>(repeat);
}

// Views and radio conditions for one (instance, snr, repeat), shared by every
// N, scheme and gamma evaluated on it.
struct Trial {
  std::vector<View> current;  // max N views, in node order
  std::vector<View> context;
  network::RadioConfig radio;
};

Trial prepare_trial(const ExperimentConfig& c, const std::vector<View>& base, std::size_t instance,
                    std::optional<double> snr, int repeat, int max_n) {
  const auto seed = repeat_seed(c, repeat);
  const auto sample = dataset::sample_views(base.size(), max_n, c.split_context,
                                            derive({seed, instance, kSampleTag}), c.context_size);
  auto noisy = [&](std::size_t v) {
    if (!snr) return base[v];
    dataset::NoiseSpec spec = dataset::NoiseSpec::with_snr(*snr);
    spec.power = c.signal_power;
    return dataset::add_noise(base[v], spec, derive({seed, instance, v, kNoiseTag})).view;
  };
  Trial t;
  for (auto v : sample.current) t.current.push_back(noisy(v));
  for (auto v : sample.context) t.context.push_back(noisy(v));
  t.radio = c.radio;
  t.radio.snr_db = network::draw_snr_db(static_cast<std::size_t>(max_n), seed, c.radio_snr_min_db, c.radio_snr_max_db);
  return t;
}

MultiViewInstance make_instance(const dataset::ManifestEntry& entry, const Trial& t, int n) {
  MultiViewInstance inst;
  inst.instance_id = entry.instance_id;
  inst.true_label = entry.label;
  for (int k = 0; k < n; ++k) {
    const NodeId node{static_cast<std::uint32_t>(k)};
    inst.views.push_back({node, t.current[k].with_node(node, TimePeriod{1})});
  }
  for (const auto& v : t.context) inst.context_views.push_back(v.with_node(NodeId{}, TimePeriod{0}));
  return inst;
}

std::vector<bool> failure_mask(const ExperimentConfig& c, int repeat, std::size_t instance, int n, int failures) {
  std::vector<bool> mask(static_cast<std::size_t>(n), true);
  if (failures <= 0) return mask;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto rng = make_rng({repeat_seed(c, repeat), instance, static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(failures), kFailTag});
  std::shuffle(order.begin(), order.end(), rng);
  for (int k = 0; k < failures; ++k) mask[order[k]] = false;
  return mask;
}

// Previous-period context for embedding-gated schemes: the pooled embedding
// of the held-out views.
Context embedding_context(const Trial& t, const Pipeline& pipeline) {
  if (t.context.empty()) return {};
  std::vector<Embedding> es;
  for (const auto& v : t.context) es.push_back(pipeline.embed(v));
  return view_pool(es);
}

std::vector<std::optional<double>> gammas_for(const ExperimentConfig& c, SchemeId s) {
  if (!is_selective(s)) return {std::nullopt};
  if (c.gammas.empty()) return {default_gamma(s)};
  return {c.gammas.begin(), c.gammas.end()};
}

struct RepeatSums {
  int rounds = 0;
  int correct = 0;
  int dropped = 0;
  double gain = 0.0;
  double overhead = 0.0;
  double latency = 0.0;
  double src_flops = 0.0;
  double src_flops_max = 0.0;
  double ctrl_flops = 0.0;
};

using RowKey = std::tuple<int, int, double, int, int>;  // scheme, n, gamma (-1: none), snr index, failures

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

// ---- configuration -----------------------------------------------------------

void ExperimentConfig::validate() const {
  if (repeats < 1) throw Error(ErrorCode::InvalidConfig, "repeats must be >= 1");
  if (schemes.empty()) throw Error(ErrorCode::InvalidConfig, "no schemes selected");
  if (n_values.empty()) throw Error(ErrorCode::InvalidConfig, "no N values selected");
  for (int n : n_values)
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "N must be >= 1");
  for (double g : gammas)
    if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorCode::InvalidConfig, "gamma must be in [0, 1]");
  if (snr_db.empty()) throw Error(ErrorCode::InvalidConfig, "no SNR points selected");
  if (failures.empty()) throw Error(ErrorCode::InvalidConfig, "no failure counts selected");
  for (int f : failures)
    if (f < 0) throw Error(ErrorCode::InvalidConfig, "failure counts must be >= 0");
  if (context_size < 0) throw Error(ErrorCode::InvalidConfig, "context_size must be >= 0");
  if (bins < 1) throw Error(ErrorCode::InvalidConfig, "bins must be >= 1");
  if (radio_snr_max_db < radio_snr_min_db) throw Error(ErrorCode::InvalidConfig, "radio SNR range is empty");
  transport.validate();
  if (!dataset) synthetic.validate();
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = lower(trim(raw_key));
  const std::string v = trim(raw_value);
  auto d = [&] { return to_double(key, v); };
  auto i = [&] { return static_cast<int>(to_int(key, v)); };
  auto u = [&] { return static_cast<std::uint64_t>(to_int(key, v)); };

  if (key == "dataset") {
    if (v.empty() || lower(v) == "synthetic") c.dataset.reset();
    else c.dataset = v;
  } else if (key.rfind("synthetic.", 0) == 0) {
    const auto k = key.substr(10);
    auto& s = c.synthetic;
    if (k == "classes") s.num_classes = i();
    else if (k == "instances_per_class") s.instances_per_class = i();
    else if (k == "views") s.views_per_instance = i();
    else if (k == "width") s.width = i();
    else if (k == "height") s.height = i();
    else if (k == "colors") s.colors_per_class = i();
    else if (k == "regions") s.regions = i();
    else if (k == "concentration") s.mixture_concentration = d();
    else if (k == "palette_bins") s.palette_bins = i();
    else if (k == "noise") s.within_class_noise = d();
    else if (k == "signature_seed") s.signature_seed = u();
    else if (k == "seed") s.seed = u();
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else if (key == "schemes" || key == "scheme") {
    c.schemes.clear();
    for (const auto& tok : split_list(v)) {
      if (lower(tok) == "all") {
        c.schemes.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
        continue;
      }
      try {
        c.schemes.push_back(parse_scheme(tok));
      } catch (const Error&) {
        throw bad_value(key, tok);
      }
    }
  } else if (key == "n") {
    c.n_values = to_int_list(key, v);
  } else if (key == "gamma" || key == "gammas") {
    c.gammas = lower(v) == "default" ? std::vector<double>{} : to_double_list(key, v);
  } else if (key == "repeats") {
    c.repeats = i();
  } else if (key == "seed") {
    c.seed = u();
  } else if (key == "snr" || key == "snr_db") {
    c.snr_db.clear();
    for (const auto& tok : split_list(v)) {
      if (lower(tok) == "none" || lower(tok) == "inf") c.snr_db.emplace_back(std::nullopt);
      else c.snr_db.emplace_back(to_double(key, tok));
    }
  } else if (key == "signal_power") {
    if (lower(v) == "mean_square") c.signal_power = dataset::SignalPower::MeanSquare;
    else if (lower(v) == "variance") c.signal_power = dataset::SignalPower::Variance;
    else throw bad_value(key, v);
  } else if (key == "failures") {
    c.failures = to_int_list(key, v);
  } else if (key == "dropped_policy") {
    if (lower(v) == "count_as_error" || lower(v) == "count-as-error") c.dropped_policy = DroppedPolicy::CountAsError;
    else if (lower(v) == "exclude") c.dropped_policy = DroppedPolicy::Exclude;
    else throw bad_value(key, v);
  } else if (key == "split_context") {
    c.split_context = to_bool(key, v);
  } else if (key == "context_size") {
    c.context_size = i();
  } else if (key == "bins") {
    c.bins = i();
  } else if (key == "backend") {
    if (lower(v) == "auto") c.backend = Backend::Auto;
    else if (lower(v) == "toy") c.backend = Backend::Toy;
    else if (lower(v) == "precomputed") c.backend = Backend::Precomputed;
    else throw bad_value(key, v);
  } else if (key == "centroids") {
    c.centroids = v;
  } else if (key.rfind("toy.", 0) == 0) {
    const auto k = key.substr(4);
    auto& t = c.toy;
    if (k == "seed") t.seed = u();
    else if (k == "dim") t.dim = static_cast<std::size_t>(u());
    else if (k == "bins") t.bins = i();
    else if (k == "fanout") t.fanout = i();
    else if (k == "spread") t.centroid_spread = d();
    else if (k == "layout_grid") t.layout_grid = i();
    else if (k == "layout_dim") t.layout_dim = static_cast<std::size_t>(u());
    else if (k == "layout_weight") t.layout_weight = d();
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else if (key.rfind("radio.", 0) == 0) {
    const auto k = key.substr(6);
    auto& r = c.radio;
    if (k == "carrier_hz") r.carrier_hz = d();
    else if (k == "bandwidth_hz") r.bandwidth_hz = d();
    else if (k == "scs_hz") r.scs_hz = d();
    else if (k == "mimo_layers") r.mimo_layers = i();
    else if (k == "total_rbs") r.total_rbs = d();
    else if (k == "subcarriers_per_rb") r.subcarriers_per_rb = i();
    else if (k == "max_spectral_efficiency") r.max_spectral_efficiency = d();
    else if (k == "overhead_factor") r.overhead_factor = d();
    else if (k == "snr_min_db") c.radio_snr_min_db = d();
    else if (k == "snr_max_db") c.radio_snr_max_db = d();
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else if (key.rfind("transport.", 0) == 0) {
    const auto k = key.substr(10);
    auto& t = c.transport;
    if (k == "mss") t.mss = u();
    else if (k == "header_per_segment") t.header_per_segment = u();
    else if (k == "ack_every") t.ack_every = u();
    else if (k == "ack_size") t.ack_size = u();
    else if (k == "per_connection_setup") t.per_connection_setup = u();
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else if (key.rfind("wire.", 0) == 0) {
    const auto k = key.substr(5);
    if (k == "view_width") c.wire.view_width = i();
    else if (k == "view_height") c.wire.view_height = i();
    else if (k == "embedding_dim") c.wire.embedding_dim = static_cast<std::size_t>(u());
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else if (key.rfind("profile.", 0) == 0) {
    // profile.source.extract_ms, profile.controller.head_ms, ...
    const auto rest = key.substr(8);
    const auto dot = rest.find('.');
    if (dot == std::string::npos) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
    const auto who = rest.substr(0, dot), what = rest.substr(dot + 1);
    network::StageTimes* t = who == "source" ? &c.profile.source : who == "controller" ? &c.profile.controller : nullptr;
    if (!t) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
    if (what == "extract_ms") t->extract_ms = d();
    else if (what == "head_ms") t->head_ms = d();
    else if (what == "pool_ms") t->pool_ms = d();
    else if (what == "hist_ms") t->hist_ms = d();
    else if (what == "consensus_ms") t->consensus_ms = d();
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else if (key.rfind("cost.", 0) == 0) {
    const auto k = key.substr(5);
    if (k == "backbone_flops") c.cost.backbone_flops = d();
    else if (k == "pool_flops") c.cost.pool_flops = d();
    else if (k == "head_flops") c.cost.head_flops = d();
    else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& c, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
  }
}

ExperimentConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::MissingFile, path.string());
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig c;
  apply_config_text(c, buf.str());
  return c;
}

// ---- models ------------------------------------------------------------------

dataset::Dataset open_dataset(const ExperimentConfig& c) {
  if (c.dataset) return dataset::Dataset(dataset::load_dataset(*c.dataset));
  return dataset::Dataset(dataset::generate_synthetic(c.synthetic));
}

ModelBundle build_models(const ExperimentConfig& c, const dataset::Dataset& data) {
  const int K = data.manifest().num_classes;
  const bool precomputed = c.backend == Backend::Precomputed || (c.backend == Backend::Auto && c.centroids);
  ModelBundle out;
  if (precomputed) {
    if (!c.centroids) throw Error(ErrorCode::InvalidConfig, "the precomputed backend needs a centroids file");
    auto centroids = dataset::read_sidecar(*c.centroids);
    if (static_cast<int>(centroids.size()) != K) {
      throw Error(ErrorCode::SidecarShapeMismatch, c.centroids->string() + ": " + std::to_string(centroids.size()) +
                                                       " centroids for " + std::to_string(K) + " classes");
    }
    const std::size_t dim = centroids.front().dim();
    auto backbone = std::make_unique<PrecomputedBackbone>(dim);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto rows = data.embeddings(i);
      if (!rows) throw Error(ErrorCode::MissingEmbedding, "instance '" + data.entry(i).instance_id + "' has no sidecar");
      for (std::size_t v = 0; v < rows->size(); ++v) {
        if ((*rows)[v].dim() != dim) throw Error(ErrorCode::SidecarShapeMismatch, "sidecar dimension differs from centroids");
        backbone->add(data.entry(i).instance_id, v, (*rows)[v]);
      }
    }
    out.head = std::make_unique<CentroidHead>(std::move(centroids));
    out.backbone = std::move(backbone);
    return out;
  }

  auto params = c.toy;
  params.num_classes = K;
  auto backbone = std::make_unique<ToyBackbone>(params);
  std::vector<ColorHistogram> prototypes;
  if (const auto* palette = data.palette()) {
    const auto& spec = *data.manifest().synthetic;
    for (int k = 0; k < K; ++k)
      prototypes.push_back(descriptors::hist(dataset::class_prototype(spec, *palette, k), params.bins));
  } else {
    // Nearest class mean of the chroma histograms.
    std::vector<std::vector<ColorHistogram>> per_class(static_cast<std::size_t>(K));
    for (std::size_t i = 0; i < data.size(); ++i)
      for (const auto& v : data.views(i)) per_class[data.entry(i).label.label].push_back(descriptors::hist(v, params.bins));
    for (int k = 0; k < K; ++k) {
      if (per_class[k].empty()) {
        throw Error(ErrorCode::InvalidConfig, "class " + std::to_string(k) + " has no instances to build a centroid");
      }
      prototypes.push_back(descriptors::average_histograms(per_class[k]));
    }
  }
  out.head = std::make_unique<CentroidHead>(make_toy_head(*backbone, prototypes));
  out.backbone = std::move(backbone);
  return out;
}

// ---- runner ------------------------------------------------------------------

std::vector<MetricsRow> run_experiment(const ExperimentConfig& c, const RoundObserver& observer) {
  c.validate();
  const auto data = open_dataset(c);
  const auto models = build_models(c, data);
  const int max_n = max_of(c.n_values);

  std::map<RowKey, std::vector<RepeatSums>> acc;

  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& entry = data.entry(i);
    const auto base = data.views(i);
    // Noiseless views keep their buffers across repeats, so their features can
    // be shared; noisy ones are fresh per repeat.
    FeatureCache shared_cache;
    for (std::size_t si = 0; si < c.snr_db.size(); ++si) {
      const auto snr = c.snr_db[si];
      for (int r = 0; r < c.repeats; ++r) {
        const Trial trial = prepare_trial(c, base, i, snr, r, max_n);
        FeatureCache local_cache;
        FeatureCache* cache = snr ? &local_cache : &shared_cache;
        const Pipeline pipeline{*models.backbone, *models.head, cache};
        Context e_context;
        bool have_e_context = false;

        for (int n : c.n_values) {
          const auto instance = make_instance(entry, trial, n);
          for (int f : c.failures) {
            if (f >= n) continue;
            const auto mask = failure_mask(c, r, i, n, f);
            for (SchemeId s : c.schemes) {
              if (uses_embedding_context(s) && !have_e_context) {
                e_context = embedding_context(trial, pipeline);
                have_e_context = true;
              }
              for (const auto& g : gammas_for(c, s)) {
                const SchemeConfig sc{s, g, c.bins, mask, c.wire};
                const auto outcome = run_scheme(instance, sc, pipeline, e_context);

                const RowKey key{static_cast<int>(s), n, g.value_or(-1.0), static_cast<int>(si), f};
                auto& sums = acc[key];
                if (sums.empty()) sums.resize(static_cast<std::size_t>(c.repeats));
                auto& rs = sums[static_cast<std::size_t>(r)];
                ++rs.rounds;
                if (outcome.dropped()) ++rs.dropped;
                else if (*outcome.prediction == entry.label) ++rs.correct;
                rs.gain += network::transmission_gain(outcome.available_views, outcome.transmitted_views);
                rs.overhead += static_cast<double>(network::round_overhead(outcome.trace, c.transport));
                rs.latency += network::round_latency_ms(outcome, trial.radio, c.profile, c.transport);
                const auto flops = network::round_flops(outcome, c.cost);
                rs.src_flops += flops.source_total();
                double busiest = 0.0;
                for (const auto& [node, fl] : flops.source) busiest = std::max(busiest, fl);
                rs.src_flops_max += busiest;
                rs.ctrl_flops += flops.controller;

                if (observer) observer(RoundRecord{s, n, g, snr, f, r, i, entry.label, outcome});
              }
            }
          }
        }
        local_cache.clear();
      }
    }
    shared_cache.clear();
  }

  std::vector<MetricsRow> rows;
  for (const auto& [key, sums] : acc) {
    const auto& [scheme, n, gamma, si, f] = key;
    MetricsRow row;
    row.scheme = static_cast<SchemeId>(scheme);
    row.n = n;
    if (gamma >= 0.0) row.gamma = gamma;
    row.snr_db = c.snr_db[static_cast<std::size_t>(si)];
    row.failures = f;
    row.rounds = sums.front().rounds;

    std::vector<double> counted, excluded, gain, overhead, latency, dropped, sf, sfm, cf;
    for (const auto& rs : sums) {
      const double R = rs.rounds;
      counted.push_back(100.0 * rs.correct / R);
      const int kept = rs.rounds - rs.dropped;
      excluded.push_back(kept > 0 ? 100.0 * rs.correct / kept : 0.0);
      gain.push_back(rs.gain / R);
      overhead.push_back(rs.overhead / R);
      latency.push_back(rs.latency / R);
      dropped.push_back(rs.dropped / R);
      sf.push_back(rs.src_flops / R);
      sfm.push_back(rs.src_flops_max / R);
      cf.push_back(rs.ctrl_flops / R);
    }
    row.accuracy_counted = summarize(counted);
    row.accuracy_excluded = summarize(excluded);
    row.accuracy = c.dropped_policy == DroppedPolicy::CountAsError ? row.accuracy_counted : row.accuracy_excluded;
    row.gain = summarize(gain);
    row.overhead_bytes = summarize(overhead);
    row.latency_ms = summarize(latency);
    row.dropped_rate = summarize(dropped);
    row.source_flops = summarize(sf);
    row.source_flops_max = summarize(sfm);
    row.controller_flops = summarize(cf);
    rows.push_back(row);
  }
  sort_rows(rows);
  return rows;
}

std::map<double, std::vector<MetricsRow>> sweep_threshold(ExperimentConfig c, const std::vector<double>& gammas) {
  std::vector<SchemeId> selective;
  for (auto s : c.schemes)
    if (is_selective(s)) selective.push_back(s);
  if (selective.empty()) selective.push_back(SchemeId::SCI_E);
  c.schemes = selective;
  c.gammas = gammas;
  std::map<double, std::vector<MetricsRow>> out;
  for (auto& row : run_experiment(c)) out[*row.gamma].push_back(row);
  return out;
}

// ---- output ------------------------------------------------------------------

void sort_rows(std::vector<MetricsRow>& rows) {
  auto key = [](const MetricsRow& r) {
    const double g = r.gamma.value_or(-1.0);
    const double snr = r.snr_db.value_or(-std::numeric_limits<double>::infinity());
    return std::make_tuple(static_cast<int>(r.scheme), r.n, g, snr, r.failures);
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

void write_csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << "scheme,n,gamma,snr_db,failures,rounds,"
         "accuracy_pct,accuracy_std,accuracy_counted_pct,accuracy_excluded_pct,"
         "gain_pct,gain_std,overhead_bytes,overhead_std,latency_ms,latency_std,"
         "dropped_rate,dropped_std,source_flops,source_flops_max,controller_flops\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << r.n << ',' << (r.gamma ? fmt(*r.gamma, 3) : "") << ','
        << (r.snr_db ? fmt(*r.snr_db, 3) : "none") << ',' << r.failures << ',' << r.rounds << ','
        << fmt(r.accuracy.mean) << ',' << fmt(r.accuracy.std) << ',' << fmt(r.accuracy_counted.mean) << ','
        << fmt(r.accuracy_excluded.mean) << ',' << fmt(r.gain.mean) << ',' << fmt(r.gain.std) << ','
        << fmt(r.overhead_bytes.mean, 3) << ',' << fmt(r.overhead_bytes.std, 3) << ',' << fmt(r.latency_ms.mean) << ','
        << fmt(r.latency_ms.std) << ',' << fmt(r.dropped_rate.mean) << ',' << fmt(r.dropped_rate.std) << ','
        << fmt(r.source_flops.mean, 1) << ',' << fmt(r.source_flops_max.mean, 1) << ','
        << fmt(r.controller_flops.mean, 1) << '\n';
  }
}

void emit_csv(std::vector<MetricsRow> rows, const fs::path& path) {
  sort_rows(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_csv(rows, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

// ---- inspect -----------------------------------------------------------------

InspectResult inspect_round(const ExperimentConfig& c, SchemeId scheme, int n, std::optional<double> gamma,
                            std::size_t instance_index, int repeat) {
  c.validate();
  const auto data = open_dataset(c);
  if (instance_index >= data.size()) {
    throw Error(ErrorCode::InvalidConfig, "instance index " + std::to_string(instance_index) + " out of range");
  }
  const auto models = build_models(c, data);
  const auto base = data.views(instance_index);
  const auto snr = c.snr_db.front();
  const Trial trial = prepare_trial(c, base, instance_index, snr, repeat, n);
  FeatureCache cache;
  const Pipeline pipeline{*models.backbone, *models.head, &cache};
  const Context ctx = uses_embedding_context(scheme) ? embedding_context(trial, pipeline) : Context{};
  const int f = c.failures.front();
  if (f >= n) throw Error(ErrorCode::InvalidConfig, "failures must be below N");
  const SchemeConfig sc{scheme, is_selective(scheme) ? (gamma ? gamma : default_gamma(scheme)) : std::nullopt, c.bins,
                        failure_mask(c, repeat, instance_index, n, f), c.wire};
  InspectResult r;
  r.instance = make_instance(data.entry(instance_index), trial, n);
  r.outcome = run_scheme(r.instance, sc, pipeline, ctx);
  r.latency_ms = network::round_latency_ms(r.outcome, trial.radio, c.profile, c.transport);
  r.overhead_bytes = network::round_overhead(r.outcome.trace, c.transport);
  return r;
}

void print_trace(const InspectResult& r, const network::TransportModel& tm, std::ostream& out) {
  out << "instance " << r.instance.instance_id << " label " << r.instance.true_label.label << '\n';
  out << "step\tphase\tkind\tfrom\tto\tpayload\twire\n";
  for (const auto& e : r.outcome.trace.entries()) {
    const auto& m = e.message;
    out << e.step << '\t' << to_string(e.phase) << '\t' << to_string(m.kind) << '\t' << to_string(m.sender) << '\t'
        << to_string(m.receiver) << '\t' << m.payload_bytes << '\t' << network::wire_bytes(m, tm) << '\n';
  }
  out << "ops:";
  for (const auto& op : r.outcome.ops) out << ' ' << to_string(op.node) << ':' << to_string(op.stage) << '@' << op.step;
  out << '\n';
  if (r.outcome.prediction) out << "prediction " << r.outcome.prediction->label;
  else out << "prediction dropped";
  out << "\ntransmitted " << r.outcome.transmitted_views << " of " << r.outcome.available_views << '\n';
  out << "overhead_bytes " << r.overhead_bytes << "\nlatency_ms " << fmt(r.latency_ms) << '\n';
}

}  // namespace collab::harness
