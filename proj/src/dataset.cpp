#include "collab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "collab/descriptors.hpp"
#include "collab/random.hpp"

namespace collab::dataset {
namespace {

void require_file(const fs::path& p) {
  if (!fs::exists(p)) throw Error(ErrorCode::MissingFile, p.string());
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string ppm_token(std::istream& in, const fs::path& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw Error(ErrorCode::MalformedRaster, path.string() + ": truncated header");
  return tok;
}

int ppm_int(std::istream& in, const fs::path& path) {
  const auto tok = ppm_token(in, path);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::MalformedRaster, path.string() + ": bad header field '" + tok + "'");
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in, const fs::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error(ErrorCode::SidecarShapeMismatch, path.string() + ": truncated");
  }
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

std::map<std::string, std::string> parse_pairs(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

std::string synthetic_pairs(const SyntheticSpec& s) {
  std::ostringstream o;
  o.precision(17);
  o << "classes=" << s.num_classes << " instances_per_class=" << s.instances_per_class
    << " views=" << s.views_per_instance << " width=" << s.width << " height=" << s.height
    << " colors=" << s.colors_per_class << " regions=" << s.regions << " concentration=" << s.mixture_concentration << " palette_bins=" << s.palette_bins
    << " noise=" << s.within_class_noise << " signature_seed=" << s.signature_seed << " seed=" << s.seed;
  return o.str();
}

SyntheticSpec synthetic_from_pairs(const std::map<std::string, std::string>& kv) {
  SyntheticSpec s;
  auto geti = [&](const char* k, int& v) {
    if (auto it = kv.find(k); it != kv.end()) v = std::stoi(it->second);
  };
  auto getu = [&](const char* k, std::uint64_t& v) {
    if (auto it = kv.find(k); it != kv.end()) v = std::stoull(it->second);
  };
  geti("classes", s.num_classes);
  geti("instances_per_class", s.instances_per_class);
  geti("views", s.views_per_instance);
  geti("width", s.width);
  geti("height", s.height);
  geti("colors", s.colors_per_class);
  geti("regions", s.regions);
  geti("palette_bins", s.palette_bins);
  if (auto it = kv.find("noise"); it != kv.end()) s.within_class_noise = std::stod(it->second);
  if (auto it = kv.find("concentration"); it != kv.end()) s.mixture_concentration = std::stod(it->second);
  getu("signature_seed", s.signature_seed);
  getu("seed", s.seed);
  return s;
}

}  // namespace

// ---- rasters ---------------------------------------------------------------

View read_ppm(const fs::path& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  if (ppm_token(in, path) != "P6") throw Error(ErrorCode::MalformedRaster, path.string() + ": not a P6 file");
  const int w = ppm_int(in, path);
  const int h = ppm_int(in, path);
  const int maxval = ppm_int(in, path);
  if (w < 1 || h < 1) throw Error(ErrorCode::MalformedRaster, path.string() + ": empty raster");
  if (maxval != 255) throw Error(ErrorCode::MalformedRaster, path.string() + ": maxval must be 255");
  // ppm_token consumed exactly one whitespace byte after maxval.
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * View::kChannels);
  if (!in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()))) {
    throw Error(ErrorCode::MalformedRaster, path.string() + ": truncated pixel data");
  }
  return View(w, h, std::move(px));
}

void write_ppm(const fs::path& path, const View& view) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P6\n" << view.width() << ' ' << view.height() << "\n255\n";
  const auto px = view.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

// ---- sidecars --------------------------------------------------------------

void write_sidecar(const fs::path& path, std::span<const Embedding> rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().dim();
  for (const auto& r : rows)
    if (r.dim() != dim) throw Error(ErrorCode::SidecarShapeMismatch, "rows differ in dimension");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write("MVE1", 4);
  put_u32(out, static_cast<std::uint32_t>(rows.size()));
  put_u32(out, static_cast<std::uint32_t>(dim));
  put_u32(out, 0);
  for (const auto& r : rows) {
    for (double v : r.values) {
      const float f = static_cast<float>(v);
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      put_u32(out, bits);
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

std::vector<Embedding> read_sidecar(const fs::path& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "MVE1", 4) != 0) {
    throw Error(ErrorCode::SidecarShapeMismatch, path.string() + ": bad magic");
  }
  const auto rows = get_u32(in, path);
  const auto dim = get_u32(in, path);
  get_u32(in, path);
  std::vector<Embedding> out(rows, Embedding{std::vector<double>(dim)});
  for (auto& r : out) {
    for (auto& v : r.values) {
      const std::uint32_t bits = get_u32(in, path);
      float f;
      std::memcpy(&f, &bits, sizeof f);
      v = f;
    }
  }
  if (in.peek() != EOF) throw Error(ErrorCode::SidecarShapeMismatch, path.string() + ": trailing data");
  return out;
}

// ---- synthetic -------------------------------------------------------------

void SyntheticSpec::validate() const {
  if (num_classes < 2 || num_classes > Prediction::kMaxClasses)
    throw Error(ErrorCode::InvalidConfig, "synthetic classes must be in [2, 256]");
  if (instances_per_class < 1 || views_per_instance < 1 || colors_per_class < 1 || regions < 1)
    throw Error(ErrorCode::InvalidConfig, "synthetic counts must be >= 1");
  if (width < 4 || height < 4) throw Error(ErrorCode::InvalidConfig, "synthetic views must be at least 4x4");
  if (!(mixture_concentration > 0.0)) throw Error(ErrorCode::InvalidConfig, "mixture_concentration must be > 0");
  if (palette_bins < 2) throw Error(ErrorCode::InvalidConfig, "palette_bins must be >= 2");
  if (within_class_noise < 0.0 || within_class_noise > 1.0)
    throw Error(ErrorCode::InvalidConfig, "within_class_noise must be in [0, 1]");
}

Palette class_palette(const SyntheticSpec& spec) {
  spec.validate();
  const int bins = spec.palette_bins;
  const int needed = spec.num_classes * spec.colors_per_class;
  // Try with a one-bucket moat between classes first; fall back to merely
  // distinct buckets when the gamut is too crowded.
  for (int moat : {1, 0}) {
    auto rng = make_rng({spec.signature_seed, 0x50414cUL});
    std::uniform_int_distribution<int> channel(0, 255);
    std::vector<int> owner(static_cast<std::size_t>(bins) * bins, -1);
    Palette palette(spec.num_classes);
    int placed = 0;
    const double width = (descriptors::kChromaMax - descriptors::kChromaMin) / bins;
    for (int attempt = 0; attempt < 400000 && placed < needed; ++attempt) {
      const int k = placed / spec.colors_per_class;
      const Rgb c{static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
                  static_cast<std::uint8_t>(channel(rng))};
      const auto lab = descriptors::rgb_to_lab(c);
      if (std::hypot(lab.a, lab.b) < 25.0 || lab.L < 25.0 || lab.L > 90.0) continue;
      const int ia = descriptors::chroma_bucket(lab.a, bins);
      const int ib = descriptors::chroma_bucket(lab.b, bins);
      // Stay near the bucket centre so mild jitter keeps the bucket.
      const double fa = (lab.a - descriptors::kChromaMin) / width - ia;
      const double fb = (lab.b - descriptors::kChromaMin) / width - ib;
      if (fa < 0.25 || fa > 0.75 || fb < 0.25 || fb > 0.75) continue;
      if (owner[static_cast<std::size_t>(ia) * bins + ib] != -1) continue;
      bool clash = false;
      for (int da = -moat; da <= moat && !clash; ++da)
        for (int db = -moat; db <= moat && !clash; ++db) {
          const int na = ia + da, nb = ib + db;
          if (na < 0 || nb < 0 || na >= bins || nb >= bins) continue;
          const int o = owner[static_cast<std::size_t>(na) * bins + nb];
          clash = o != -1 && o != k;
        }
      if (clash) continue;
      owner[static_cast<std::size_t>(ia) * bins + ib] = k;
      palette[k].push_back(c);
      ++placed;
    }
    if (placed == needed) return palette;
  }
  throw Error(ErrorCode::InvalidConfig, "cannot fit " + std::to_string(needed) +
                                            " separable class colors at " + std::to_string(bins) + " bins");
}

View class_prototype(const SyntheticSpec& spec, const Palette& palette, int label) {
  const auto& colors = palette.at(label);
  const int stripes = static_cast<int>(colors.size());
  const int w = stripes * 4;
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * View::kChannels);
  for (int x = 0; x < w; ++x) {
    const Rgb c = colors[x / 4];
    px[x * 3] = c.r;
    px[x * 3 + 1] = c.g;
    px[x * 3 + 2] = c.b;
  }
  (void)spec;
  return View(w, 1, std::move(px));
}

View render_view(const SyntheticSpec& spec, const Palette& palette, std::size_t instance_index, int label,
                 std::size_t view_index) {
  auto rng = make_rng({spec.seed, instance_index, view_index, 0x56494557UL});
  const auto& colors = palette.at(label);
  const int S = static_cast<int>(colors.size());

  // Sparse per-view mixture over the class colors (the object's pose).
  std::gamma_distribution<double> gamma(spec.mixture_concentration, 1.0);
  std::vector<double> weights(S);
  for (auto& w : weights) w = gamma(rng) + 1e-9;
  std::discrete_distribution<int> pick(weights.begin(), weights.end());

  std::uniform_real_distribution<double> ux(0.0, spec.width), uy(0.0, spec.height), u01(0.0, 1.0);
  const double noise = spec.within_class_noise;
  const int jitter = static_cast<int>(std::lround(40.0 * noise));
  std::uniform_int_distribution<int> dj(-jitter, jitter);
  std::uniform_int_distribution<int> other_class(0, spec.num_classes - 1);

  struct Seed {
    double x, y;
    Rgb color;
  };
  std::vector<Seed> seeds(spec.regions);
  for (auto& s : seeds) {
    s.x = ux(rng);
    s.y = uy(rng);
    Rgb c = colors[pick(rng)];
    if (noise > 0.0) {
      if (u01(rng) < 0.4 * noise && spec.num_classes > 1) {
        int k = other_class(rng);
        if (k == label) k = (k + 1) % spec.num_classes;
        const auto& oc = palette[k];
        c = oc[std::uniform_int_distribution<std::size_t>(0, oc.size() - 1)(rng)];
      }
      auto shift = [&](std::uint8_t v) { return static_cast<std::uint8_t>(std::clamp(v + dj(rng), 0, 255)); };
      c = {shift(c.r), shift(c.g), shift(c.b)};
    }
    s.color = c;
  }

  std::vector<std::uint8_t> px(static_cast<std::size_t>(spec.width) * spec.height * View::kChannels);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const double cx = x + 0.5, cy = y + 0.5;
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const double d = (seeds[i].x - cx) * (seeds[i].x - cx) + (seeds[i].y - cy) * (seeds[i].y - cy);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      const std::size_t o = (static_cast<std::size_t>(y) * spec.width + x) * View::kChannels;
      px[o] = seeds[best].color.r;
      px[o + 1] = seeds[best].color.g;
      px[o + 2] = seeds[best].color.b;
    }
  }
  (void)S;
  return View(spec.width, spec.height, std::move(px));
}

DatasetManifest generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  DatasetManifest m;
  m.num_classes = spec.num_classes;
  m.width = spec.width;
  m.height = spec.height;
  m.synthetic = spec;
  for (int k = 0; k < spec.num_classes; ++k) {
    for (int i = 0; i < spec.instances_per_class; ++i) {
      m.entries.push_back(ManifestEntry{"c" + std::to_string(k) + "_i" + std::to_string(i),
                                        Prediction{static_cast<std::uint16_t>(k)}, {}, std::nullopt});
    }
  }
  return m;
}

// ---- manifests -------------------------------------------------------------

DatasetManifest load_dataset(const fs::path& manifest_path) {
  require_file(manifest_path);
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + manifest_path.string());
  DatasetManifest m;
  m.root = manifest_path.parent_path();
  std::string line;
  int line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      const auto body = trim(line.substr(1));
      if (body.rfind("synthetic", 0) == 0) {
        m.synthetic = synthetic_from_pairs(parse_pairs(body.substr(9)));
      } else {
        const auto kv = parse_pairs(body);
        if (auto it = kv.find("classes"); it != kv.end()) m.num_classes = std::stoi(it->second);
        if (auto it = kv.find("width"); it != kv.end()) m.width = std::stoi(it->second);
        if (auto it = kv.find("height"); it != kv.end()) m.height = std::stoi(it->second);
      }
      continue;
    }
    const auto fields = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedManifest,
                   manifest_path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 3 || fields.size() > 4) throw bad("expected 3 or 4 tab-separated fields");
    ManifestEntry e;
    e.instance_id = fields[0];
    int label = 0;
    try {
      label = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw bad("label is not an integer");
    }
    if (label < 0 || label >= Prediction::kMaxClasses) throw bad("label out of range");
    e.label = Prediction{static_cast<std::uint16_t>(label)};
    max_label = std::max(max_label, label);
    for (const auto& p : split(fields[2], ',')) {
      if (trim(p).empty()) throw bad("empty view path");
      e.view_paths.push_back(m.root / trim(p));
      require_file(e.view_paths.back());
    }
    if (fields.size() == 4 && !trim(fields[3]).empty()) {
      e.sidecar = m.root / trim(fields[3]);
      require_file(*e.sidecar);
    }
    m.entries.push_back(std::move(e));
  }
  if (m.num_classes == 0) m.num_classes = std::max(max_label + 1, 2);
  if (max_label >= m.num_classes) {
    throw Error(ErrorCode::MalformedManifest, "label " + std::to_string(max_label) + " >= classes");
  }
  if ((m.width == 0 || m.height == 0) && !m.entries.empty()) {
    const auto v = read_ppm(m.entries.front().view_paths.front());
    m.width = v.width();
    m.height = v.height();
  }
  return m;
}

void write_manifest(const DatasetManifest& m, const fs::path& manifest_path) {
  std::ofstream out(manifest_path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + manifest_path.string());
  out << "# classes=" << m.num_classes << " width=" << m.width << " height=" << m.height << "\n";
  if (m.synthetic) out << "# synthetic " << synthetic_pairs(*m.synthetic) << "\n";
  const auto base = manifest_path.parent_path();
  for (const auto& e : m.entries) {
    out << e.instance_id << '\t' << e.label.label << '\t';
    for (std::size_t i = 0; i < e.view_paths.size(); ++i) {
      if (i) out << ',';
      out << fs::relative(e.view_paths[i], base).generic_string();
    }
    if (e.sidecar) out << '\t' << fs::relative(*e.sidecar, base).generic_string();
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "short write to " + manifest_path.string());
}

DatasetManifest write_dataset(const DatasetManifest& manifest, const fs::path& dir) {
  fs::create_directories(dir / "views");
  const Dataset source(manifest);
  DatasetManifest out = manifest;
  out.root = dir;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto& e = out.entries[i];
    const auto views = source.views(i);
    e.view_paths.clear();
    for (std::size_t v = 0; v < views.size(); ++v) {
      const auto p = dir / "views" / (e.instance_id + "_v" + std::to_string(v) + ".ppm");
      write_ppm(p, views[v]);
      e.view_paths.push_back(p);
    }
  }
  write_manifest(out, dir / "manifest.tsv");
  return out;
}

Dataset::Dataset(DatasetManifest manifest) : manifest_(std::move(manifest)) {
  if (manifest_.synthetic) palette_ = class_palette(*manifest_.synthetic);
}

std::vector<View> Dataset::views(std::size_t i) const {
  const auto& e = entry(i);
  std::vector<View> out;
  if (e.view_paths.empty()) {
    if (!palette_) throw Error(ErrorCode::MalformedManifest, "entry '" + e.instance_id + "' lists no views");
    const auto& spec = *manifest_.synthetic;
    for (int v = 0; v < spec.views_per_instance; ++v) {
      const View raw = render_view(spec, *palette_, i, e.label.label, static_cast<std::size_t>(v));
      out.emplace_back(raw.width(), raw.height(), std::vector<std::uint8_t>(raw.pixels().begin(), raw.pixels().end()),
                       NodeId{}, TimePeriod{}, ViewOrigin{e.instance_id, static_cast<std::size_t>(v)});
    }
    return out;
  }
  for (std::size_t v = 0; v < e.view_paths.size(); ++v) {
    const View raw = read_ppm(e.view_paths[v]);
    out.emplace_back(raw.width(), raw.height(), std::vector<std::uint8_t>(raw.pixels().begin(), raw.pixels().end()),
                     NodeId{}, TimePeriod{}, ViewOrigin{e.instance_id, v});
  }
  return out;
}

std::optional<std::vector<Embedding>> Dataset::embeddings(std::size_t i) const {
  const auto& e = entry(i);
  if (!e.sidecar) return std::nullopt;
  auto rows = read_sidecar(*e.sidecar);
  const std::size_t expected =
      e.view_paths.empty() && manifest_.synthetic ? static_cast<std::size_t>(manifest_.synthetic->views_per_instance)
                                                  : e.view_paths.size();
  if (rows.size() != expected) {
    throw Error(ErrorCode::SidecarShapeMismatch, e.sidecar->string() + ": " + std::to_string(rows.size()) +
                                                     " rows for " + std::to_string(expected) + " views");
  }
  return rows;
}

// ---- sampling --------------------------------------------------------------

ViewSample sample_views(std::size_t available, int n, bool split_context, std::uint64_t seed, int context_size) {
  const std::size_t held = split_context ? static_cast<std::size_t>(std::max(context_size, 0)) : 0;
  if (n < 1 || held + static_cast<std::size_t>(n) > available) {
    throw Error(ErrorCode::NotEnoughViews, "cannot draw " + std::to_string(n) + " views (+" + std::to_string(held) +
                                               " context) from " + std::to_string(available));
  }
  std::vector<std::size_t> order(available);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng({seed, 0x53414dUL});
  std::shuffle(order.begin(), order.end(), rng);
  ViewSample s;
  s.context.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(held));
  s.current.assign(order.begin() + static_cast<std::ptrdiff_t>(held),
                   order.begin() + static_cast<std::ptrdiff_t>(held) + n);
  return s;
}

// ---- noise -----------------------------------------------------------------

double signal_power(const View& view, SignalPower power) {
  const auto px = view.pixels();
  double sum = 0.0, sq = 0.0;
  for (auto v : px) {
    sum += v;
    sq += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(px.size());
  const double mean_sq = sq / n;
  if (power == SignalPower::MeanSquare) return mean_sq;
  const double mean = sum / n;
  return mean_sq - mean * mean;
}

NoisyView add_noise(const View& view, const NoiseSpec& spec, std::uint64_t seed) {
  if (spec.sigma.has_value() == spec.target_snr_db.has_value()) {
    throw Error(ErrorCode::InvalidConfig, "set exactly one of sigma and target_snr_db");
  }
  const double power = signal_power(view, spec.power);
  double sigma = 0.0;
  if (spec.sigma) {
    if (*spec.sigma < 0.0) throw Error(ErrorCode::InvalidConfig, "sigma must be >= 0");
    sigma = *spec.sigma;
  } else {
    sigma = std::sqrt(power / std::pow(10.0, *spec.target_snr_db / 10.0));
  }
  if (sigma == 0.0) return {view, 0.0, std::numeric_limits<double>::infinity()};

  auto rng = make_rng({seed, 0x4e4f4953UL});
  std::normal_distribution<double> gauss(0.0, sigma);
  const auto src = view.pixels();
  std::vector<std::uint8_t> px(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    px[i] = static_cast<std::uint8_t>(std::clamp(std::lround(src[i] + gauss(rng)), 0L, 255L));
  }
  const double snr = power > 0.0 ? 10.0 * std::log10(power / (sigma * sigma)) : -std::numeric_limits<double>::infinity();
  return {view.with_pixels(std::move(px)), sigma, snr};
}

}  // namespace collab::dataset
