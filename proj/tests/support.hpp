#pragma once

// Independent reference implementations and random generators for tests.
// Nothing here calls into the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "collab/types.hpp"

namespace oracle {

struct Lab {
  double L, a, b;
};

// CIE 1976 L*a*b* from 8-bit sRGB, D65, written from the textbook formulas
// with pow() and the t/(3 delta^2) + 4/29 branch.
inline Lab lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  auto lin = [](std::uint8_t v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double r = lin(r8), g = lin(g8), b = lin(b8);
  const double X = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double Y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double Z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  constexpr double delta = 6.0 / 29.0;
  auto f = [&](double t) { return t > delta * delta * delta ? std::cbrt(t) : t / (3 * delta * delta) + 4.0 / 29.0; };
  const double fx = f(X / 0.95047), fy = f(Y / 1.0), fz = f(Z / 1.08883);
  Lab out{116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)};
  out.a = std::clamp(out.a, -128.0, 127.0);
  out.b = std::clamp(out.b, -128.0, 127.0);
  return out;
}

// Equal-width bucket over [-128, 127]; the top edge folds into the last bucket.
inline int bucket(double v, int bins) {
  const double width = 255.0 / bins;
  const int k = static_cast<int>(std::floor((v + 128.0) / width));
  return std::clamp(k, 0, bins - 1);
}

// Brute-force histogram: count per (a, b) bucket, divide by pixel count.
inline std::vector<double> histogram(const collab::View& v, int bins) {
  std::vector<double> h(static_cast<std::size_t>(bins) * bins, 0.0);
  const auto px = v.pixels();
  const std::size_t n = v.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    const Lab p = lab(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
    h[static_cast<std::size_t>(bucket(p.a, bins)) * bins + bucket(p.b, bins)] += 1.0;
  }
  for (auto& x : h) x /= static_cast<double>(n);
  return h;
}

// Block-sum of a fine B2 x B2 histogram into B1 x B1, B1 dividing B2.
inline std::vector<double> block_sum(const std::vector<double>& fine, int fine_bins, int coarse_bins) {
  const int r = fine_bins / coarse_bins;
  std::vector<double> out(static_cast<std::size_t>(coarse_bins) * coarse_bins, 0.0);
  for (int i = 0; i < fine_bins; ++i)
    for (int j = 0; j < fine_bins; ++j)
      out[static_cast<std::size_t>(i / r) * coarse_bins + j / r] += fine[static_cast<std::size_t>(i) * fine_bins + j];
  return out;
}

inline double cosine(const std::vector<double>& x, const std::vector<double>& y) {
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0 || ny == 0) return 0;
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

// Count votes, take the largest count, break ties toward the smaller label.
inline int majority(const std::vector<int>& labels) {
  std::map<int, int> count;
  for (int l : labels) ++count[l];
  int best = -1, best_count = 0;
  for (const auto& [label, c] : count)
    if (c > best_count || (c == best_count && label < best)) {
      best = label;
      best_count = c;
    }
  return best;
}

// Payload + per-segment headers + one ACK per ack_every segments.
inline std::uint64_t tcp_bytes(std::uint64_t payload, std::uint64_t mss = 1460, std::uint64_t hdr = 40,
                               std::uint64_t ack_every = 2, std::uint64_t ack = 40) {
  std::uint64_t segs = payload == 0 ? 1 : (payload + mss - 1) / mss;
  return payload + segs * hdr + (segs / ack_every) * ack;
}

}  // namespace oracle

namespace gen {

inline collab::View random_view(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : data) v = static_cast<std::uint8_t>(px(rng));
  return collab::View(w, h, std::move(data));
}

// A view built from a handful of flat colors, closer to real object renders.
inline collab::View patchy_view(std::mt19937_64& rng, int w, int h, int colors) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<collab::Rgb> palette;
  for (int i = 0; i < colors; ++i)
    palette.push_back({static_cast<std::uint8_t>(px(rng)), static_cast<std::uint8_t>(px(rng)),
                       static_cast<std::uint8_t>(px(rng))});
  std::uniform_int_distribution<int> pick(0, colors - 1);
  std::vector<std::uint8_t> data;
  for (int i = 0; i < w * h; ++i) {
    const auto c = palette[pick(rng)];
    data.insert(data.end(), {c.r, c.g, c.b});
  }
  return collab::View(w, h, std::move(data));
}

inline collab::ColorHistogram random_histogram(std::mt19937_64& rng, int bins, double sparsity = 0.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  collab::ColorHistogram h{bins, std::vector<double>(static_cast<std::size_t>(bins) * bins, 0.0)};
  double total = 0;
  for (auto& m : h.mass) {
    if (u(rng) < sparsity) continue;
    m = u(rng);
    total += m;
  }
  if (total == 0) {
    h.mass[0] = 1.0;
    return h;
  }
  for (auto& m : h.mass) m /= total;
  return h;
}

inline collab::Embedding random_embedding(std::mt19937_64& rng, std::size_t dim, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  collab::Embedding e{std::vector<double>(dim)};
  for (auto& v : e.values) v = u(rng);
  return e;
}

}  // namespace gen
