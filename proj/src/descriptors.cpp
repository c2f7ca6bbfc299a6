#include "collab/descriptors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace collab::descriptors {
namespace {

// D65 reference white for the sRGB primaries below.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kKappa = 24389.0 / 27.0;

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double lab_f(double t) { return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0; }

// Fixed-point position inside [-128, 127]; bucketing through an integer keeps
// coarse and fine bucketings exactly nested.
constexpr int kFixedBits = 24;

}  // namespace

LabPixel rgb_to_lab(Rgb rgb) {
  const auto& lin = linear_table();
  const double r = lin[rgb.r];
  const double g = lin[rgb.g];
  const double b = lin[rgb.b];

  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);

  LabPixel out;
  out.L = std::clamp(116.0 * fy - 16.0, 0.0, 100.0);
  out.a = std::clamp(500.0 * (fx - fy), kChromaMin, kChromaMax);
  out.b = std::clamp(200.0 * (fy - fz), kChromaMin, kChromaMax);
  return out;
}

std::vector<LabPixel> rgb_to_lab(const View& view) {
  std::vector<LabPixel> out(view.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rgb_to_lab(view.at(i));
  return out;
}

int chroma_bucket(double value, int bins) {
  const double t = std::clamp((value - kChromaMin) / (kChromaMax - kChromaMin), 0.0, 1.0);
  const auto q = static_cast<std::int64_t>(std::floor(std::ldexp(t, kFixedBits)));
  const auto bucket = static_cast<int>((q * bins) >> kFixedBits);
  return std::min(bucket, bins - 1);
}

ColorHistogram hist(std::span<const LabPixel> lab, int bins) {
  ColorHistogram h = ColorHistogram::zeros(bins);
  if (lab.empty()) return h;
  for (const auto& p : lab) h.at(chroma_bucket(p.a, bins), chroma_bucket(p.b, bins)) += 1.0;
  const double n = static_cast<double>(lab.size());
  for (auto& m : h.mass) m /= n;
  return h;
}

ColorHistogram hist(const View& view, int bins) {
  if (bins < 1) throw Error(ErrorCode::BinCountMismatch, "bin count must be >= 1");
  return hist(rgb_to_lab(view), bins);
}

double nhi(const ColorHistogram& h1, const ColorHistogram& h2) {
  if (h1.bins != h2.bins || h1.mass.size() != h2.mass.size()) {
    throw Error(ErrorCode::BinCountMismatch,
                std::to_string(h1.bins) + " vs " + std::to_string(h2.bins) + " bins");
  }
  double inter = 0.0;
  double denom = 0.0;
  for (std::size_t i = 0; i < h1.mass.size(); ++i) {
    inter += std::min(h1.mass[i], h2.mass[i]);
    denom += h2.mass[i];
  }
  if (denom <= 0.0) return 0.0;
  return std::clamp(inter / denom, 0.0, 1.0);
}

double cosine(const Embedding& c, const Embedding& e) {
  if (c.dim() != e.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(c.dim()) + " vs " + std::to_string(e.dim()));
  }
  double dot = 0.0, nc = 0.0, ne = 0.0;
  for (std::size_t i = 0; i < c.dim(); ++i) {
    dot += c.values[i] * e.values[i];
    nc += c.values[i] * c.values[i];
    ne += e.values[i] * e.values[i];
  }
  if (nc == 0.0 || ne == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nc) * std::sqrt(ne)), -1.0, 1.0);
}

ColorHistogram average_histograms(std::span<const ColorHistogram> hs) {
  if (hs.empty()) throw Error(ErrorCode::EmptyInput, "no histograms to average");
  ColorHistogram avg = ColorHistogram::zeros(hs.front().bins);
  for (const auto& h : hs) {
    if (h.bins != avg.bins || h.mass.size() != avg.mass.size()) {
      throw Error(ErrorCode::BinCountMismatch,
                  std::to_string(h.bins) + " vs " + std::to_string(avg.bins) + " bins");
    }
    for (std::size_t i = 0; i < avg.mass.size(); ++i) avg.mass[i] += h.mass[i];
  }
  const double n = static_cast<double>(hs.size());
  for (auto& m : avg.mass) m /= n;
  return avg;
}

ColorHistogram downsample(const ColorHistogram& fine, int coarse_bins) {
  if (coarse_bins < 1 || fine.bins % coarse_bins != 0) {
    throw Error(ErrorCode::BinCountMismatch,
                std::to_string(coarse_bins) + " does not divide " + std::to_string(fine.bins));
  }
  const int r = fine.bins / coarse_bins;
  ColorHistogram out = ColorHistogram::zeros(coarse_bins);
  for (int i = 0; i < fine.bins; ++i)
    for (int j = 0; j < fine.bins; ++j) out.at(i / r, j / r) += fine.at(i, j);
  return out;
}

}  // namespace collab::descriptors
