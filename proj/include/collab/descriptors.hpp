#pragma once

// View descriptors and similarity measures. All functions are pure.

#include <span>
#include <vector>

#include "collab/types.hpp"

namespace collab::descriptors {

inline constexpr int kDefaultBins = 32;
inline constexpr double kChromaMin = -128.0;
inline constexpr double kChromaMax = 127.0;

struct LabPixel {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// sRGB (D65) -> CIE 1976 L*a*b*, with a* and b* clamped to [-128, 127].
LabPixel rgb_to_lab(Rgb rgb);
std::vector<LabPixel> rgb_to_lab(const View& view);

// Index of the equal-width bucket holding a chroma value, for `bins` buckets
// spanning [-128, 127]. Nested for bin counts that divide each other.
int chroma_bucket(double value, int bins);

ColorHistogram hist(const View& view, int bins = kDefaultBins);
ColorHistogram hist(std::span<const LabPixel> lab, int bins = kDefaultBins);

// Normalized histogram intersection: sum(min(h1, h2)) / sum(h2).
double nhi(const ColorHistogram& h1, const ColorHistogram& h2);

// Cosine similarity; 0 when either vector has zero norm.
double cosine(const Embedding& c, const Embedding& e);

ColorHistogram average_histograms(std::span<const ColorHistogram> hs);

// Sums blocks of (fine/coarse)^2 buckets; `fine.bins` must be a multiple of `coarse_bins`.
ColorHistogram downsample(const ColorHistogram& fine, int coarse_bins);

}  // namespace collab::descriptors
