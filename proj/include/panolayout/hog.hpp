#pragma once

// Histogram-of-oriented-gradients descriptor: 4x4 spatial cells, 9 unsigned
// orientation bins, per-cell L2 normalization.  Gradients use central
// differences with replicated borders.

#include <cmath>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/image.hpp"

namespace panolayout {

using HogDescriptor = std::vector<float>;

inline constexpr int kHogCells = 4;
inline constexpr int kHogBins = 9;
inline constexpr int kHogDim = kHogCells * kHogCells * kHogBins;

inline HogDescriptor hog_descriptor(const GrayImage& img) {
  if (img.width < 2 || img.height < 2) throw ValidationError("hog_descriptor: image too small");
  HogDescriptor desc(kHogDim, 0.f);
  auto clamp_x = [&](int x) { return x < 0 ? 0 : (x >= img.width ? img.width - 1 : x); };
  auto clamp_y = [&](int y) { return y < 0 ? 0 : (y >= img.height ? img.height - 1 : y); };
  for (int y = 0; y < img.height; ++y) {
    int cell_y = y * kHogCells / img.height;
    for (int x = 0; x < img.width; ++x) {
      double gx = 0.5 * (img.at(clamp_x(x + 1), y) - img.at(clamp_x(x - 1), y));
      double gy = 0.5 * (img.at(x, clamp_y(y + 1)) - img.at(x, clamp_y(y - 1)));
      double mag = std::sqrt(gx * gx + gy * gy);
      if (mag <= 0.0) continue;
      double angle = std::atan2(gy, gx);  // [-pi, pi]
      if (angle < 0.0) angle += kPi;      // unsigned orientation [0, pi)
      if (angle >= kPi) angle -= kPi;
      int bin = static_cast<int>(angle / kPi * kHogBins);
      if (bin >= kHogBins) bin = kHogBins - 1;
      int cell_x = x * kHogCells / img.width;
      desc[(cell_y * kHogCells + cell_x) * kHogBins + bin] += static_cast<float>(mag);
    }
  }
  for (int c = 0; c < kHogCells * kHogCells; ++c) {
    double ss = 0.0;
    for (int b = 0; b < kHogBins; ++b) {
      double v = desc[c * kHogBins + b];
      ss += v * v;
    }
    double inv = 1.0 / std::sqrt(ss + 1e-12);
    for (int b = 0; b < kHogBins; ++b)
      desc[c * kHogBins + b] = static_cast<float>(desc[c * kHogBins + b] * inv);
  }
  return desc;
}

inline double hog_distance(const HogDescriptor& a, const HogDescriptor& b) {
  if (a.size() != b.size()) throw ValidationError("hog_distance: size mismatch");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    ss += d * d;
  }
  return std::sqrt(ss);
}

}  // namespace panolayout
