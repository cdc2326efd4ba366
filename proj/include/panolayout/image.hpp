#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "panolayout/common.hpp"

namespace panolayout {

template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  std::size_t pixel_count() const { return data.size(); }

  bool operator==(const Image& o) const {
    return width == o.width && height == o.height && data == o.data;
  }
};

using LabelImage = Image<std::uint8_t>;
using GrayImage = Image<float>;

// Orientation codes used in label panoramas and view label crops.
inline constexpr std::uint8_t kLabelNone = 0;      // masked / no surface
inline constexpr std::uint8_t kLabelWallX = 1;     // wall with normal along x
inline constexpr std::uint8_t kLabelWallY = 2;     // wall with normal along y
inline constexpr std::uint8_t kLabelFloorCeil = 3; // horizontal surface

// Majority filter over a (2r+1)^2 window for 4-valued label images.
// Ties keep the center label when it is among the winners, otherwise the
// smallest winning label; borders use the in-bounds part of the window.
// `wrap_x` treats columns as cyclic (panorama seam).
inline LabelImage mode_filter_labels(const LabelImage& in, int radius, bool wrap_x) {
  LabelImage out(in.width, in.height);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      std::array<int, 4> count{0, 0, 0, 0};
      for (int dy = -radius; dy <= radius; ++dy) {
        int yy = y + dy;
        if (yy < 0 || yy >= in.height) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          int xx = x + dx;
          if (wrap_x) {
            xx = (xx % in.width + in.width) % in.width;
          } else if (xx < 0 || xx >= in.width) {
            continue;
          }
          std::uint8_t v = in.at(xx, yy);
          if (v < 4) ++count[v];
        }
      }
      int best = count[0];
      for (int v = 1; v < 4; ++v) best = std::max(best, count[v]);
      std::uint8_t center = in.at(x, y);
      std::uint8_t winner = 0;
      if (center < 4 && count[center] == best) {
        winner = center;
      } else {
        for (int v = 0; v < 4; ++v) {
          if (count[v] == best) {
            winner = static_cast<std::uint8_t>(v);
            break;
          }
        }
      }
      out.at(x, y) = winner;
    }
  }
  return out;
}

}  // namespace panolayout
