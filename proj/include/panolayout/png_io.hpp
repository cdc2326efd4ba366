#pragma once

// Minimal 8-bit grayscale PNG reader/writer on top of zlib.  Covers exactly
// the subset this project emits (color type 0, bit depth 8, no interlace);
// the reader additionally handles all five scanline filters.

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/image.hpp"

namespace panolayout {
namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t read_u32_be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                         const std::uint8_t* data, std::size_t len) {
  put_u32_be(out, static_cast<std::uint32_t>(len));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  if (len > 0) out.insert(out.end(), data, data + len);
  std::uint32_t crc = static_cast<std::uint32_t>(
      crc32(0L, out.data() + start, static_cast<uInt>(4 + len)));
  put_u32_be(out, crc);
}

inline std::uint8_t paeth_predict(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a);
  int pb = std::abs(p - b);
  int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  if (pb <= pc) return static_cast<std::uint8_t>(b);
  return static_cast<std::uint8_t>(c);
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_gray_png(const LabelImage& img) {
  if (img.width <= 0 || img.height <= 0)
    throw ValidationError("encode_gray_png: empty image");
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(img.height) * (img.width + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);  // filter: none
    const std::uint8_t* row = img.data.data() + static_cast<std::size_t>(y) * img.width;
    raw.insert(raw.end(), row, row + img.width);
  }
  uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> comp(comp_len);
  if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw IoError("encode_gray_png: deflate failed");
  comp.resize(comp_len);

  std::vector<std::uint8_t> out;
  static const std::uint8_t kSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  out.insert(out.end(), kSig, kSig + 8);
  std::uint8_t ihdr[13];
  ihdr[0] = static_cast<std::uint8_t>(img.width >> 24);
  ihdr[1] = static_cast<std::uint8_t>(img.width >> 16);
  ihdr[2] = static_cast<std::uint8_t>(img.width >> 8);
  ihdr[3] = static_cast<std::uint8_t>(img.width);
  ihdr[4] = static_cast<std::uint8_t>(img.height >> 24);
  ihdr[5] = static_cast<std::uint8_t>(img.height >> 16);
  ihdr[6] = static_cast<std::uint8_t>(img.height >> 8);
  ihdr[7] = static_cast<std::uint8_t>(img.height);
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 0;   // color type: grayscale
  ihdr[10] = 0;  // compression
  ihdr[11] = 0;  // filter method
  ihdr[12] = 0;  // no interlace
  detail::append_chunk(out, "IHDR", ihdr, sizeof(ihdr));
  detail::append_chunk(out, "IDAT", comp.data(), comp.size());
  detail::append_chunk(out, "IEND", nullptr, 0);
  return out;
}

inline LabelImage decode_gray_png(const std::vector<std::uint8_t>& bytes) {
  static const std::uint8_t kSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSig, 8) != 0)
    throw IoError("decode_gray_png: not a PNG");
  std::size_t pos = 8;
  int width = 0, height = 0;
  bool have_header = false;
  std::vector<std::uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t len = detail::read_u32_be(bytes.data() + pos);
    if (pos + 12 + len > bytes.size()) throw IoError("decode_gray_png: truncated chunk");
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    const std::uint8_t* data = bytes.data() + pos + 8;
    std::uint32_t expect = detail::read_u32_be(bytes.data() + pos + 8 + len);
    std::uint32_t actual = static_cast<std::uint32_t>(
        crc32(crc32(0L, Z_NULL, 0), bytes.data() + pos + 4, len + 4));
    if (actual != expect) throw IoError("decode_gray_png: chunk CRC mismatch");
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw IoError("decode_gray_png: bad IHDR");
      width = static_cast<int>(detail::read_u32_be(data));
      height = static_cast<int>(detail::read_u32_be(data + 4));
      if (width <= 0 || height <= 0 ||
          static_cast<std::int64_t>(width) * height > (std::int64_t{1} << 28))
        throw IoError("decode_gray_png: unreasonable dimensions");
      if (data[8] != 8 || data[9] != 0)
        throw IoError("decode_gray_png: only 8-bit grayscale supported");
      if (data[12] != 0) throw IoError("decode_gray_png: interlace not supported");
      have_header = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_header || width <= 0 || height <= 0)
    throw IoError("decode_gray_png: missing IHDR");

  std::size_t raw_len = static_cast<std::size_t>(height) * (width + 1);
  std::vector<std::uint8_t> raw(raw_len);
  uLongf dest_len = static_cast<uLongf>(raw_len);
  int rc = uncompress(raw.data(), &dest_len, idat.data(), static_cast<uLong>(idat.size()));
  if (rc != Z_OK || dest_len != raw_len) throw IoError("decode_gray_png: inflate failed");

  LabelImage img(width, height);
  std::vector<std::uint8_t> prev(width, 0);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (width + 1);
    std::uint8_t filter = src[0];
    std::uint8_t* dst = img.data.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      int a = x > 0 ? dst[x - 1] : 0;
      int b = prev[x];
      int c = x > 0 ? prev[x - 1] : 0;
      int v = src[1 + x];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += detail::paeth_predict(a, b, c); break;
        default: throw IoError("decode_gray_png: unknown filter type");
      }
      dst[x] = static_cast<std::uint8_t>(v & 0xff);
    }
    std::memcpy(prev.data(), dst, width);
  }
  return img;
}

inline void write_gray_png(const std::string& path, const LabelImage& img) {
  std::vector<std::uint8_t> bytes = encode_gray_png(img);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path);
}

inline LabelImage read_gray_png(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return decode_gray_png(bytes);
}

// Converts a [0,1] float image to 8-bit with rounding and clamping.
inline LabelImage to_gray8(const GrayImage& img) {
  LabelImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    float v = img.data[i];
    if (v < 0.f) v = 0.f;
    if (v > 1.f) v = 1.f;
    out.data[i] = static_cast<std::uint8_t>(v * 255.f + 0.5f);
  }
  return out;
}

inline GrayImage to_gray_float(const LabelImage& img) {
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    out.data[i] = static_cast<float>(img.data[i]) / 255.f;
  return out;
}

}  // namespace panolayout
