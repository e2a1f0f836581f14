#include <algorithm>
#include <cmath>
#include <cstdio>

#include "viz/errors.hpp"
#include "viz/render.hpp"

namespace viz {

namespace {

// 3x5 glyphs, one row per entry, bit 2 = left column.
struct Glyph {
  char c;
  std::array<std::uint8_t, 5> rows;
};

constexpr Glyph kFont[] = {
    {'0', {7, 5, 5, 5, 7}}, {'1', {2, 6, 2, 2, 7}}, {'2', {7, 1, 7, 4, 7}}, {'3', {7, 1, 7, 1, 7}},
    {'4', {5, 5, 7, 1, 1}}, {'5', {7, 4, 7, 1, 7}}, {'6', {7, 4, 7, 5, 7}}, {'7', {7, 1, 1, 1, 1}},
    {'8', {7, 5, 7, 5, 7}}, {'9', {7, 5, 7, 1, 7}}, {'.', {0, 0, 0, 0, 2}}, {'-', {0, 0, 7, 0, 0}},
    {'+', {0, 2, 7, 2, 0}}, {'e', {0, 7, 7, 4, 7}},
};

const Glyph* glyphFor(char c) {
  for (const auto& g : kFont) {
    if (g.c == c) return &g;
  }
  return nullptr;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr Rgb kPanel{0.08, 0.08, 0.1};

}  // namespace

std::size_t colorbarGradientRows(std::size_t height) { return height >= 16 ? height - 8 : height; }

void drawText(Image& img, std::size_t x, std::size_t y, const std::string& text, Rgb color, int scale) {
  std::size_t cx = x;
  const auto s = static_cast<std::size_t>(scale);
  for (char ch : text) {
    if (const Glyph* g = glyphFor(ch)) {
      for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
          if (!((g->rows[r] >> (2 - c)) & 1)) continue;
          for (std::size_t dy = 0; dy < s; ++dy) {
            for (std::size_t dx = 0; dx < s; ++dx) {
              const std::size_t px = cx + c * s + dx, py = y + r * s + dy;
              if (px < img.width && py < img.height) img.set(px, py, color);
            }
          }
        }
      }
    }
    cx += 4 * s;
  }
}

Image colorbarImage(const TransferFunction& tf, std::size_t width, std::size_t height) {
  if (width < 8 || height < 8) throw SizeError("colorbar needs at least 8x8 pixels");
  Image img(width, height, kPanel);
  const std::size_t rows = colorbarGradientRows(height);
  const double lo = tf.lo(), hi = tf.hi();
  for (std::size_t x = 0; x < width; ++x) {
    const double s = lo + (hi - lo) * static_cast<double>(x) / static_cast<double>(width - 1);
    const Rgba c = tfEval(tf, s);
    for (std::size_t y = 0; y < rows; ++y) img.set(x, y, {c.r, c.g, c.b});
  }
  if (rows < height) {
    const Rgb ink{0.9, 0.9, 0.9};
    img.set(0, rows, ink);
    img.set(width - 1, rows, ink);
    const std::string left = label(lo), right = label(hi);
    drawText(img, 1, rows + 2, left, ink);
    const std::size_t rw = 4 * right.size();
    if (rw < width) drawText(img, width - rw, rows + 2, right, ink);
  }
  return img;
}

Image histogramImage(const Histogram& hist, std::size_t width, std::size_t height) {
  if (width < 8 || height < 8) throw SizeError("histogram image needs at least 8x8 pixels");
  Image img(width, height, kPanel);
  const std::uint64_t peak = hist.counts.empty() ? 0 : *std::max_element(hist.counts.begin(), hist.counts.end());
  if (peak == 0) return img;
  const std::size_t bins = hist.counts.size();
  const Rgb bar{0.85, 0.75, 0.3};
  for (std::size_t k = 0; k < bins; ++k) {
    const std::size_t x0 = k * width / bins;
    const std::size_t x1 = (k + 1) * width / bins;
    const auto barH = static_cast<std::size_t>(
        std::llround(static_cast<double>(hist.counts[k]) / static_cast<double>(peak) * static_cast<double>(height)));
    for (std::size_t x = x0; x < x1; ++x) {
      for (std::size_t y = height - barH; y < height; ++y) img.set(x, y, bar);
    }
  }
  return img;
}

void blit(Image& dst, const Image& src, std::size_t x, std::size_t y) {
  for (std::size_t r = 0; r < src.height && y + r < dst.height; ++r) {
    const std::size_t n = std::min(src.width, x < dst.width ? dst.width - x : 0);
    std::copy_n(src.at(0, r), 4 * n, dst.at(x, y + r));
  }
}

Image compositeViews(const std::vector<Tile>& tiles, std::size_t rows, std::size_t cols, std::size_t cellWidth,
                     std::size_t cellHeight, Rgb background) {
  if (rows < 1 || cols < 1 || cellWidth < 1 || cellHeight < 1) throw SizeError("empty composite layout");
  const std::size_t w = cols * cellWidth, h = rows * cellHeight;
  if (w > kMaxCompositeWidth || h > kMaxCompositeHeight) {
    throw SizeError("composite " + std::to_string(w) + "x" + std::to_string(h) + " exceeds " +
                    std::to_string(kMaxCompositeWidth) + "x" + std::to_string(kMaxCompositeHeight));
  }
  Image out(w, h, background);
  for (const auto& t : tiles) {
    if (t.row >= rows || t.col >= cols) throw RangeError("tile cell outside the layout");
    if (t.image.width > cellWidth || t.image.height > cellHeight) throw SizeError("tile larger than its cell");
    blit(out, t.image, t.col * cellWidth, t.row * cellHeight);
  }
  return out;
}

std::string encodePpm(const Image& image, Rgb background) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * image.width * image.height);
  const double bg[3] = {background.r, background.g, background.b};
  for (std::size_t i = 0; i < image.width * image.height; ++i) {
    const std::uint8_t* p = &image.pixels[4 * i];
    const double a = p[3] / 255.0;
    for (int c = 0; c < 3; ++c) {
      out[header + 3 * i + c] =
          static_cast<char>(p[3] == 255 ? p[c] : toByte(p[c] / 255.0 * a + bg[c] * (1.0 - a)));
    }
  }
  return out;
}

}  // namespace viz
