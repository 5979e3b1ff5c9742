#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "podinv/mesh.hpp"

namespace podinv {

/// Monochrome raster, row 0 = top.
struct Bitmap {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;  // row-major

  bool at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c] != 0; }
  double ink_fraction() const;
};

/// Axis-aligned box [x0,x1]×[y0,y1].
struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

/// The 16×16 uppercase glyph bitmaps. The canonical copy lives in
/// assets/glyphs16.txt; an identical copy is compiled into the library.
class GlyphSet {
 public:
  static const GlyphSet& builtin();
  static GlyphSet load(const std::string& path);
  static GlyphSet parse(const std::string& text, const std::string& origin);

  const Bitmap& glyph(char letter) const;
  bool contains(char letter) const { return glyphs_.count(letter) > 0; }

 private:
  std::map<char, Bitmap> glyphs_;
};

/// Region the paper's letter sources occupy.
inline constexpr Box kLetterRegion{0.1, 0.1, 0.9, 0.9};

/// Indicator of the disk of given center/radius, sampled at mesh nodes.
Field circle_source(const MeshPtr& mesh, double cx, double cy, double radius, double amplitude = 1.0);

/// Center (0.5 + cosθ/4, 0.5 + sinθ/4) of the ring-parameterized disk family.
std::array<double, 2> ring_circle_center(double theta);

/// Glyph indicator rasterized onto kLetterRegion and sampled at mesh nodes.
Field letter_source(char letter, const MeshPtr& mesh, const GlyphSet& glyphs = GlyphSet::builtin(),
                    double amplitude = 1.0);

/// Nearest-pixel sampling of a bitmap over `region`; zero outside. Points on
/// a pixel boundary resolve toward the bitmap center so mirror-symmetric
/// bitmaps produce mirror-symmetric fields.
Field bitmap_source(const Bitmap& bitmap, const Box& region, const MeshPtr& mesh,
                    double amplitude = 1.0);

/// Parsed description of a ground-truth source, e.g. "letter:A",
/// "circle:0.5,0.5,0.1", "ring:1.5708,0.1", "bitmap:path[:x0,y0,x1,y1]".
struct SourceSpec {
  enum class Kind { letter, circle, bitmap };

  Kind kind = Kind::letter;
  char letter = 'A';
  double cx = 0.5, cy = 0.5, radius = 0.1;
  std::string bitmap_path;
  Box region{0.0, 0.0, 1.0, 1.0};
  double amplitude = 1.0;

  static SourceSpec parse(const std::string& text);
  std::string describe() const;
};

Field resolve_source(const SourceSpec& spec, const MeshPtr& mesh,
                     const GlyphSet& glyphs = GlyphSet::builtin());

}  // namespace podinv
