#include "podinv/sources.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace podinv {

namespace glyph_data {
extern const char* kGlyphs16;  // generated from assets/glyphs16.txt
}

double Bitmap::ink_fraction() const {
  if (bits.empty()) return 0.0;
  std::size_t ink = 0;
  for (const auto b : bits) ink += (b != 0);
  return static_cast<double>(ink) / static_cast<double>(bits.size());
}

const GlyphSet& GlyphSet::builtin() {
  static const GlyphSet set = parse(glyph_data::kGlyphs16, "<builtin>");
  return set;
}

GlyphSet GlyphSet::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::asset_not_found, "glyph file not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

GlyphSet GlyphSet::parse(const std::string& text, const std::string& origin) {
  GlyphSet set;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    require(line.size() == 1 && line[0] >= 'A' && line[0] <= 'Z', errc::parse_error,
            origin + ": expected a letter line, got '" + line + "'");
    const char letter = line[0];
    Bitmap bmp;
    bmp.rows = bmp.cols = 16;
    bmp.bits.reserve(256);
    for (int r = 0; r < 16; ++r) {
      require(static_cast<bool>(std::getline(in, line)) && line.size() == 16, errc::parse_error,
              origin + ": glyph " + letter + " needs 16 rows of 16 characters");
      for (char ch : line) {
        require(ch == '0' || ch == '1', errc::parse_error,
                origin + ": glyph rows must contain only 0/1");
        bmp.bits.push_back(ch == '1');
      }
    }
    set.glyphs_[letter] = std::move(bmp);
  }
  require(!set.glyphs_.empty(), errc::parse_error, origin + ": no glyphs found");
  return set;
}

const Bitmap& GlyphSet::glyph(char letter) const {
  const auto it = glyphs_.find(letter);
  require(it != glyphs_.end(), errc::invalid_argument,
          std::string("no glyph for '") + letter + "' in the shipped set");
  return it->second;
}

Field circle_source(const MeshPtr& mesh, double cx, double cy, double radius, double amplitude) {
  require(radius > 0.0, errc::invalid_argument, "circle radius must be positive");
  const double r2 = radius * radius;
  return make_field(mesh, [=](double x, double y) {
    const double dx = x - cx;
    const double dy = y - cy;
    return (dx * dx + dy * dy <= r2) ? amplitude : 0.0;
  });
}

std::array<double, 2> ring_circle_center(double theta) {
  return {0.5 + std::cos(theta) / 4.0, 0.5 + std::sin(theta) / 4.0};
}

namespace {

// Pixel index of coordinate t ∈ [0, count]; exact cell boundaries resolve
// toward the bitmap center to keep mirror symmetry.
int pixel_index(double t, int count) {
  const double rounded = std::round(t);
  if (std::abs(t - rounded) < 1e-9) {
    const int boundary = static_cast<int>(rounded);
    const int px = (2 * boundary < count) ? boundary : boundary - 1;
    return std::min(std::max(px, 0), count - 1);
  }
  return std::min(std::max(static_cast<int>(std::floor(t)), 0), count - 1);
}

}  // namespace

Field bitmap_source(const Bitmap& bitmap, const Box& region, const MeshPtr& mesh, double amplitude) {
  require(bitmap.rows >= 1 && bitmap.cols >= 1, errc::invalid_argument, "bitmap must be non-empty");
  require(region.x0 < region.x1 && region.y0 < region.y1, errc::invalid_argument,
          "bitmap region must have positive extent");
  require(region.x0 >= 0.0 && region.y0 >= 0.0 && region.x1 <= 1.0 && region.y1 <= 1.0,
          errc::invalid_argument, "bitmap region must lie inside the unit square");

  const double wx = region.x1 - region.x0;
  const double wy = region.y1 - region.y0;
  return make_field(mesh, [&](double x, double y) {
    if (x < region.x0 || x > region.x1 || y < region.y0 || y > region.y1) return 0.0;
    const int col = pixel_index((x - region.x0) / wx * bitmap.cols, bitmap.cols);
    // bitmap row 0 is the top of the region
    const int row_from_bottom = pixel_index((y - region.y0) / wy * bitmap.rows, bitmap.rows);
    const int row = bitmap.rows - 1 - row_from_bottom;
    return bitmap.at(row, col) ? amplitude : 0.0;
  });
}

Field letter_source(char letter, const MeshPtr& mesh, const GlyphSet& glyphs, double amplitude) {
  return bitmap_source(glyphs.glyph(letter), kLetterRegion, mesh, amplitude);
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& origin) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      require(used == cell.size(), errc::parse_error, origin + ": bad number '" + cell + "'");
    } catch (const std::invalid_argument&) {
      detail::fail(errc::parse_error, origin + ": bad number '" + cell + "'");
    }
  }
  return out;
}

}  // namespace

SourceSpec SourceSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, errc::parse_error,
          "source spec needs kind:params, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  SourceSpec spec;
  if (kind == "letter") {
    require(rest.size() == 1 && rest[0] >= 'A' && rest[0] <= 'Z', errc::parse_error,
            "letter source needs a single A-Z character, got '" + rest + "'");
    spec.kind = Kind::letter;
    spec.letter = rest[0];
  } else if (kind == "circle") {
    const auto nums = parse_numbers(rest, text);
    require(nums.size() == 3, errc::parse_error, "circle source needs cx,cy,radius");
    spec.kind = Kind::circle;
    spec.cx = nums[0];
    spec.cy = nums[1];
    spec.radius = nums[2];
  } else if (kind == "ring") {
    const auto nums = parse_numbers(rest, text);
    require(nums.size() == 2, errc::parse_error, "ring source needs theta,radius");
    spec.kind = Kind::circle;
    const auto center = ring_circle_center(nums[0]);
    spec.cx = center[0];
    spec.cy = center[1];
    spec.radius = nums[1];
  } else if (kind == "bitmap") {
    spec.kind = Kind::bitmap;
    const auto second = rest.find(':');
    spec.bitmap_path = rest.substr(0, second);
    require(!spec.bitmap_path.empty(), errc::parse_error, "bitmap source needs a file path");
    if (second != std::string::npos) {
      const auto nums = parse_numbers(rest.substr(second + 1), text);
      require(nums.size() == 4, errc::parse_error, "bitmap region needs x0,y0,x1,y1");
      spec.region = Box{nums[0], nums[1], nums[2], nums[3]};
    }
  } else {
    detail::fail(errc::parse_error, "unknown source kind '" + kind + "'");
  }
  return spec;
}

std::string SourceSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::letter:
      out << "letter:" << letter;
      break;
    case Kind::circle:
      out << "circle:" << cx << ',' << cy << ',' << radius;
      break;
    case Kind::bitmap:
      out << "bitmap:" << bitmap_path;
      break;
  }
  return out.str();
}

namespace {

Bitmap load_bitmap_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::asset_not_found, "bitmap file not found: " + path);
  Bitmap bmp;
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(line);
  }
  require(!rows.empty(), errc::parse_error, path + ": empty bitmap");
  bmp.rows = static_cast<int>(rows.size());
  bmp.cols = static_cast<int>(rows[0].size());
  for (const auto& r : rows) {
    require(static_cast<int>(r.size()) == bmp.cols, errc::parse_error, path + ": ragged bitmap rows");
    for (char ch : r) {
      require(ch == '0' || ch == '1', errc::parse_error, path + ": bitmap rows must be 0/1");
      bmp.bits.push_back(ch == '1');
    }
  }
  return bmp;
}

}  // namespace

Field resolve_source(const SourceSpec& spec, const MeshPtr& mesh, const GlyphSet& glyphs) {
  switch (spec.kind) {
    case SourceSpec::Kind::letter:
      return letter_source(spec.letter, mesh, glyphs, spec.amplitude);
    case SourceSpec::Kind::circle:
      return circle_source(mesh, spec.cx, spec.cy, spec.radius, spec.amplitude);
    case SourceSpec::Kind::bitmap:
      return bitmap_source(load_bitmap_file(spec.bitmap_path), spec.region, mesh, spec.amplitude);
  }
  detail::fail(errc::invalid_argument, "unhandled source kind");
}

}  // namespace podinv
