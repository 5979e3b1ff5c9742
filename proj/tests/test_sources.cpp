#include <cmath>
#include <fstream>

#include "doctest.h"
#include "podinv/fem.hpp"
#include "podinv/sources.hpp"

using namespace podinv;

#ifndef PODINV_ASSET_DIR
#define PODINV_ASSET_DIR "assets"
#endif

TEST_SUITE("sources") {
  TEST_CASE("builtin glyphs match the shipped asset file") {
    const GlyphSet& builtin = GlyphSet::builtin();
    const GlyphSet from_file = GlyphSet::load(std::string(PODINV_ASSET_DIR) + "/glyphs16.txt");
    for (char letter = 'A'; letter <= 'Z'; ++letter) {
      REQUIRE(builtin.contains(letter));
      REQUIRE(from_file.contains(letter));
      CHECK(builtin.glyph(letter).bits == from_file.glyph(letter).bits);
    }
  }

  TEST_CASE("missing glyph file reports asset-not-found") {
    try {
      GlyphSet::load("no/such/glyphs.txt");
      FAIL("expected an error");
    } catch (const error& e) {
      CHECK(e.code() == errc::asset_not_found);
    }
  }

  TEST_CASE("circle membership at nodes") {
    const auto mesh = build_mesh(4);
    const Field f = circle_source(mesh, 0.5, 0.5, 0.1);
    CHECK(f.coeffs[mesh->node_index(2, 2)] == 1.0);  // (0.5, 0.5)
    CHECK(f.coeffs[mesh->node_index(3, 2)] == 0.0);  // (0.75, 0.5)
    CHECK_THROWS_AS(circle_source(mesh, 0.5, 0.5, 0.0), error);
  }

  TEST_CASE("circle mass approximates the disk area") {
    const auto mesh = build_mesh(64);
    const auto ops = assemble_operators(mesh, 1.0, 0.0);
    const Field f = circle_source(mesh, 0.5, 0.5, 0.1);
    CHECK(l2_inner(ops, f, f) == doctest::Approx(M_PI * 0.01).epsilon(0.15));
  }

  TEST_CASE("circle mass converges to pi r^2 at first order") {
    // staircase error oscillates with grid alignment, so assert the O(h)
    // bound |err| <= h * perimeter at every level instead of monotonicity
    const double radius = 0.2;
    const double perimeter = 2.0 * M_PI * radius;
    for (const int n : {16, 32, 64}) {
      const auto mesh = build_mesh(n);
      const auto ops = assemble_operators(mesh, 1.0, 0.0);
      const Field f = circle_source(mesh, 0.5, 0.5, radius);
      const double err = std::abs(l2_inner(ops, f, f) - M_PI * radius * radius);
      CHECK(err <= mesh->h * perimeter);
    }
  }

  TEST_CASE("ring parameterization of moving circles") {
    const auto center = ring_circle_center(M_PI / 2);
    CHECK(center[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(center[1] == doctest::Approx(0.75).epsilon(1e-15));
  }

  TEST_CASE("letter fields are 0/1 valued with the right support fraction") {
    const auto mesh = build_mesh(64);
    for (const char letter : {'A', 'G', 'O'}) {
      const Field f = letter_source(letter, mesh);
      int support = 0;
      for (int i = 0; i < f.coeffs.size(); ++i) {
        CHECK((f.coeffs[i] == 0.0 || f.coeffs[i] == 1.0));
        support += f.coeffs[i] == 1.0;
      }
      // glyph ink fraction scaled by the 0.8^2 region, up to O(h) staircase
      const double expected =
          GlyphSet::builtin().glyph(letter).ink_fraction() * 0.64 * mesh->node_count();
      CHECK(std::abs(support - expected) < 0.25 * expected);
    }
  }

  TEST_CASE("letter I is mirror-symmetric about x = 1/2") {
    for (const int n : {16, 32, 33, 64}) {
      const auto mesh = build_mesh(n);
      const Field f = letter_source('I', mesh);
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
          CHECK(f.coeffs[mesh->node_index(i, j)] == f.coeffs[mesh->node_index(n - i, j)]);
    }
  }

  TEST_CASE("unknown glyph is rejected") {
    const auto mesh = build_mesh(4);
    try {
      letter_source('@', mesh);
      FAIL("expected an error");
    } catch (const error& e) {
      CHECK(e.code() == errc::invalid_argument);
    }
  }

  TEST_CASE("bitmap sources") {
    const auto mesh = build_mesh(8);

    Bitmap ones;
    ones.rows = ones.cols = 1;
    ones.bits = {1};
    const Field all = bitmap_source(ones, Box{0, 0, 1, 1}, mesh);
    CHECK(all.coeffs.minCoeff() == 1.0);

    Bitmap zeros;
    zeros.rows = zeros.cols = 1;
    zeros.bits = {0};
    CHECK(bitmap_source(zeros, Box{0, 0, 1, 1}, mesh).coeffs.cwiseAbs().maxCoeff() == 0.0);

    Bitmap checker;  // row 0 = top: quadrant (0.25, 0.25) reads row 1, col 0
    checker.rows = checker.cols = 2;
    checker.bits = {1, 0, 0, 1};
    const Field f = bitmap_source(checker, Box{0, 0, 1, 1}, mesh);
    CHECK(f.coeffs[mesh->node_index(2, 2)] == 0.0);  // (0.25, 0.25)
    CHECK(f.coeffs[mesh->node_index(6, 2)] == 1.0);  // (0.75, 0.25)
    CHECK(f.coeffs[mesh->node_index(2, 6)] == 1.0);  // (0.25, 0.75)
    CHECK(f.coeffs[mesh->node_index(6, 6)] == 0.0);  // (0.75, 0.75)

    CHECK_THROWS_AS(bitmap_source(checker, Box{0.5, 0.5, 1.5, 1.5}, mesh), error);
  }

  TEST_CASE("generated fields stay within [0, amplitude]") {
    const auto mesh = build_mesh(32);
    for (const auto& spec : {"letter:K", "circle:0.3,0.6,0.2", "ring:0.7854,0.1"}) {
      const Field f = resolve_source(SourceSpec::parse(spec), mesh);
      CHECK(f.coeffs.minCoeff() >= 0.0);
      CHECK(f.coeffs.maxCoeff() <= 1.0);
    }
  }

  TEST_CASE("source spec parsing") {
    const SourceSpec letter = SourceSpec::parse("letter:Q");
    CHECK(letter.kind == SourceSpec::Kind::letter);
    CHECK(letter.letter == 'Q');

    const SourceSpec circle = SourceSpec::parse("circle:0.3,0.5,0.1");
    CHECK(circle.kind == SourceSpec::Kind::circle);
    CHECK(circle.cx == doctest::Approx(0.3));
    CHECK(circle.radius == doctest::Approx(0.1));

    CHECK_THROWS_AS(SourceSpec::parse("letter:AB"), error);
    CHECK_THROWS_AS(SourceSpec::parse("blob:1,2"), error);
    CHECK_THROWS_AS(SourceSpec::parse("circle:1,2"), error);
  }

  TEST_CASE("bitmap file sources load through resolve_source") {
    const std::string path = "bitmap_source_test.txt";
    {
      std::ofstream out(path);
      out << "# tiny cross\n010\n111\n010\n";
    }
    const auto mesh = build_mesh(16);
    const Field f = resolve_source(SourceSpec::parse("bitmap:" + path + ":0.25,0.25,0.75,0.75"), mesh);
    CHECK(f.coeffs[mesh->node_index(8, 8)] == 1.0);   // center of the cross
    CHECK(f.coeffs[mesh->node_index(5, 5)] == 0.0);   // corner pixel of the region
    CHECK(f.coeffs[mesh->node_index(2, 2)] == 0.0);   // outside the region
    std::remove(path.c_str());
  }
}
