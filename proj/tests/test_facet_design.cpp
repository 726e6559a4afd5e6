#include <cmath>
#include <initializer_list>

#include "doctest.h"

#include "da2gc/facet_design.hpp"
#include "da2gc/units.hpp"

using namespace da2gc;
using doctest::Approx;

TEST_CASE("face count") {
  CHECK(face_count(3, 7) == 8);
  CHECK(face_count(1, 2) == 1);
  CHECK(face_count(2, 6) == 6);
  CHECK(face_count(4, 5) == 10);
}

TEST_CASE("steering loss") {
  SUBCASE("8-face design at the 150 km cell edge") {
    const auto l = steering_loss(3, 7, 83.16);
    CHECK(l.faces == 8);
    CHECK(l.zeta_bits == Approx(0.35).epsilon(0.03));
    CHECK(l.total_bits == Approx(8 * l.zeta_bits));
  }
  SUBCASE("single face") {
    const auto l = steering_loss(1, 2, 83.16);
    CHECK(l.faces == 1);
    CHECK(l.zeta_bits == Approx(-std::log2(std::pow(std::cos(deg_to_rad(83.16)), 2))));
    CHECK(l.zeta_bits == Approx(6.1).epsilon(0.01));
  }
  SUBCASE("vanishing angle") {
    CHECK(steering_loss(3, 7, 1e-6, 1e-6).zeta_bits == Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("right angle is unbounded") {
    CHECK(steering_loss(1, 2, 90.0).unbounded);
  }
}

TEST_CASE("optimal facets reproduce the reference table") {
  struct Row {
    double isd;
    int m;
    int n;
  };
  for (const Row row : {Row{100, 7, 3}, Row{150, 7, 3}, Row{200, 6, 3}, Row{300, 6, 3}, Row{400, 6, 3}}) {
    const auto d = optimize_facets(row.isd, 9.0);
    CHECK(d.columns == row.m);
    CHECK(d.rows == row.n);
  }
  CHECK(optimize_facets(150, 9.0).faces == 8);
  CHECK(optimize_facets(100, 9.0).elevation_span_deg == Approx(79.8).epsilon(1e-3));
  CHECK(optimize_facets(150, 9.0).zeta_bits == Approx(0.35).epsilon(0.03));
}

TEST_CASE("exhaustive optimum dominates every grid point") {
  for (double isd : {100.0, 150.0, 250.0, 400.0}) {
    const auto best = optimize_facets(isd, 9.0);
    const double span = elevation_span_deg(isd, 9.0);
    for (int n = 1; n <= 10; ++n) {
      for (int m = 2; m <= 24; ++m) CHECK(best.total_bits <= steering_loss(n, m, span).total_bits + 1e-12);
    }
    // Not pinned at the search bounds.
    CHECK(best.rows < 10);
    CHECK(best.columns < 24);
  }
}

TEST_CASE("eight-face design") {
  const auto d = eight_face_design(150.0, 9.0);
  CHECK(d.rows == 3);
  CHECK(d.columns == 7);
  CHECK(d.faces == 8);
  CHECK(eight_face_design(300.0, 9.0).zeta_bits > d.zeta_bits);
}
