#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "stationmatch/geo.h"
#include "stationmatch/random.h"

using namespace stationmatch;

namespace {

LatLng randomPoint(Rng& rng) {
  return {rng.uniform() * 180 - 90, rng.uniform() * 360 - 180};
}

}  // namespace

// _____________________________________________________________________________
TEST(GeoDistance, KnownValues) {
  EXPECT_EQ(geoDistance({47.9966, 7.8404}, {47.9966, 7.8404}), 0);
  // one degree of longitude on the equator: R * pi / 180
  EXPECT_NEAR(geoDistance({0, 0}, {0, 1}), 111194.93, 0.01);
  EXPECT_NEAR(geoDistance({47.9966, 7.8404}, {47.9965, 7.8407}), 24, 2);
  // antipodes
  EXPECT_NEAR(geoDistance({0, 0}, {0, 180}), kEarthRadiusM * M_PI, 1e-6);
}

// _____________________________________________________________________________
TEST(GeoDistance, SymmetricAndTriangle) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    LatLng a = randomPoint(rng), b = randomPoint(rng), c = randomPoint(rng);
    EXPECT_EQ(geoDistance(a, b), geoDistance(b, a));
    double ab = geoDistance(a, b), bc = geoDistance(b, c);
    double ac = geoDistance(a, c);
    EXPECT_LE(ac, (ab + bc) * (1 + 1e-6) + 1e-9);
  }
  // local triples, where cancellation matters most
  for (int i = 0; i < 2000; ++i) {
    LatLng a = randomPoint(rng);
    a.lat = std::clamp(a.lat, -80.0, 80.0);
    LatLng b = offsetMeters(a, rng.normal() * 50, rng.normal() * 50);
    LatLng c = offsetMeters(a, rng.normal() * 50, rng.normal() * 50);
    EXPECT_LE(geoDistance(a, c),
              (geoDistance(a, b) + geoDistance(b, c)) * (1 + 1e-6) + 1e-9);
  }
}

// _____________________________________________________________________________
TEST(PositionSimilarity, HalvesPerDHat) {
  EXPECT_EQ(positionSimilarity(0.0, 100), 1.0);
  EXPECT_NEAR(positionSimilarity(100.0, 100), 0.5, 1e-12);
  EXPECT_NEAR(positionSimilarity(200.0, 100), 0.25, 1e-12);
  EXPECT_GT(positionSimilarity(50.0, 100), 0.5);
  EXPECT_LT(positionSimilarity(150.0, 100), 0.5);
}

// _____________________________________________________________________________
TEST(PositionSimilarity, StrictlyDecreasingInDistance) {
  LatLng a{47.99, 7.84};
  double prev = 2;
  double prevD = -1;
  for (int k = 0; k <= 200; ++k) {
    LatLng b = offsetMeters(a, k * 7.0, k * 3.0);
    double d = geoDistance(a, b);
    double s = positionSimilarity(a, b, 100);
    ASSERT_GT(d, prevD);
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0);
    prev = s;
    prevD = d;
  }
}

// _____________________________________________________________________________
TEST(GridCell, ReproducesPublishedCoordinates) {
  GridSpec spec;  // 256, 2 grids
  // centroids of the three published pairs
  LatLng rows[] = {centroid({47.9966, 7.8404}, {47.9965, 7.8407}),
                   centroid({48.0105, 7.8545}, {48.0111, 7.8541}),
                   centroid({47.9959, 7.8405}, {47.9960, 7.8407})};
  for (LatLng c : rows) {
    auto cells = gridCells(c, spec);
    ASSERT_EQ(cells.size(), 2u);
    EXPECT_EQ(cells[0], (GridCoord{0, 133, 196}));
    EXPECT_EQ(cells[1], (GridCoord{1, 133, 195}));
  }
  EXPECT_EQ(gridCell({0, 0}, 0, {256, 1}), (GridCoord{0, 128, 128}));
}

// _____________________________________________________________________________
TEST(GridCell, BoundaryConventions) {
  GridSpec spec{256, 2};
  // x wraps around the date line on shifted grids, y clamps at the pole
  EXPECT_EQ(gridCell({-90, -180}, 1, spec), (GridCoord{1, 255, 0}));
  EXPECT_EQ(gridCell({-90, -180}, 0, spec), (GridCoord{0, 0, 0}));
  EXPECT_EQ(gridCell({90, 180}, 0, spec), (GridCoord{0, 255, 255}));
  EXPECT_EQ(gridCell({90, 180}, 1, spec), (GridCoord{1, 255, 255}));
  EXPECT_THROW((GridSpec{0, 2}).validate(), std::invalid_argument);
  EXPECT_THROW((GridSpec{256, 0}).validate(), std::invalid_argument);
}

// _____________________________________________________________________________
TEST(GridCell, SameRawCellSameCoordinate) {
  GridSpec spec{64, 3};
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    LatLng p = randomPoint(rng);
    int g = static_cast<int>(rng.below(3));
    double shift = static_cast<double>(g) / 3;
    double rx = (p.lon + 180) / 360 * 64 - shift;
    double ry = (p.lat + 90) / 180 * 64 - shift;
    // another point inside the same shifted cell
    double fx = std::floor(rx) + rng.uniform();
    double fy = std::floor(ry) + rng.uniform();
    LatLng q{(fy + shift) / 64 * 180 - 90, (fx + shift) / 64 * 360 - 180};
    if (!validLatLng(q)) continue;
    EXPECT_EQ(gridCell(p, g, spec), gridCell(q, g, spec));
  }
}

// _____________________________________________________________________________
TEST(GridCell, TwoGridsRefineAtHalfCells) {
  // Along the x axis the pair of cells changes exactly when floor(2 * raw)
  // changes, i.e. at every whole and half cell boundary.
  GridSpec spec{256, 2};
  const double lat = 10;
  std::set<std::pair<int, int>> seen;
  int prevHalf = -1;
  std::pair<int, int> prevKey{-1, -1};
  for (int k = 0; k < 20000; ++k) {
    double raw = 100 + k * 0.00037;  // raw x in cells
    if (std::abs(raw * 2 - std::round(raw * 2)) < 1e-6) continue;
    double lon = raw / 256 * 360 - 180;
    auto c = gridCells({lat, lon}, spec);
    std::pair<int, int> key{c[0].x, c[1].x};
    int half = static_cast<int>(std::floor(raw * 2));
    if (prevHalf >= 0) {
      EXPECT_EQ(half != prevHalf, key != prevKey) << "raw " << raw;
    }
    EXPECT_TRUE(seen.insert(key).second || key == prevKey);
    prevHalf = half;
    prevKey = key;
  }
}

// _____________________________________________________________________________
TEST(OffsetMeters, MovesByRequestedDistance) {
  LatLng p{47.99, 7.84};
  EXPECT_NEAR(geoDistance(p, offsetMeters(p, 100, 0)), 100, 0.01);
  EXPECT_NEAR(geoDistance(p, offsetMeters(p, 0, -250)), 250, 0.01);
  EXPECT_NEAR(geoDistance(p, offsetMeters(p, 30, 40)), 50, 0.01);
}
