#ifndef STATIONMATCH_GEO_H_
#define STATIONMATCH_GEO_H_

#include <vector>

namespace stationmatch {

// Mean earth radius used for all distance computations.
inline constexpr double kEarthRadiusM = 6371000.0;

// Meters per degree of latitude on the sphere above.
inline constexpr double kMetersPerDegree =
    kEarthRadiusM * 3.14159265358979323846 / 180.0;

struct LatLng {
  double lat = 0;
  double lon = 0;

  friend bool operator==(const LatLng&, const LatLng&) = default;
};

bool validLatLng(LatLng p);

// Throws std::invalid_argument if p is out of range.
void checkLatLng(LatLng p);

// Haversine great-circle distance in meters.
double geoDistance(LatLng a, LatLng b);

// exp(-ln(2) * d / dHat): 1 at d = 0, exactly 0.5 at d = dHat.
double positionSimilarity(double meters, double dHat);
double positionSimilarity(LatLng a, LatLng b, double dHat);

// Arithmetic mean of both coordinates.
LatLng centroid(LatLng a, LatLng b);

// Moves p by the given offsets in a local tangent plane (meters east/north).
LatLng offsetMeters(LatLng p, double eastM, double northM);

// Interwoven plate-carree grids. Grid i of n is the base grid shifted by
// i/n cells in both axes.
struct GridSpec {
  int baseResolution = 256;
  int numGrids = 2;

  void validate() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct GridCoord {
  int grid = 0;
  int x = 0;
  int y = 0;

  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

// With rawX = (lon + 180) / 360 * res and rawY = (lat + 90) / 180 * res,
// returns (floor(rawX - i/n), floor(rawY - i/n)). Raw values are clamped to
// [0, res) first; x = -1 wraps to res - 1 (date line), y = -1 clamps to 0.
GridCoord gridCell(LatLng p, int gridIndex, const GridSpec& spec);

// Cells of p on every grid, in grid order.
std::vector<GridCoord> gridCells(LatLng p, const GridSpec& spec);

}  // namespace stationmatch

#endif  // STATIONMATCH_GEO_H_
