#include "stationmatch/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stationmatch {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

// _____________________________________________________________________________
bool validLatLng(LatLng p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90 &&
         p.lat <= 90 && p.lon >= -180 && p.lon <= 180;
}

// _____________________________________________________________________________
void checkLatLng(LatLng p) {
  if (!validLatLng(p)) {
    throw std::invalid_argument("coordinate out of range: (" +
                                std::to_string(p.lat) + ", " +
                                std::to_string(p.lon) + ")");
  }
}

// _____________________________________________________________________________
double geoDistance(LatLng a, LatLng b) {
  checkLatLng(a);
  checkLatLng(b);
  double phi1 = a.lat * kDegToRad;
  double phi2 = b.lat * kDegToRad;
  double dPhi = phi2 - phi1;
  double dLambda = (b.lon - a.lon) * kDegToRad;
  double s = std::sin(dPhi / 2);
  double t = std::sin(dLambda / 2);
  double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

// _____________________________________________________________________________
double positionSimilarity(double meters, double dHat) {
  if (!(dHat > 0)) throw std::invalid_argument("d_hat must be positive");
  // exp(-ln(2) x) == 2^-x; exp2 is exact at integer powers
  return std::exp2(-meters / dHat);
}

// _____________________________________________________________________________
double positionSimilarity(LatLng a, LatLng b, double dHat) {
  return positionSimilarity(geoDistance(a, b), dHat);
}

// _____________________________________________________________________________
LatLng centroid(LatLng a, LatLng b) {
  return {(a.lat + b.lat) / 2, (a.lon + b.lon) / 2};
}

// _____________________________________________________________________________
LatLng offsetMeters(LatLng p, double eastM, double northM) {
  double lat = p.lat + northM / kMetersPerDegree;
  double cosLat = std::max(std::cos(p.lat * kDegToRad), 1e-9);
  double lon = p.lon + eastM / (kMetersPerDegree * cosLat);
  lat = std::clamp(lat, -90.0, 90.0);
  if (lon > 180) lon -= 360;
  if (lon < -180) lon += 360;
  return {lat, lon};
}

// _____________________________________________________________________________
void GridSpec::validate() const {
  if (baseResolution < 1) {
    throw std::invalid_argument("grid base resolution must be >= 1");
  }
  if (numGrids < 1) throw std::invalid_argument("number of grids must be >= 1");
}

// _____________________________________________________________________________
GridCoord gridCell(LatLng p, int gridIndex, const GridSpec& spec) {
  spec.validate();
  checkLatLng(p);
  if (gridIndex < 0 || gridIndex >= spec.numGrids) {
    throw std::invalid_argument("grid index out of range");
  }
  const double res = spec.baseResolution;
  const double top = std::nextafter(res, 0.0);
  double rawX = std::clamp((p.lon + 180.0) / 360.0 * res, 0.0, top);
  double rawY = std::clamp((p.lat + 90.0) / 180.0 * res, 0.0, top);
  double shift = static_cast<double>(gridIndex) / spec.numGrids;

  int x = static_cast<int>(std::floor(rawX - shift));
  int y = static_cast<int>(std::floor(rawY - shift));
  if (x < 0) x = spec.baseResolution - 1;
  if (y < 0) y = 0;
  return {gridIndex, x, y};
}

// _____________________________________________________________________________
std::vector<GridCoord> gridCells(LatLng p, const GridSpec& spec) {
  std::vector<GridCoord> ret;
  ret.reserve(spec.numGrids);
  for (int i = 0; i < spec.numGrids; ++i) ret.push_back(gridCell(p, i, spec));
  return ret;
}

}  // namespace stationmatch
