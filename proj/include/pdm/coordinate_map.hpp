#pragma once

#include <complex>
#include <string>
#include <vector>

namespace pdm {

using cplx = std::complex<double>;

enum class MapKind {
  Identity,           // r = u
  HalfSquare,         // r = u^2 / 2
  Exponential,        // r = exp(-k u)
  SignedExponential,  // r = exp(-k e^{i phase} u); phase = pi/2 gives the oscillatory branch
  CothHalf,           // r = coth(k u / 2)
  CothQuarter,        // r = coth(k u / 4)
  CotHalf,            // r = cot(k u / 2)
  CothShifted,        // r = coth(k u / 2 + i pi / 4)
  CotShifted,         // r = -i cot(k u / 2 + pi / 4)
};

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);  // throws ConfigError

// r and its first three derivatives with respect to the mapped coordinate u.
struct MapJet {
  cplx r, dr, d2r, d3r;
};

// Closed-form r(u) template. Immutable value type.
class CoordinateMap {
 public:
  CoordinateMap() = default;
  CoordinateMap(MapKind kind, double scale = 1.0, double phase = 0.0);

  static CoordinateMap identity() { return {MapKind::Identity}; }
  static CoordinateMap half_square() { return {MapKind::HalfSquare}; }
  static CoordinateMap exponential(double k) { return {MapKind::Exponential, k}; }
  static CoordinateMap signed_exponential(double k, double phase) {
    return {MapKind::SignedExponential, k, phase};
  }

  MapKind kind() const { return kind_; }
  double scale() const { return scale_; }
  double phase() const { return phase_; }
  bool is_complex() const;
  std::string describe() const;

  MapJet jet(double u) const;
  MapJet jet(cplx u) const;

  // Points u in [lo, hi] where r = 0, r has a pole, r' = 0, or 1 - a r^2 = 0.
  std::vector<double> singular_points(double a, double lo, double hi) const;
  // Distance from u to the nearest singular point (infinity when none exist).
  double distance_to_singular(double u, double a) const;

 private:
  MapKind kind_ = MapKind::Identity;
  double scale_ = 1.0;
  double phase_ = 0.0;
};

}  // namespace pdm
