#include "pdm/coordinate_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pdm/errors.hpp"

namespace pdm {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// coth(s) chain: y' = 1 - y^2, y'' = -2 y (1 - y^2), y''' = (1 - y^2)(6 y^2 - 2).
MapJet coth_jet(cplx s, double c) {
  const cplx y = 1.0 / std::tanh(s);
  const cplx w = 1.0 - y * y;
  return {y, c * w, c * c * (-2.0 * y * w), c * c * c * (w * (6.0 * y * y - 2.0))};
}

// cot(s) chain: y' = -(1 + y^2), y'' = 2 y (1 + y^2), y''' = -(1 + y^2)(2 + 6 y^2).
MapJet cot_jet(cplx s, double c) {
  const cplx y = std::cos(s) / std::sin(s);
  const cplx w = 1.0 + y * y;
  return {y, c * (-w), c * c * (2.0 * y * w), c * c * c * (-w * (2.0 + 6.0 * y * y))};
}

// All u = (base + m * period) / c in [lo, hi].
void periodic(std::vector<double>& out, double base, double period, double c, double lo,
              double hi) {
  const double s_lo = std::min(c * lo, c * hi);
  const double s_hi = std::max(c * lo, c * hi);
  const double m0 = std::floor((s_lo - base) / period);
  for (double m = m0; base + m * period <= s_hi + period; m += 1.0) {
    const double u = (base + m * period) / c;
    if (u >= lo && u <= hi) out.push_back(u);
  }
}

bool near_multiple(double phase, double period) {
  const double q = phase / period;
  return std::abs(q - std::round(q)) < 1e-14;
}

}  // namespace

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::HalfSquare: return "half-square";
    case MapKind::Exponential: return "exponential";
    case MapKind::SignedExponential: return "signed-exponential";
    case MapKind::CothHalf: return "coth-half";
    case MapKind::CothQuarter: return "coth-quarter";
    case MapKind::CotHalf: return "cot-half";
    case MapKind::CothShifted: return "coth-shifted";
    case MapKind::CotShifted: return "cot-shifted";
  }
  return "unknown";
}

MapKind map_kind_from_string(const std::string& name) {
  for (auto k : {MapKind::Identity, MapKind::HalfSquare, MapKind::Exponential,
                 MapKind::SignedExponential, MapKind::CothHalf, MapKind::CothQuarter,
                 MapKind::CotHalf, MapKind::CothShifted, MapKind::CotShifted}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown map template '" + name +
                    "'; valid: identity, half-square, exponential, signed-exponential, "
                    "coth-half, coth-quarter, cot-half, coth-shifted, cot-shifted");
}

CoordinateMap::CoordinateMap(MapKind kind, double scale, double phase)
    : kind_(kind), scale_(scale), phase_(phase) {
  if (!std::isfinite(scale) || scale == 0.0) {
    throw ParameterError("map scale must be finite and nonzero");
  }
}

bool CoordinateMap::is_complex() const {
  switch (kind_) {
    case MapKind::SignedExponential: return !near_multiple(phase_, kPi);
    case MapKind::CothShifted:
    case MapKind::CotShifted: return true;
    default: return false;
  }
}

std::string CoordinateMap::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << to_string(kind_);
  if (kind_ != MapKind::Identity && kind_ != MapKind::HalfSquare) os << "(k=" << scale_;
  if (kind_ == MapKind::SignedExponential) os << ",phase=" << phase_;
  if (kind_ != MapKind::Identity && kind_ != MapKind::HalfSquare) os << ")";
  return os.str();
}

MapJet CoordinateMap::jet(double u) const { return jet(cplx(u, 0.0)); }

MapJet CoordinateMap::jet(cplx u) const {
  const double k = scale_;
  switch (kind_) {
    case MapKind::Identity:
      return {u, 1.0, 0.0, 0.0};
    case MapKind::HalfSquare:
      return {0.5 * u * u, u, 1.0, 0.0};
    case MapKind::Exponential: {
      const cplx r = std::exp(-k * u);
      return {r, -k * r, k * k * r, -k * k * k * r};
    }
    case MapKind::SignedExponential: {
      const cplx q = k * std::polar(1.0, phase_);
      const cplx r = std::exp(-q * u);
      return {r, -q * r, q * q * r, -q * q * q * r};
    }
    case MapKind::CothHalf:
      return coth_jet(0.5 * k * u, 0.5 * k);
    case MapKind::CothQuarter:
      return coth_jet(0.25 * k * u, 0.25 * k);
    case MapKind::CotHalf:
      return cot_jet(0.5 * k * u, 0.5 * k);
    case MapKind::CothShifted:
      return coth_jet(0.5 * k * u + kI * (kPi / 4.0), 0.5 * k);
    case MapKind::CotShifted: {
      MapJet j = cot_jet(0.5 * k * u + kPi / 4.0, 0.5 * k);
      return {-kI * j.r, -kI * j.dr, -kI * j.d2r, -kI * j.d3r};
    }
  }
  return {};
}

std::vector<double> CoordinateMap::singular_points(double a, double lo, double hi) const {
  std::vector<double> out;
  const double k = scale_;
  auto push_if = [&](double u) {
    if (u >= lo && u <= hi) out.push_back(u);
  };
  switch (kind_) {
    case MapKind::Identity:
      push_if(0.0);
      if (a > 0.0) {
        push_if(1.0 / std::sqrt(a));
        push_if(-1.0 / std::sqrt(a));
      }
      break;
    case MapKind::HalfSquare:
      push_if(0.0);
      if (a > 0.0) {
        push_if(std::pow(4.0 / a, 0.25));
        push_if(-std::pow(4.0 / a, 0.25));
      }
      break;
    case MapKind::Exponential:
      if (a > 0.0) push_if(std::log(a) / (2.0 * k));
      break;
    case MapKind::SignedExponential: {
      if (near_multiple(phase_, 2.0 * kPi)) {
        if (a > 0.0) push_if(std::log(a) / (2.0 * k));
      } else if (near_multiple(phase_ - kPi, 2.0 * kPi)) {
        if (a > 0.0) push_if(-std::log(a) / (2.0 * k));
      } else if (near_multiple(phase_ - kPi / 2.0, kPi)) {
        // r^2 = exp(-+2 i k u) is unimodular: 1 - a r^2 vanishes only for |a| = 1.
        if (a == 1.0) periodic(out, 0.0, kPi, k, lo, hi);
        if (a == -1.0) periodic(out, kPi / 2.0, kPi, k, lo, hi);
      }
      break;
    }
    case MapKind::CothHalf:
    case MapKind::CothQuarter: {
      const double c = (kind_ == MapKind::CothHalf ? 0.5 : 0.25) * k;
      push_if(0.0);
      if (a > 0.0 && a < 1.0) {
        const double s = std::atanh(std::sqrt(a));
        push_if(s / c);
        push_if(-s / c);
      }
      break;
    }
    case MapKind::CotHalf: {
      const double c = 0.5 * k;
      periodic(out, 0.0, kPi, c, lo, hi);        // poles
      periodic(out, kPi / 2.0, kPi, c, lo, hi);  // zeros
      if (a > 0.0) {
        const double s = std::atan(std::sqrt(a));  // cot(s) = 1/sqrt(a)
        periodic(out, s, kPi, c, lo, hi);
        periodic(out, -s, kPi, c, lo, hi);
      }
      break;
    }
    case MapKind::CothShifted:
      // Unimodular, pole-free on the real axis; r^2 = 1/a has no real solution.
      break;
    case MapKind::CotShifted: {
      const double c = 0.5 * k;
      periodic(out, -kPi / 4.0, kPi, c, lo, hi);
      periodic(out, kPi / 4.0, kPi, c, lo, hi);
      if (a < 0.0) {
        const double s = std::atan(std::sqrt(-a));
        periodic(out, s - kPi / 4.0, kPi, c, lo, hi);
        periodic(out, -s - kPi / 4.0, kPi, c, lo, hi);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double CoordinateMap::distance_to_singular(double u, double a) const {
  const auto pts = singular_points(a, u - 1.0, u + 1.0);
  double d = std::numeric_limits<double>::infinity();
  for (double p : pts) d = std::min(d, std::abs(p - u));
  return d;
}

}  // namespace pdm
