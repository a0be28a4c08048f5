#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "radcon/core.hpp"
#include "radcon/quadrature.hpp"

namespace radcon {

using SpaceFunction = std::function<double(const Vec3&)>;
using SpaceTimeFunction = std::function<double(double, const Vec3&)>;

struct TemperatureField {
  std::vector<double> values;  // per cell

  TemperatureField() = default;
  explicit TemperatureField(std::size_t cells, double fill = 0.0)
      : values(cells, fill) {}
  std::size_t size() const { return values.size(); }
};

struct EmissionField {
  std::vector<double> values;  // T^4 per cell

  EmissionField() = default;
  explicit EmissionField(std::size_t cells, double fill = 0.0)
      : values(cells, fill) {}
  std::size_t size() const { return values.size(); }
};

// Intensity per (ordinate, cell), ordinate-major so each sweep writes a
// contiguous slice.
struct RadiationField {
  std::size_t cells = 0;
  std::size_t ordinates = 0;
  std::vector<double> values;

  RadiationField() = default;
  RadiationField(std::size_t cells_, std::size_t ordinates_)
      : cells(cells_), ordinates(ordinates_), values(cells_ * ordinates_, 0.0) {}

  double* slice(std::size_t m) { return values.data() + m * cells; }
  const double* slice(std::size_t m) const { return values.data() + m * cells; }
  double& at(std::size_t m, std::size_t c) { return values[m * cells + c]; }
  double at(std::size_t m, std::size_t c) const { return values[m * cells + c]; }
};

// Prescribed boundary intensity on inflow faces; may depend on time,
// position and direction.
struct InflowData {
  std::function<double(double t, const Vec3& x, const Vec3& beta)> value;

  double operator()(double t, const Vec3& x, const Vec3& beta) const {
    return value(t, x, beta);
  }

  static InflowData zero() {
    return InflowData{[](double, const Vec3&, const Vec3&) { return 0.0; }};
  }
  static InflowData constant(double c) {
    return InflowData{[c](double, const Vec3&, const Vec3&) { return c; }};
  }
};

using TemperatureHistory = std::vector<TemperatureField>;   // time levels 0..N
using IncidentHistory = std::vector<std::vector<double>>;   // G per level
using RadiationHistory = std::vector<RadiationField>;       // I per level

}  // namespace radcon
