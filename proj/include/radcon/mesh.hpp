#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "radcon/core.hpp"

namespace radcon {

struct BoundaryFace {
  int axis;          // 0..dim-1
  int side;          // 0 = low end, 1 = high end
  std::size_t cell;  // adjacent cell (lexicographic index)
  Vec3 center;
  Vec3 normal;  // outward unit normal
  double area;  // 1.0 in 1-D by convention
};

// Uniform axis-aligned box, cell-centered. Axes beyond `dim` are padded with
// a single unit cell so all loops can run over three axes unconditionally.
class BoxMesh {
 public:
  BoxMesh(int dim, std::array<double, 3> extents, std::array<int, 3> cells)
      : dim_(dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("mesh: dim must be 1, 2 or 3");
    for (int a = 0; a < 3; ++a) {
      if (a < dim) {
        if (!(extents[a] > 0.0))
          throw std::invalid_argument("mesh: extents must be positive");
        if (cells[a] < 2)
          throw std::invalid_argument("mesh: need at least 2 cells per axis");
        extents_[a] = extents[a];
        cells_[a] = cells[a];
      } else {
        extents_[a] = 1.0;
        cells_[a] = 1;
      }
      spacing_[a] = extents_[a] / cells_[a];
    }
    build_boundary_faces();
  }

  int dim() const { return dim_; }
  int cells_per_axis(int axis) const { return cells_[axis]; }
  double extent(int axis) const { return extents_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_[0]) * cells_[1] * cells_[2];
  }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= extents_[a];
    return v;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing_[a];
    return v;
  }

  // Area of a face orthogonal to `axis` (1.0 in 1-D).
  double face_area(int axis) const { return cell_volume() / spacing_[axis]; }

  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(cells_[0]) *
               (static_cast<std::size_t>(iy) +
                static_cast<std::size_t>(cells_[1]) * static_cast<std::size_t>(iz));
  }

  std::array<int, 3> coords(std::size_t idx) const {
    std::array<int, 3> c;
    c[0] = static_cast<int>(idx % cells_[0]);
    idx /= cells_[0];
    c[1] = static_cast<int>(idx % cells_[1]);
    c[2] = static_cast<int>(idx / cells_[1]);
    return c;
  }

  Vec3 cell_center(std::size_t idx) const {
    const auto c = coords(idx);
    return {(c[0] + 0.5) * spacing_[0], (c[1] + 0.5) * spacing_[1],
            (c[2] + 0.5) * spacing_[2]};
  }

  const std::vector<BoundaryFace>& boundary_faces() const { return faces_; }

  double boundary_measure() const {
    double s = 0.0;
    for (const auto& f : faces_) s += f.area;
    return s;
  }

  bool inside(const Vec3& x, double tol = 1e-12) const {
    for (int a = 0; a < dim_; ++a)
      if (x[a] < -tol || x[a] > extents_[a] + tol) return false;
    return true;
  }

 private:
  void build_boundary_faces() {
    for (int axis = 0; axis < dim_; ++axis) {
      const double area = face_area(axis);
      for (int side = 0; side < 2; ++side) {
        Vec3 n{0.0, 0.0, 0.0};
        n[axis] = side == 0 ? -1.0 : 1.0;
        const int fixed = side == 0 ? 0 : cells_[axis] - 1;
        // Lexicographic order over the two free axes keeps face enumeration
        // deterministic.
        const int a1 = axis == 0 ? 1 : 0;
        const int a2 = axis == 2 ? 1 : 2;
        for (int j2 = 0; j2 < cells_[a2]; ++j2) {
          for (int j1 = 0; j1 < cells_[a1]; ++j1) {
            std::array<int, 3> c{0, 0, 0};
            c[axis] = fixed;
            c[a1] = j1;
            c[a2] = j2;
            Vec3 center{(c[0] + 0.5) * spacing_[0], (c[1] + 0.5) * spacing_[1],
                        (c[2] + 0.5) * spacing_[2]};
            center[axis] = side == 0 ? 0.0 : extents_[axis];
            faces_.push_back(BoundaryFace{axis, side, index(c[0], c[1], c[2]),
                                          center, n, area});
          }
        }
      }
    }
  }

  int dim_;
  std::array<double, 3> extents_;
  std::array<int, 3> cells_;
  std::array<double, 3> spacing_;
  std::vector<BoundaryFace> faces_;
};

struct TimeGrid {
  double horizon;  // final time, > 0
  int steps;       // number of implicit steps, >= 1

  TimeGrid(double horizon_, int steps_) : horizon(horizon_), steps(steps_) {
    if (!(horizon > 0.0)) throw std::invalid_argument("time: horizon must be positive");
    if (steps < 1) throw std::invalid_argument("time: steps must be positive");
  }

  double dt() const { return horizon / steps; }
  double time(int level) const { return level * dt(); }
  int levels() const { return steps + 1; }
};

}  // namespace radcon
