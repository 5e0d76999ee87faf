#pragma once

#include <stdexcept>
#include <vector>

namespace pmshock {

// Uniform cell-centered grid with Dirichlet far-field ghost values
// (u_- on the left, 0 on the right for shock runs).
struct Grid1D {
  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 0;
  double bc_left = 0.0;
  double bc_right = 0.0;

  double dx() const { return (x_right - x_left) / n_cells; }
  double cell_center(int i) const { return x_left + (i + 0.5) * dx(); }

  void validate() const {
    if (n_cells < 8) throw std::invalid_argument("grid needs n_cells >= 8");
    if (!(x_right > x_left)) throw std::invalid_argument("grid needs dx > 0");
  }
};

enum class Frame { lab, traveling };

// Time-stamped non-negative cell averages.
struct FieldState {
  double t = 0.0;
  std::vector<double> u;
  Frame frame = Frame::lab;
};

}  // namespace pmshock
