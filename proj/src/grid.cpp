#include "curlsob/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curlsob {

Grid::Grid(int n, double box_half_width) : n_(n), half_width_(box_half_width) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("n must be even ≥ 8");
  if (!(box_half_width > 0.0) || !std::isfinite(box_half_width))
    throw std::invalid_argument("box half-width L must be positive");
  spacing_ = 2.0 * box_half_width / n;
}

double Grid::fundamental_wavenumber() const { return std::numbers::pi / half_width_; }

Grid make_grid(int n, double box_half_width) { return Grid(n, box_half_width); }

}  // namespace curlsob
