#include "singspec/core/space.hpp"

#include <sstream>

#include "singspec/errors.hpp"

namespace singspec {

Space::Space(SpaceKind kind, int n, int rows, int cols)
    : kind_(kind), n_(n), rows_(rows), cols_(cols), h_(kind == SpaceKind::Coordinate ? 1.0 : 1.0 / n) {}

Space Space::grid1d(int n) {
  if (n < 2) throw RangeError("grid needs at least 2 cells");
  return Space(SpaceKind::Grid1D, n, 0, 0);
}

Space Space::grid2d(int n) {
  if (n < 2) throw RangeError("grid needs at least 2 cells per axis");
  return Space(SpaceKind::Grid2D, n, 0, 0);
}

Space Space::coordinate(int dim) {
  if (dim < 1) throw RangeError("coordinate space needs positive dimension");
  return Space(SpaceKind::Coordinate, dim, 0, 0);
}

Space Space::matrix(int rows, int cols) {
  if (rows < 1 || cols < 1) throw RangeError("matrix shape must be positive");
  return Space(SpaceKind::Coordinate, rows * cols, rows, cols);
}

int Space::size() const { return kind_ == SpaceKind::Grid2D ? n_ * n_ : n_; }

double Space::weight() const {
  switch (kind_) {
    case SpaceKind::Grid1D: return h_;
    case SpaceKind::Grid2D: return h_ * h_;
    default: return 1.0;
  }
}

std::optional<std::pair<int, int>> Space::shape() const {
  if (rows_ > 0) return std::make_pair(rows_, cols_);
  return std::nullopt;
}

std::string Space::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SpaceKind::Grid1D: os << "grid1d(n=" << n_ << ")"; break;
    case SpaceKind::Grid2D: os << "grid2d(n=" << n_ << ")"; break;
    case SpaceKind::Coordinate:
      if (rows_ > 0)
        os << "matrix(" << rows_ << "x" << cols_ << ")";
      else
        os << "coordinate(dim=" << n_ << ")";
      break;
  }
  return os.str();
}

void require_same_space(const Space& a, const Space& b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": " + a.describe() + " vs " + b.describe());
}

}  // namespace singspec
