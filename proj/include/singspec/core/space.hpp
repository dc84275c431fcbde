#pragma once

#include <optional>
#include <string>
#include <utility>

namespace singspec {

enum class SpaceKind { Grid1D, Grid2D, Coordinate };

/**
 * Discretization of the domain a signal lives on.
 *
 * Grid1D: n cells of width h = 1/n on [0,1], nodes at cell centers.
 * Grid2D: n x n cells on [0,1]^2, row-major with index iy * n + ix.
 * Coordinate: plain R^dim with the unweighted Euclidean product, optionally
 * carrying a rows x cols matrix shape (row-major) for matrix-valued unknowns.
 */
class Space {
 public:
  static Space grid1d(int n);
  static Space grid2d(int n);
  static Space coordinate(int dim);
  static Space matrix(int rows, int cols);

  SpaceKind kind() const { return kind_; }
  bool is_grid() const { return kind_ != SpaceKind::Coordinate; }

  /// Number of scalar samples.
  int size() const;
  /// Cells per axis (grids) or dimension (coordinates).
  int n() const { return n_; }
  /// Cell width; 1 for coordinate spaces.
  double h() const { return h_; }
  /// Quadrature weight of one sample: h, h^2 or 1.
  double weight() const;

  std::optional<std::pair<int, int>> shape() const;

  /// Cell-center abscissa of 1D sample i.
  double node(int i) const { return (i + 0.5) * h_; }

  std::string describe() const;

  friend bool operator==(const Space& a, const Space& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.rows_ == b.rows_ &&
           a.cols_ == b.cols_;
  }
  friend bool operator!=(const Space& a, const Space& b) { return !(a == b); }

 private:
  Space(SpaceKind kind, int n, int rows, int cols);

  SpaceKind kind_;
  int n_;
  int rows_;
  int cols_;
  double h_;
};

/// Throws DimensionError unless the two spaces coincide.
void require_same_space(const Space& a, const Space& b, const char* what);

}  // namespace singspec
