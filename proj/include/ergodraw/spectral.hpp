/*
 Copyright 2026 The ergodraw Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Cosine-basis machinery for ergodic coverage on a rectangular workspace
// [0, L1] x [0, L2]. Everything here is templated on the scalar type and
// header-only; the rest of the library instantiates it with double.
//
// Coefficient tables are indexed (k1, k2): rows run over the frequency along
// the first axis, columns over the second.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ergodraw/errors.hpp"

namespace ergodraw {

template <typename Scalar = double>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar = double>
using Table = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest per-axis order supported; keeps per-point scratch on the stack.
inline constexpr int kMaxOrder = 63;

template <typename Scalar = double>
class Domain {
 public:
  Domain() : Domain(Scalar(1), Scalar(1)) {}
  Domain(Scalar l1, Scalar l2) : lengths_(l1, l2) {
    if (!(l1 > 0) || !(l2 > 0) || !std::isfinite(l1) || !std::isfinite(l2)) {
      throw ValidationError("domain side lengths must be positive and finite");
    }
  }

  Scalar length(int axis) const { return lengths_(axis); }
  const Vector2<Scalar>& lengths() const { return lengths_; }
  Scalar area() const { return lengths_(0) * lengths_(1); }
  Vector2<Scalar> center() const { return lengths_ / Scalar(2); }

  bool contains(const Vector2<Scalar>& x) const {
    return x(0) >= 0 && x(0) <= lengths_(0) && x(1) >= 0 && x(1) <= lengths_(1);
  }

  bool operator==(const Domain& other) const { return lengths_ == other.lengths_; }

 private:
  Vector2<Scalar> lengths_;
};

struct MultiIndex {
  int k1 = 0;
  int k2 = 0;
};

namespace detail {

inline void check_index(MultiIndex k) {
  if (k.k1 < 0 || k.k2 < 0) throw ValidationError("multi-index components must be non-negative");
}

template <typename Scalar>
void check_inside(const Vector2<Scalar>& x, const Domain<Scalar>& d) {
  if (!d.contains(x)) {
    std::ostringstream msg;
    msg << "point (" << x(0) << ", " << x(1) << ") lies outside the domain [0, " << d.length(0)
        << "] x [0, " << d.length(1) << "]";
    throw DomainError(msg.str());
  }
}

inline void check_order(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw ValidationError("coefficient order K must lie in [1, " + std::to_string(kMaxOrder) + "], got " +
                          std::to_string(order));
  }
}

}  // namespace detail

/// Sobolev-type weight (1 + |k|^2)^(-3/2) for a planar workspace.
template <typename Scalar = double>
Scalar lambda_weight(MultiIndex k) {
  detail::check_index(k);
  const Scalar sq = Scalar(1) + Scalar(k.k1) * k.k1 + Scalar(k.k2) * k.k2;
  return Scalar(1) / (sq * std::sqrt(sq));
}

/// L2 norm of the unnormalized cosine product over the domain.
template <typename Scalar = double>
Scalar basis_norm(MultiIndex k, const Domain<Scalar>& d) {
  detail::check_index(k);
  const Scalar f1 = k.k1 == 0 ? d.length(0) : d.length(0) / 2;
  const Scalar f2 = k.k2 == 0 ? d.length(1) : d.length(1) / 2;
  return std::sqrt(f1 * f2);
}

template <typename Scalar = double>
Scalar eval_basis(MultiIndex k, const Vector2<Scalar>& x, const Domain<Scalar>& d) {
  detail::check_index(k);
  detail::check_inside(x, d);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  return std::cos(k.k1 * pi * x(0) / d.length(0)) * std::cos(k.k2 * pi * x(1) / d.length(1)) /
         basis_norm(k, d);
}

template <typename Scalar = double>
Vector2<Scalar> eval_basis_grad(MultiIndex k, const Vector2<Scalar>& x, const Domain<Scalar>& d) {
  detail::check_index(k);
  detail::check_inside(x, d);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar w1 = k.k1 * pi / d.length(0);
  const Scalar w2 = k.k2 * pi / d.length(1);
  const Scalar inv_h = Scalar(1) / basis_norm(k, d);
  return Vector2<Scalar>(-w1 * std::sin(w1 * x(0)) * std::cos(w2 * x(1)) * inv_h,
                         -w2 * std::cos(w1 * x(0)) * std::sin(w2 * x(1)) * inv_h);
}

enum class CoefficientKind { distribution, trajectory };

/// (K+1) x (K+1) table of basis coefficients over a fixed domain.
template <typename Scalar = double>
class CoefficientGrid {
 public:
  CoefficientGrid(Table<Scalar> values, Domain<Scalar> domain, CoefficientKind kind)
      : values_(std::move(values)), domain_(domain), kind_(kind) {
    if (values_.rows() != values_.cols() || values_.rows() < 2) {
      throw ValidationError("coefficient grid must be square with K >= 1");
    }
    if (!values_.allFinite()) throw ValidationError("coefficient grid has non-finite entries");
  }

  int order() const { return static_cast<int>(values_.rows()) - 1; }
  const Table<Scalar>& values() const { return values_; }
  const Domain<Scalar>& domain() const { return domain_; }
  CoefficientKind kind() const { return kind_; }
  Scalar operator()(int k1, int k2) const { return values_(k1, k2); }

  bool compatible_with(const CoefficientGrid& other) const {
    return order() == other.order() && domain_ == other.domain_;
  }

 private:
  Table<Scalar> values_;
  Domain<Scalar> domain_;
  CoefficientKind kind_;
};

/// Precomputed normalizers and weights for orders 0..K along each axis, plus
/// fast evaluation of all basis functions (or weighted sums of their
/// gradients) at a single point.
template <typename Scalar = double>
class CosineBasis {
 public:
  using Axis = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxOrder + 1, 1>;

  CosineBasis(int order, Domain<Scalar> domain) : order_(order), domain_(domain) {
    detail::check_order(order);
    const int n = order + 1;
    inv_norm_.resize(n, n);
    lambda_.resize(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        inv_norm_(i, j) = Scalar(1) / basis_norm<Scalar>({i, j}, domain_);
        lambda_(i, j) = lambda_weight<Scalar>({i, j});
      }
    }
  }

  int order() const { return order_; }
  int size() const { return order_ + 1; }
  const Domain<Scalar>& domain() const { return domain_; }
  const Table<Scalar>& inverse_norm() const { return inv_norm_; }
  const Table<Scalar>& lambda() const { return lambda_; }

  /// cos(k pi x / L) for k = 0..K along one axis.
  Axis cosines(int axis, Scalar coordinate) const {
    Axis out(size());
    const Scalar w = std::numbers::pi_v<Scalar> * coordinate / domain_.length(axis);
    for (int k = 0; k < size(); ++k) out(k) = std::cos(k * w);
    return out;
  }

  /// d/dx cos(k pi x / L) for k = 0..K along one axis.
  Axis cosine_slopes(int axis, Scalar coordinate) const {
    Axis out(size());
    const Scalar base = std::numbers::pi_v<Scalar> / domain_.length(axis);
    for (int k = 0; k < size(); ++k) out(k) = -k * base * std::sin(k * base * coordinate);
    return out;
  }

  /// All F_k(x) as a (K+1) x (K+1) table.
  Table<Scalar> evaluate(const Vector2<Scalar>& x) const {
    detail::check_inside(x, domain_);
    const Axis c1 = cosines(0, x(0));
    const Axis c2 = cosines(1, x(1));
    Table<Scalar> out = (c1 * c2.transpose()).array();
    out *= inv_norm_;
    return out;
  }

  /// sum_k w_k grad F_k(x).
  Vector2<Scalar> weighted_gradient(const Vector2<Scalar>& x, const Table<Scalar>& weights) const {
    detail::check_inside(x, domain_);
    const Table<Scalar> scaled = weights * inv_norm_;
    const Axis c1 = cosines(0, x(0));
    const Axis c2 = cosines(1, x(1));
    const Axis d1 = cosine_slopes(0, x(0));
    const Axis d2 = cosine_slopes(1, x(1));
    return Vector2<Scalar>(d1.dot(scaled.matrix() * c2), c1.dot(scaled.matrix() * d2));
  }

 private:
  int order_;
  Domain<Scalar> domain_;
  Table<Scalar> inv_norm_;
  Table<Scalar> lambda_;
};

/// Non-negative density over the workspace with unit mass. Row 0 of the grid is
/// the top edge of the workspace (second coordinate = L2).
template <typename Scalar = double>
class SpatialDistribution {
 public:
  using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  SpatialDistribution(Grid density, Domain<Scalar> domain) : density_(std::move(density)), domain_(domain) {
    if (density_.rows() < 1 || density_.cols() < 1) throw ValidationError("density grid is empty");
    if (!density_.allFinite() || (density_.array() < 0).any()) {
      throw ValidationError("density must be finite and non-negative");
    }
    const Scalar mass = density_.sum() * cell_area();
    if (std::abs(mass - Scalar(1)) > Scalar(1e-9)) {
      std::ostringstream msg;
      msg << "density is not normalized: total mass " << mass;
      throw ValidationError(msg.str());
    }
  }

  /// Scales a non-negative grid to unit mass.
  static SpatialDistribution normalized(Grid weights, Domain<Scalar> domain) {
    if (!weights.allFinite() || (weights.array() < 0).any()) {
      throw ValidationError("density weights must be finite and non-negative");
    }
    const Scalar cell = domain.area() / Scalar(weights.rows() * weights.cols());
    const Scalar mass = weights.sum() * cell;
    if (!(mass > 0)) throw ValidationError("degenerate mass: density is zero everywhere");
    weights /= mass;
    return SpatialDistribution(std::move(weights), domain);
  }

  static SpatialDistribution uniform(int rows, int cols, Domain<Scalar> domain) {
    return normalized(Grid::Ones(rows, cols), domain);
  }

  const Grid& density() const { return density_; }
  const Domain<Scalar>& domain() const { return domain_; }
  int rows() const { return static_cast<int>(density_.rows()); }
  int cols() const { return static_cast<int>(density_.cols()); }
  Scalar cell_area() const { return domain_.area() / Scalar(density_.rows() * density_.cols()); }

  Vector2<Scalar> cell_center(int row, int col) const {
    return Vector2<Scalar>((col + Scalar(0.5)) * domain_.length(0) / cols(),
                           domain_.length(1) - (row + Scalar(0.5)) * domain_.length(1) / rows());
  }

 private:
  Grid density_;
  Domain<Scalar> domain_;
};

namespace detail {

// Cosine samples at cell centers: (K+1) x n, one column per cell along `axis`.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cell_cosines(int order, int cells, Scalar length,
                                                                   bool top_down) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(order + 1, cells);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  for (int c = 0; c < cells; ++c) {
    const Scalar offset = (c + Scalar(0.5)) * length / cells;
    const Scalar x = top_down ? length - offset : offset;
    for (int k = 0; k <= order; ++k) out(k, c) = std::cos(k * pi * x / length);
  }
  return out;
}

}  // namespace detail

/// Midpoint-rule inner products of the density with every basis function.
template <typename Scalar = double>
CoefficientGrid<Scalar> distribution_coeffs(const SpatialDistribution<Scalar>& phi, int order) {
  detail::check_order(order);
  const auto& d = phi.domain();
  const auto cx = detail::cell_cosines<Scalar>(order, phi.cols(), d.length(0), false);
  const auto cy = detail::cell_cosines<Scalar>(order, phi.rows(), d.length(1), true);
  const CosineBasis<Scalar> basis(order, d);
  Table<Scalar> values = (cx * phi.density().transpose() * cy.transpose()).array();
  values *= basis.inverse_norm() * phi.cell_area();
  return CoefficientGrid<Scalar>(std::move(values), d, CoefficientKind::distribution);
}

/// Streaming form of the trajectory time average: sum F_k(x) dt over samples.
template <typename Scalar = double>
class BasisAccumulator {
 public:
  explicit BasisAccumulator(const CosineBasis<Scalar>& basis)
      : basis_(basis), sums_(Table<Scalar>::Zero(basis.size(), basis.size())) {}

  void add(const Vector2<Scalar>& pen, Scalar dt) {
    if (!(dt > 0)) throw ValidationError("accumulator time step must be positive");
    detail::check_inside(pen, basis_.domain());
    const auto c1 = basis_.cosines(0, pen(0));
    const auto c2 = basis_.cosines(1, pen(1));
    // The 1/h_k factor is applied on read.
    sums_.matrix().noalias() += (dt * c1) * c2.transpose();
    elapsed_ += dt;
  }

  Scalar elapsed() const { return elapsed_; }
  const CosineBasis<Scalar>& basis() const { return basis_; }

  /// Unnormalized integrals int F_k(x(t)) dt.
  Table<Scalar> integrals() const { return sums_ * basis_.inverse_norm(); }

  CoefficientGrid<Scalar> coefficients() const {
    if (!(elapsed_ > 0)) throw ValidationError("accumulator has no samples");
    return CoefficientGrid<Scalar>(integrals() / elapsed_, basis_.domain(), CoefficientKind::trajectory);
  }

 private:
  CosineBasis<Scalar> basis_;
  Table<Scalar> sums_;
  Scalar elapsed_ = 0;
};

/// Left-Riemann time average over a uniformly sampled pen path (2 x N).
template <typename Scalar = double>
CoefficientGrid<Scalar> trajectory_coeffs(const Eigen::Matrix<Scalar, 2, Eigen::Dynamic>& pen, Scalar dt, int order,
                                          const Domain<Scalar>& domain) {
  if (pen.cols() < 1) throw ValidationError("trajectory is empty");
  if (!(dt > 0)) throw ValidationError("trajectory time step must be positive");
  detail::check_order(order);
  const CosineBasis<Scalar> basis(order, domain);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c1(basis.size(), pen.cols());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c2(basis.size(), pen.cols());
  for (Eigen::Index i = 0; i < pen.cols(); ++i) {
    detail::check_inside<Scalar>(pen.col(i), domain);
    c1.col(i) = basis.cosines(0, pen(0, i));
    c2.col(i) = basis.cosines(1, pen(1, i));
  }
  Table<Scalar> values = (c1 * c2.transpose()).array() * basis.inverse_norm() / Scalar(pen.cols());
  return CoefficientGrid<Scalar>(std::move(values), domain, CoefficientKind::trajectory);
}

/// Lambda-weighted squared distance between two coefficient sets.
template <typename Scalar = double>
Scalar ergodic_metric(const CoefficientGrid<Scalar>& c, const CoefficientGrid<Scalar>& phi) {
  if (!c.compatible_with(phi)) throw ValidationError("coefficient grids differ in order or domain");
  const CosineBasis<Scalar> basis(c.order(), c.domain());
  return (basis.lambda() * (c.values() - phi.values()).square()).sum();
}

/// Same as ergodic_metric with the weights already at hand (hot loops).
template <typename Scalar = double>
Scalar weighted_distance(const Table<Scalar>& lambda, const Table<Scalar>& c, const Table<Scalar>& phi) {
  return (lambda * (c - phi).square()).sum();
}

/// Evaluates sum_k c_k F_k at the cell centers of a rows x cols grid (row 0 at
/// the top of the workspace). Values are raw and may be negative.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> reconstruct(const CoefficientGrid<Scalar>& c, int rows,
                                                                    int cols) {
  if (rows < 2 || cols < 2) throw ValidationError("reconstruction resolution must be at least 2x2");
  const auto& d = c.domain();
  const CosineBasis<Scalar> basis(c.order(), d);
  const auto cx = detail::cell_cosines<Scalar>(c.order(), cols, d.length(0), false);
  const auto cy = detail::cell_cosines<Scalar>(c.order(), rows, d.length(1), true);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> w = (c.values() * basis.inverse_norm()).matrix();
  return cy.transpose() * w.transpose() * cx;
}

}  // namespace ergodraw
