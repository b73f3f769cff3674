#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace hypdim {

/// Ambient dimensions are small; fixed-capacity storage keeps orbit loops allocation-free.
inline constexpr int kMaxDim = 4;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using LinearMap = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

enum class Geometry { Cube, Torus };

/// Closed axis-aligned rectangle.
struct Box {
    Point lo;
    Point hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool empty() const;
    bool contains(const Point& p, double slack = 0.0) const;
    Point center() const { return (lo + hi) / 2.0; }
    /// Largest edge length (sup-norm diameter).
    double diameter() const;
    double volume() const;
};

Box unit_box(int dim);
Box intersect(const Box& a, const Box& b);

/// True when every row and column has exactly one non-zero entry, so boxes map to boxes.
bool is_monomial(const LinearMap& m);

/// Image of a box under x -> linear*x + offset; requires a monomial linear part.
Box affine_image(const Box& box, const LinearMap& linear, const Point& offset);

/// Sup-norm distance, wrapping coordinates mod 1 on the torus.
double sup_distance(const Point& a, const Point& b, Geometry geometry);

/// Sup-norm distance from a point to a closed box; torus distances use the shortest wrap.
double distance_to_box(const Point& p, const Box& box, Geometry geometry);

/// Sup-norm gap between two closed boxes (0 when they touch or overlap).
double box_gap(const Box& a, const Box& b, Geometry geometry);

/// Reduces every coordinate into [0, 1).
void wrap_unit(Point& p);

}  // namespace hypdim
