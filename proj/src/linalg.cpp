#include "hypdim/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace hypdim {

namespace {

double interval_gap(double alo, double ahi, double blo, double bhi) {
    return std::max({0.0, blo - ahi, alo - bhi});
}

double circle_interval_gap(double alo, double ahi, double blo, double bhi) {
    double best = interval_gap(alo, ahi, blo, bhi);
    best = std::min(best, interval_gap(alo + 1.0, ahi + 1.0, blo, bhi));
    best = std::min(best, interval_gap(alo - 1.0, ahi - 1.0, blo, bhi));
    return best;
}

}  // namespace

bool Box::empty() const {
    for (int i = 0; i < dim(); ++i) {
        if (lo[i] > hi[i]) return true;
    }
    return false;
}

bool Box::contains(const Point& p, double slack) const {
    for (int i = 0; i < dim(); ++i) {
        if (p[i] < lo[i] - slack || p[i] > hi[i] + slack) return false;
    }
    return true;
}

double Box::diameter() const {
    return dim() == 0 ? 0.0 : (hi - lo).maxCoeff();
}

double Box::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
}

Box unit_box(int dim) {
    return Box{Point::Zero(dim), Point::Ones(dim)};
}

Box intersect(const Box& a, const Box& b) {
    return Box{a.lo.cwiseMax(b.lo), a.hi.cwiseMin(b.hi)};
}

bool is_monomial(const LinearMap& m) {
    if (m.rows() != m.cols()) return false;
    for (int i = 0; i < m.rows(); ++i) {
        int row_nonzero = 0;
        int col_nonzero = 0;
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) ++row_nonzero;
            if (m(j, i) != 0.0) ++col_nonzero;
        }
        if (row_nonzero != 1 || col_nonzero != 1) return false;
    }
    return true;
}

Box affine_image(const Box& box, const LinearMap& linear, const Point& offset) {
    const Point a = linear * box.lo + offset;
    const Point b = linear * box.hi + offset;
    return Box{a.cwiseMin(b), a.cwiseMax(b)};
}

double sup_distance(const Point& a, const Point& b, Geometry geometry) {
    double d = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double di = std::abs(a[i] - b[i]);
        if (geometry == Geometry::Torus) {
            di = std::fmod(di, 1.0);
            di = std::min(di, 1.0 - di);
        }
        d = std::max(d, di);
    }
    return d;
}

double distance_to_box(const Point& p, const Box& box, Geometry geometry) {
    double d = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        const double di = geometry == Geometry::Torus
                              ? circle_interval_gap(p[i], p[i], box.lo[i], box.hi[i])
                              : interval_gap(p[i], p[i], box.lo[i], box.hi[i]);
        d = std::max(d, di);
    }
    return d;
}

double box_gap(const Box& a, const Box& b, Geometry geometry) {
    double d = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double di = geometry == Geometry::Torus
                              ? circle_interval_gap(a.lo[i], a.hi[i], b.lo[i], b.hi[i])
                              : interval_gap(a.lo[i], a.hi[i], b.lo[i], b.hi[i]);
        d = std::max(d, di);
    }
    return d;
}

void wrap_unit(Point& p) {
    for (int i = 0; i < p.size(); ++i) {
        double v = p[i] - std::floor(p[i]);
        if (v >= 1.0) v = 0.0;
        p[i] = v;
    }
}

}  // namespace hypdim
