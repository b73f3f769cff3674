#pragma once

#include "hypdim/models.hpp"

#include <cstdint>
#include <vector>

namespace hypdim {

/// Finite union of cylinder rectangles containing the invariant set.
///
/// Expanding maps use forward cylinders of the given depth; diffeomorphisms intersect backward
/// and forward cylinders of that depth. Declared-coding torus models cover the whole torus.
class RepellerCover {
public:
    static RepellerCover at_depth(const ModelSystem& model, int depth);
    /// Smallest depth whose rectangles all have sup-diameter below max_diameter.
    /// Throws CapExceeded when the word cap is reached first.
    static RepellerCover finer_than(const ModelSystem& model, double max_diameter);

    bool whole_space() const { return whole_space_; }
    int depth() const { return depth_; }
    int dim() const { return dim_; }
    Geometry geometry() const { return geometry_; }
    const std::vector<Box>& rects() const { return rects_; }
    double max_diameter() const;

    /// Sup-norm distance to the union of rectangles.
    double distance(const Point& p) const;

private:
    bool whole_space_ = false;
    int depth_ = 0;
    int dim_ = 1;
    Geometry geometry_ = Geometry::Cube;
    std::vector<Box> rects_;
};

/// Bucketed index answering "is p strictly closer than epsilon to the cover?" in O(1) for most points.
class NearIndex {
public:
    NearIndex(const RepellerCover& cover, double epsilon);

    bool near(const Point& p) const;
    double epsilon() const { return epsilon_; }

private:
    std::size_t bucket_of(const Point& p) const;

    RepellerCover cover_;
    double epsilon_;
    int per_axis_ = 1;
    std::vector<std::uint8_t> full_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> candidates_;
};

}  // namespace hypdim
