#pragma once

#include "hypdim/cover.hpp"
#include "hypdim/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hypdim {

struct BowenBallSpec {
    Point center;
    double epsilon = 0.0;
    int k = 1;
};

/// |f^i(center) - f^i(y)| < epsilon for i = 0..k-1 (sup-norm, torus-aware). An orbit of y that
/// cannot be continued before step k-1 is not a member. Throws NoBranch if the center's orbit
/// is undefined.
bool bowen_ball_contains(const ModelSystem& model, const BowenBallSpec& spec, const Point& y);

/// Sup-norm distance from y to the depth-m cylinder cover of the invariant set.
double distance_to_repeller(const ModelSystem& model, const Point& y, int depth);

/// Depth of the cover used by the grid estimators: cylinder diameter below epsilon / 4.
RepellerCover cover_for_epsilon(const ModelSystem& model, double epsilon);

/// Number of consecutive orbit points f^0(y), f^1(y), ... (at most max_steps) that exist and lie
/// strictly within epsilon of the cover.
int tracking_time(const ModelSystem& model, const NearIndex& index, Point y, int max_steps);

/// vol(B(Lambda, epsilon, k)) for k = 1..k_max estimated on a regular grid with cell-center membership.
struct VolumeCurve {
    double epsilon = 0.0;
    int grid_resolution = 0;
    int cover_depth = 0;
    double cover_diameter = 0.0;
    std::vector<int> ks;
    std::vector<double> volumes;
    /// Total volume of cells whose membership differs from an axis neighbour.
    std::vector<double> bands;
};

/// Throws GridTooCoarse when the cell edge exceeds epsilon / 4 and CapExceeded for oversized grids.
VolumeCurve volume_curve(const ModelSystem& model, double epsilon, int k_max, int grid_resolution, int threads = 1);
/// Half the smallest gap between branches, or 0.1 when abutting branches leave no gap to halve.
double default_volume_epsilon(const ModelSystem& model);

double neighborhood_volume(const ModelSystem& model, double epsilon, int k, int grid_resolution, int threads = 1);

enum class PressureMethod { Spectral, PartitionSum, VolumeGrowth };
std::string to_string(PressureMethod method);

struct CurvePoint {
    int k = 0;
    double value = 0.0;  ///< log Z_k or log vol_k
};

struct PressureEstimate {
    double value = 0.0;
    PressureMethod method = PressureMethod::Spectral;
    int window_lo = 0;
    int window_hi = 0;
    /// Ordinary least-squares slope over the top half of the window.
    double fit_slope = 0.0;
    /// RMS residual of that fit.
    double residual = 0.0;
    /// Order of the linear recurrence used to extrapolate partition sums (0 = plain slope).
    int recurrence_order = 0;
    std::vector<CurvePoint> curve;
};

PressureEstimate pressure_spectral_estimate(const ModelSystem& model, const Potential& potential);

/// Slope of log vol against k over the top half of [k_lo, k_hi]. Throws DegenerateCurve when a
/// volume in the window is zero.
PressureEstimate pressure_from_volume_growth(const VolumeCurve& curve, int k_lo, int k_hi);

/// log Z_k for k = 1..k_max. The value is the growth rate of the shortest linear recurrence that
/// reproduces Z_k to 1e-10 relative; if none exists it falls back to the top-half slope.
PressureEstimate pressure_from_partition_sums(const ModelSystem& model, const Potential& potential, int k_max,
                                              std::optional<double> delta = std::nullopt);

struct StableSetOptions {
    double epsilon = 0.05;
    int depth = 10;
    int resolution = 1024;  ///< grid points per axis
    int threads = 1;
    bool jitter = false;    ///< seeded uniform offset inside each cell
    std::uint64_t seed = 0;
    /// Cylinder depth used to place test points inside each cell (geometric coding only);
    /// 0 picks depth plus enough levels for cylinders to be narrower than epsilon / 4.
    int refine_depth = 0;
};

/// Centers of grid cells containing a point whose first `depth` iterates stay within epsilon of
/// the invariant set's cover. Diffeomorphisms only.
std::vector<Point> sample_local_stable_set(const ModelSystem& model, const StableSetOptions& options);

}  // namespace hypdim
