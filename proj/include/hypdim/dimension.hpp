#pragma once

#include "hypdim/cover.hpp"
#include "hypdim/models.hpp"
#include "hypdim/pressure.hpp"
#include "hypdim/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypdim {

/// s = lim (1/k) log max ||Df^k|| over the invariant set.
struct ExpansionRate {
    double value = 0.0;
    std::vector<double> log_norms;  ///< a_k for k = 1..k_max
    int k_max = 0;
    bool inverse = false;      ///< computed for f^-1
    bool closed_form = false;  ///< all branches are +-M with M normal, so a_k = k log ||M||
};

/// a_k = log of the largest operator norm over admissible k-word products; value = min a_k / k.
/// With inverse = true the products are those of Df^-k (the rate used with phi_s).
ExpansionRate expansion_rate(const ModelSystem& model, int k_max, bool inverse = false);

struct ScaleCount {
    double scale = 0.0;
    std::uint64_t count = 0;
};

/// Half-open grid cells of edge `scale` anchored at 0 that contain a point.
std::uint64_t box_count(std::span<const Point> points, int dim, double scale);
/// Grid cells whose interior meets one of the cover rectangles.
std::uint64_t box_count(const RepellerCover& cover, double scale);

/// base^-m for m = m_lo..m_hi.
std::vector<double> geometric_scales(double base, int m_lo, int m_hi);

struct DimensionEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    std::vector<ScaleCount> counts;  ///< coarse to fine
    std::size_t excluded = 0;        ///< leading (coarsest) scales left out of the fit
};

inline constexpr std::size_t kExcludedCoarseScales = 2;

/// Slope of log N against log(1/scale) after dropping the two coarsest scales.
/// Throws DegenerateScales unless at least 4 scales remain and the schedule spans a factor of 100.
DimensionEstimate box_dimension(std::span<const ScaleCount> counts);

struct MinkowskiPoint {
    double rho = 0.0;
    double volume = 0.0;
    double ratio = 0.0;  ///< volume / (2 rho)^(n - t)
};

/// vol(A_rho) / (2 rho)^(n-t) with A_rho the closed sup-norm rho-neighbourhood of the cloud,
/// measured on a grid. Points are snapped to their grid cell. Throws GridTooCoarse when the cell
/// edge exceeds rho/4.
std::vector<MinkowskiPoint> minkowski_content_curve(std::span<const Point> cloud, int dim, Geometry geometry,
                                                    double t, std::span<const double> rhos, int grid_resolution);

/// rho_k = r_k / 2 with r_k = epsilon / exp(s + delta)^k, k = 1..k_max; delta defaults to 0.01 s.
std::vector<double> proof_radius_schedule(double epsilon, double s, int k_max,
                                          std::optional<double> delta = std::nullopt);

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kEstimatorTolerance = 0.02;

/// n + pressure / s, returning exactly n when |pressure| <= tolerance.
/// Throws NonPositiveRate for s <= 0 and ParameterOutOfRange for pressure above tolerance.
double dimension_bound(int n, double pressure, double s, double tolerance = kExactTolerance);

enum class Classification { Attractor, NonAttractor, Inconclusive };
std::string to_string(Classification c);

/// Attractor when |P| + residual <= tolerance, non-attractor when P < -tolerance - residual.
Classification classify(const PressureEstimate& pressure, double tolerance);

struct EquivalenceCheck {
    std::string claim;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct BoundReport {
    std::string model;
    int n = 0;
    PotentialLabel potential = PotentialLabel::PhiU;
    ExpansionRate s;
    PressureEstimate pressure;
    double bound = 0.0;
    double tolerance = kExactTolerance;
    Classification classification = Classification::Inconclusive;
    std::vector<EquivalenceCheck> checks;
    std::optional<MarkovMeasureStats> equilibrium_stats;
};

/// Bound n + P/s with P from the exact spectral route. The default potential is phi_u for
/// diffeomorphisms and phi for expanding maps; phi_s pairs with the rate of f^-1.
BoundReport bound_report(const ModelSystem& model, std::optional<PotentialLabel> label = std::nullopt,
                         int s_k_max = 8, double tolerance = kExactTolerance);

/// Bound report plus the chain bound = n <=> P = 0 <=> attractor, the variational equality for the
/// equilibrium state, and Pesin's formula (P = 0) or strict Margulis-Ruelle (P < 0).
BoundReport srb_equivalence_report(const ModelSystem& model, double tolerance = kExactTolerance);

/// Linear horseshoe with lambda_u = 2^(1/(target-1)), so that t^u + 1 = target. target in (1, 2).
ModelSystem horseshoe_for_target_dimension(double target, double lambda_s = 0.25);

}  // namespace hypdim
