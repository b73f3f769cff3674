#pragma once

#include "hypdim/linalg.hpp"
#include "hypdim/transition.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypdim {

struct AmbientSpace {
    int dim = 1;
    Geometry geometry = Geometry::Cube;
};

enum class MapKind { Diffeomorphism, Expanding };

/// x -> linear * x + offset on a closed rectangle. The derivative is constant on the branch.
struct AffineBranch {
    int symbol = 0;
    Box domain;
    LinearMap linear;
    Point offset;

    Point apply(const Point& x) const { return linear * x + offset; }
};

/// Piecewise-affine hyperbolic diffeomorphism or expanding map together with its symbolic coding.
///
/// Immutable after construction. Branches are ordered by symbol; a point on a shared boundary
/// belongs to the lowest symbol. Torus models wrap images into [0,1)^n.
class ModelSystem {
public:
    /// Validates the declaration and derives the per-branch Jacobian magnitudes.
    /// Throws Error(InvalidModel) when the data is inconsistent.
    ModelSystem(std::string name, AmbientSpace space, MapKind kind, std::vector<AffineBranch> branches,
                TransitionMatrix transition, int unstable_dim);

    const std::string& name() const { return name_; }
    const AmbientSpace& space() const { return space_; }
    int dim() const { return space_.dim; }
    Geometry geometry() const { return space_.geometry; }
    MapKind kind() const { return kind_; }
    const std::vector<AffineBranch>& branches() const { return branches_; }
    std::size_t symbol_count() const { return branches_.size(); }
    const TransitionMatrix& transition() const { return transition_; }
    int unstable_dim() const { return unstable_dim_; }
    int stable_dim() const { return space_.dim - unstable_dim_; }

    /// |det Df restricted to E^u| per branch.
    const std::vector<double>& lambda_u() const { return lambda_u_; }
    /// |det Df restricted to E^s| per branch; empty for expanding maps.
    const std::vector<double>& lambda_s() const { return lambda_s_; }

    std::optional<int> branch_at(const Point& x) const;
    /// Image under the branch containing x; nullopt when x lies outside every branch domain.
    std::optional<Point> evaluate(const Point& x) const;
    /// Throws Error(NoBranch) outside the working region.
    LinearMap jacobian(const Point& x) const;
    /// Preimage under the branch whose image contains x (diffeomorphisms only).
    std::optional<Point> evaluate_inverse(const Point& x) const;

    /// Monomial branch matrices with images inside the unit cube: cylinders are rectangles.
    bool has_geometric_coding() const { return geometric_coding_; }
    /// Declared-coding torus models are treated as Anosov: the invariant set is the whole torus.
    bool invariant_set_is_whole_space() const;

    /// Image rectangle of a branch domain (geometric coding only).
    Box branch_image(std::size_t branch) const;
    const LinearMap& inverse_linear(std::size_t branch) const { return inverse_linear_[branch]; }

private:
    std::string name_;
    AmbientSpace space_;
    MapKind kind_;
    std::vector<AffineBranch> branches_;
    TransitionMatrix transition_;
    int unstable_dim_;
    std::vector<double> lambda_u_;
    std::vector<double> lambda_s_;
    std::vector<LinearMap> inverse_linear_;
    bool geometric_coding_ = false;
};

enum class PotentialLabel { PhiU, PhiS, Phi, Custom };

/// Locally constant potential: one value per symbol.
struct Potential {
    PotentialLabel label = PotentialLabel::Custom;
    std::vector<double> values;

    Potential shifted(double c) const;
};

/// phi_u = -log lambda_u, phi_s = log lambda_s, phi = -log |det Df|.
/// Throws IncompatibleLabel for phi_s on expanding maps or for Custom.
Potential potential(const ModelSystem& model, PotentialLabel label);
Potential zero_potential(const ModelSystem& model);

std::string to_string(PotentialLabel label);
std::string to_string(MapKind kind);

// Built-in models.

/// Two-branch linear horseshoe on the unit square; x is expanded by lambda_u, y contracted by
/// lambda_s. The second branch reverses orientation. Requires lambda_u > 2 and lambda_s in (0, 1/2).
ModelSystem build_linear_horseshoe(double lambda_u, double lambda_s);

/// x -> d x mod 1 on the circle.
ModelSystem build_doubling_map(int degree);

/// Circle map x -> slope * x mod 1 restricted to the kept slope-adic intervals.
ModelSystem build_cantor_repeller(int slope, std::vector<int> kept_branches);

/// [[2,1],[1,1]] on the 2-torus with the golden-mean two-block coding.
ModelSystem build_cat_map();

/// Golden-ratio beta map on [0,1]; coding is the golden-mean shift [[1,1],[1,0]].
ModelSystem build_golden_map();

/// g = f^m with one branch per admissible m-word.
ModelSystem power_model(const ModelSystem& model, int m);

/// Horseshoe t^u = log 2 / log lambda_u.
double horseshoe_unstable_dimension(double lambda_u);
/// Horseshoe t^s = -log 2 / log lambda_s.
double horseshoe_stable_dimension(double lambda_s);

}  // namespace hypdim
