#include "hypdim/models.hpp"

#include "hypdim/error.hpp"
#include "hypdim/symbolic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace hypdim {

namespace {

constexpr double kBoxSlack = 1e-12;

Point make_point(std::initializer_list<double> values) {
    Point p(static_cast<int>(values.size()));
    int i = 0;
    for (double v : values) p[i++] = v;
    return p;
}

/// Eigenvalue moduli in decreasing order.
std::vector<double> eigen_moduli(const LinearMap& linear) {
    const Eigen::MatrixXd m = linear;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    std::vector<double> moduli;
    for (int i = 0; i < m.rows(); ++i) moduli.push_back(std::abs(solver.eigenvalues()[i]));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    return moduli;
}

}  // namespace

ModelSystem::ModelSystem(std::string name, AmbientSpace space, MapKind kind, std::vector<AffineBranch> branches,
                         TransitionMatrix transition, int unstable_dim)
    : name_(std::move(name)),
      space_(space),
      kind_(kind),
      branches_(std::move(branches)),
      transition_(std::move(transition)),
      unstable_dim_(unstable_dim) {
    const int n = space_.dim;
    if (n < 1 || n > kMaxDim) throw Error(ErrorCode::InvalidModel, "ambient dimension must be in 1..4");
    if (branches_.empty()) throw Error(ErrorCode::InvalidModel, "model has no branches");
    std::stable_sort(branches_.begin(), branches_.end(),
                     [](const AffineBranch& a, const AffineBranch& b) { return a.symbol < b.symbol; });
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& b = branches_[i];
        if (b.symbol != static_cast<int>(i)) throw Error(ErrorCode::InvalidModel, "symbols must be 0..N-1");
        if (b.domain.dim() != n || b.domain.hi.size() != n || b.linear.rows() != n || b.linear.cols() != n ||
            b.offset.size() != n) {
            throw Error(ErrorCode::InvalidModel, "branch " + std::to_string(i) + " has mismatched dimensions");
        }
        if (b.domain.empty()) throw Error(ErrorCode::InvalidModel, "branch domain is empty");
        if (!unit_box(n).contains(b.domain.lo, 1e-9) || !unit_box(n).contains(b.domain.hi, 1e-9)) {
            throw Error(ErrorCode::InvalidModel, "branch domain leaves the unit cube");
        }
    }
    if (transition_.size() != branches_.size()) {
        throw Error(ErrorCode::InvalidModel, "transition matrix size differs from branch count");
    }
    if (kind_ == MapKind::Expanding && unstable_dim_ != n) {
        throw Error(ErrorCode::InvalidModel, "expanding models need unstable_dim = dim");
    }
    if (unstable_dim_ < 0 || unstable_dim_ > n) throw Error(ErrorCode::InvalidModel, "unstable_dim out of range");

    geometric_coding_ = true;
    for (const auto& b : branches_) {
        const double det = b.linear.determinant();
        if (!(std::abs(det) > 0.0)) throw Error(ErrorCode::InvalidModel, "branch linear part is singular");
        inverse_linear_.push_back(b.linear.inverse());

        const auto moduli = eigen_moduli(b.linear);
        double lu = 1.0;
        double ls = 1.0;
        for (int i = 0; i < n; ++i) (i < unstable_dim_ ? lu : ls) *= moduli[static_cast<std::size_t>(i)];
        if (unstable_dim_ > 0 && !(lu > 1.0)) {
            throw Error(ErrorCode::InvalidModel, "unstable Jacobian must exceed 1 on every branch");
        }
        lambda_u_.push_back(lu);
        if (kind_ == MapKind::Diffeomorphism) {
            if (stable_dim() > 0 && !(ls < 1.0)) {
                throw Error(ErrorCode::InvalidModel, "stable Jacobian must be below 1 on every branch");
            }
            lambda_s_.push_back(ls);
        }

        if (!is_monomial(b.linear)) {
            geometric_coding_ = false;
        } else {
            const Box image = affine_image(b.domain, b.linear, b.offset);
            if (!unit_box(n).contains(image.lo, 1e-9) || !unit_box(n).contains(image.hi, 1e-9)) {
                geometric_coding_ = false;
            }
        }
    }
}

bool ModelSystem::invariant_set_is_whole_space() const {
    return !geometric_coding_ && space_.geometry == Geometry::Torus;
}

Box ModelSystem::branch_image(std::size_t branch) const {
    if (!geometric_coding_) throw Error(ErrorCode::Unsupported, "branch images need a geometric coding");
    const auto& b = branches_[branch];
    return affine_image(b.domain, b.linear, b.offset);
}

std::optional<int> ModelSystem::branch_at(const Point& x) const {
    for (const auto& b : branches_) {
        if (b.domain.contains(x)) return b.symbol;
    }
    return std::nullopt;
}

std::optional<Point> ModelSystem::evaluate(const Point& x) const {
    const auto branch = branch_at(x);
    if (!branch) return std::nullopt;
    Point y = branches_[static_cast<std::size_t>(*branch)].apply(x);
    if (space_.geometry == Geometry::Torus) wrap_unit(y);
    return y;
}

LinearMap ModelSystem::jacobian(const Point& x) const {
    const auto branch = branch_at(x);
    if (!branch) throw Error(ErrorCode::NoBranch, "point lies outside every branch domain");
    return branches_[static_cast<std::size_t>(*branch)].linear;
}

std::optional<Point> ModelSystem::evaluate_inverse(const Point& x) const {
    if (kind_ != MapKind::Diffeomorphism) throw Error(ErrorCode::Unsupported, "inverse of an expanding map");
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& b = branches_[i];
        Point q = inverse_linear_[i] * (x - b.offset);
        if (space_.geometry == Geometry::Torus) wrap_unit(q);
        if (b.domain.contains(q, kBoxSlack)) return q;
    }
    return std::nullopt;
}

Potential Potential::shifted(double c) const {
    Potential out = *this;
    out.label = PotentialLabel::Custom;
    for (double& v : out.values) v += c;
    return out;
}

Potential potential(const ModelSystem& model, PotentialLabel label) {
    Potential out;
    out.label = label;
    switch (label) {
        case PotentialLabel::PhiU:
            for (double lu : model.lambda_u()) out.values.push_back(-std::log(lu));
            break;
        case PotentialLabel::PhiS:
            if (model.kind() != MapKind::Diffeomorphism) {
                throw Error(ErrorCode::IncompatibleLabel, "phi_s needs a diffeomorphism");
            }
            for (double ls : model.lambda_s()) out.values.push_back(std::log(ls));
            break;
        case PotentialLabel::Phi:
            for (const auto& b : model.branches()) out.values.push_back(-std::log(std::abs(b.linear.determinant())));
            break;
        case PotentialLabel::Custom:
            throw Error(ErrorCode::IncompatibleLabel, "custom potentials are built directly");
    }
    return out;
}

Potential zero_potential(const ModelSystem& model) {
    return Potential{PotentialLabel::Custom, std::vector<double>(model.symbol_count(), 0.0)};
}

std::string to_string(PotentialLabel label) {
    switch (label) {
        case PotentialLabel::PhiU: return "phi_u";
        case PotentialLabel::PhiS: return "phi_s";
        case PotentialLabel::Phi: return "phi";
        case PotentialLabel::Custom: return "custom";
    }
    return "custom";
}

std::string to_string(MapKind kind) {
    return kind == MapKind::Diffeomorphism ? "diffeo" : "expanding";
}

ModelSystem build_linear_horseshoe(double lambda_u, double lambda_s) {
    if (!(lambda_u > 2.0) || !std::isfinite(lambda_u)) {
        throw Error(ErrorCode::ParameterOutOfRange, "horseshoe needs lambda_u > 2");
    }
    if (!(lambda_s > 0.0 && lambda_s < 0.5)) {
        throw Error(ErrorCode::ParameterOutOfRange, "horseshoe needs lambda_s in (0, 1/2)");
    }
    const double w = 1.0 / lambda_u;
    std::vector<AffineBranch> branches(2);
    branches[0].symbol = 0;
    branches[0].domain = Box{make_point({0.0, 0.0}), make_point({w, 1.0})};
    branches[0].linear = LinearMap::Zero(2, 2);
    branches[0].linear(0, 0) = lambda_u;
    branches[0].linear(1, 1) = lambda_s;
    branches[0].offset = make_point({0.0, 0.0});

    // Folded branch: x -> lambda_u (1 - x), y -> 1 - lambda_s y.
    branches[1].symbol = 1;
    branches[1].domain = Box{make_point({1.0 - w, 0.0}), make_point({1.0, 1.0})};
    branches[1].linear = -branches[0].linear;
    branches[1].offset = make_point({lambda_u, 1.0});

    return ModelSystem("horseshoe", AmbientSpace{2, Geometry::Cube}, MapKind::Diffeomorphism, std::move(branches),
                       TransitionMatrix::full(2), 1);
}

ModelSystem build_doubling_map(int degree) {
    if (degree < 2) throw Error(ErrorCode::ParameterOutOfRange, "degree must be >= 2");
    std::vector<AffineBranch> branches;
    for (int j = 0; j < degree; ++j) {
        AffineBranch b;
        b.symbol = j;
        b.domain = Box{make_point({static_cast<double>(j) / degree}), make_point({static_cast<double>(j + 1) / degree})};
        b.linear = LinearMap::Constant(1, 1, static_cast<double>(degree));
        b.offset = make_point({-static_cast<double>(j)});
        branches.push_back(std::move(b));
    }
    return ModelSystem("doubling", AmbientSpace{1, Geometry::Torus}, MapKind::Expanding, std::move(branches),
                       TransitionMatrix::full(static_cast<std::size_t>(degree)), 1);
}

ModelSystem build_cantor_repeller(int slope, std::vector<int> kept_branches) {
    if (slope < 2) throw Error(ErrorCode::ParameterOutOfRange, "slope must be >= 2");
    std::sort(kept_branches.begin(), kept_branches.end());
    kept_branches.erase(std::unique(kept_branches.begin(), kept_branches.end()), kept_branches.end());
    if (kept_branches.empty()) throw Error(ErrorCode::ParameterOutOfRange, "no kept branches");
    if (kept_branches.front() < 0 || kept_branches.back() >= slope) {
        throw Error(ErrorCode::ParameterOutOfRange, "kept branch outside 0..slope-1");
    }
    std::vector<AffineBranch> branches;
    int symbol = 0;
    for (int k : kept_branches) {
        AffineBranch b;
        b.symbol = symbol++;
        b.domain = Box{make_point({static_cast<double>(k) / slope}), make_point({static_cast<double>(k + 1) / slope})};
        b.linear = LinearMap::Constant(1, 1, static_cast<double>(slope));
        b.offset = make_point({-static_cast<double>(k)});
        branches.push_back(std::move(b));
    }
    const auto n = branches.size();
    return ModelSystem("cantor", AmbientSpace{1, Geometry::Torus}, MapKind::Expanding, std::move(branches),
                       TransitionMatrix::full(n), 1);
}

ModelSystem build_cat_map() {
    LinearMap a(2, 2);
    a << 2.0, 1.0, 1.0, 1.0;
    // Two-block presentation of the golden-mean shift; its Perron root is (3+sqrt5)/2.
    const TransitionMatrix coding({{1, 1, 1}, {1, 1, 0}, {1, 1, 1}});
    // Strip widths are the symbol masses of the maximal-entropy measure: (1, 1/phi, 1/phi) / sqrt5.
    const double phi = std::numbers::phi;
    const double m0 = 1.0 / std::sqrt(5.0);
    const double m1 = m0 / phi;
    const double cuts[] = {0.0, m0, m0 + m1, 1.0};
    std::vector<AffineBranch> branches;
    for (int j = 0; j < 3; ++j) {
        AffineBranch b;
        b.symbol = j;
        b.domain = Box{make_point({cuts[j], 0.0}), make_point({cuts[j + 1], 1.0})};
        b.linear = a;
        b.offset = make_point({0.0, 0.0});
        branches.push_back(std::move(b));
    }
    return ModelSystem("catmap", AmbientSpace{2, Geometry::Torus}, MapKind::Diffeomorphism, std::move(branches),
                       coding, 1);
}

ModelSystem build_golden_map() {
    const double phi = std::numbers::phi;
    std::vector<AffineBranch> branches(2);
    branches[0].symbol = 0;
    branches[0].domain = Box{make_point({0.0}), make_point({1.0 / phi})};
    branches[0].linear = LinearMap::Constant(1, 1, phi);
    branches[0].offset = make_point({0.0});
    branches[1].symbol = 1;
    branches[1].domain = Box{make_point({1.0 / phi}), make_point({1.0})};
    branches[1].linear = LinearMap::Constant(1, 1, phi);
    branches[1].offset = make_point({-1.0});
    return ModelSystem("golden", AmbientSpace{1, Geometry::Cube}, MapKind::Expanding, std::move(branches),
                       TransitionMatrix({{1, 1}, {1, 0}}), 1);
}

ModelSystem power_model(const ModelSystem& model, int m) {
    if (m < 1) throw Error(ErrorCode::ParameterOutOfRange, "power must be >= 1");
    const auto words = admissible_words(model.transition(), m);
    std::vector<AffineBranch> branches;
    for (std::size_t w = 0; w < words.size(); ++w) {
        const auto& word = words[w];
        AffineBranch b;
        b.symbol = static_cast<int>(w);
        const auto& first = model.branches()[static_cast<std::size_t>(word[0])];
        b.linear = first.linear;
        b.offset = first.offset;
        for (std::size_t i = 1; i < word.size(); ++i) {
            const auto& next = model.branches()[static_cast<std::size_t>(word[i])];
            b.offset = next.linear * b.offset + next.offset;
            b.linear = next.linear * b.linear;
        }
        if (model.has_geometric_coding()) {
            const auto rect = cylinder_rect(model, word);
            if (!rect) throw Error(ErrorCode::InvalidModel, "declared transition has an empty cylinder");
            b.domain = *rect;
        } else {
            b.domain = first.domain;
        }
        branches.push_back(std::move(b));
    }
    std::vector<std::vector<int>> rows(words.size(), std::vector<int>(words.size(), 0));
    for (std::size_t u = 0; u < words.size(); ++u) {
        for (std::size_t v = 0; v < words.size(); ++v) {
            rows[u][v] = model.transition().allowed(static_cast<std::size_t>(words[u].back()),
                                                    static_cast<std::size_t>(words[v].front()))
                             ? 1
                             : 0;
        }
    }
    return ModelSystem(model.name() + "^" + std::to_string(m), model.space(), model.kind(), std::move(branches),
                       TransitionMatrix(rows), model.unstable_dim());
}

double horseshoe_unstable_dimension(double lambda_u) {
    return std::log(2.0) / std::log(lambda_u);
}

double horseshoe_stable_dimension(double lambda_s) {
    return -std::log(2.0) / std::log(lambda_s);
}

}  // namespace hypdim
