#include "hypdim/dimension.hpp"

#include "hypdim/error.hpp"
#include "hypdim/fit.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypdim {

namespace {

constexpr std::size_t kBitmapCap = std::size_t{1} << 28;

double operator_norm(const LinearMap& m) {
    if (m.rows() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    return svd.singularValues()[0];
}

double smallest_singular_value(const LinearMap& m) {
    if (m.rows() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
    return svd.singularValues()[svd.singularValues().size() - 1];
}

/// Every branch matrix equals +-M for one normal M.
bool shares_normal_matrix(const ModelSystem& model) {
    const LinearMap& m = model.branches().front().linear;
    const double scale = m.squaredNorm();
    if (((m.transpose() * m) - (m * m.transpose())).norm() > 1e-12 * scale) return false;
    for (const auto& b : model.branches()) {
        if (b.linear != m && b.linear != LinearMap(-m)) return false;
    }
    return true;
}

/// Distinct cell keys of integer multi-indices with per-axis extent `cells`.
class CellSet {
public:
    CellSet(int dim, std::uint64_t cells) : dim_(dim), cells_(cells) {
        const double total = std::pow(static_cast<double>(cells), dim);
        if (total <= static_cast<double>(kBitmapCap)) bitmap_.assign(static_cast<std::size_t>(total), 0);
    }

    void insert(const std::uint64_t* idx) {
        std::uint64_t key = 0;
        for (int i = dim_ - 1; i >= 0; --i) key = key * cells_ + idx[i];
        if (!bitmap_.empty()) {
            bitmap_[key] = 1;
        } else {
            keys_.push_back(key);
        }
    }

    std::uint64_t count() {
        if (!bitmap_.empty()) {
            return static_cast<std::uint64_t>(std::count(bitmap_.begin(), bitmap_.end(), std::uint8_t{1}));
        }
        std::sort(keys_.begin(), keys_.end());
        return static_cast<std::uint64_t>(std::unique(keys_.begin(), keys_.end()) - keys_.begin());
    }

private:
    int dim_;
    std::uint64_t cells_;
    std::vector<std::uint8_t> bitmap_;
    std::vector<std::uint64_t> keys_;
};

std::uint64_t cells_per_axis(double scale) {
    if (!(scale > 0.0 && scale <= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "scale must be in (0, 1]");
    const double cells = std::ceil(1.0 / scale - 1e-9);
    if (cells > 1e9) throw Error(ErrorCode::CapExceeded, "scale too fine");
    return static_cast<std::uint64_t>(cells);
}

}  // namespace

ExpansionRate expansion_rate(const ModelSystem& model, int k_max, bool inverse) {
    if (k_max < 1) throw Error(ErrorCode::ParameterOutOfRange, "k_max must be >= 1");
    ExpansionRate rate;
    rate.k_max = k_max;
    rate.inverse = inverse;
    if (shares_normal_matrix(model)) {
        const LinearMap& m = model.branches().front().linear;
        const double a1 = inverse ? -std::log(smallest_singular_value(m)) : std::log(operator_norm(m));
        rate.closed_form = true;
        for (int k = 1; k <= k_max; ++k) rate.log_norms.push_back(k * a1);
        rate.value = a1;
        return rate;
    }
    check_word_cap(model.symbol_count(), k_max);
    rate.log_norms.assign(static_cast<std::size_t>(k_max), -std::numeric_limits<double>::infinity());
    const auto& branches = model.branches();
    const auto& transition = model.transition();
    // Depth-first over admissible words, carrying the running product D_{w_j} ... D_{w_0}.
    struct Frame {
        int symbol;
        LinearMap product;
    };
    std::vector<Frame> stack;
    for (int s = static_cast<int>(branches.size()) - 1; s >= 0; --s) {
        stack.push_back({s, branches[static_cast<std::size_t>(s)].linear});
    }
    std::vector<int> depth_of;
    depth_of.assign(stack.size(), 1);
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        const int depth = depth_of.back();
        depth_of.pop_back();
        const double a = inverse ? -std::log(smallest_singular_value(frame.product))
                                 : std::log(operator_norm(frame.product));
        auto& slot = rate.log_norms[static_cast<std::size_t>(depth) - 1];
        slot = std::max(slot, a);
        if (depth == k_max) continue;
        for (int s = static_cast<int>(branches.size()) - 1; s >= 0; --s) {
            if (!transition.allowed(static_cast<std::size_t>(frame.symbol), static_cast<std::size_t>(s))) continue;
            stack.push_back({s, branches[static_cast<std::size_t>(s)].linear * frame.product});
            depth_of.push_back(depth + 1);
        }
    }
    rate.value = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        rate.value = std::min(rate.value, rate.log_norms[static_cast<std::size_t>(k) - 1] / k);
    }
    return rate;
}

std::uint64_t box_count(std::span<const Point> points, int dim, double scale) {
    const std::uint64_t cells = cells_per_axis(scale);
    CellSet set(dim, cells);
    std::uint64_t idx[kMaxDim] = {};
    for (const auto& p : points) {
        for (int i = 0; i < dim; ++i) {
            const double v = std::floor(p[i] / scale);
            idx[i] = static_cast<std::uint64_t>(std::clamp(v, 0.0, static_cast<double>(cells - 1)));
        }
        set.insert(idx);
    }
    return set.count();
}

std::uint64_t box_count(const RepellerCover& cover, double scale) {
    const std::uint64_t cells = cells_per_axis(scale);
    const int dim = cover.dim();
    CellSet set(dim, cells);
    constexpr double kTol = 1e-9;
    for (const auto& r : cover.rects()) {
        std::int64_t lo[kMaxDim] = {};
        std::int64_t hi[kMaxDim] = {};
        bool empty = false;
        for (int i = 0; i < dim; ++i) {
            lo[i] = static_cast<std::int64_t>(std::floor(r.lo[i] / scale + kTol));
            hi[i] = static_cast<std::int64_t>(std::ceil(r.hi[i] / scale - kTol)) - 1;
            lo[i] = std::max<std::int64_t>(lo[i], 0);
            hi[i] = std::min<std::int64_t>(hi[i], static_cast<std::int64_t>(cells) - 1);
            if (hi[i] < lo[i]) empty = true;
        }
        if (empty) continue;
        std::uint64_t idx[kMaxDim] = {};
        for (int i = 0; i < dim; ++i) idx[i] = static_cast<std::uint64_t>(lo[i]);
        while (true) {
            set.insert(idx);
            int axis = 0;
            while (axis < dim) {
                if (static_cast<std::int64_t>(++idx[axis]) <= hi[axis]) break;
                idx[axis] = static_cast<std::uint64_t>(lo[axis]);
                ++axis;
            }
            if (axis == dim) break;
        }
    }
    return set.count();
}

std::vector<double> geometric_scales(double base, int m_lo, int m_hi) {
    std::vector<double> scales;
    for (int m = m_lo; m <= m_hi; ++m) scales.push_back(std::pow(base, -m));
    return scales;
}

DimensionEstimate box_dimension(std::span<const ScaleCount> counts) {
    DimensionEstimate est;
    est.counts.assign(counts.begin(), counts.end());
    std::sort(est.counts.begin(), est.counts.end(),
              [](const ScaleCount& a, const ScaleCount& b) { return a.scale > b.scale; });
    est.excluded = kExcludedCoarseScales;
    if (est.counts.size() < est.excluded + 4) {
        throw Error(ErrorCode::DegenerateScales, "need at least 4 scales beyond the two coarsest");
    }
    if (est.counts.front().scale / est.counts.back().scale < 100.0 - 1e-9) {
        throw Error(ErrorCode::DegenerateScales, "scales must span at least two decades");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = est.excluded; i < est.counts.size(); ++i) {
        if (est.counts[i].count == 0) throw Error(ErrorCode::DegenerateScales, "empty box count");
        x.push_back(-std::log(est.counts[i].scale));
        y.push_back(std::log(static_cast<double>(est.counts[i].count)));
    }
    const auto fit = fit_line(x, y);
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.residual = fit.residual;
    return est;
}

std::vector<MinkowskiPoint> minkowski_content_curve(std::span<const Point> cloud, int dim, Geometry geometry,
                                                    double t, std::span<const double> rhos, int grid_resolution) {
    if (cloud.empty()) throw Error(ErrorCode::ParameterOutOfRange, "empty point cloud");
    if (t < 0.0 || t > dim) throw Error(ErrorCode::ParameterOutOfRange, "t must be in [0, n]");
    for (std::size_t i = 1; i < rhos.size(); ++i) {
        if (!(rhos[i] < rhos[i - 1])) throw Error(ErrorCode::ParameterOutOfRange, "rho schedule must decrease");
    }
    const double cell = 1.0 / grid_resolution;
    if (!rhos.empty() && cell > rhos.back() / 4.0) {
        throw Error(ErrorCode::GridTooCoarse, "grid cell edge must not exceed rho/4");
    }
    const auto res = static_cast<std::size_t>(grid_resolution);
    const double total = std::pow(static_cast<double>(res), dim);
    if (total > static_cast<double>(kBitmapCap)) throw Error(ErrorCode::CapExceeded, "grid exceeds 2^28 cells");
    std::vector<std::uint8_t> occupied(static_cast<std::size_t>(total), 0);
    for (const auto& p : cloud) {
        std::size_t key = 0;
        for (int i = dim - 1; i >= 0; --i) {
            const auto v = std::clamp(static_cast<long>(std::floor(p[i] * grid_resolution)), 0L,
                                      static_cast<long>(res) - 1);
            key = key * res + static_cast<std::size_t>(v);
        }
        occupied[key] = 1;
    }

    std::vector<MinkowskiPoint> out;
    const bool torus = geometry == Geometry::Torus;
    for (double rho : rhos) {
        const auto radius = static_cast<long>(std::floor(rho * grid_resolution + 1e-9));
        std::vector<std::uint8_t> grid = occupied;
        std::vector<std::uint8_t> line(res);
        std::vector<std::uint32_t> prefix(res + 1);
        std::size_t stride = 1;
        // Separable dilation by the sup-norm ball: one sliding window per axis.
        for (int axis = 0; axis < dim; ++axis) {
            const std::size_t lines = grid.size() / res;
            for (std::size_t l = 0; l < lines; ++l) {
                const std::size_t outer = (l / stride) * stride * res;
                const std::size_t base = outer + (l % stride);
                for (std::size_t j = 0; j < res; ++j) line[j] = grid[base + j * stride];
                prefix[0] = 0;
                for (std::size_t j = 0; j < res; ++j) prefix[j + 1] = prefix[j] + line[j];
                auto window = [&](long a, long b) -> std::uint32_t {
                    const long lo = std::max(a, 0L);
                    const long hi = std::min(b, static_cast<long>(res) - 1);
                    return hi < lo ? 0U : prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
                };
                for (std::size_t j = 0; j < res; ++j) {
                    const long a = static_cast<long>(j) - radius;
                    const long b = static_cast<long>(j) + radius;
                    std::uint32_t hits = window(a, b);
                    if (torus) {
                        const auto r = static_cast<long>(res);
                        if (2 * radius + 1 >= r) {
                            hits = prefix[res];
                        } else {
                            if (a < 0) hits += window(a + r, r - 1);
                            if (b >= r) hits += window(0, b - r);
                        }
                    }
                    grid[base + j * stride] = hits > 0 ? 1 : 0;
                }
            }
            stride *= res;
        }
        const auto marked = static_cast<double>(std::count(grid.begin(), grid.end(), std::uint8_t{1}));
        MinkowskiPoint mp;
        mp.rho = rho;
        mp.volume = marked * std::pow(cell, dim);
        mp.ratio = mp.volume / std::pow(2.0 * rho, dim - t);
        out.push_back(mp);
    }
    return out;
}

std::vector<double> proof_radius_schedule(double epsilon, double s, int k_max, std::optional<double> delta) {
    const double d = delta.value_or(0.01 * s);
    std::vector<double> rhos;
    for (int k = 1; k <= k_max; ++k) rhos.push_back(0.5 * epsilon / std::pow(std::exp(s + d), k));
    return rhos;
}

double dimension_bound(int n, double pressure, double s, double tolerance) {
    if (!(s > 0.0)) throw Error(ErrorCode::NonPositiveRate, "expansion rate must be positive");
    if (pressure > tolerance) throw Error(ErrorCode::ParameterOutOfRange, "pressure exceeds 0 + tolerance");
    if (std::abs(pressure) <= tolerance) return static_cast<double>(n);
    return n + pressure / s;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Attractor: return "attractor";
        case Classification::NonAttractor: return "non_attractor";
        case Classification::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Classification classify(const PressureEstimate& pressure, double tolerance) {
    if (!(tolerance > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "tolerance must be positive");
    if (std::abs(pressure.value) + pressure.residual <= tolerance) return Classification::Attractor;
    if (pressure.value < -tolerance - pressure.residual) return Classification::NonAttractor;
    return Classification::Inconclusive;
}

namespace {

PotentialLabel default_label(const ModelSystem& model) {
    return model.kind() == MapKind::Diffeomorphism ? PotentialLabel::PhiU : PotentialLabel::Phi;
}

}  // namespace

BoundReport bound_report(const ModelSystem& model, std::optional<PotentialLabel> label, int s_k_max,
                         double tolerance) {
    BoundReport report;
    report.model = model.name();
    report.n = model.dim();
    report.potential = label.value_or(default_label(model));
    report.tolerance = tolerance;
    report.s = expansion_rate(model, s_k_max, report.potential == PotentialLabel::PhiS);
    report.pressure = pressure_spectral_estimate(model, potential(model, report.potential));
    report.bound = dimension_bound(report.n, report.pressure.value, report.s.value, tolerance);
    report.classification = classify(report.pressure, tolerance);
    return report;
}

BoundReport srb_equivalence_report(const ModelSystem& model, double tolerance) {
    BoundReport report = bound_report(model, std::nullopt, 8, tolerance);
    const Potential phi = potential(model, report.potential);
    const auto measure = equilibrium_measure(model.transition(), phi);
    const auto stats = markov_measure_stats(model, phi, measure);
    report.equilibrium_stats = stats;

    const double p = report.pressure.value;
    const bool pressure_zero = std::abs(p) <= tolerance;
    const bool bound_full = std::abs(report.bound - report.n) <= tolerance;
    const bool attractor = report.classification == Classification::Attractor;
    const std::string pot = to_string(report.potential);
    const double positive = stats.positive_exponent_sum();

    report.checks.push_back({"bound = n <=> P(" + pot + ") = 0", bound_full == pressure_zero, report.bound, p});
    report.checks.push_back({"P(" + pot + ") = 0 <=> attractor", pressure_zero == attractor, p, attractor ? 1.0 : 0.0});
    report.checks.push_back({"h + integral " + pot + " = P(" + pot + ")",
                             std::abs(stats.entropy + stats.potential_integral - p) <= tolerance,
                             stats.entropy + stats.potential_integral, p});
    report.checks.push_back({"-integral " + pot + " = sum of positive exponents",
                             std::abs(-stats.potential_integral - positive) <= tolerance, -stats.potential_integral,
                             positive});
    if (pressure_zero) {
        report.checks.push_back(
            {"Pesin: h = sum of positive exponents", std::abs(stats.entropy - positive) <= tolerance, stats.entropy,
             positive});
    } else {
        report.checks.push_back({"Margulis-Ruelle strict: h < sum of positive exponents",
                                 stats.entropy < positive - tolerance, stats.entropy, positive});
    }
    return report;
}

ModelSystem horseshoe_for_target_dimension(double target, double lambda_s) {
    if (!(target > 1.0 && target < 2.0)) throw Error(ErrorCode::ParameterOutOfRange, "target must be in (1, 2)");
    return build_linear_horseshoe(std::pow(2.0, 1.0 / (target - 1.0)), lambda_s);
}

}  // namespace hypdim
