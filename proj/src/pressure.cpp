#include "hypdim/pressure.hpp"

#include "hypdim/error.hpp"
#include "hypdim/fit.hpp"
#include "hypdim/parallel.hpp"
#include "hypdim/symbolic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>

namespace hypdim {

namespace {

constexpr double kGridCap = static_cast<double>(1ULL << 28);

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::size_t grid_cells(int dim, int resolution) {
    if (resolution < 1) throw Error(ErrorCode::ParameterOutOfRange, "grid resolution must be positive");
    const double cells = std::pow(static_cast<double>(resolution), dim);
    if (cells > kGridCap) throw Error(ErrorCode::CapExceeded, "grid exceeds 2^28 cells");
    return static_cast<std::size_t>(cells);
}

Point cell_center(std::size_t flat, int dim, int resolution) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
        p[i] = (static_cast<double>(flat % static_cast<std::size_t>(resolution)) + 0.5) / resolution;
        flat /= static_cast<std::size_t>(resolution);
    }
    return p;
}

/// Cell center, optionally displaced by a per-cell hash of the seed (independent of chunking).
Point sample_point(std::size_t flat, int dim, int resolution, const StableSetOptions* options) {
    Point p = cell_center(flat, dim, resolution);
    if (options != nullptr && options->jitter) {
        std::uint64_t h = splitmix64(options->seed ^ (static_cast<std::uint64_t>(flat) * 0x2545F4914F6CDD1DULL));
        for (int i = 0; i < dim; ++i) {
            h = splitmix64(h);
            p[i] += (static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5) / resolution;
        }
    }
    return p;
}

/// Survival times of every cell center, computed chunk-wise in a worker-independent order.
std::vector<std::uint16_t> survival_grid(const ModelSystem& model, const NearIndex& index, int resolution,
                                         int max_steps, int threads, const StableSetOptions* jitter) {
    const int dim = model.dim();
    const std::size_t cells = grid_cells(dim, resolution);
    std::vector<std::uint16_t> tau(cells, 0);
    parallel_chunks(cells, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            tau[c] = static_cast<std::uint16_t>(
                tracking_time(model, index, sample_point(c, dim, resolution, jitter), max_steps));
        }
    });
    return tau;
}

}  // namespace

bool bowen_ball_contains(const ModelSystem& model, const BowenBallSpec& spec, const Point& y) {
    if (spec.k < 1) throw Error(ErrorCode::ParameterOutOfRange, "k must be >= 1");
    Point x = spec.center;
    Point z = y;
    for (int i = 0; i < spec.k; ++i) {
        if (sup_distance(x, z, model.geometry()) >= spec.epsilon) return false;
        if (i + 1 == spec.k) break;
        const auto fx = model.evaluate(x);
        if (!fx) throw Error(ErrorCode::NoBranch, "orbit of the Bowen-ball center leaves the working region");
        const auto fz = model.evaluate(z);
        if (!fz) return false;
        x = *fx;
        z = *fz;
    }
    return true;
}

double distance_to_repeller(const ModelSystem& model, const Point& y, int depth) {
    return RepellerCover::at_depth(model, depth).distance(y);
}

RepellerCover cover_for_epsilon(const ModelSystem& model, double epsilon) {
    return RepellerCover::finer_than(model, epsilon / 4.0);
}

int tracking_time(const ModelSystem& model, const NearIndex& index, Point y, int max_steps) {
    int steps = 0;
    while (steps < max_steps) {
        if (!index.near(y)) break;
        ++steps;
        if (steps == max_steps) break;
        const auto next = model.evaluate(y);
        if (!next) break;
        y = *next;
    }
    return steps;
}

VolumeCurve volume_curve(const ModelSystem& model, double epsilon, int k_max, int grid_resolution, int threads) {
    if (k_max < 1 || k_max > 60000) throw Error(ErrorCode::ParameterOutOfRange, "k_max must be in 1..60000");
    if (!(epsilon > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "epsilon must be positive");
    if (1.0 / grid_resolution > epsilon / 4.0) {
        throw Error(ErrorCode::GridTooCoarse, "grid cell edge must not exceed epsilon/4");
    }
    const int dim = model.dim();
    const std::size_t cells = grid_cells(dim, grid_resolution);
    const auto cover = cover_for_epsilon(model, epsilon);
    const NearIndex index(cover, epsilon);
    const auto tau = survival_grid(model, index, grid_resolution, k_max, threads, nullptr);

    VolumeCurve curve;
    curve.epsilon = epsilon;
    curve.grid_resolution = grid_resolution;
    curve.cover_depth = cover.depth();
    curve.cover_diameter = cover.max_diameter();
    const double cell_volume = std::pow(1.0 / grid_resolution, dim);

    std::vector<std::uint64_t> members(static_cast<std::size_t>(k_max) + 2, 0);
    for (auto t : tau) ++members[t];
    // Cells with tau >= k are members at depth k.
    std::uint64_t running = 0;
    std::vector<std::uint64_t> at_least(static_cast<std::size_t>(k_max) + 2, 0);
    for (int k = k_max; k >= 1; --k) {
        running += members[static_cast<std::size_t>(k)];
        at_least[static_cast<std::size_t>(k)] = running;
    }

    // A cell is a boundary cell at depth k when some axis neighbour has the other membership,
    // i.e. k lies in (min(tau_c, tau_n), max(tau_c, tau_n)].
    std::vector<std::int64_t> boundary_diff(static_cast<std::size_t>(k_max) + 2, 0);
    const bool torus = model.geometry() == Geometry::Torus;
    const auto res = static_cast<std::size_t>(grid_resolution);
    for (std::size_t c = 0; c < cells; ++c) {
        const int tc = tau[c];
        int hi_tau = tc;
        int lo_tau = tc;
        std::size_t stride = 1;
        for (int axis = 0; axis < dim; ++axis) {
            const std::size_t coord = (c / stride) % res;
            for (int dir : {-1, 1}) {
                std::size_t nc = 0;
                if (dir < 0) {
                    if (coord == 0 && !torus) continue;
                    nc = coord == 0 ? c + (res - 1) * stride : c - stride;
                } else {
                    if (coord + 1 == res && !torus) continue;
                    nc = coord + 1 == res ? c - (res - 1) * stride : c + stride;
                }
                hi_tau = std::max<int>(hi_tau, tau[nc]);
                lo_tau = std::min<int>(lo_tau, tau[nc]);
            }
            stride *= res;
        }
        if (hi_tau > lo_tau) {
            boundary_diff[static_cast<std::size_t>(lo_tau) + 1] += 1;
            boundary_diff[static_cast<std::size_t>(hi_tau) + 1] -= 1;
        }
    }
    std::int64_t boundary = 0;
    for (int k = 1; k <= k_max; ++k) {
        boundary += boundary_diff[static_cast<std::size_t>(k)];
        curve.ks.push_back(k);
        curve.volumes.push_back(static_cast<double>(at_least[static_cast<std::size_t>(k)]) * cell_volume);
        curve.bands.push_back(static_cast<double>(boundary) * cell_volume);
    }
    return curve;
}

double default_volume_epsilon(const ModelSystem& model) {
    const double half_gap = default_delta(model);
    return half_gap > 0.0 ? half_gap : 0.1;
}

double neighborhood_volume(const ModelSystem& model, double epsilon, int k, int grid_resolution, int threads) {
    return volume_curve(model, epsilon, k, grid_resolution, threads).volumes.back();
}

std::string to_string(PressureMethod method) {
    switch (method) {
        case PressureMethod::Spectral: return "spectral";
        case PressureMethod::PartitionSum: return "partition_sum";
        case PressureMethod::VolumeGrowth: return "volume_growth";
    }
    return "spectral";
}

PressureEstimate pressure_spectral_estimate(const ModelSystem& model, const Potential& potential) {
    PressureEstimate est;
    est.method = PressureMethod::Spectral;
    est.value = pressure_spectral(model, potential);
    est.fit_slope = est.value;
    return est;
}

namespace {

/// Slope fit over the top half of the points (at least three when available).
LineFit top_half_fit(const std::vector<CurvePoint>& points, int& first_used) {
    const std::size_t count = points.size();
    const std::size_t used = std::max(std::min<std::size_t>(count, 3), (count + 1) / 2);
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = count - used; i < count; ++i) {
        x.push_back(points[i].k);
        y.push_back(points[i].value);
    }
    first_used = points[count - used].k;
    return fit_line(x, y);
}

/// Growth rate of the shortest recurrence z_{k+p} = sum c_i z_{k+i} fitted to the sequence, if any.
std::optional<std::pair<double, int>> recurrence_growth(const std::vector<double>& log_z, double slope,
                                                        std::size_t max_order) {
    const std::size_t n = log_z.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::exp(log_z[i] - log_z.back() - slope * (static_cast<double>(i) - static_cast<double>(n - 1)));
    }
    for (std::size_t p = 1; p <= max_order && n >= 2 * p + 1; ++p) {
        const auto rows = static_cast<Eigen::Index>(n - p);
        Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(p));
        Eigen::VectorXd rhs(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (std::size_t i = 0; i < p; ++i) a(r, static_cast<Eigen::Index>(i)) = y[static_cast<std::size_t>(r) + i];
            rhs[r] = y[static_cast<std::size_t>(r) + p];
        }
        const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
        const double err = (a * c - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff();
        if (!(err <= 1e-10)) continue;
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
        for (std::size_t i = 0; i + 1 < p; ++i) companion(static_cast<Eigen::Index>(i) + 1, static_cast<Eigen::Index>(i)) = 1.0;
        for (std::size_t i = 0; i < p; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p) - 1) = c[static_cast<Eigen::Index>(i)];
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        std::complex<double> lead = 0.0;
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            if (std::abs(solver.eigenvalues()[i]) > std::abs(lead)) lead = solver.eigenvalues()[i];
        }
        if (!(lead.real() > 0.0) || std::abs(lead.imag()) > 1e-9 * lead.real()) return std::nullopt;
        return std::make_pair(slope + std::log(lead.real()), static_cast<int>(p));
    }
    return std::nullopt;
}

}  // namespace

PressureEstimate pressure_from_volume_growth(const VolumeCurve& curve, int k_lo, int k_hi) {
    PressureEstimate est;
    est.method = PressureMethod::VolumeGrowth;
    std::vector<CurvePoint> window;
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
        const int k = curve.ks[i];
        const double vol = curve.volumes[i];
        if (vol > 0.0) est.curve.push_back({k, std::log(vol)});
        if (k < k_lo || k > k_hi) continue;
        if (!(vol > 0.0)) {
            throw Error(ErrorCode::DegenerateCurve,
                        "volume vanishes at k=" + std::to_string(k) + "; pressure bound is -infinity");
        }
        window.push_back({k, std::log(vol)});
    }
    if (window.size() < 4) throw Error(ErrorCode::DegenerateCurve, "need at least 4 curve points in the window");
    int first = 0;
    const auto fit = top_half_fit(window, first);
    est.window_lo = first;
    est.window_hi = window.back().k;
    est.fit_slope = fit.slope;
    est.value = fit.slope;
    est.residual = fit.residual;
    return est;
}

PressureEstimate pressure_from_partition_sums(const ModelSystem& model, const Potential& potential, int k_max,
                                              std::optional<double> delta) {
    if (k_max < 6) throw Error(ErrorCode::ParameterOutOfRange, "k_max must be >= 6");
    check_word_cap(model.symbol_count(), k_max);
    PressureEstimate est;
    est.method = PressureMethod::PartitionSum;
    std::vector<double> log_z;
    for (int k = 1; k <= k_max; ++k) {
        const double z = partition_sum(model, potential, k, delta);
        log_z.push_back(std::log(z));
        est.curve.push_back({k, log_z.back()});
    }
    int first = 0;
    const auto fit = top_half_fit(est.curve, first);
    est.window_lo = first;
    est.window_hi = k_max;
    est.fit_slope = fit.slope;
    est.residual = fit.residual;
    est.value = fit.slope;
    if (const auto rec = recurrence_growth(log_z, fit.slope, model.symbol_count())) {
        est.value = rec->first;
        est.recurrence_order = rec->second;
    }
    return est;
}

std::vector<Point> sample_local_stable_set(const ModelSystem& model, const StableSetOptions& options) {
    if (model.kind() != MapKind::Diffeomorphism) {
        throw Error(ErrorCode::Unsupported, "local stable sets are defined for diffeomorphisms");
    }
    if (options.depth < 1 || options.depth > 60000) throw Error(ErrorCode::ParameterOutOfRange, "depth out of range");
    if (!(options.epsilon > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "epsilon must be positive");
    const auto cover = cover_for_epsilon(model, options.epsilon);
    const NearIndex index(cover, options.epsilon);
    const int dim = model.dim();
    std::vector<Point> cloud;
    if (!model.has_geometric_coding()) {
        const auto tau = survival_grid(model, index, options.resolution, options.depth, options.threads, &options);
        for (std::size_t c = 0; c < tau.size(); ++c) {
            if (tau[c] >= options.depth) cloud.push_back(sample_point(c, dim, options.resolution, &options));
        }
        return cloud;
    }

    // Thin cylinders slip between cell centers, so each cell is tested at one point per deep
    // cylinder it meets; the cell is kept if any of those points tracks the cover long enough.
    int refine = options.refine_depth;
    if (refine == 0) {
        const double expansion = *std::min_element(model.lambda_u().begin(), model.lambda_u().end());
        refine = options.depth + static_cast<int>(std::ceil(std::log(4.0 / options.epsilon) / std::log(expansion)));
    }
    if (refine < options.depth) throw Error(ErrorCode::ParameterOutOfRange, "refine depth below depth");
    const auto words = admissible_words(model.transition(), refine);
    const int res = options.resolution;
    const std::size_t cells = grid_cells(dim, res);
    std::vector<std::atomic<std::uint8_t>> keep(cells);
    parallel_chunks(words.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            const auto rect = cylinder_rect(model, words[w]);
            if (!rect) continue;
            std::array<int, kMaxDim> lo{};
            std::array<int, kMaxDim> hi{};
            for (int a = 0; a < dim; ++a) {
                lo[a] = std::clamp(static_cast<int>(std::floor(rect->lo[a] * res)), 0, res - 1);
                hi[a] = std::clamp(static_cast<int>(std::ceil(rect->hi[a] * res)) - 1, lo[a], res - 1);
            }
            std::array<int, kMaxDim> idx = lo;
            while (true) {
                std::size_t flat = 0;
                for (int a = dim - 1; a >= 0; --a) flat = flat * static_cast<std::size_t>(res) + static_cast<std::size_t>(idx[a]);
                if (keep[flat].load(std::memory_order_relaxed) == 0) {
                    Box cell{Point(dim), Point(dim)};
                    for (int a = 0; a < dim; ++a) {
                        cell.lo[a] = static_cast<double>(idx[a]) / res;
                        cell.hi[a] = static_cast<double>(idx[a] + 1) / res;
                    }
                    const Box piece = intersect(cell, *rect);
                    if (!piece.empty() && tracking_time(model, index, piece.center(), options.depth) >= options.depth) {
                        keep[flat].store(1, std::memory_order_relaxed);
                    }
                }
                int a = 0;
                while (a < dim && idx[a] == hi[a]) {
                    idx[a] = lo[a];
                    ++a;
                }
                if (a == dim) break;
                ++idx[a];
            }
        }
    }, 64);
    for (std::size_t c = 0; c < cells; ++c) {
        if (keep[c].load(std::memory_order_relaxed) != 0) cloud.push_back(sample_point(c, dim, res, &options));
    }
    return cloud;
}

}  // namespace hypdim
