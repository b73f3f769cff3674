#include "hypdim/symbolic.hpp"

#include "hypdim/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace hypdim {

namespace {

constexpr double kMinRectWidth = 1e-14;
constexpr double kStochasticTol = 1e-9;

bool degenerate(const Box& box) {
    for (int i = 0; i < box.dim(); ++i) {
        if (box.hi[i] - box.lo[i] <= kMinRectWidth) return true;
    }
    return false;
}

Box inverse_image(const ModelSystem& model, std::size_t branch, const Box& box) {
    const auto& b = model.branches()[branch];
    const LinearMap& inv = model.inverse_linear(branch);
    return affine_image(box, inv, -(inv * b.offset));
}

void require_geometric(const ModelSystem& model) {
    if (!model.has_geometric_coding()) {
        throw Error(ErrorCode::Unsupported, "model '" + model.name() + "' has a declared (non-geometric) coding");
    }
}

using BoolMatrix = std::vector<std::vector<char>>;

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
    const std::size_t n = a.size();
    BoolMatrix c(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] = static_cast<char>(c[i][j] | b[k][j]);
        }
    }
    return c;
}

}  // namespace

void check_word_cap(std::size_t symbols, int k) {
    if (k < 1) throw Error(ErrorCode::ParameterOutOfRange, "word length must be >= 1");
    const double bits = k * std::log2(static_cast<double>(std::max<std::size_t>(symbols, 1)));
    if (bits > kWordCapBits + 1e-9) {
        throw Error(ErrorCode::CapExceeded, "enumerating " + std::to_string(symbols) + "^" + std::to_string(k) +
                                                " words exceeds the 2^24 cap");
    }
}

bool is_primitive(const TransitionMatrix& transition) {
    const std::size_t n = transition.size();
    BoolMatrix power(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) power[i][j] = transition.allowed(i, j) ? 1 : 0;
    }
    // Rows and columns are never empty, so once a power is positive every higher power is too.
    const std::size_t bound = (n - 1) * (n - 1) + 1;
    std::size_t exponent = 1;
    while (exponent < bound) {
        power = bool_product(power, power);
        exponent *= 2;
    }
    for (const auto& row : power) {
        for (char v : row) {
            if (!v) return false;
        }
    }
    return true;
}

std::uint64_t count_words(const TransitionMatrix& transition, int k) {
    if (k < 1) return 0;
    const std::size_t n = transition.size();
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> ending(n, 1);
    for (int step = 1; step < k; ++step) {
        std::vector<std::uint64_t> next(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!transition.allowed(i, j)) continue;
                next[j] = next[j] > kMax - ending[i] ? kMax : next[j] + ending[i];
            }
        }
        ending = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto c : ending) total = total > kMax - c ? kMax : total + c;
    return total;
}

std::vector<Word> admissible_words(const TransitionMatrix& transition, int k) {
    std::vector<Word> words;
    for_each_word(transition, k, [&](const Word& w) { words.push_back(w); });
    return words;
}

double birkhoff_sum(const Potential& potential, std::span<const int> word) {
    double sum = 0.0;
    for (int s : word) sum += potential.values.at(static_cast<std::size_t>(s));
    return sum;
}

std::optional<Box> cylinder_rect(const ModelSystem& model, std::span<const int> word) {
    require_geometric(model);
    if (word.empty()) return unit_box(model.dim());
    Box rect = model.branches()[static_cast<std::size_t>(word.back())].domain;
    for (std::size_t i = word.size() - 1; i-- > 0;) {
        const auto branch = static_cast<std::size_t>(word[i]);
        rect = intersect(model.branches()[branch].domain, inverse_image(model, branch, rect));
        if (degenerate(rect)) return std::nullopt;
    }
    if (degenerate(rect)) return std::nullopt;
    return rect;
}

std::optional<Box> backward_rect(const ModelSystem& model, std::span<const int> word) {
    require_geometric(model);
    if (word.empty()) return unit_box(model.dim());
    Box rect = model.branches()[static_cast<std::size_t>(word.front())].domain;
    for (std::size_t i = 1; i < word.size(); ++i) {
        const auto& prev = model.branches()[static_cast<std::size_t>(word[i - 1])];
        rect = intersect(model.branches()[static_cast<std::size_t>(word[i])].domain,
                         affine_image(rect, prev.linear, prev.offset));
        if (degenerate(rect)) return std::nullopt;
    }
    const auto& last = model.branches()[static_cast<std::size_t>(word.back())];
    rect = affine_image(rect, last.linear, last.offset);
    if (degenerate(rect)) return std::nullopt;
    return rect;
}

double min_branch_gap(const ModelSystem& model) {
    const auto& branches = model.branches();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < branches.size(); ++a) {
        for (std::size_t b = a + 1; b < branches.size(); ++b) {
            double g = box_gap(branches[a].domain, branches[b].domain, model.geometry());
            if (g <= 0.0) {
                if (branches[a].linear == branches[b].linear) {
                    const LinearMap& inv = model.inverse_linear(a);
                    g = sup_distance(inv * branches[a].offset, inv * branches[b].offset, model.geometry());
                } else {
                    g = 0.0;
                }
            }
            gap = std::min(gap, g);
        }
    }
    return gap;
}

double default_delta(const ModelSystem& model) {
    const double gap = min_branch_gap(model);
    return std::isfinite(gap) ? gap / 2.0 : 0.5;
}

namespace {

double checked_delta(const ModelSystem& model, std::optional<double> delta) {
    const double d = delta.value_or(default_delta(model));
    if (!(d > 0.0)) throw Error(ErrorCode::DeltaTooLarge, "no positive separation scale for this model");
    if (model.has_geometric_coding() && d > min_branch_gap(model)) {
        throw Error(ErrorCode::DeltaTooLarge,
                    "delta " + std::to_string(d) + " exceeds the branch gap " + std::to_string(min_branch_gap(model)));
    }
    return d;
}

}  // namespace

SeparatedSet separated_set(const ModelSystem& model, int k, std::optional<double> delta) {
    require_geometric(model);
    SeparatedSet set;
    set.k = k;
    set.delta = checked_delta(model, delta);
    for_each_word(model.transition(), k, [&](const Word& w) {
        const auto rect = cylinder_rect(model, w);
        if (!rect) return;
        set.words.push_back(w);
        set.points.push_back(rect->center());
    });
    return set;
}

double partition_sum(const ModelSystem& model, const Potential& potential, int k, std::optional<double> delta) {
    if (potential.values.size() != model.symbol_count()) {
        throw Error(ErrorCode::IncompatibleLabel, "potential size differs from symbol count");
    }
    if (model.has_geometric_coding()) checked_delta(model, delta);
    // Neumaier summation: millions of equal-sized terms otherwise drift by ~1e-11.
    double sum = 0.0;
    double carry = 0.0;
    for_each_word(model.transition(), k, [&](const Word& w) {
        const double term = std::exp(birkhoff_sum(potential, w));
        const double t = sum + term;
        carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    });
    return sum + carry;
}

PerronData perron(const Eigen::MatrixXd& matrix) {
    constexpr double kTol = 1e-14;
    constexpr int kMaxIterations = 100000;

    auto iterate = [&](const Eigen::MatrixXd& m, PerronData& out) -> Eigen::VectorXd {
        const auto n = m.rows();
        Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
        double lower = 0.0;
        double upper = 0.0;
        int it = 0;
        for (; it < kMaxIterations; ++it) {
            Eigen::VectorXd w = m * v;
            lower = std::numeric_limits<double>::infinity();
            upper = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (v[i] <= 0.0) {
                    lower = 0.0;
                    upper = std::numeric_limits<double>::infinity();
                    break;
                }
                const double ratio = w[i] / v[i];
                lower = std::min(lower, ratio);
                upper = std::max(upper, ratio);
            }
            v = w / w.sum();
            if (std::isfinite(upper) && upper - lower <= kTol * upper) break;
        }
        out.radius = 0.5 * (lower + upper);
        out.iterations = std::max(out.iterations, it + 1);
        return v;
    };

    PerronData data;
    data.right = iterate(matrix, data);
    const double radius = data.radius;
    data.left = iterate(matrix.transpose(), data);
    data.radius = radius;
    data.left /= data.left.dot(data.right);
    return data;
}

Eigen::MatrixXd weighted_transition(const TransitionMatrix& transition, const Potential& potential) {
    const auto n = static_cast<Eigen::Index>(transition.size());
    if (potential.values.size() != transition.size()) {
        throw Error(ErrorCode::IncompatibleLabel, "potential size differs from symbol count");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (transition.allowed(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
                m(i, j) = std::exp(potential.values[static_cast<std::size_t>(j)]);
            }
        }
    }
    return m;
}

double pressure_spectral(const TransitionMatrix& transition, const Potential& potential) {
    if (!is_primitive(transition)) throw Error(ErrorCode::NotMixing, "transition matrix is not primitive");
    // Factor out the largest weight so the iteration stays in range.
    const double shift = *std::max_element(potential.values.begin(), potential.values.end());
    const auto data = perron(weighted_transition(transition, potential.shifted(-shift)));
    return std::log(data.radius) + shift;
}

double pressure_spectral(const ModelSystem& model, const Potential& potential) {
    return pressure_spectral(model.transition(), potential);
}

MarkovMeasure MarkovMeasure::bernoulli(std::vector<double> probabilities) {
    MarkovMeasure m;
    const auto n = static_cast<Eigen::Index>(probabilities.size());
    m.transition = Eigen::MatrixXd(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m.transition(i, j) = probabilities[static_cast<std::size_t>(j)];
    }
    m.stationary = std::move(probabilities);
    return m;
}

MarkovMeasure MarkovMeasure::point_mass(std::size_t symbols, int symbol) {
    std::vector<double> p(symbols, 0.0);
    p.at(static_cast<std::size_t>(symbol)) = 1.0;
    return bernoulli(std::move(p));
}

MarkovMeasure MarkovMeasure::from_transition(const Eigen::MatrixXd& stochastic) {
    const auto n = stochastic.rows();
    Eigen::MatrixXd system(n + 1, n);
    system.topRows(n) = stochastic.transpose() - Eigen::MatrixXd::Identity(n, n);
    system.row(n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs[n] = 1.0;
    const Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
    MarkovMeasure m;
    m.transition = stochastic;
    m.stationary.assign(pi.data(), pi.data() + n);
    for (double& v : m.stationary) v = std::max(v, 0.0);
    return m;
}

MarkovMeasure equilibrium_measure(const TransitionMatrix& transition, const Potential& potential) {
    if (!is_primitive(transition)) throw Error(ErrorCode::NotMixing, "transition matrix is not primitive");
    const Eigen::MatrixXd m = weighted_transition(transition, potential);
    const auto data = perron(m);
    const auto n = m.rows();
    MarkovMeasure out;
    out.transition = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out.transition(i, j) = m(i, j) * data.right[j] / (data.radius * data.right[i]);
        }
        // Renormalize rows against the residual of the eigenvector.
        out.transition.row(i) /= out.transition.row(i).sum();
    }
    Eigen::VectorXd pi = data.left.cwiseProduct(data.right);
    pi /= pi.sum();
    out.stationary.assign(pi.data(), pi.data() + n);
    return out;
}

MarkovMeasure parry_measure(const TransitionMatrix& transition) {
    return equilibrium_measure(transition,
                               Potential{PotentialLabel::Custom, std::vector<double>(transition.size(), 0.0)});
}

double MarkovMeasureStats::positive_exponent_sum() const {
    double sum = 0.0;
    for (const auto& e : exponents) {
        if (e.value > 0.0) sum += e.value * e.multiplicity;
    }
    return sum;
}

MarkovMeasureStats markov_measure_stats(const ModelSystem& model, const Potential& potential,
                                        const MarkovMeasure& measure) {
    const std::size_t n = model.symbol_count();
    const auto& pi = measure.stationary;
    const auto& p = measure.transition;
    if (pi.size() != n || p.rows() != static_cast<Eigen::Index>(n) || p.cols() != static_cast<Eigen::Index>(n)) {
        throw Error(ErrorCode::IncompatibleStochastics, "measure size differs from symbol count");
    }
    if (potential.values.size() != n) throw Error(ErrorCode::IncompatibleLabel, "potential size mismatch");
    double mass = 0.0;
    for (double v : pi) {
        if (!(v >= 0.0)) throw Error(ErrorCode::IncompatibleStochastics, "negative stationary mass");
        mass += v;
    }
    if (std::abs(mass - 1.0) > kStochasticTol) throw Error(ErrorCode::IncompatibleStochastics, "masses do not sum to 1");
    for (std::size_t i = 0; i < n; ++i) {
        if (pi[i] <= 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v < 0.0) throw Error(ErrorCode::IncompatibleStochastics, "negative transition probability");
            if (v > 0.0 && !model.transition().allowed(i, j)) {
                throw Error(ErrorCode::IncompatibleStochastics, "measure charges a forbidden transition");
            }
            row += v;
        }
        if (std::abs(row - 1.0) > kStochasticTol) throw Error(ErrorCode::IncompatibleStochastics, "row not stochastic");
    }
    for (std::size_t j = 0; j < n; ++j) {
        double flow = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pi[i] > 0.0) flow += pi[i] * p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        if (std::abs(flow - pi[j]) > kStochasticTol) throw Error(ErrorCode::IncompatibleStochastics, "not stationary");
    }

    MarkovMeasureStats stats;
    for (std::size_t i = 0; i < n; ++i) {
        if (pi[i] <= 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v > 0.0) stats.entropy -= pi[i] * v * std::log(v);
        }
        stats.potential_integral += pi[i] * potential.values[i];
    }
    stats.entropy = std::max(stats.entropy, 0.0);

    const int dim = model.dim();
    std::vector<double> exponents(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        if (pi[a] <= 0.0) continue;
        const Eigen::MatrixXd linear = model.branches()[a].linear;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(linear);
        const auto& sv = svd.singularValues();  // decreasing
        for (int j = 0; j < dim; ++j) exponents[static_cast<std::size_t>(j)] += pi[a] * std::log(sv[j]);
    }
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    for (double e : exponents) {
        if (!stats.exponents.empty() && std::abs(stats.exponents.back().value - e) <= 1e-12) {
            ++stats.exponents.back().multiplicity;
        } else {
            stats.exponents.push_back({e, 1});
        }
    }
    return stats;
}

}  // namespace hypdim
