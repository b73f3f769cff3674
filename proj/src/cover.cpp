#include "hypdim/cover.hpp"

#include "hypdim/error.hpp"
#include "hypdim/symbolic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hypdim {

RepellerCover RepellerCover::at_depth(const ModelSystem& model, int depth) {
    if (depth < 1) throw Error(ErrorCode::ParameterOutOfRange, "cover depth must be >= 1");
    RepellerCover cover;
    cover.depth_ = depth;
    cover.dim_ = model.dim();
    cover.geometry_ = model.geometry();
    if (model.invariant_set_is_whole_space()) {
        cover.whole_space_ = true;
        cover.rects_.push_back(unit_box(model.dim()));
        return cover;
    }
    if (!model.has_geometric_coding()) {
        throw Error(ErrorCode::Unsupported, "cylinder covers need a geometric coding or a torus model");
    }
    if (model.kind() == MapKind::Expanding) {
        for_each_word(model.transition(), depth, [&](const Word& w) {
            if (auto rect = cylinder_rect(model, w)) cover.rects_.push_back(*rect);
        });
        return cover;
    }
    check_word_cap(model.symbol_count(), 2 * depth);
    std::vector<Box> forward;
    std::vector<int> forward_first;
    for_each_word(model.transition(), depth, [&](const Word& w) {
        if (auto rect = cylinder_rect(model, w)) {
            forward.push_back(*rect);
            forward_first.push_back(w.front());
        }
    });
    for_each_word(model.transition(), depth, [&](const Word& past) {
        const auto back = backward_rect(model, past);
        if (!back) return;
        for (std::size_t f = 0; f < forward.size(); ++f) {
            if (!model.transition().allowed(static_cast<std::size_t>(past.back()),
                                            static_cast<std::size_t>(forward_first[f]))) {
                continue;
            }
            const Box rect = intersect(*back, forward[f]);
            if (!rect.empty()) cover.rects_.push_back(rect);
        }
    });
    return cover;
}

RepellerCover RepellerCover::finer_than(const ModelSystem& model, double max_diameter) {
    if (!(max_diameter > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "cover diameter must be positive");
    if (model.invariant_set_is_whole_space()) return at_depth(model, 1);
    for (int depth = 1;; ++depth) {
        const int words = model.kind() == MapKind::Expanding ? depth : 2 * depth;
        check_word_cap(model.symbol_count(), words);
        auto cover = at_depth(model, depth);
        if (cover.max_diameter() < max_diameter) return cover;
    }
}

double RepellerCover::max_diameter() const {
    double d = 0.0;
    for (const auto& r : rects_) d = std::max(d, r.diameter());
    return d;
}

double RepellerCover::distance(const Point& p) const {
    if (whole_space_) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rects_) {
        best = std::min(best, distance_to_box(p, r, geometry_));
        if (best == 0.0) break;
    }
    return best;
}

namespace {

/// Visits every multi-index in the per-axis inclusive ranges [lo[i], hi[i]].
template <class Fn>
void for_each_index(int dim, const std::array<long, kMaxDim>& lo, const std::array<long, kMaxDim>& hi, Fn&& fn) {
    for (int i = 0; i < dim; ++i) {
        if (lo[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) return;
    }
    std::array<long, kMaxDim> idx = lo;
    while (true) {
        fn(idx);
        int axis = 0;
        while (axis < dim) {
            auto a = static_cast<std::size_t>(axis);
            if (++idx[a] <= hi[a]) break;
            idx[a] = lo[a];
            ++axis;
        }
        if (axis == dim) return;
    }
}

}  // namespace

NearIndex::NearIndex(const RepellerCover& cover, double epsilon) : cover_(cover), epsilon_(epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "epsilon must be positive");
    if (cover.whole_space()) return;
    const int dim = cover.dim();
    static constexpr int kPerAxis[] = {0, 4096, 1024, 64, 32};
    per_axis_ = kPerAxis[dim];
    const long b = per_axis_;
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(b);
    full_.assign(total, 0);
    const bool torus = cover.geometry() == Geometry::Torus;
    const double tiny = 1e-12;

    auto flat = [&](const std::array<long, kMaxDim>& idx, std::size_t& out) {
        std::size_t f = 0;
        for (int i = dim - 1; i >= 0; --i) {
            long v = idx[static_cast<std::size_t>(i)];
            if (torus) {
                v = ((v % b) + b) % b;
            } else if (v < 0 || v >= b) {
                return false;
            }
            f = f * static_cast<std::size_t>(b) + static_cast<std::size_t>(v);
        }
        out = f;
        return true;
    };

    auto overlap_range = [&](const Box& r, std::array<long, kMaxDim>& lo, std::array<long, kMaxDim>& hi) {
        for (int i = 0; i < dim; ++i) {
            auto a = static_cast<std::size_t>(i);
            lo[a] = static_cast<long>(std::floor((r.lo[i] - epsilon) * b));
            hi[a] = static_cast<long>(std::floor((r.hi[i] + epsilon) * b));
            if (torus) {
                hi[a] = std::min(hi[a], lo[a] + b - 1);
            } else {
                lo[a] = std::max(lo[a], 0L);
                hi[a] = std::min(hi[a], b - 1);
            }
        }
    };

    // Pass 1: buckets entirely inside some expanded rectangle.
    for (const auto& r : cover.rects()) {
        std::array<long, kMaxDim> lo{};
        std::array<long, kMaxDim> hi{};
        for (int i = 0; i < dim; ++i) {
            auto a = static_cast<std::size_t>(i);
            lo[a] = static_cast<long>(std::ceil((r.lo[i] - epsilon) * b + tiny));
            hi[a] = static_cast<long>(std::floor((r.hi[i] + epsilon) * b - tiny)) - 1;
            if (torus) hi[a] = std::min(hi[a], lo[a] + b - 1);
        }
        for_each_index(dim, lo, hi, [&](const std::array<long, kMaxDim>& idx) {
            std::size_t f = 0;
            if (flat(idx, f)) full_[f] = 1;
        });
    }

    // Pass 2 and 3: candidate lists for partially covered buckets.
    std::vector<std::uint32_t> counts(total + 1, 0);
    auto visit_candidates = [&](auto&& sink) {
        for (std::size_t ri = 0; ri < cover.rects().size(); ++ri) {
            std::array<long, kMaxDim> lo{};
            std::array<long, kMaxDim> hi{};
            overlap_range(cover.rects()[ri], lo, hi);
            for_each_index(dim, lo, hi, [&](const std::array<long, kMaxDim>& idx) {
                std::size_t f = 0;
                if (flat(idx, f) && !full_[f]) sink(f, static_cast<std::uint32_t>(ri));
            });
        }
    };
    visit_candidates([&](std::size_t f, std::uint32_t) { ++counts[f + 1]; });
    for (std::size_t i = 0; i < total; ++i) counts[i + 1] += counts[i];
    offsets_ = counts;
    candidates_.assign(offsets_.back(), 0);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    visit_candidates([&](std::size_t f, std::uint32_t ri) { candidates_[cursor[f]++] = ri; });
}

std::size_t NearIndex::bucket_of(const Point& p) const {
    std::size_t f = 0;
    for (int i = cover_.dim() - 1; i >= 0; --i) {
        auto v = static_cast<long>(std::floor(p[i] * per_axis_));
        v = std::clamp(v, 0L, static_cast<long>(per_axis_) - 1);
        f = f * static_cast<std::size_t>(per_axis_) + static_cast<std::size_t>(v);
    }
    return f;
}

bool NearIndex::near(const Point& p) const {
    if (cover_.whole_space()) return true;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || p[i] > 1.0) return cover_.distance(p) < epsilon_;
    }
    const std::size_t f = bucket_of(p);
    if (full_[f]) return true;
    const auto& rects = cover_.rects();
    for (auto c = offsets_[f]; c < offsets_[f + 1]; ++c) {
        if (distance_to_box(p, rects[candidates_[c]], cover_.geometry()) < epsilon_) return true;
    }
    return false;
}

}  // namespace hypdim
