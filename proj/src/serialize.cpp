#include "hypdim/serialize.hpp"

#include <charconv>
#include <cmath>

namespace hypdim {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json to_json(const PressureEstimate& estimate) {
    json curve = json::array();
    for (const auto& p : estimate.curve) curve.push_back({p.k, p.value});
    return {{"value", estimate.value},
            {"method", to_string(estimate.method)},
            {"window", {estimate.window_lo, estimate.window_hi}},
            {"fit_slope", estimate.fit_slope},
            {"residual", estimate.residual},
            {"recurrence_order", estimate.recurrence_order},
            {"curve", curve}};
}

json to_json(const VolumeCurve& curve) {
    return {{"epsilon", curve.epsilon},       {"grid_resolution", curve.grid_resolution},
            {"cover_depth", curve.cover_depth}, {"cover_diameter", curve.cover_diameter},
            {"k", curve.ks},                  {"volume", curve.volumes},
            {"band", curve.bands}};
}

json to_json(const ExpansionRate& rate) {
    return {{"value", rate.value},
            {"log_norms", rate.log_norms},
            {"k_max", rate.k_max},
            {"inverse", rate.inverse},
            {"closed_form", rate.closed_form}};
}

json to_json(const DimensionEstimate& estimate) {
    json counts = json::array();
    for (const auto& c : estimate.counts) counts.push_back({{"scale", c.scale}, {"count", c.count}});
    return {{"dimension", estimate.slope},
            {"intercept", estimate.intercept},
            {"residual", estimate.residual},
            {"excluded_coarse_scales", estimate.excluded},
            {"counts", counts}};
}

json to_json(const MarkovMeasureStats& stats) {
    json exponents = json::array();
    for (const auto& e : stats.exponents) exponents.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
    return {{"entropy", stats.entropy},
            {"exponents", exponents},
            {"potential_integral", stats.potential_integral},
            {"positive_exponent_sum", stats.positive_exponent_sum()}};
}

json to_json(const BoundReport& report) {
    json doc = {{"model", report.model},
                {"n", report.n},
                {"potential", to_string(report.potential)},
                {"s", to_json(report.s)},
                {"pressure", to_json(report.pressure)},
                {"bound", report.bound},
                {"tolerance", report.tolerance},
                {"classification", to_string(report.classification)}};
    if (!report.checks.empty()) {
        json checks = json::array();
        for (const auto& c : report.checks) {
            checks.push_back({{"claim", c.claim}, {"verdict", c.pass ? "pass" : "fail"}, {"lhs", c.lhs}, {"rhs", c.rhs}});
        }
        doc["equivalence_checks"] = checks;
    }
    if (report.equilibrium_stats) doc["equilibrium_measure"] = to_json(*report.equilibrium_stats);
    return doc;
}

std::string volume_curve_csv(const VolumeCurve& curve) {
    std::string out = "k,vol,log_vol\n";
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
        const double v = curve.volumes[i];
        out += std::to_string(curve.ks[i]) + "," + format_double(v) + "," +
               (v > 0.0 ? format_double(std::log(v)) : std::string("-inf")) + "\n";
    }
    return out;
}

std::string partition_curve_csv(const PressureEstimate& estimate) {
    std::string out = "k,log_z\n";
    for (const auto& p : estimate.curve) out += std::to_string(p.k) + "," + format_double(p.value) + "\n";
    return out;
}

std::string dimension_csv(const DimensionEstimate& estimate) {
    std::string out = "scale,count,log_inv_scale,log_count\n";
    for (const auto& c : estimate.counts) {
        out += format_double(c.scale) + "," + std::to_string(c.count) + "," + format_double(-std::log(c.scale)) + "," +
               format_double(std::log(static_cast<double>(c.count))) + "\n";
    }
    return out;
}

}  // namespace hypdim
