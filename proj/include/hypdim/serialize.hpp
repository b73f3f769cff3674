#pragma once

#include "hypdim/dimension.hpp"
#include "hypdim/pressure.hpp"
#include "hypdim/symbolic.hpp"

#include <json.hpp>

#include <string>

namespace hypdim {

nlohmann::json to_json(const PressureEstimate& estimate);
nlohmann::json to_json(const VolumeCurve& curve);
nlohmann::json to_json(const ExpansionRate& rate);
nlohmann::json to_json(const DimensionEstimate& estimate);
nlohmann::json to_json(const MarkovMeasureStats& stats);
nlohmann::json to_json(const BoundReport& report);

/// Shortest round-trip decimal text, independent of the global locale.
std::string format_double(double v);

/// k,vol,log_vol rows (LF line endings).
std::string volume_curve_csv(const VolumeCurve& curve);
/// k,log_z rows.
std::string partition_curve_csv(const PressureEstimate& estimate);
/// scale,count,log_inv_scale,log_count rows.
std::string dimension_csv(const DimensionEstimate& estimate);

}  // namespace hypdim
