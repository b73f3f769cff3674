#pragma once

#include "hypdim/models.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace hypdim {

/// {"space": {"dim", "geometry"}, "kind", "branches": [{"symbol", "domain": {"lo", "hi"}, "linear",
/// "offset"}], "transition", "unstable_dim"}
nlohmann::json model_to_json(const ModelSystem& model);

/// Throws Error(InvalidModel) on schema violations. An optional "name" key is honoured.
ModelSystem model_from_json(const nlohmann::json& doc, const std::string& fallback_name = "custom");

ModelSystem load_model_file(const std::filesystem::path& path);

}  // namespace hypdim
