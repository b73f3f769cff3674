#include "hypdim/model_json.hpp"

#include "hypdim/error.hpp"

#include <fstream>

namespace hypdim {

namespace {

using nlohmann::json;

json point_json(const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.size(); ++i) a.push_back(p[i]);
    return a;
}

Point point_from(const json& a, int dim, const char* what) {
    if (!a.is_array() || static_cast<int>(a.size()) != dim) {
        throw Error(ErrorCode::InvalidModel, std::string(what) + " must be an array of length " + std::to_string(dim));
    }
    Point p(dim);
    for (int i = 0; i < dim; ++i) {
        if (!a[static_cast<std::size_t>(i)].is_number()) throw Error(ErrorCode::InvalidModel, std::string(what) + " must be numeric");
        p[i] = a[static_cast<std::size_t>(i)].get<double>();
    }
    return p;
}

const json& field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::InvalidModel, std::string("missing field '") + key + "'");
    return obj.at(key);
}

}  // namespace

json model_to_json(const ModelSystem& model) {
    json doc;
    doc["space"] = {{"dim", model.dim()}, {"geometry", model.geometry() == Geometry::Torus ? "torus" : "cube"}};
    doc["kind"] = to_string(model.kind());
    json branches = json::array();
    for (const auto& b : model.branches()) {
        json linear = json::array();
        for (int i = 0; i < b.linear.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < b.linear.cols(); ++j) row.push_back(b.linear(i, j));
            linear.push_back(row);
        }
        branches.push_back({{"symbol", b.symbol},
                            {"domain", {{"lo", point_json(b.domain.lo)}, {"hi", point_json(b.domain.hi)}}},
                            {"linear", linear},
                            {"offset", point_json(b.offset)}});
    }
    doc["branches"] = branches;
    doc["transition"] = model.transition().rows();
    doc["unstable_dim"] = model.unstable_dim();
    return doc;
}

ModelSystem model_from_json(const json& doc, const std::string& fallback_name) {
    try {
        const json& space = field(doc, "space");
        AmbientSpace ambient;
        ambient.dim = field(space, "dim").get<int>();
        if (ambient.dim < 1 || ambient.dim > kMaxDim) throw Error(ErrorCode::InvalidModel, "dim must be in 1..4");
        const auto geometry = field(space, "geometry").get<std::string>();
        if (geometry == "cube") {
            ambient.geometry = Geometry::Cube;
        } else if (geometry == "torus") {
            ambient.geometry = Geometry::Torus;
        } else {
            throw Error(ErrorCode::InvalidModel, "geometry must be 'cube' or 'torus'");
        }
        const auto kind_text = field(doc, "kind").get<std::string>();
        MapKind kind;
        if (kind_text == "diffeo") {
            kind = MapKind::Diffeomorphism;
        } else if (kind_text == "expanding") {
            kind = MapKind::Expanding;
        } else {
            throw Error(ErrorCode::InvalidModel, "kind must be 'diffeo' or 'expanding'");
        }
        const int n = ambient.dim;
        std::vector<AffineBranch> branches;
        for (const auto& b : field(doc, "branches")) {
            AffineBranch branch;
            branch.symbol = field(b, "symbol").get<int>();
            const json& domain = field(b, "domain");
            branch.domain = Box{point_from(field(domain, "lo"), n, "domain.lo"), point_from(field(domain, "hi"), n, "domain.hi")};
            const json& linear = field(b, "linear");
            if (!linear.is_array() || static_cast<int>(linear.size()) != n) {
                throw Error(ErrorCode::InvalidModel, "linear must be an n x n array");
            }
            branch.linear = LinearMap(n, n);
            for (int i = 0; i < n; ++i) {
                const Point row = point_from(linear[static_cast<std::size_t>(i)], n, "linear row");
                for (int j = 0; j < n; ++j) branch.linear(i, j) = row[j];
            }
            branch.offset = point_from(field(b, "offset"), n, "offset");
            branches.push_back(std::move(branch));
        }
        const auto rows = field(doc, "transition").get<std::vector<std::vector<int>>>();
        const int unstable_dim = field(doc, "unstable_dim").get<int>();
        const std::string name = doc.contains("name") ? doc.at("name").get<std::string>() : fallback_name;
        return ModelSystem(name, ambient, kind, std::move(branches), TransitionMatrix(rows), unstable_dim);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidModel, e.what());
    }
}

ModelSystem load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidModel, "cannot open model file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidModel, path.string() + ": " + e.what());
    }
    return model_from_json(doc, path.stem().string());
}

}  // namespace hypdim
