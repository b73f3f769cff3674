// Thin pybind11 layer. Results cross the boundary as JSON text; hypdim/__init__.py decodes them.

#include "cli.hpp"

#include "hypdim/dimension.hpp"
#include "hypdim/error.hpp"
#include "hypdim/model_json.hpp"
#include "hypdim/pressure.hpp"
#include "hypdim/serialize.hpp"
#include "hypdim/symbolic.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <variant>

namespace py = pybind11;
using namespace hypdim;
using nlohmann::json;

namespace {

using PotentialArg = std::variant<std::string, std::vector<double>>;

PotentialLabel default_label(const ModelSystem& m) {
    return m.kind() == MapKind::Diffeomorphism ? PotentialLabel::PhiU : PotentialLabel::Phi;
}

Potential resolve_potential(const ModelSystem& m, const std::optional<PotentialArg>& arg) {
    if (!arg) return potential(m, default_label(m));
    if (const auto* values = std::get_if<std::vector<double>>(&*arg)) {
        if (values->size() != m.symbol_count()) {
            throw Error(ErrorCode::IncompatibleLabel, "one potential value per symbol expected");
        }
        return Potential{PotentialLabel::Custom, *values};
    }
    const auto& name = std::get<std::string>(*arg);
    if (name == "phi_u") return potential(m, PotentialLabel::PhiU);
    if (name == "phi_s") return potential(m, PotentialLabel::PhiS);
    if (name == "phi") return potential(m, PotentialLabel::Phi);
    if (name == "zero") return zero_potential(m);
    throw Error(ErrorCode::IncompatibleLabel, "unknown potential '" + name + "'");
}

std::optional<PotentialLabel> optional_label(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
    if (*name == "phi_u") return PotentialLabel::PhiU;
    if (*name == "phi_s") return PotentialLabel::PhiS;
    if (*name == "phi") return PotentialLabel::Phi;
    throw Error(ErrorCode::IncompatibleLabel, "bound potential must be phi_u, phi_s or phi");
}

std::string pressure_json(const ModelSystem& m, const std::optional<PotentialArg>& pot, const std::string& method,
                          int k_max, std::optional<double> epsilon, int grid, int k_min, int threads) {
    PressureEstimate est;
    if (method == "spectral") {
        est = pressure_spectral_estimate(m, resolve_potential(m, pot));
    } else if (method == "partition") {
        est = pressure_from_partition_sums(m, resolve_potential(m, pot), k_max);
    } else if (method == "volume") {
        if (grid <= 0) grid = m.dim() == 1 ? 4096 : 2048;
        est = pressure_from_volume_growth(volume_curve(m, epsilon.value_or(default_volume_epsilon(m)), k_max, grid, threads), k_min, k_max);
    } else {
        throw Error(ErrorCode::ParameterOutOfRange, "method must be spectral, partition or volume");
    }
    return to_json(est).dump();
}

std::string dimension_json(const ModelSystem& m, const std::string& set, double base, int m_lo, int m_hi,
                           double epsilon, int depth, int grid, int threads) {
    const auto scales = geometric_scales(base, m_lo, m_hi);
    std::vector<ScaleCount> counts;
    if (set == "invariant") {
        const auto cover = RepellerCover::finer_than(m, scales.back() / 4.0);
        for (double s : scales) counts.push_back({s, box_count(cover, s)});
    } else if (set == "stable") {
        StableSetOptions options;
        options.epsilon = epsilon;
        options.depth = depth;
        options.resolution = grid;
        options.threads = threads;
        if (scales.back() < 1.0 / grid) {
            throw Error(ErrorCode::GridTooCoarse, "finest scale is below the sampling grid spacing");
        }
        const auto cloud = sample_local_stable_set(m, options);
        for (double s : scales) counts.push_back({s, box_count(cloud, m.dim(), s)});
    } else {
        throw Error(ErrorCode::ParameterOutOfRange, "set must be 'invariant' or 'stable'");
    }
    return to_json(box_dimension(counts)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Pressure, expansion rate and box-dimension bounds for piecewise-affine hyperbolic models.";

    static py::exception<Error> error(mod, "HypdimError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
        }
    });

    py::class_<ModelSystem>(mod, "Model")
        .def_property_readonly("name", &ModelSystem::name)
        .def_property_readonly("dim", &ModelSystem::dim)
        .def_property_readonly("kind", [](const ModelSystem& m) { return to_string(m.kind()); })
        .def_property_readonly("symbol_count", &ModelSystem::symbol_count)
        .def_property_readonly("lambda_u", &ModelSystem::lambda_u)
        .def_property_readonly("lambda_s", &ModelSystem::lambda_s)
        .def("evaluate",
             [](const ModelSystem& m, const std::vector<double>& x) -> std::optional<std::vector<double>> {
                 if (static_cast<int>(x.size()) != m.dim()) throw Error(ErrorCode::ParameterOutOfRange, "wrong point size");
                 Point p(m.dim());
                 for (int i = 0; i < m.dim(); ++i) p[i] = x[static_cast<std::size_t>(i)];
                 const auto y = m.evaluate(p);
                 if (!y) return std::nullopt;
                 return std::vector<double>(y->data(), y->data() + y->size());
             })
        .def("to_json", [](const ModelSystem& m) { return model_to_json(m).dump(); })
        .def("__repr__", [](const ModelSystem& m) { return "<hypdim.Model " + m.name() + ">"; });

    mod.def("horseshoe", &build_linear_horseshoe, py::arg("lambda_u") = 3.0, py::arg("lambda_s") = 0.25);
    mod.def("doubling", &build_doubling_map, py::arg("degree") = 2);
    mod.def("cantor", &build_cantor_repeller, py::arg("slope") = 3, py::arg("kept_branches") = std::vector<int>{0, 2});
    mod.def("cat_map", &build_cat_map);
    mod.def("golden_map", &build_golden_map);
    mod.def("power", &power_model, py::arg("model"), py::arg("m"));
    mod.def("model_from_spec", &cli::parse_model_spec, py::arg("spec"));
    mod.def(
        "model_from_json", [](const std::string& text) { return model_from_json(json::parse(text)); },
        py::arg("text"));
    mod.def("horseshoe_for_target_dimension", &horseshoe_for_target_dimension, py::arg("target"),
            py::arg("lambda_s") = 0.25);

    mod.def("_pressure", &pressure_json, py::arg("model"), py::arg("potential") = py::none(),
            py::arg("method") = "spectral", py::arg("k_max") = 12, py::arg("epsilon") = py::none(), py::arg("grid") = 0,
            py::arg("k_min") = 1, py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    mod.def(
        "_expansion_rate",
        [](const ModelSystem& m, int k_max, bool inverse) { return to_json(expansion_rate(m, k_max, inverse)).dump(); },
        py::arg("model"), py::arg("k_max") = 8, py::arg("inverse") = false);
    mod.def(
        "_bound",
        [](const ModelSystem& m, const std::optional<std::string>& label, bool check_srb, int s_k_max) {
            const auto report = check_srb ? srb_equivalence_report(m) : bound_report(m, optional_label(label), s_k_max);
            return to_json(report).dump();
        },
        py::arg("model"), py::arg("potential") = py::none(), py::arg("check_srb") = false, py::arg("s_k_max") = 8);
    mod.def("_dimension", &dimension_json, py::arg("model"), py::arg("set") = "invariant", py::arg("base") = 2.0,
            py::arg("m_lo") = 1, py::arg("m_hi") = 10, py::arg("epsilon") = 0.05, py::arg("depth") = 10,
            py::arg("grid") = 2048, py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());
    mod.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
    mod.attr("__version__") = HYPDIM_VERSION;
}
