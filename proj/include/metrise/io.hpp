#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "metrise/geometry.hpp"
#include "metrise/odesystem.hpp"

namespace metrise {

/// One structured input file: kind plus a kind-specific payload of
/// {"indices", "value"} entries with expression-text values.
struct StructureFile {
    std::string kind;
    std::array<std::string, 3> coords{"x1", "x2", "x3"};
    std::vector<std::string> parameters;
    VarsPtr vars;

    std::optional<ProjectiveStructure> projective;
    std::optional<Tensor> metric;
    std::optional<WeylStructure> weyl;
    std::optional<ODESystem> ode;
    std::optional<WeylV> v;
    std::optional<Tensor> sigma;
};

StructureFile load_structure(const std::string& path);
StructureFile parse_structure(const nlohmann::json& j, const std::string& origin);

/// The projective structure the file describes (levi-civita for metrics,
/// the Weyl connection for weyl structures, the gauge-fixed representative
/// for ODE systems). Fails for kinds carrying no connection.
ProjectiveStructure structure_connection(const StructureFile& sf);

/// The reduced Weyl tensor of the file (via the pipeline, or verbatim for
/// kind weyl_tensor_v).
WeylV structure_weyl_v(const StructureFile& sf);

} // namespace metrise
