#pragma once

#include "mcm/model_io.hpp"
#include "mcm/verifier.hpp"

#include <string>

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(MCM_DATA_DIR) + "/" + name + ".json"; }

inline mcm::ModelFile load(const std::string& name) { return mcm::load_model(path(name)); }

inline mcm::RationalMapExpr family_map(const mcm::ModelFile& m) { return m.family->build(*m.polynomial); }

inline mcm::VerifyParams verify_params(const mcm::ModelFile& m) {
    mcm::VerifyParams p;
    p.maxIter = m.params.maxIter;
    p.escapeRadius = m.params.escapeRadius;
    p.poleBall = m.params.poleBall;
    p.cycleTol = m.params.cycleTol;
    return p;
}

} // namespace fixtures
