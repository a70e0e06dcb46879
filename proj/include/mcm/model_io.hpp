#pragma once

#include "mcm/hpcfp.hpp"
#include "mcm/pole_data.hpp"
#include "mcm/rational_map.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcm {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& what, std::string key) : std::runtime_error(what), key_(std::move(key)) {}
    /// JSON path of the offending key, e.g. "pole_data[0].phase".
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct AbstractCycle {
    int period = 1;
    std::vector<int> degrees;
};

struct AbstractModel {
    int degree = 2;
    std::vector<AbstractCycle> cycles;
};

struct FamilyPole {
    Complex at;
    int order = 1;
    std::optional<Complex> weight;  ///< simple_poles only: coefficient = lambda * weight
};

struct FamilySpec {
    enum class Kind { SimplePoles, ProductPole };
    Kind kind = Kind::SimplePoles;
    Complex lambda{1.0, 0.0};
    std::vector<FamilyPole> poles;

    /// Map P + perturbation at the stored or overriding lambda.
    RationalMapExpr build(const ComplexPoly& base, std::optional<Complex> lambdaOverride = std::nullopt) const;
};

struct ModelParams {
    int maxIter = 2000;
    double escapeRadius = 0.0;  ///< 0 selects the auto radius
    double poleBall = 0.1;
    double cycleTol = 1e-9;
    bool operator==(const ModelParams&) const = default;
};

struct ModelFile {
    std::optional<ComplexPoly> polynomial;
    std::optional<AbstractModel> abstractModel;
    std::optional<PoleData> poleData;
    std::optional<FamilySpec> family;
    ModelParams params;

    /// The cycle skeleton: classified from the polynomial, or the abstract data.
    HpcfpModel model(const ClassifyParams& cp = {}) const;
};

ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);
/// Canonical JSON: sorted keys, two-space indentation, floats with 17
/// significant digits, trailing newline.
std::string serialize_model(const ModelFile& m);
void save_model(const ModelFile& m, const std::string& path);

/// Model from abstract cycle data, without points or source polynomial.
HpcfpModel from_abstract(const AbstractModel& a);

} // namespace mcm
