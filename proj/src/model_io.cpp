#include "mcm/model_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mcm {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& key, const std::string& msg) {
    throw SchemaError(key + ": " + msg, key);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) schema(where.empty() ? "$" : where, "expected an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!ok.count(k)) schema(where.empty() ? k : where + "." + k, "unknown key");
}

const json& require(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) schema(where.empty() ? key : where + "." + key, "missing required key");
    return obj.at(key);
}

std::string path(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double number(const json& v, const std::string& key) {
    if (!v.is_number()) schema(key, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& key, int minValue) {
    if (!v.is_number_integer()) schema(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < minValue || x > 1'000'000'000) schema(key, "value " + std::to_string(x) + " out of range");
    return static_cast<int>(x);
}

Complex complex_value(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2) schema(key, "expected a [re, im] pair");
    return {number(v[0], key + "[0]"), number(v[1], key + "[1]")};
}

AbstractModel parse_abstract(const json& a) {
    allow_keys(a, "abstract", {"degree", "cycles"});
    AbstractModel m;
    m.degree = integer(require(a, "abstract", "degree"), "abstract.degree", 2);
    const json& cycles = require(a, "abstract", "cycles");
    if (!cycles.is_array() || cycles.empty()) schema("abstract.cycles", "expected a nonempty array");
    int rh = 0;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        const std::string w = "abstract.cycles[" + std::to_string(i) + "]";
        allow_keys(cycles[i], w, {"period", "degrees"});
        AbstractCycle c;
        c.period = integer(require(cycles[i], w, "period"), w + ".period", 1);
        const json& deg = require(cycles[i], w, "degrees");
        if (!deg.is_array() || deg.size() != static_cast<std::size_t>(c.period))
            schema(w + ".degrees", "expected one degree per phase");
        bool critical = false;
        for (std::size_t j = 0; j < deg.size(); ++j) {
            const int n = integer(deg[j], w + ".degrees[" + std::to_string(j) + "]", 1);
            if (n > m.degree) schema(w + ".degrees[" + std::to_string(j) + "]", "local degree exceeds the degree");
            critical = critical || n >= 2;
            rh += n - 1;
            c.degrees.push_back(n);
        }
        if (!critical) schema(w + ".degrees", "a super-attracting cycle needs a local degree >= 2");
        m.cycles.push_back(std::move(c));
    }
    if (rh != m.degree - 1)
        schema("abstract.cycles", "local degrees give sum(n-1) = " + std::to_string(rh) + ", expected " +
                                      std::to_string(m.degree - 1));
    return m;
}

FamilySpec parse_family(const json& f) {
    allow_keys(f, "family", {"kind", "lambda", "poles"});
    FamilySpec fam;
    const json& kind = require(f, "family", "kind");
    if (kind == "simple_poles") fam.kind = FamilySpec::Kind::SimplePoles;
    else if (kind == "product_pole") fam.kind = FamilySpec::Kind::ProductPole;
    else schema("family.kind", "expected simple_poles or product_pole");
    fam.lambda = complex_value(require(f, "family", "lambda"), "family.lambda");
    if (fam.lambda == Complex{}) schema("family.lambda", "lambda must be nonzero");
    const json& poles = require(f, "family", "poles");
    if (!poles.is_array() || poles.empty()) schema("family.poles", "expected a nonempty array");
    for (std::size_t k = 0; k < poles.size(); ++k) {
        const std::string w = "family.poles[" + std::to_string(k) + "]";
        allow_keys(poles[k], w, {"at", "order", "weight"});
        FamilyPole p;
        p.at = complex_value(require(poles[k], w, "at"), w + ".at");
        p.order = integer(require(poles[k], w, "order"), w + ".order", 1);
        if (poles[k].contains("weight")) {
            if (fam.kind == FamilySpec::Kind::ProductPole) schema(w + ".weight", "weights apply to simple_poles only");
            p.weight = complex_value(poles[k]["weight"], w + ".weight");
            if (*p.weight == Complex{}) schema(w + ".weight", "weight must be nonzero");
        }
        for (const auto& q : fam.poles)
            if (std::abs(q.at - p.at) <= pole_collision_tol(p.at)) schema(w + ".at", "duplicate pole location");
        fam.poles.push_back(p);
    }
    return fam;
}

PoleData parse_pole_data(const json& d, const std::optional<AbstractModel>& abs) {
    if (!d.is_array() || d.empty()) schema("pole_data", "expected a nonempty array");
    PoleData pd;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const std::string w = "pole_data[" + std::to_string(k) + "]";
        allow_keys(d[k], w, {"cycle", "phase", "d"});
        DomainKey key;
        key.cycle = integer(require(d[k], w, "cycle"), w + ".cycle", 1);
        key.phase = integer(require(d[k], w, "phase"), w + ".phase", 0);
        const int deg = integer(require(d[k], w, "d"), w + ".d", 1);
        if (abs) {
            if (key.cycle > static_cast<int>(abs->cycles.size())) schema(w + ".cycle", "no such cycle");
            if (key.phase >= abs->cycles[static_cast<std::size_t>(key.cycle - 1)].period)
                schema(w + ".phase", "phase exceeds the cycle period");
        }
        if (pd.contains(key)) schema(w, "duplicate domain");
        pd.set(key, deg);
    }
    return pd;
}

ModelParams parse_params(const json& p) {
    allow_keys(p, "params", {"maxIter", "escapeRadius", "poleBall", "cycleTol"});
    ModelParams mp;
    if (p.contains("maxIter")) mp.maxIter = integer(p["maxIter"], "params.maxIter", 1);
    if (p.contains("escapeRadius")) {
        mp.escapeRadius = number(p["escapeRadius"], "params.escapeRadius");
        if (mp.escapeRadius < 0.0) schema("params.escapeRadius", "must be >= 0");
    }
    if (p.contains("poleBall")) {
        mp.poleBall = number(p["poleBall"], "params.poleBall");
        if (!(mp.poleBall > 0.0)) schema("params.poleBall", "must be > 0");
    }
    if (p.contains("cycleTol")) {
        mp.cycleTol = number(p["cycleTol"], "params.cycleTol");
        if (!(mp.cycleTol > 0.0)) schema("params.cycleTol", "must be > 0");
    }
    return mp;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1;
    int col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Canonical writer: nlohmann objects are already key-sorted.
void emit(std::ostringstream& os, const json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
    if (v.is_object()) {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [k, x] : v.items()) {
            if (!first) os << ",\n";
            first = false;
            os << inner << json(k).dump() << ": ";
            emit(os, x, indent + 2);
        }
        os << "\n" << pad << "}";
    } else if (v.is_array()) {
        const bool flat = std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
        if (flat) {
            os << "[";
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k) os << ", ";
                emit(os, v[k], indent);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k) os << ",\n";
            os << inner;
            emit(os, v[k], indent + 2);
        }
        os << "\n" << pad << "]";
    } else if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        os << buf;
    } else {
        os << v.dump();
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

} // namespace

RationalMapExpr FamilySpec::build(const ComplexPoly& base, std::optional<Complex> lambdaOverride) const {
    const Complex lam = lambdaOverride.value_or(lambda);
    if (kind == Kind::ProductPole) {
        ProductPole pp;
        pp.lambda = lam;
        for (const auto& p : poles) pp.factors.push_back({p.at, p.order});
        return RationalMapExpr(base, std::move(pp));
    }
    SimplePoles sp;
    for (const auto& p : poles) sp.terms.push_back({p.at, p.order, lam * p.weight.value_or(Complex{1.0, 0.0})});
    return RationalMapExpr(base, std::move(sp));
}

HpcfpModel from_abstract(const AbstractModel& a) {
    HpcfpModel m;
    m.degree = a.degree;
    for (std::size_t i = 0; i < a.cycles.size(); ++i) {
        CycleSpec c;
        c.index = static_cast<int>(i) + 1;
        c.period = a.cycles[i].period;
        c.degrees = a.cycles[i].degrees;
        m.cycles.push_back(std::move(c));
    }
    return m;
}

HpcfpModel ModelFile::model(const ClassifyParams& cp) const {
    if (polynomial) return classify_polynomial(*polynomial, cp);
    return from_abstract(*abstractModel);
}

ModelFile parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, col] = line_column(text, byte);
        throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                             e.what(),
                         line, col);
    }
    allow_keys(j, "", {"polynomial", "abstract", "pole_data", "family", "params"});
    const bool hasPoly = j.contains("polynomial");
    const bool hasAbs = j.contains("abstract");
    if (hasPoly == hasAbs) schema(hasPoly ? "abstract" : "polynomial", "exactly one of polynomial and abstract is required");

    ModelFile m;
    if (hasPoly) {
        const json& p = j["polynomial"];
        if (!p.is_array() || p.empty()) schema("polynomial", "expected a nonempty coefficient array");
        std::vector<Complex> c;
        for (std::size_t k = 0; k < p.size(); ++k) c.push_back(complex_value(p[k], "polynomial[" + std::to_string(k) + "]"));
        ComplexPoly poly(std::move(c));
        if (poly.degree() < 2) schema("polynomial", "degree must be >= 2");
        m.polynomial = std::move(poly);
    } else {
        m.abstractModel = parse_abstract(j["abstract"]);
    }
    if (j.contains("pole_data")) m.poleData = parse_pole_data(j["pole_data"], m.abstractModel);
    if (j.contains("family")) {
        if (!hasPoly) schema("family", "a family needs a polynomial base");
        m.family = parse_family(j["family"]);
    }
    if (j.contains("params")) m.params = parse_params(j["params"]);
    return m;
}

ModelFile load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_model(const ModelFile& m) {
    json j = json::object();
    if (m.polynomial) {
        json p = json::array();
        for (const auto& c : m.polynomial->coeffs()) p.push_back(complex_json(c));
        j["polynomial"] = p;
    }
    if (m.abstractModel) {
        json cycles = json::array();
        for (const auto& c : m.abstractModel->cycles) cycles.push_back({{"period", c.period}, {"degrees", c.degrees}});
        j["abstract"] = {{"degree", m.abstractModel->degree}, {"cycles", cycles}};
    }
    if (m.poleData) {
        json d = json::array();
        for (const auto& [k, deg] : m.poleData->entries) d.push_back({{"cycle", k.cycle}, {"phase", k.phase}, {"d", deg}});
        j["pole_data"] = d;
    }
    if (m.family) {
        json poles = json::array();
        for (const auto& p : m.family->poles) {
            json e = {{"at", complex_json(p.at)}, {"order", p.order}};
            if (p.weight) e["weight"] = complex_json(*p.weight);
            poles.push_back(e);
        }
        j["family"] = {{"kind", m.family->kind == FamilySpec::Kind::SimplePoles ? "simple_poles" : "product_pole"},
                       {"lambda", complex_json(m.family->lambda)},
                       {"poles", poles}};
    }
    j["params"] = {{"maxIter", m.params.maxIter},
                   {"escapeRadius", m.params.escapeRadius},
                   {"poleBall", m.params.poleBall},
                   {"cycleTol", m.params.cycleTol}};
    std::ostringstream os;
    emit(os, j, 0);
    os << "\n";
    return os.str();
}

void save_model(const ModelFile& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const std::string s = serialize_model(m);
    f.write(s.data(), static_cast<std::streamsize>(s.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

} // namespace mcm
