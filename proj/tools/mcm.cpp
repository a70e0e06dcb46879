// mcm: command-line front end. Exit codes: 0 positive verdict, 1 negative
// verdict, 2 operational error.

#include "mcm/hpcfp.hpp"
#include "mcm/model_io.hpp"
#include "mcm/pole_arith.hpp"
#include "mcm/renderer.hpp"
#include "mcm/skew.hpp"
#include "mcm/surgery.hpp"
#include "mcm/verifier.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

using namespace mcm;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

// "re" or "re:im"
Complex parse_complex(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) return {parse_double(s), 0.0};
    return {parse_double(s.substr(0, colon)), parse_double(s.substr(colon + 1))};
}

ComplexPoly parse_poly(const std::string& s) {
    std::vector<Complex> c;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.push_back(parse_complex(tok));
    if (c.empty()) throw UsageError("empty coefficient list");
    return ComplexPoly(std::move(c));
}

std::string fmt(Complex z, int prec = 12) {
    char buf[96];
    // + 0.0 folds negative zero so "1-0i" prints as "1+0i".
    std::snprintf(buf, sizeof buf, "%.*g%+.*gi", prec, z.real() + 0.0, prec, z.imag() + 0.0);
    return buf;
}

std::string fmt(double x, int prec = 12) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

std::string summary(const HpcfpModel& m) {
    std::ostringstream os;
    os << "N=" << m.cycles.size();
    for (std::size_t i = 0; i < m.cycles.size(); ++i) {
        if (i) os << ";";
        os << " p=" << m.cycles[i].period << " degrees ";
        for (std::size_t j = 0; j < m.cycles[i].degrees.size(); ++j) os << (j ? "," : "") << m.cycles[i].degrees[j];
    }
    return os.str();
}

ClassifyParams classify_params(const ModelFile& mf) {
    ClassifyParams cp;
    cp.maxIter = mf.params.maxIter;
    cp.tol = mf.params.cycleTol;
    return cp;
}

const PoleData& need_pole_data(const ModelFile& mf) {
    if (!mf.poleData) throw UsageError("model has no pole_data");
    return *mf.poleData;
}

int cmd_check(const std::string& path) {
    const ModelFile mf = load_model(path);
    const HpcfpModel m = mf.model(classify_params(mf));
    const ConditionReport r = check_condition(m, need_pole_data(mf));
    for (const auto& c : r.perCycle) {
        std::cout << "cycle " << c.cycle << ": " << c.product.str() << " < 1 " << (c.holds ? "OK" : "FAIL");
        if (!c.picked) std::cout << " (no picked domain)";
        std::cout << "\n";
    }
    std::cout << "pole data degree " << r.degree << ", map degree " << m.degree + r.degree << "\n";
    std::cout << "condition " << (r.overall ? "holds" : "fails") << "\n";
    return r.overall ? kOk : kNegative;
}

int cmd_eig(const std::string& path, int cycle) {
    const ModelFile mf = load_model(path);
    const HpcfpModel m = mf.model(classify_params(mf));
    const PoleData& d = need_pole_data(mf);
    validate_pole_data(m, d);
    if (cycle != 0 && (cycle < 1 || cycle > static_cast<int>(m.cycles.size())))
        throw UsageError("cycle index " + std::to_string(cycle) + " out of range 1.." + std::to_string(m.cycles.size()));
    bool all = true;
    for (const auto& c : m.cycles) {
        if (cycle != 0 && c.index != cycle) continue;
        const TransitionMatrix t = transition_matrix(m, d, c.index);
        const ExactEigenvalue ex = leading_eigenvalue_exact(t);
        const double closed = ex.value();
        const double power = power_iteration_eigenvalue(t);
        const bool below = ex.product < ExactRational(1);
        all = all && below;
        std::cout << "cycle " << c.index << ": product " << ex.product.str() << ", p=" << ex.root
                  << ", lambda=" << fmt(closed, 15) << ", power-iteration=" << fmt(power, 15)
                  << ", diff=" << fmt(std::abs(closed - power), 3) << (below ? " (<1)" : " (>=1)") << "\n";
    }
    return all ? kOk : kNegative;
}

int cmd_classify(const std::string& polyText, const std::string& path) {
    if (polyText.empty() == path.empty()) throw UsageError("give exactly one of --poly and a model file");
    ClassifyParams cp;
    std::optional<ComplexPoly> p;
    if (!polyText.empty()) {
        p = parse_poly(polyText);
    } else {
        const ModelFile mf = load_model(path);
        cp = classify_params(mf);
        if (mf.abstractModel) {
            const HpcfpModel m = from_abstract(*mf.abstractModel);
            std::cout << summary(m) << "\n";
            const auto rh = riemann_hurwitz_check(m);
            std::cout << "Riemann-Hurwitz: " << rh.expected << " = " << rh.observed << (rh.holds ? " OK" : " FAIL") << "\n";
            return kOk;
        }
        p = *mf.polynomial;
    }
    if (p->degree() < 2) throw UsageError("polynomial degree must be >= 2");
    HpcfpModel m;
    try {
        m = classify_polynomial(*p, cp);
    } catch (const NotHpcfp& e) {
        std::cout << "NotHpcfp: " << e.what() << "\n";
        return kNegative;
    } catch (const MultiplierNotZero& e) {
        std::cout << "MultiplierNotZero: " << e.what() << "\n";
        return kNegative;
    }
    std::cout << summary(m) << "\n";
    for (const auto& c : m.cycles) {
        std::cout << "cycle " << c.index << " (period " << c.period << "):";
        for (std::size_t j = 0; j < c.points.size(); ++j)
            std::cout << " U" << j << "=" << fmt(c.points[j]) << "[n=" << c.degrees[j] << "]";
        std::cout << "\n";
    }
    for (const auto& a : m.critical)
        std::cout << "critical " << fmt(a.point) << " x" << a.multiplicity << " -> cycle " << a.cycle << " phase "
                  << a.phase << " preperiod " << a.preperiod << "\n";
    const auto rh = riemann_hurwitz_check(m);
    std::cout << "Riemann-Hurwitz: " << rh.expected << " = " << rh.observed << (rh.holds ? " OK" : " FAIL") << "\n";
    for (const auto& w : m.warnings) std::cout << "warning: " << w << "\n";
    return kOk;
}

int cmd_plan(const std::string& path, int cycle, std::optional<double> r, double C, double seed) {
    const ModelFile mf = load_model(path);
    const HpcfpModel m = mf.model(classify_params(mf));
    const PoleData& d = need_pole_data(mf);
    const ConditionReport rep = check_condition(m, d);
    if (cycle != 0 && (cycle < 1 || cycle > static_cast<int>(m.cycles.size())))
        throw UsageError("cycle index out of range");
    if (C < 0.0) throw UsageError("--groetzsch-c must be >= 0");
    if (r && !(*r > 0.0 && *r < 1.0)) throw UsageError("--r must lie in (0,1)");
    if (!(seed > 0.0)) throw UsageError("--seed must be > 0");

    bool ok = true;
    for (const auto& cc : rep.perCycle) {
        if (cycle != 0 && cc.cycle != cycle) continue;
        if (!cc.picked) {
            std::cout << "cycle " << cc.cycle << ": no picked domain, nothing to plan\n";
            continue;
        }
        if (!cc.holds) {
            std::cout << "cycle " << cc.cycle << ": product " << cc.product.str() << " is not < 1, no plan exists\n";
            ok = false;
            continue;
        }
        const SurgeryConstants sc = compute_alpha_beta(m, d, cc.cycle, seed);
        const double rs = r_threshold(sc, C);
        const double rr = r.value_or(rs < 1.0 ? rs / 2.0 : 0.5);
        const LevelPlan plan = plan_levels(sc, rr, C);
        const bool nr = check_non_recurrence(plan, sc);
        std::cout << "cycle " << cc.cycle << ": M=" << fmt(sc.M) << " closure error " << fmt(sc.closureError, 3) << "\n";
        for (int j : sc.J) {
            const Levels& L = plan.levels.at(j);
            std::cout << "  phase " << j << ": t=" << sc.tGaps.at(j) << " alpha=" << fmt(sc.alpha.at(j))
                      << " beta=" << fmt(sc.beta.at(j)) << " delta=" << fmt(plan.delta.at(j)) << " levels out="
                      << fmt(L.out, 6) << " in=" << fmt(L.in, 6) << " inf=" << fmt(L.inf, 6)
                      << " chain gap=" << fmt(sc.chain_gap(j)) << "\n";
        }
        std::cout << "  C=" << fmt(C) << " r*=" << fmt(rs, 6) << " r=" << fmt(rr, 6) << "\n";
        std::cout << "  level order " << (plan.levelOrderOk ? "OK" : "FAIL") << ", threshold "
                  << (plan.thresholdOk ? "OK" : "FAIL") << ", non-recurrence " << (nr ? "OK" : "FAIL") << "\n";
        ok = ok && nr && plan.status == PlanStatus::Ok;
    }
    return ok ? kOk : kNegative;
}

int cmd_verify(const std::string& path, const std::string& lambda, std::optional<double> poleBall,
               std::optional<int> maxIter) {
    const ModelFile mf = load_model(path);
    if (!mf.polynomial || !mf.family) throw UsageError("verify needs a polynomial model with a family");
    const PoleData& d = need_pole_data(mf);
    const HpcfpModel m = mf.model(classify_params(mf));
    validate_pole_data(m, d);
    std::optional<Complex> lam;
    if (!lambda.empty()) lam = parse_complex(lambda);
    const RationalMapExpr f = mf.family->build(*mf.polynomial, lam);

    VerifyParams vp;
    vp.maxIter = maxIter.value_or(mf.params.maxIter);
    vp.escapeRadius = mf.params.escapeRadius;
    vp.poleBall = poleBall.value_or(mf.params.poleBall);
    vp.cycleTol = mf.params.cycleTol;
    vp.classify = classify_params(mf);
    if (!(vp.poleBall > 0.0) || vp.maxIter < 1) throw UsageError("invalid verification parameters");

    const VerificationVerdict v = verify_family(f, m, d, vp);
    std::cout << "lambda " << fmt(lam.value_or(mf.family->lambda)) << "\n";
    for (const auto& s : v.details) std::cout << "  " << s << "\n";
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::cout << "degree ok: " << yn(v.degreeOk) << "\n"
              << "census ok: " << yn(v.censusOk) << "\n"
              << "free critical orbits consistent: " << yn(v.allFreeCriticalsConsistent) << "\n"
              << "untouched cycles persist: " << yn(v.untouchedCyclesPersist) << "\n"
              << "condition holds: " << yn(v.conditionHolds) << "\n";
    const bool pass = v.pass() && v.conditionHolds;
    std::cout << "verdict: " << (pass ? "PASS" : (v.conditionHolds ? "FAIL" : "FAIL (not expected to pass)")) << "\n";
    return pass ? kOk : kNegative;
}

int cmd_skew(int n, int d, int depth, int horizon, const std::string& code, int threads) {
    if (n < 1 || d < 1) throw UsageError("--n and --d must be >= 1");
    if (!code.empty()) {
        const CodeWord c = CodeWord::from_string(code);
        const int h = horizon < 0 ? c.depth - 1 : horizon;
        if (h > c.depth - 1) throw UsageError("--horizon must be <= depth-1");
        std::cout << code << ": " << describe(classify_code(c, h)) << "\n";
        return kOk;
    }
    if (depth < 1 || depth > 20) throw UsageError("--depth must lie in 1..20");
    const int h = horizon < 0 ? depth - 1 : horizon;
    if (h > depth - 1) throw UsageError("--horizon must be <= depth-1");
    const SkewCensus c = census_at_depth(depth, h, threads);
    const auto oracle = unburied_by_preimages(depth, h);
    std::uint64_t oracleCount = 0;
    for (int x : oracle) oracleCount += x >= 0 ? 1 : 0;
    const bool agree = oracleCount == c.unburied;
    std::cout << "depth " << depth << " horizon " << h << " (n=" << n << ", d=" << d << ")\n"
              << "unburied            " << c.unburied << "\n"
              << "buried preperiodic  " << c.preperiodic << "\n"
              << "buried wandering    " << c.wandering << "\n"
              << "total               " << c.total() << " of " << (1ULL << depth) << "\n"
              << "oracle unburied     " << oracleCount << (agree ? " agree" : " DISAGREE") << "\n";
    return agree && c.total() == (1ULL << depth) ? kOk : kNegative;
}

struct RenderOpts {
    std::string out;
    std::string text;
    int width = 512;
    int height = 512;
    std::string center = "0:0";
    double halfWidth = 1.5;
    int maxIter = 512;
    std::string lambda;
    bool diagnostics = false;
    int symmetry = 0;
    double ray = 0.1;
    double rMin = 1e-3;
    double rMax = 1.6;
    int samples = 4096;
    int threads = 0;
};

int cmd_render(const std::string& path, const RenderOpts& o) {
    const ModelFile mf = load_model(path);
    if (!mf.polynomial) throw UsageError("render needs a polynomial model");
    if (o.width < 1 || o.height < 1 || !(o.halfWidth > 0.0) || o.maxIter < 1)
        throw UsageError("invalid render geometry");
    RenderSpec spec;
    std::optional<Complex> lam;
    if (!o.lambda.empty()) lam = parse_complex(o.lambda);
    spec.map = mf.family ? mf.family->build(*mf.polynomial, lam) : RationalMapExpr(*mf.polynomial);
    spec.width = o.width;
    spec.height = o.height;
    spec.center = parse_complex(o.center);
    spec.halfWidth = o.halfWidth;
    spec.maxIter = o.maxIter;
    spec.escapeRadius = mf.params.escapeRadius;
    spec.threads = o.threads;
    try {
        const HpcfpModel m = classify_polynomial(*mf.polynomial, classify_params(mf));
        std::vector<Attractor> at;
        for (const auto& c : m.cycles) at.push_back({c.points, c.period});
        spec.attractors = at;
    } catch (const std::exception&) {
        // No bounded cycles to colour; basins then share the fallback id.
    }
    const ClassGrid g = classify_grid(spec);
    write_ppm(g, o.out);
    std::cout << "wrote " << o.out << " (" << g.width << "x" << g.height << ")\n";
    if (!o.text.empty()) {
        std::ofstream t(o.text);
        if (!t) throw std::runtime_error("cannot open " + o.text + " for writing");
        t << grid_to_text(g);
        std::cout << "wrote " << o.text << "\n";
    }
    if (o.diagnostics) {
        int m = o.symmetry;
        if (m == 0) {
            m = spec.map.base().degree();
            if (spec.map.pole_count() == 1 && spec.map.pole_location(0) == Complex{}) m += spec.map.pole_order(0);
        }
        std::cout << "rotational symmetry (m=" << m << "): " << fmt(rotational_symmetry_score(g, std::max(2, m)), 6) << "\n";
        const RadialProfile rp = radial_profile(spec, o.ray, o.rMin, o.rMax, o.samples);
        std::cout << "radial alternations (angle " << fmt(o.ray) << ", r in [" << fmt(o.rMin) << ", " << fmt(o.rMax)
                  << "], " << o.samples << " samples): " << rp.alternations << "\n";
    }
    return kOk;
}

NormalizedType normalized(const std::string& path) {
    const ModelFile mf = load_model(path);
    if (!mf.polynomial) throw UsageError(path + ": typecmp needs a polynomial model");
    const ClassifyParams cp = classify_params(mf);
    const HpcfpModel m = classify_polynomial(*mf.polynomial, cp);
    return normalize_type(m, mf.poleData.value_or(PoleData{}), cp);
}

void print_type(const std::string& label, const NormalizedType& t) {
    std::cout << label << ": coefficients";
    for (const auto& c : t.coeffs) std::cout << " " << fmt(c, 10);
    std::cout << "; cycles";
    for (std::size_t i = 0; i < t.cycles.size(); ++i) {
        std::cout << " [p=" << t.cycles[i].period << " n=";
        for (std::size_t j = 0; j < t.cycles[i].degrees.size(); ++j) std::cout << (j ? "," : "") << t.cycles[i].degrees[j];
        std::cout << " d=";
        for (std::size_t j = 0; j < t.poleDegrees[i].size(); ++j) std::cout << (j ? "," : "") << t.poleDegrees[i][j];
        std::cout << "]";
    }
    std::cout << "\n";
}

int cmd_typecmp(const std::string& a, const std::string& b) {
    NormalizedType ta, tb;
    try {
        ta = normalized(a);
        tb = normalized(b);
    } catch (const NotHpcfp& e) {
        throw std::runtime_error(std::string("classification failed: ") + e.what());
    }
    print_type("A", ta);
    print_type("B", tb);
    const bool eq = types_equal(ta, tb);
    std::cout << (eq ? "types equal" : "types differ") << "\n";
    return eq ? kOk : kNegative;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pole-data types, arithmetic condition, surgery planning and orbit verification"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("--verbose", verbose, "Print timing to stderr");

    std::string model, modelB, poly, lambda, code;
    int cycle = 0;
    std::optional<double> r, poleBall;
    std::optional<int> maxIterOpt;
    double C = 1.0, seed = 1.0;
    int n = 2, d = 1, depth = 10, horizon = -1, threads = 0;
    RenderOpts ro;

    auto* check = app.add_subcommand("check", "Decide the arithmetic condition exactly");
    check->add_option("model", model, "Model file")->required();

    auto* eig = app.add_subcommand("eig", "Leading eigenvalue of each cycle's transition matrix");
    eig->add_option("model", model, "Model file")->required();
    eig->add_option("--cycle", cycle, "Cycle index (default: all)");

    auto* classify = app.add_subcommand("classify", "Extract the cycle skeleton of a polynomial");
    auto* polyOpt = classify->add_option("--poly", poly, "Ascending coefficients, e.g. 1,0,-3,2 or 0:1,1");
    classify->add_option("model", model, "Model file")->excludes(polyOpt);

    auto* plan = app.add_subcommand("plan", "Surgery constants and equipotential levels");
    plan->add_option("model", model, "Model file")->required();
    plan->add_option("--cycle", cycle, "Cycle index (default: all picked cycles)");
    plan->add_option("--r", r, "Level scale r in (0,1) (default r*/2)");
    plan->add_option("--groetzsch-c", C, "Groetzsch constant C >= 0")->capture_default_str();
    plan->add_option("--seed", seed, "Alpha at the first picked phase")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Numerically verify a perturbed family");
    verify->add_option("model", model, "Model file with a family")->required();
    verify->add_option("--lambda", lambda, "Override lambda: re or re:im");
    verify->add_option("--pole-ball", poleBall, "Passage acceptance radius (default from model)");
    verify->add_option("--max-iter", maxIterOpt, "Iteration cap (default from model)");

    auto* skew = app.add_subcommand("skew", "Census of the symbolic skew product");
    skew->add_option("--n", n, "Degree on the 1-branch")->capture_default_str();
    skew->add_option("--d", d, "Degree on the 0-branch")->capture_default_str();
    skew->add_option("--depth", depth, "Cylinder depth (<= 20)")->capture_default_str();
    skew->add_option("--horizon", horizon, "Iteration horizon (default depth-1)");
    skew->add_option("--code", code, "Classify a single code instead");
    skew->add_option("--threads", threads, "Worker threads (0 = MCM_THREADS or auto)");

    auto* render = app.add_subcommand("render", "Orbit-classification image (binary PPM)");
    render->add_option("model", model, "Model file")->required();
    render->add_option("--out", ro.out, "Output PPM path")->required();
    render->add_option("--text", ro.text, "Also write the grid as text tags");
    render->add_option("--width", ro.width)->capture_default_str();
    render->add_option("--height", ro.height)->capture_default_str();
    render->add_option("--center", ro.center, "re:im")->capture_default_str();
    render->add_option("--half-width", ro.halfWidth)->capture_default_str();
    render->add_option("--max-iter", ro.maxIter)->capture_default_str();
    render->add_option("--lambda", ro.lambda, "Override lambda: re or re:im");
    render->add_flag("--diagnostics", ro.diagnostics, "Print symmetry score and radial alternations");
    render->add_option("--symmetry", ro.symmetry, "Rotation order for the score (default from the map)");
    render->add_option("--ray", ro.ray, "Ray angle for the radial profile")->capture_default_str();
    render->add_option("--r-min", ro.rMin)->capture_default_str();
    render->add_option("--r-max", ro.rMax)->capture_default_str();
    render->add_option("--samples", ro.samples)->capture_default_str();
    render->add_option("--threads", ro.threads, "Worker threads (0 = MCM_THREADS or auto)");

    auto* typecmp = app.add_subcommand("typecmp", "Compare affine conjugacy types");
    typecmp->add_option("modelA", model, "First model")->required();
    typecmp->add_option("modelB", modelB, "Second model")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int rc = kError;
    try {
        if (*check) rc = cmd_check(model);
        else if (*eig) rc = cmd_eig(model, cycle);
        else if (*classify) rc = cmd_classify(poly, model);
        else if (*plan) rc = cmd_plan(model, cycle, r, C, seed);
        else if (*verify) rc = cmd_verify(model, lambda, poleBall, maxIterOpt);
        else if (*skew) rc = cmd_skew(n, d, depth, horizon, code, threads);
        else if (*render) rc = cmd_render(model, ro);
        else if (*typecmp) rc = cmd_typecmp(model, modelB);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kError;
    } catch (const SchemaError& e) {
        std::cerr << "error: schema: " << e.what() << "\n";
        rc = kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kError;
    }
    if (verbose) {
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "elapsed " << s << " s\n";
    }
    return rc;
}
