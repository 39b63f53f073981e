// drg: command-line driver for the Damek-Ricci geometry toolkit.
//
// Every subcommand reads an optional JSON config (merged over built-in
// defaults, then overridden by flags), runs its checks and prints a JSON
// report to stdout (and to --out when given). Reports are deterministic:
// a fixed config produces byte-identical bytes on every run.
//
// Exit codes: 0 all checks passed, 1 a check failed or the input data was
// rejected by a domain validation (the report carries the reason), 2 usage
// or config errors (bad flags, missing or malformed config file).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "drg/algebra.hpp"
#include "drg/coeffsys.hpp"
#include "drg/confsys.hpp"
#include "drg/curvature.hpp"
#include "drg/errors.hpp"
#include "drg/io.hpp"
#include "drg/polynomial.hpp"
#include "drg/probe.hpp"
#include "drg/rng.hpp"
#include "drg/space.hpp"
#include "drg/spaceforms.hpp"
#include "drg/tensor.hpp"

namespace {

using drg::Mat;
using drg::Vec;
using drg::io::json;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> samples;
    int workers = 1;
    std::string out_path;
};

// ---------------------------------------------------------------------------
// Config plumbing

/// Defaults overlaid with the config file (if any). A file that is a bare
/// algebra spec ({"family": ...} or {"j_maps": ...}) is accepted and nested
/// under `wrap_key` so the two spellings are interchangeable.
json effective_config(json defaults, const CommonOpts& opts, const char* wrap_key) {
    if (!opts.config_path.empty()) {
        json loaded = drg::io::load_json_file(opts.config_path);
        if (!loaded.is_object())
            throw drg::ConfigError("config root must be a JSON object: " + opts.config_path);
        if (wrap_key && (loaded.contains("family") || loaded.contains("j_maps"))) {
            json wrapped;
            wrapped[wrap_key] = loaded;
            loaded = std::move(wrapped);
        }
        for (auto& [key, value] : loaded.items())
            defaults[key] = value;
    }
    if (opts.seed)
        defaults["seed"] = *opts.seed;
    return defaults;
}

void reject_unknown_keys(const json& cfg, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : cfg.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw drg::ConfigError("unknown config key \"" + key + "\"");
    }
}

double cfg_number(const json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_number())
        throw drg::ConfigError(std::string("config key \"") + key + "\" must be a number");
    return cfg.at(key).get<double>();
}

/// Tolerances may be zero (all finite-difference checks then fail, by
/// design) but never negative.
double cfg_tolerance(const json& cfg, const char* key) {
    const double value = cfg_number(cfg, key);
    if (value < 0.0)
        throw drg::ConfigError(std::string("config key \"") + key + "\" must be non-negative");
    return value;
}

int cfg_count(const json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_number_integer())
        throw drg::ConfigError(std::string("config key \"") + key + "\" must be an integer");
    const int value = cfg.at(key).get<int>();
    if (value < 1)
        throw drg::ConfigError(std::string("config key \"") + key + "\" must be at least 1");
    return value;
}

bool cfg_flag(const json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_boolean())
        throw drg::ConfigError(std::string("config key \"") + key + "\" must be a boolean");
    return cfg.at(key).get<bool>();
}

std::uint64_t cfg_seed(const json& cfg) {
    if (!cfg.contains("seed") || !cfg.at("seed").is_number_integer())
        throw drg::ConfigError("config key \"seed\" must be an integer");
    if (cfg.at("seed").is_number_unsigned())
        return cfg.at("seed").get<std::uint64_t>();
    const std::int64_t value = cfg.at("seed").get<std::int64_t>();
    if (value < 0)
        throw drg::ConfigError("config key \"seed\" must be non-negative");
    return static_cast<std::uint64_t>(value);
}

json default_space() {
    json spec;
    spec["family"] = "heisenberg";
    spec["multiplicity"] = 1;
    return spec;
}

// ---------------------------------------------------------------------------
// Check accounting and report emission

struct CheckSet {
    json items = json::array();
    bool all_passed = true;

    void value(const std::string& name, double measured, double bound) {
        const bool ok = std::isfinite(measured) && measured <= bound;
        json check;
        check["name"] = name;
        check["measured"] = measured;
        check["bound"] = bound;
        check["passed"] = ok;
        items.push_back(std::move(check));
        all_passed = all_passed && ok;
    }

    void flag(const std::string& name, bool ok, const std::string& detail = "") {
        json check;
        check["name"] = name;
        check["passed"] = ok;
        if (!detail.empty())
            check["detail"] = detail;
        items.push_back(std::move(check));
        all_passed = all_passed && ok;
    }
};

int emit_report(json report, bool passed, const CommonOpts& opts) {
    report["passed"] = passed;
    const std::string text = report.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!opts.out_path.empty())
        drg::io::write_text_file(opts.out_path, text);
    return passed ? 0 : 1;
}

int finish(const std::string& command, const json& cfg, json payload, const CheckSet& checks,
           const CommonOpts& opts) {
    json report = drg::io::report_envelope(command, cfg);
    for (auto& [key, value] : payload.items())
        report[key] = value;
    report["checks"] = checks.items;
    return emit_report(std::move(report), checks.all_passed, opts);
}

const char* error_name(const drg::Error& err) {
    if (dynamic_cast<const drg::NotSkew*>(&err)) return "NotSkew";
    if (dynamic_cast<const drg::CliffordViolation*>(&err)) return "CliffordViolation";
    if (dynamic_cast<const drg::DimensionMismatch*>(&err)) return "DimensionMismatch";
    if (dynamic_cast<const drg::UnsupportedFamily*>(&err)) return "UnsupportedFamily";
    if (dynamic_cast<const drg::NotUnit*>(&err)) return "NotUnit";
    if (dynamic_cast<const drg::NonFinitePoint*>(&err)) return "NonFinitePoint";
    if (dynamic_cast<const drg::NonFinite*>(&err)) return "NonFinite";
    if (dynamic_cast<const drg::BasisNotAligned*>(&err)) return "BasisNotAligned";
    if (dynamic_cast<const drg::SingularMetric*>(&err)) return "SingularMetric";
    if (dynamic_cast<const drg::ShapeMismatch*>(&err)) return "ShapeMismatch";
    if (dynamic_cast<const drg::ChartPole*>(&err)) return "ChartPole";
    if (dynamic_cast<const drg::NonPositiveY*>(&err)) return "NonPositiveY";
    if (dynamic_cast<const drg::NonPositiveW*>(&err)) return "NonPositiveW";
    if (dynamic_cast<const drg::Overflow*>(&err)) return "Overflow";
    if (dynamic_cast<const drg::TruncationTooSmall*>(&err)) return "TruncationTooSmall";
    if (dynamic_cast<const drg::IllConditionedBasis*>(&err)) return "IllConditionedBasis";
    if (dynamic_cast<const drg::InconclusiveSampling*>(&err)) return "InconclusiveSampling";
    return "Error";
}

// ---------------------------------------------------------------------------
// verify-algebra

int run_verify_algebra(const CommonOpts& opts, json& cfg) {
    json defaults;
    defaults["algebra"] = default_space();
    defaults["seed"] = 0;
    defaults["tol"] = 1e-10;
    defaults["samples"] = 5;
    cfg = effective_config(defaults, opts, "algebra");
    if (opts.tol)
        cfg["tol"] = *opts.tol;
    if (opts.samples)
        cfg["samples"] = *opts.samples;
    reject_unknown_keys(cfg, {"algebra", "seed", "tol", "samples"});
    const double tol = cfg_tolerance(cfg, "tol");
    const int samples = cfg_count(cfg, "samples");
    if (!cfg.contains("algebra"))
        throw drg::ConfigError("verify-algebra: missing \"algebra\" config");

    const auto alg = drg::io::algebra_from_json(cfg.at("algebra"));
    const int k = alg.dim_v();
    const int m = alg.dim_center();

    CheckSet checks;
    double skew = 0.0, clifford = 0.0, antisym = 0.0, isometry = 0.0;
    for (int r = 0; r < m; ++r) {
        const Mat& jr = alg.j_map(r);
        skew = std::max(skew, (jr + jr.transpose()).cwiseAbs().maxCoeff());
        antisym = std::max(
            antisym, (alg.structure_slice(r) + alg.structure_slice(r).transpose()).cwiseAbs().maxCoeff());
        isometry = std::max(isometry,
                            (jr.transpose() * jr - Mat::Identity(k, k)).cwiseAbs().maxCoeff());
        for (int s = 0; s < m; ++s) {
            const Mat& js = alg.j_map(s);
            const double delta = (r == s) ? 2.0 : 0.0;
            clifford = std::max(
                clifford,
                (jr * js + js * jr + delta * Mat::Identity(k, k)).cwiseAbs().maxCoeff());
        }
    }
    checks.value("skew_symmetry", skew, tol);
    checks.value("clifford_relation", clifford, tol);
    checks.value("structure_antisymmetry", antisym, tol);
    checks.value("j_isometry", isometry, tol);

    // ad-splits at random unit vectors: J_z V spans m directions, the
    // kernel of ad_V the remaining k - m, and the two stay orthonormal.
    drg::Rng rng(cfg_seed(cfg));
    bool dims_ok = true;
    double ortho = 0.0;
    for (int t = 0; t < samples; ++t) {
        Vec v;
        do {
            v = rng.uniform_vec(k, -1.0, 1.0);
        } while (v.norm() < 1e-6);
        v /= v.norm();
        const auto split = drg::kernel_ad(alg, v);
        dims_ok = dims_ok && split.j_image.cols() == m && split.kernel.cols() == k - m;
        Mat joint(k, split.j_image.cols() + split.kernel.cols());
        joint << split.j_image, split.kernel;
        ortho = std::max(
            ortho, (joint.transpose() * joint - Mat::Identity(joint.cols(), joint.cols()))
                       .cwiseAbs()
                       .maxCoeff());
    }
    checks.flag("ad_split_dims", dims_ok,
                "image rank m = " + std::to_string(m) + ", kernel rank k - m = " +
                    std::to_string(k - m) + " at " + std::to_string(samples) + " unit vectors");
    checks.value("ad_split_orthonormal", ortho, std::max(tol, 1e-12));

    Vec e1 = Vec::Zero(k);
    e1(0) = 1.0;
    checks.flag("align_basis", drg::align_basis(alg, e1).basis_aligned(),
                "frame convention V2 = J_1 V1 reachable by an orthogonal change of basis");

    const auto j2 = drg::j2_condition(alg);
    json payload;
    payload["dim_v"] = k;
    payload["dim_center"] = m;
    payload["dim"] = k + m;
    payload["basis_aligned"] = alg.basis_aligned();
    json j2info;
    j2info["holds"] = j2.holds;
    j2info["max_residual"] = j2.max_residual;
    payload["j2_closure"] = std::move(j2info);
    return finish("verify-algebra", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// verify-tables

int run_verify_tables(const CommonOpts& opts, json& cfg) {
    json defaults;
    defaults["space"] = default_space();
    defaults["seed"] = 0;
    defaults["points"] = 20;
    defaults["tol"] = 1e-7;
    cfg = effective_config(defaults, opts, "space");
    if (opts.tol)
        cfg["tol"] = *opts.tol;
    if (opts.samples)
        cfg["points"] = *opts.samples;
    reject_unknown_keys(cfg, {"space", "seed", "points", "tol"});
    const double tol = cfg_tolerance(cfg, "tol");
    const int points = cfg_count(cfg, "points");

    const drg::DamekRicciSpace space = drg::io::space_from_json(cfg);
    if (!space.algebra().basis_aligned())
        throw drg::BasisNotAligned("verify-tables requires the aligned frame (V2 = J_1 V1); "
                                   "run align_basis on the algebra first");
    const int k = space.algebra().dim_v();
    const int n = space.dim();
    const drg::MatrixFn metric = [&space](const Vec& q) -> Mat { return space.metric_at(q); };

    // The paper's s0-frame tables, rows/columns ordered (V1, J_Z V1, Z1, A).
    std::array<Mat, 4> expected;
    for (auto& t : expected)
        t = Mat::Zero(4, 4);
    expected[0](0, 3) = expected[0](3, 0) = 0.5;
    expected[0](1, 2) = expected[0](2, 1) = -1.0;
    expected[1](0, 2) = expected[1](2, 0) = 1.0;
    expected[1](1, 3) = expected[1](3, 1) = 0.5;
    expected[2](2, 3) = expected[2](3, 2) = 1.0;
    expected[3].diagonal() << -1.0, -1.0, -2.0, 0.0;
    const std::array<std::string, 4> names = {"V1", "JV1", "Z1", "A"};
    const std::array<int, 4> columns = {0, 1, k, n - 1};

    drg::Rng rng(cfg_seed(cfg));
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        pts.push_back(rng.uniform_vec(n, -1.0, 1.0));

    CheckSet checks;
    json tables = json::array();
    for (int t = 0; t < 4; ++t) {
        drg::CoordinateVectorField field;
        field.dim = n;
        const int col = columns[static_cast<std::size_t>(t)];
        field.value = [&space, col](const Vec& q) -> Vec { return space.frame_at(q).col(col); };
        double max_err = 0.0;
        Mat first = Mat::Zero(4, 4);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Mat s0 = space.s0_subframe(pts[i]);
            const Mat lie = drg::lie_derivative_metric(metric, field, pts[i]);
            const Mat table = s0.transpose() * lie * s0;
            if (i == 0)
                first = table;
            max_err = std::max(max_err,
                               (table - expected[static_cast<std::size_t>(t)]).cwiseAbs().maxCoeff());
        }
        json entry;
        entry["field"] = names[static_cast<std::size_t>(t)];
        json exp_rows = json::array();
        json meas_rows = json::array();
        for (int r = 0; r < 4; ++r) {
            json er = json::array();
            json mr = json::array();
            for (int c = 0; c < 4; ++c) {
                er.push_back(expected[static_cast<std::size_t>(t)](r, c));
                mr.push_back(first(r, c));
            }
            exp_rows.push_back(std::move(er));
            meas_rows.push_back(std::move(mr));
        }
        entry["expected"] = std::move(exp_rows);
        entry["measured_at_first_point"] = std::move(meas_rows);
        entry["max_error"] = max_err;
        tables.push_back(std::move(entry));
        checks.value("lie_table_" + names[static_cast<std::size_t>(t)], max_err, tol);
    }

    json payload;
    payload["dim"] = n;
    payload["tables"] = std::move(tables);
    return finish("verify-tables", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// check-einstein

int run_check_einstein(const CommonOpts& opts, json& cfg) {
    json defaults;
    defaults["space"] = default_space();
    defaults["seed"] = 0;
    defaults["points"] = 6;
    defaults["box"] = 0.8;
    defaults["tol"] = 1e-3;
    cfg = effective_config(defaults, opts, "space");
    if (opts.tol)
        cfg["tol"] = *opts.tol;
    if (opts.samples)
        cfg["points"] = *opts.samples;
    reject_unknown_keys(cfg, {"space", "seed", "points", "box", "tol"});
    const double tol = cfg_tolerance(cfg, "tol");
    const int points = cfg_count(cfg, "points");
    const double box = cfg_number(cfg, "box");
    if (box <= 0.0)
        throw drg::ConfigError("config key \"box\" must be positive");

    const drg::DamekRicciSpace space = drg::io::space_from_json(cfg);
    const int n = space.dim();
    const drg::MatrixFn metric = [&space](const Vec& q) -> Mat { return space.metric_at(q); };

    drg::Rng rng(cfg_seed(cfg));
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        pts.push_back(rng.uniform_vec(n, -box, box));
    const auto result = drg::einstein_check(metric, pts);

    const double k = static_cast<double>(space.algebra().dim_v());
    const double m = static_cast<double>(space.algebra().dim_center());
    const double lambda_formula = -(k / 4.0 + m);

    CheckSet checks;
    checks.value("einstein_deviation", result.max_dev, tol);
    checks.value("lambda_spread", result.lambda_spread, tol);
    checks.flag("lambda_negative", result.lambda < 0.0,
                "measured lambda = " + std::to_string(result.lambda));
    checks.value("lambda_formula", std::abs(result.lambda - lambda_formula), tol);

    json payload;
    payload["dim"] = n;
    payload["lambda"] = result.lambda;
    payload["lambda_formula"] = lambda_formula;
    return finish("check-einstein", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// spaceform

int run_spaceform(const CommonOpts& opts, json& cfg) {
    json defaults;
    defaults["model"] = "euclidean";
    defaults["dim"] = 3;
    defaults["draws"] = 10;
    defaults["points"] = 20;
    defaults["seed"] = 0;
    defaults["tol"] = 1e-7;
    cfg = effective_config(defaults, opts, nullptr);
    if (opts.tol)
        cfg["tol"] = *opts.tol;
    if (opts.samples)
        cfg["points"] = *opts.samples;
    reject_unknown_keys(cfg, {"model", "dim", "draws", "points", "seed", "tol"});
    const double tol = cfg_tolerance(cfg, "tol");
    const int draws = cfg_count(cfg, "draws");
    const int points = cfg_count(cfg, "points");
    const int n = cfg_count(cfg, "dim");
    if (!cfg.contains("model") || !cfg.at("model").is_string())
        throw drg::ConfigError("config key \"model\" must be a string");
    const std::string model = cfg.at("model").get<std::string>();

    drg::MatrixFn metric;
    // Draws the model's parameter tuple and the chart points for one round.
    std::function<drg::SpaceFormField(drg::Rng&)> draw_field;
    std::function<Vec(drg::Rng&)> draw_point;
    if (model == "euclidean") {
        metric = drg::euclidean_metric(n);
        draw_field = [n](drg::Rng& rng) {
            drg::EuclideanParams p;
            p.a = rng.uniform_vec(n, -1.0, 1.0);
            p.A = rng.skew(n, 1.0);
            p.b1 = rng.uniform(-1.0, 1.0);
            p.b2 = rng.uniform_vec(n, -1.0, 1.0);
            return drg::euclidean_field(p);
        };
        draw_point = [n](drg::Rng& rng) { return rng.uniform_vec(n, -2.0, 2.0); };
    } else if (model == "sphere") {
        if (n < 2)
            throw drg::ConfigError("spaceform: sphere model needs dim >= 2");
        metric = drg::sphere_metric(n);
        draw_field = [n](drg::Rng& rng) {
            drg::SphereParams p;
            p.A = rng.skew(n + 1, 1.0);
            p.b = rng.uniform_vec(n + 1, -1.0, 1.0);
            return drg::sphere_field(p);
        };
        draw_point = [n](drg::Rng& rng) { return rng.uniform_vec(n, -2.0, 2.0); };
    } else if (model == "hyperbolic") {
        if (n < 2)
            throw drg::ConfigError("spaceform: hyperbolic model needs dim >= 2");
        metric = drg::hyperbolic_metric(n);
        draw_field = [n](drg::Rng& rng) {
            drg::HyperbolicParams p;
            p.a0 = rng.uniform_vec(n - 1, -1.0, 1.0);
            p.b0 = rng.uniform(-1.0, 1.0);
            p.A = rng.skew(n - 1, 1.0);
            p.b1 = rng.uniform_vec(n - 1, -1.0, 1.0);
            p.a1 = rng.uniform(-1.0, 1.0);
            p.a2 = rng.uniform_vec(n - 1, -1.0, 1.0);
            p.b2 = rng.uniform(-1.0, 1.0);
            return drg::hyperbolic_field(p);
        };
        draw_point = [n](drg::Rng& rng) {
            Vec q(n);
            for (int i = 0; i + 1 < n; ++i)
                q(i) = rng.uniform(-2.0, 2.0);
            q(n - 1) = rng.uniform(0.5, 2.5);
            return q;
        };
    } else {
        throw drg::ConfigError("spaceform: unknown model \"" + model +
                               "\" (expected euclidean, sphere or hyperbolic)");
    }

    drg::Rng rng(cfg_seed(cfg));
    double max_tracefree = 0.0;
    double max_rho_dev = 0.0;
    for (int d = 0; d < draws; ++d) {
        const auto sf = draw_field(rng);
        for (int i = 0; i < points; ++i) {
            const Vec p = draw_point(rng);
            const auto defect = drg::conformal_defect(metric, sf.field, p);
            max_tracefree = std::max(max_tracefree, defect.tracefree_norm);
            max_rho_dev = std::max(max_rho_dev, std::abs(defect.rho - sf.potential(p)));
        }
    }

    CheckSet checks;
    checks.value("tracefree_defect", max_tracefree, tol);
    checks.value("potential_match", max_rho_dev, tol);

    json payload;
    payload["model"] = model;
    payload["dim"] = n;
    payload["draws"] = draws;
    payload["points_per_draw"] = points;
    return finish("spaceform", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// confsys-residuals

int run_confsys(const CommonOpts& opts, json& cfg) {
    json defaults;
    defaults["space"] = default_space();
    json field_spec;
    field_spec["type"] = "generator";
    field_spec["name"] = "A";
    defaults["field"] = std::move(field_spec);
    defaults["seed"] = 0;
    defaults["points"] = 10;
    defaults["range"] = 0.8;
    defaults["tol"] = 1e-6;
    cfg = effective_config(defaults, opts, "space");
    if (opts.tol)
        cfg["tol"] = *opts.tol;
    if (opts.samples)
        cfg["points"] = *opts.samples;
    reject_unknown_keys(cfg, {"space", "field", "seed", "points", "range", "tol"});
    const double tol = cfg_tolerance(cfg, "tol");
    const int points = cfg_count(cfg, "points");
    const double range = cfg_number(cfg, "range");
    if (range <= 0.0)
        throw drg::ConfigError("config key \"range\" must be positive");

    const drg::DamekRicciSpace space = drg::io::space_from_json(cfg);
    if (!space.algebra().basis_aligned())
        throw drg::BasisNotAligned("confsys-residuals requires the aligned frame (V2 = J_1 V1)");
    const int k = space.algebra().dim_v();
    const int m = space.algebra().dim_center();
    const int n = space.dim();

    const json& field_cfg = cfg.at("field");
    if (!field_cfg.is_object() || !field_cfg.contains("type") ||
        !field_cfg.at("type").is_string())
        throw drg::ConfigError("config key \"field\" must be an object with a \"type\"");
    const std::string type = field_cfg.at("type").get<std::string>();
    drg::CoordinateVectorField field;
    std::string field_label;
    if (type == "generator") {
        if (!field_cfg.contains("name") || !field_cfg.at("name").is_string())
            throw drg::ConfigError("field type \"generator\" needs a \"name\"");
        const std::string name = field_cfg.at("name").get<std::string>();
        const auto gens = drg::right_invariant_generators(space);
        const auto it = std::find(gens.names.begin(), gens.names.end(), name);
        if (it == gens.names.end()) {
            std::string known;
            for (const auto& g : gens.names)
                known += (known.empty() ? "" : ", ") + g;
            throw drg::ConfigError("unknown generator \"" + name + "\" (have: " + known + ")");
        }
        field = gens.fields[static_cast<std::size_t>(it - gens.names.begin())];
        field_label = "generator " + name;
    } else {
        throw drg::ConfigError("unknown field type \"" + type + "\" (expected \"generator\")");
    }

    const drg::S0FieldData data = drg::s0_components(space, field);
    const drg::ScalarFn rho_fn = [&data](const Vec& q) {
        return drg::potential_from_f4(data, q);
    };

    // Lift the subframe components to functions of (z, w = e^a, n0) for the
    // Cauchy-Riemann check on F_i = e^a f_i.
    auto lift = [&](const drg::ScalarFn& f) -> drg::ZWFn {
        return [&, f](double z, double w, const Vec& n0) {
            Vec p(n);
            for (int i = 0; i < k; ++i)
                p(i) = n0(i);
            p(k) = z;
            for (int r = 1; r < m; ++r)
                p(k + r) = n0(k + r - 1);
            p(n - 1) = std::log(w);
            return w * f(p);
        };
    };
    const drg::ZWFn F3 = lift(data.f3);
    const drg::ZWFn F4 = lift(data.f4);

    drg::Rng rng(cfg_seed(cfg));
    double max_block = 0.0, max_sub = 0.0, max_cr = 0.0, max_pot = 0.0;
    for (int i = 0; i < points; ++i) {
        const Vec p = rng.uniform_vec(n, -range, range);
        const auto blocks = drg::block_residuals(space, data, rho_fn, p);
        max_block = std::max(max_block, blocks.max_abs());
        const auto sub = drg::subsystem_residuals(space, data, p);
        for (double r : sub)
            max_sub = std::max(max_sub, std::abs(r));
        const Vec n0 = drg::reduced_point(k, m, p);
        const auto cr = drg::cauchy_riemann_residual(F3, F4, p(k), std::exp(p(n - 1)), n0);
        max_cr = std::max(max_cr, std::max(std::abs(cr.first), std::abs(cr.second)));
        max_pot = std::max(max_pot, std::abs(rho_fn(p)));
    }

    CheckSet checks;
    checks.value("block_residuals", max_block, tol);
    checks.value("subsystem_residuals", max_sub, tol);
    checks.value("cauchy_riemann", max_cr, tol);

    json payload;
    payload["field"] = field_label;
    payload["dim"] = n;
    payload["potential_max"] = max_pot;
    return finish("confsys-residuals", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// coeffsys

double max_abs_coeff(const drg::Polynomial& poly) {
    double out = 0.0;
    for (const auto& [exps, coeff] : poly.terms()) {
        (void)exps;
        out = std::max(out, std::abs(coeff));
    }
    return out;
}

std::string unknown_label(const drg::UnknownKey& key) {
    switch (key.fn) {
    case drg::CoeffFn::C1:
        return "C1[" + std::to_string(key.m) + "]";
    case drg::CoeffFn::C2:
        return "C2[" + std::to_string(key.m) + "]";
    case drg::CoeffFn::C4:
        return "C4";
    case drg::CoeffFn::C5:
        return "C5";
    case drg::CoeffFn::C5m:
        return "C5m";
    }
    return "?";
}

int run_coeffsys(const CommonOpts& opts, json& cfg) {
    json defaults;
    defaults["space"] = default_space();
    defaults["truncation"] = 6;
    defaults["degree"] = 2;
    defaults["mirror"] = true;
    defaults["seed"] = 0;
    defaults["trials"] = 5;
    defaults["tol"] = 1e-10;
    defaults["conclusion_tol"] = 1e-9;
    defaults["stability"] = json::array({4, 6, 8});
    defaults["export_solutions"] = false;
    cfg = effective_config(defaults, opts, "space");
    if (opts.tol)
        cfg["conclusion_tol"] = *opts.tol;
    reject_unknown_keys(cfg, {"space", "truncation", "degree", "mirror", "seed", "trials", "tol",
                              "conclusion_tol", "stability", "export_solutions"});
    const int truncation = cfg_count(cfg, "truncation");
    const int degree = cfg_count(cfg, "degree");
    const bool mirror = cfg_flag(cfg, "mirror");
    const int trials = cfg_count(cfg, "trials");
    const double svd_tol = cfg_tolerance(cfg, "tol");
    const double ctol = cfg_tolerance(cfg, "conclusion_tol");
    if (!cfg.at("stability").is_array())
        throw drg::ConfigError("config key \"stability\" must be an array of truncations");

    const drg::DamekRicciSpace space = drg::io::space_from_json(cfg);
    if (!space.algebra().basis_aligned())
        throw drg::BasisNotAligned("coeffsys requires the aligned frame (V2 = J_1 V1)");
    const int k = space.algebra().dim_v();
    const int m = space.algebra().dim_center();
    const int n = space.dim();

    const auto sys = drg::build_system(truncation, degree, space, mirror);
    const Mat basis = drg::solve_system(sys, svd_tol);
    const int null_dim = static_cast<int>(basis.cols());

    CheckSet checks;
    checks.flag("nullspace_nonempty", null_dim > 0,
                "solution-space dimension " + std::to_string(null_dim));

    // Theorem conclusions: C4 and every C2 vanish, C1 survives only in
    // grades 1 and 2, so f4 = C1[1] + 2 z C1[2] and the potential is zero.
    double c4_max = 0.0, c2_max = 0.0, c1_high_max = 0.0;
    for (int c = 0; c < null_dim; ++c) {
        const Vec sol = basis.col(c);
        c4_max = std::max(c4_max,
                          max_abs_coeff(sys.coefficient_polynomial(sol, drg::CoeffFn::C4, 0)));
        for (int g = 1; g <= truncation; ++g)
            c2_max = std::max(c2_max,
                              max_abs_coeff(sys.coefficient_polynomial(sol, drg::CoeffFn::C2, g)));
        for (int g = 3; g <= truncation; ++g)
            c1_high_max = std::max(
                c1_high_max, max_abs_coeff(sys.coefficient_polynomial(sol, drg::CoeffFn::C1, g)));
    }
    checks.value("c4_vanishes", c4_max, ctol);
    checks.value("c2_vanishes", c2_max, ctol);
    checks.value("c1_high_grades_vanish", c1_high_max, ctol);

    drg::Rng rng(cfg_seed(cfg));
    double f4_dev = 0.0, rho_max = 0.0;
    for (int c = 0; c < null_dim; ++c) {
        const Vec sol = basis.col(c);
        const drg::Polynomial c11 = sys.coefficient_polynomial(sol, drg::CoeffFn::C1, 1);
        const drg::Polynomial c12 = sys.coefficient_polynomial(sol, drg::CoeffFn::C1, 2);
        for (int t = 0; t < trials; ++t) {
            const Vec p = rng.uniform_vec(n, -1.0, 1.0);
            Vec ring_pt(sys.ring_vars());
            ring_pt(0) = p(k); // z
            ring_pt(1) = p(0); // x
            ring_pt(2) = p(1); // y
            for (int i = 2; i < k; ++i)
                ring_pt(i + 1) = p(i);
            for (int r = 1; r < m; ++r)
                ring_pt(k + r) = p(k + r);
            const double expected = c11.eval(ring_pt) + 2.0 * p(k) * c12.eval(ring_pt);
            f4_dev = std::max(f4_dev,
                              std::abs(drg::f4_from_solution(sys, sol, p) - expected));
            rho_max = std::max(rho_max, std::abs(drg::rho_of_solution(sys, sol, p)));
        }
    }
    checks.value("f4_form", f4_dev, ctol);
    checks.value("potential_vanishes", rho_max, ctol);

    // Surviving unknowns across the whole solution basis.
    std::set<std::string> survivors;
    for (std::size_t id = 0; id < sys.unknowns().size(); ++id) {
        double weight = 0.0;
        for (int c = 0; c < null_dim; ++c)
            weight = std::max(weight, std::abs(basis(static_cast<int>(id), c)));
        if (weight > 1e-6)
            survivors.insert(unknown_label(sys.unknowns()[id]));
    }
    json surviving = json::array();
    for (const auto& name : survivors)
        surviving.push_back(name);

    // Stability of the solution-space dimension across truncation orders.
    json dims = json::array();
    bool stable = true;
    for (const json& entry : cfg.at("stability")) {
        if (!entry.is_number_integer() || entry.get<int>() < 1)
            throw drg::ConfigError("config key \"stability\" must list positive integers");
        const int mt = entry.get<int>();
        int dim_mt = null_dim;
        if (mt != truncation) {
            const auto alt = drg::build_system(mt, degree, space, mirror);
            dim_mt = static_cast<int>(drg::solve_system(alt, svd_tol).cols());
        }
        json d;
        d["truncation"] = mt;
        d["nullspace_dim"] = dim_mt;
        dims.push_back(std::move(d));
        stable = stable && dim_mt == null_dim;
    }
    if (!cfg.at("stability").empty())
        checks.flag("truncation_stability", stable,
                    "solution-space dimension is independent of the truncation order");

    json payload;
    payload["matrix_rows"] = static_cast<int>(sys.matrix().rows());
    payload["matrix_cols"] = static_cast<int>(sys.matrix().cols());
    payload["nullspace_dim"] = null_dim;
    payload["surviving"] = std::move(surviving);
    payload["stability"] = std::move(dims);
    if (cfg_flag(cfg, "export_solutions")) {
        json sols = json::array();
        for (int c = 0; c < null_dim; ++c)
            sols.push_back(
                drg::io::expansion_to_json(drg::expansion_from_solution(sys, basis.col(c))));
        payload["solutions"] = std::move(sols);
    }
    return finish("coeffsys", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// probe

int run_probe(const CommonOpts& opts, json& cfg) {
    json defaults;
    json chart_spec;
    chart_spec["type"] = "damek-ricci";
    chart_spec["space"] = default_space();
    defaults["chart"] = std::move(chart_spec);
    json ansatz_spec;
    ansatz_spec["degree"] = 2;
    defaults["ansatz"] = std::move(ansatz_spec);
    defaults["samples"] = 400;
    defaults["validation"] = 200;
    defaults["seed"] = 0;
    json tols;
    tols["svd"] = 1e-7;
    tols["rho"] = 1e-6;
    tols["defect"] = 1e-6;
    defaults["tolerances"] = std::move(tols);
    defaults["expect"] = "auto";
    defaults["annotate"] = true;
    cfg = effective_config(defaults, opts, nullptr);
    if (opts.samples)
        cfg["samples"] = *opts.samples;
    reject_unknown_keys(cfg, {"chart", "ansatz", "samples", "validation", "seed", "tolerances",
                              "expect", "annotate"});
    {
        // A config may pin a subset of the tolerances; fill the rest from
        // the defaults so the effective config is complete.
        json filled;
        filled["svd"] = 1e-7;
        filled["rho"] = 1e-6;
        filled["defect"] = 1e-6;
        const json user_tols = cfg.at("tolerances");
        if (!user_tols.is_object())
            throw drg::ConfigError("config key \"tolerances\" must be an object");
        for (const auto& [key, value] : user_tols.items()) {
            if (key != "svd" && key != "rho" && key != "defect")
                throw drg::ConfigError("unknown tolerance \"" + key + "\"");
            filled[key] = value;
        }
        cfg["tolerances"] = std::move(filled);
    }
    if (opts.tol) {
        cfg["tolerances"]["rho"] = *opts.tol;
        cfg["tolerances"]["defect"] = *opts.tol;
    }

    const json& chart_cfg = cfg.at("chart");
    if (!chart_cfg.is_object() || !chart_cfg.contains("type") ||
        !chart_cfg.at("type").is_string())
        throw drg::ConfigError("config key \"chart\" must be an object with a \"type\"");
    const std::string chart_type = chart_cfg.at("type").get<std::string>();

    std::optional<drg::DamekRicciSpace> space;
    drg::ProbeChart chart;
    if (chart_type == "damek-ricci") {
        space = drg::io::space_from_json(chart_cfg);
        chart = drg::damek_ricci_chart(*space);
    } else if (chart_type == "euclidean") {
        chart = drg::euclidean_chart(cfg_count(chart_cfg, "dim"));
    } else if (chart_type == "half-plane") {
        chart = drg::half_plane_chart();
    } else {
        throw drg::ConfigError("unknown chart type \"" + chart_type +
                               "\" (expected damek-ricci, euclidean or half-plane)");
    }

    drg::AnsatzSpec ansatz = drg::io::ansatz_from_json(cfg.at("ansatz"));
    // Damek-Ricci charts default to the symmetric exponential window unless
    // the config pins one; flat charts keep j = 0.
    if (chart.a_index >= 0 && !cfg.at("ansatz").contains("exp_min") &&
        !cfg.at("ansatz").contains("exp_max")) {
        ansatz.exp_min = -2;
        ansatz.exp_max = 2;
    }

    const int samples = cfg_count(cfg, "samples");
    const int validation = cfg_count(cfg, "validation");
    drg::ProbeTolerances tolerances;
    const json& tol_cfg = cfg.at("tolerances");
    if (!tol_cfg.is_object())
        throw drg::ConfigError("config key \"tolerances\" must be an object");
    tolerances.svd = cfg_tolerance(tol_cfg, "svd");
    tolerances.rho = cfg_tolerance(tol_cfg, "rho");
    tolerances.defect = cfg_tolerance(tol_cfg, "defect");

    if (!cfg.at("expect").is_string())
        throw drg::ConfigError("config key \"expect\" must be a string");
    std::string expect = cfg.at("expect").get<std::string>();
    std::replace(expect.begin(), expect.end(), '-', '_');
    if (expect == "auto")
        expect = (chart_type == "damek-ricci") ? "rigid" : "non_rigid";
    if (expect != "rigid" && expect != "non_rigid" && expect != "inconclusive" && expect != "any")
        throw drg::ConfigError("config key \"expect\" must be rigid, non-rigid, inconclusive, "
                               "auto or any");

    const auto report = drg::probe_rigidity(chart, ansatz, samples, validation, tolerances,
                                            cfg_seed(cfg), opts.workers);

    json payload = drg::io::rigidity_report_to_json(report);
    payload["expected_verdict"] = expect;
    payload["resolved_ansatz"] = drg::io::ansatz_to_json(ansatz);

    // Classify each nullspace field against the right-invariant generators
    // so the report names the symmetries the probe recovered.
    if (space && cfg_flag(cfg, "annotate")) {
        const auto basis = drg::enumerate_basis(chart, ansatz);
        json& fields = payload.at("fields");
        for (std::size_t i = 0; i < report.fields.size() && i < fields.size(); ++i) {
            const auto cand =
                drg::combined_field(chart, basis, report.fields[i].coefficients);
            const auto match = drg::match_killing(*space, cand);
            fields.at(i)["best_generator"] = match.best_generator;
            fields.at(i)["best_residual"] = match.best_residual;
            fields.at(i)["combination_residual"] = match.combination_residual;
            fields.at(i)["killing_like"] = match.killing_like;
        }
    }

    CheckSet checks;
    const std::string verdict = drg::io::verdict_to_string(report.verdict);
    checks.flag("verdict_matches_expectation", expect == "any" || verdict == expect,
                "verdict " + verdict + ", expected " + expect);
    return finish("probe", cfg, std::move(payload), checks, opts);
}

// ---------------------------------------------------------------------------
// Dispatch

using Runner = int (*)(const CommonOpts&, json&);

int dispatch(const std::string& command, Runner runner, const CommonOpts& opts) {
    json effective;
    try {
        return runner(opts, effective);
    } catch (const drg::ConfigError& err) {
        std::fprintf(stderr, "drg %s: config error: %s\n", command.c_str(), err.what());
        return 2;
    } catch (const drg::Error& err) {
        json report = drg::io::report_envelope(command, effective.is_null() ? json::object()
                                                                            : effective);
        json info;
        info["type"] = error_name(err);
        info["message"] = err.what();
        report["error"] = std::move(info);
        return emit_report(std::move(report), false, opts);
    } catch (const std::exception& err) {
        std::fprintf(stderr, "drg %s: internal error: %s\n", command.c_str(), err.what());
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drg: numerical Damek-Ricci geometry and conformal-rigidity toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(drg::kToolVersion));

    CommonOpts opts;
    auto add_common = [&opts](CLI::App* sub, bool with_seed, bool with_samples,
                              const char* samples_help, bool with_workers) {
        sub->add_option("--config", opts.config_path, "JSON config file");
        sub->add_option("--tol", opts.tol, "Override the check tolerance");
        if (with_seed)
            sub->add_option("--seed", opts.seed, "Override the RNG seed");
        if (with_samples)
            sub->add_option("--samples", opts.samples, samples_help)
                ->check(CLI::PositiveNumber);
        if (with_workers)
            sub->add_option("--workers", opts.workers, "Worker threads (results are identical "
                                                       "for any count)")
                ->check(CLI::PositiveNumber);
        sub->add_option("--out", opts.out_path, "Also write the report to this file");
    };

    struct Command {
        const char* name;
        const char* help;
        Runner runner;
        bool seed;
        bool samples;
        const char* samples_help;
        bool workers;
    };
    const std::vector<Command> commands = {
        {"verify-algebra", "Validate generalized Heisenberg algebra data", run_verify_algebra,
         true, true, "Number of random unit vectors for the ad-split checks", false},
        {"verify-tables", "Check the frame Lie-derivative tables of a Damek-Ricci space",
         run_verify_tables, true, true, "Number of sample points", false},
        {"check-einstein", "Verify the Einstein property of a Damek-Ricci metric",
         run_check_einstein, true, true, "Number of sample points", false},
        {"spaceform", "Check explicit conformal fields on a constant-curvature model",
         run_spaceform, true, true, "Points per parameter draw", false},
        {"confsys-residuals", "Evaluate the conformal-system residuals of a field",
         run_confsys, true, true, "Number of sample points", false},
        {"coeffsys", "Solve the truncated coefficient system and check its conclusions",
         run_coeffsys, true, false, "", false},
        {"probe", "Search an ansatz space for conformal fields and judge rigidity", run_probe,
         true, true, "Defect-operator sample count", true},
    };
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub, cmd.seed, cmd.samples, cmd.samples_help, cmd.workers);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    for (const auto& cmd : commands)
        if (app.got_subcommand(cmd.name))
            return dispatch(cmd.name, cmd.runner, opts);
    return 2;
}
