#include "drg/io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>

#include "drg/errors.hpp"

namespace drg::io {

namespace {

/// Require a key to be present; the message names the surrounding object so
/// config mistakes are reported with context.
const json& require(const json& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError(std::string(where) + ": missing required key \"" + key + "\"");
    return obj.at(key);
}

int require_int(const json& obj, const char* key, const char* where) {
    const json& value = require(obj, key, where);
    if (!value.is_number_integer())
        throw ConfigError(std::string(where) + ": \"" + key + "\" must be an integer");
    return value.get<int>();
}

double require_number(const json& obj, const char* key, const char* where) {
    const json& value = require(obj, key, where);
    if (!value.is_number())
        throw ConfigError(std::string(where) + ": \"" + key + "\" must be a number");
    return value.get<double>();
}

Mat matrix_from_json(const json& rows, const char* where) {
    if (!rows.is_array() || rows.empty())
        throw ConfigError(std::string(where) + ": matrix must be a non-empty array of rows");
    const auto nrows = static_cast<Eigen::Index>(rows.size());
    Eigen::Index ncols = -1;
    Mat out;
    for (Eigen::Index i = 0; i < nrows; ++i) {
        const json& row = rows.at(static_cast<std::size_t>(i));
        if (!row.is_array())
            throw ConfigError(std::string(where) + ": matrix rows must be arrays");
        if (ncols < 0) {
            ncols = static_cast<Eigen::Index>(row.size());
            out = Mat::Zero(nrows, ncols);
        }
        if (static_cast<Eigen::Index>(row.size()) != ncols)
            throw ConfigError(std::string(where) + ": matrix rows have unequal lengths");
        for (Eigen::Index j = 0; j < ncols; ++j) {
            const json& entry = row.at(static_cast<std::size_t>(j));
            if (!entry.is_number())
                throw ConfigError(std::string(where) + ": matrix entries must be numbers");
            out(i, j) = entry.get<double>();
        }
    }
    return out;
}

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json parsed;
    try {
        parsed = json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError("invalid JSON in " + path + ": " + err.what());
    }
    return parsed;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file for writing: " + path);
    out << text;
    if (!out)
        throw ConfigError("failed while writing output file: " + path);
}

std::string hash_hex(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ull; // FNV offset basis
    for (unsigned char c : bytes) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 1099511628211ull; // FNV prime
    }
    static const char digits[] = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return hex;
}

GeneralizedHeisenbergAlgebra algebra_from_json(const json& config) {
    if (!config.is_object())
        throw ConfigError("algebra config must be a JSON object");
    const bool has_family = config.contains("family");
    const bool has_maps = config.contains("j_maps");
    if (has_family == has_maps)
        throw ConfigError("algebra config needs exactly one of \"family\" or \"j_maps\"");
    if (has_family) {
        const json& name = config.at("family");
        if (!name.is_string())
            throw ConfigError("algebra config: \"family\" must be a string");
        AlgebraFamily family;
        try {
            family = family_from_string(name.get<std::string>());
        } catch (const UnsupportedFamily& err) {
            throw ConfigError(std::string("algebra config: ") + err.what());
        }
        const int multiplicity = require_int(config, "multiplicity", "algebra config");
        if (multiplicity < 1)
            throw ConfigError("algebra config: \"multiplicity\" must be at least 1");
        return catalog(family, multiplicity);
    }
    const json& maps = config.at("j_maps");
    if (!maps.is_array() || maps.empty())
        throw ConfigError("algebra config: \"j_maps\" must be a non-empty array of matrices");
    std::vector<Mat> j_maps;
    j_maps.reserve(maps.size());
    for (const json& entry : maps)
        j_maps.push_back(matrix_from_json(entry, "algebra config j_maps"));
    double tol = 1e-10;
    if (config.contains("tol")) {
        if (!config.at("tol").is_number())
            throw ConfigError("algebra config: \"tol\" must be a number");
        tol = config.at("tol").get<double>();
        if (!(tol > 0.0))
            throw ConfigError("algebra config: \"tol\" must be positive");
    }
    return build_algebra(std::move(j_maps), tol);
}

DamekRicciSpace space_from_json(const json& config) {
    if (config.is_object() && config.contains("space"))
        return DamekRicciSpace(algebra_from_json(config.at("space")));
    return DamekRicciSpace(algebra_from_json(config));
}

json polynomial_to_json(const Polynomial& poly) {
    json terms = json::array();
    for (const auto& [exps, coeff] : poly.terms()) {
        json term;
        term["exponents"] = exps;
        term["coefficient"] = coeff;
        terms.push_back(std::move(term));
    }
    json out;
    out["nvars"] = poly.nvars();
    out["terms"] = std::move(terms);
    return out;
}

Polynomial polynomial_from_json(const json& spec) {
    const int nvars = require_int(spec, "nvars", "polynomial");
    if (nvars < 0)
        throw ConfigError("polynomial: \"nvars\" must be non-negative");
    Polynomial poly(nvars);
    const json& terms = require(spec, "terms", "polynomial");
    if (!terms.is_array())
        throw ConfigError("polynomial: \"terms\" must be an array");
    for (const json& term : terms) {
        const json& exps = require(term, "exponents", "polynomial term");
        if (!exps.is_array() || static_cast<int>(exps.size()) != nvars)
            throw ConfigError("polynomial term: \"exponents\" must list one exponent per variable");
        std::vector<int> exponents;
        exponents.reserve(exps.size());
        for (const json& e : exps) {
            if (!e.is_number_integer() || e.get<int>() < 0)
                throw ConfigError("polynomial term: exponents must be non-negative integers");
            exponents.push_back(e.get<int>());
        }
        poly.add_term(exponents, require_number(term, "coefficient", "polynomial term"));
    }
    return poly;
}

json expansion_to_json(const HarmonicExpansion& expansion) {
    json out;
    out["M"] = expansion.truncation;
    out["dim_v"] = expansion.dim_v;
    out["dim_center"] = expansion.dim_center;
    out["offset"] = json::array({expansion.alpha, expansion.beta});
    json c1 = json::array();
    for (const Polynomial& poly : expansion.c1)
        c1.push_back(polynomial_to_json(poly));
    json c2 = json::array();
    for (const Polynomial& poly : expansion.c2)
        c2.push_back(polynomial_to_json(poly));
    out["C1"] = std::move(c1);
    out["C2"] = std::move(c2);
    out["C3"] = polynomial_to_json(expansion.c3);
    out["C4"] = polynomial_to_json(expansion.c4);
    out["C5"] = expansion.c5 ? polynomial_to_json(*expansion.c5) : json(nullptr);
    return out;
}

HarmonicExpansion expansion_from_json(const json& spec) {
    const int truncation = require_int(spec, "M", "expansion");
    const int dim_v = require_int(spec, "dim_v", "expansion");
    const int dim_center = require_int(spec, "dim_center", "expansion");
    if (truncation < 1 || dim_v < 2 || dim_center < 1)
        throw ConfigError("expansion: M must be >= 1, dim_v >= 2, dim_center >= 1");
    HarmonicExpansion expansion = empty_expansion(truncation, dim_v, dim_center);
    const json& offset = require(spec, "offset", "expansion");
    if (!offset.is_array() || offset.size() != 2 || !offset.at(0).is_number() ||
        !offset.at(1).is_number())
        throw ConfigError("expansion: \"offset\" must be [alpha, beta]");
    expansion.alpha = offset.at(0).get<double>();
    expansion.beta = offset.at(1).get<double>();
    const json& c1 = require(spec, "C1", "expansion");
    const json& c2 = require(spec, "C2", "expansion");
    if (!c1.is_array() || static_cast<int>(c1.size()) != truncation || !c2.is_array() ||
        static_cast<int>(c2.size()) != truncation)
        throw ConfigError("expansion: \"C1\" and \"C2\" must each list M polynomials");
    const int reduced = expansion.reduced_vars();
    auto check_vars = [&](const Polynomial& poly, const char* name, int expected) {
        if (poly.nvars() != expected)
            throw ConfigError(std::string("expansion: \"") + name +
                              "\" has the wrong variable count");
    };
    for (int j = 0; j < truncation; ++j) {
        expansion.c1[static_cast<std::size_t>(j)] =
            polynomial_from_json(c1.at(static_cast<std::size_t>(j)));
        expansion.c2[static_cast<std::size_t>(j)] =
            polynomial_from_json(c2.at(static_cast<std::size_t>(j)));
        check_vars(expansion.c1[static_cast<std::size_t>(j)], "C1", reduced);
        check_vars(expansion.c2[static_cast<std::size_t>(j)], "C2", reduced);
    }
    expansion.c3 = polynomial_from_json(require(spec, "C3", "expansion"));
    expansion.c4 = polynomial_from_json(require(spec, "C4", "expansion"));
    check_vars(expansion.c3, "C3", reduced);
    check_vars(expansion.c4, "C4", reduced);
    const json& c5 = require(spec, "C5", "expansion");
    if (c5.is_null()) {
        expansion.c5.reset();
    } else {
        expansion.c5 = polynomial_from_json(c5);
        check_vars(*expansion.c5, "C5", reduced + 1);
    }
    return expansion;
}

json ansatz_to_json(const AnsatzSpec& ansatz) {
    json out;
    out["degree"] = ansatz.degree;
    out["exp_min"] = ansatz.exp_min;
    out["exp_max"] = ansatz.exp_max;
    out["components"] = ansatz.components;
    return out;
}

AnsatzSpec ansatz_from_json(const json& spec) {
    if (!spec.is_object())
        throw ConfigError("ansatz must be a JSON object");
    AnsatzSpec ansatz;
    if (spec.contains("degree"))
        ansatz.degree = require_int(spec, "degree", "ansatz");
    if (spec.contains("exp_min"))
        ansatz.exp_min = require_int(spec, "exp_min", "ansatz");
    if (spec.contains("exp_max"))
        ansatz.exp_max = require_int(spec, "exp_max", "ansatz");
    if (spec.contains("components")) {
        const json& comps = spec.at("components");
        if (!comps.is_array())
            throw ConfigError("ansatz: \"components\" must be an array of indices");
        for (const json& c : comps) {
            if (!c.is_number_integer())
                throw ConfigError("ansatz: \"components\" must be integers");
            ansatz.components.push_back(c.get<int>());
        }
    }
    return ansatz;
}

std::string verdict_to_string(RigidityVerdict verdict) {
    switch (verdict) {
    case RigidityVerdict::rigid:
        return "rigid";
    case RigidityVerdict::non_rigid:
        return "non_rigid";
    case RigidityVerdict::inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

json rigidity_report_to_json(const RigidityReport& report) {
    json out;
    out["samples"] = report.samples;
    out["validation_count"] = report.validation_count;
    out["basis_size"] = report.basis_size;
    out["gram_condition"] = report.gram_condition;
    json tail = json::array();
    const auto nsv = static_cast<int>(report.singular_values.size());
    for (int i = std::max(0, nsv - 8); i < nsv; ++i)
        tail.push_back(report.singular_values(i));
    out["singular_value_tail"] = std::move(tail);
    out["nullspace_dim"] = report.nullspace_dim;
    json fields = json::array();
    for (const CandidateField& field : report.fields) {
        json entry;
        entry["max_abs_rho"] = field.max_abs_rho;
        entry["max_tracefree"] = field.max_tracefree;
        fields.push_back(std::move(entry));
    }
    out["fields"] = std::move(fields);
    out["verdict"] = verdict_to_string(report.verdict);
    return out;
}

json report_envelope(const std::string& command, const json& effective_config) {
    json out;
    out["tool"] = kToolName;
    out["version"] = kToolVersion;
    out["command"] = command;
    out["config_hash"] = hash_hex(effective_config.dump());
    out["config"] = effective_config;
    return out;
}

} // namespace drg::io
