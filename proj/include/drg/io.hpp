#ifndef DRG_IO_HPP
#define DRG_IO_HPP

#include <string>

#include "json.hpp"

#include "drg/confsys.hpp"
#include "drg/polynomial.hpp"
#include "drg/probe.hpp"
#include "drg/space.hpp"

namespace drg {

inline constexpr char kToolName[] = "drg";
inline constexpr char kToolVersion[] = "1.0.0";

namespace io {

/// Ordered JSON everywhere: key order is insertion order, so identical data
/// serializes to identical bytes.
using json = nlohmann::ordered_json;

/// Throws ConfigError when the file is missing or not valid JSON.
json load_json_file(const std::string& path);

/// Throws ConfigError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

/// FNV-1a (64-bit) of the byte string, as 16 lowercase hex digits.
std::string hash_hex(const std::string& bytes);

/// Algebra config: either {"family": name, "multiplicity": n} for the
/// catalog or {"j_maps": [matrix, ...]} for explicit data (optional "tol").
/// Schema problems throw ConfigError; invalid J-map data throws the
/// algebra's own validation errors (NotSkew, CliffordViolation, ...).
GeneralizedHeisenbergAlgebra algebra_from_json(const json& config);

/// Accepts an algebra config directly or nested under "space".
DamekRicciSpace space_from_json(const json& config);

/// {"nvars": n, "terms": [{"exponents": [...], "coefficient": c}, ...]},
/// terms in the polynomial's deterministic term order.
json polynomial_to_json(const Polynomial& poly);
Polynomial polynomial_from_json(const json& spec);

/// {"M", "dim_v", "dim_center", "offset": [alpha, beta], "C1": [...],
///  "C2": [...], "C3": poly, "C4": poly, "C5": poly or null}; C1/C2 entry
/// j is the coefficient polynomial of grade j+1.
json expansion_to_json(const HarmonicExpansion& expansion);
HarmonicExpansion expansion_from_json(const json& spec);

json ansatz_to_json(const AnsatzSpec& ansatz);
AnsatzSpec ansatz_from_json(const json& spec);

std::string verdict_to_string(RigidityVerdict verdict);
json rigidity_report_to_json(const RigidityReport& report);

/// Standard report header: tool, version, command, config hash (FNV-1a of
/// the canonical config dump) and the effective config itself.
json report_envelope(const std::string& command, const json& effective_config);

} // namespace io
} // namespace drg

#endif
