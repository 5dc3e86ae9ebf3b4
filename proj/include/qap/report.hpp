#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>

#include "qap/facets.hpp"
#include "qap/insufficiency.hpp"
#include "qap/perm.hpp"
#include "qap/qap_model.hpp"
#include "qap/structure.hpp"

namespace qap {

using nlohmann::json;

inline constexpr const char* kReportSchemaVersion = "1";

/// Rationals travel as strings "num" or "num/den"; never floats.
json rational_json(const Rational& r);
Rational rational_from_json(const json& j);

json permutation_json(const Permutation& p);  // 1-based image list
Permutation permutation_from_json(const json& j);

// --- inequality interchange -------------------------------------------------
// { "n": 6, "beta": 1, "coeffs": [[i, j, value], ...],          (1-based)
//   "linear": { "diag": [[i, j, "c"], ...],
//               "off": [[i, j, k, l, "c"], ...], "constant": "c" } }  (optional)

json inequality_json(const GenericInequality& g, bool include_linear = true);
GenericInequality inequality_from_json(const json& j);

/// Parses the generic form; when a pre-expanded linear block is present it
/// is cross-checked against expand_generic and a mismatch throws ParseError.
GenericInequality parse_inequality_text(const std::string& text);

json linear_inequality_json(const LinearInequality& ineq);
LinearInequality linear_inequality_from_json(const json& j, int n);

// --- transposition-graph spec interchange ------------------------------------
// { "n": 6, "mode": "lemma1" | "lemma2" | "union",
//   "groups": [ { "fixed": [[pos, img], ...],
//                 "forbidden": [[pos, [img, ...]], ...] } ] }        (1-based)

json graph_spec_json(const TranspositionGraphSpec& spec);
TranspositionGraphSpec parse_graph_spec_text(const std::string& text);

json certificate_json(const FacetCertificate& cert);
json dependence_certificate_json(const DependenceCertificate& cert);
json bound_report_json(const BoundReport& report);

/// Envelope every subcommand emits: schema version, echoed parameters, mode
/// and seed, results payload, wall-clock timings (timings sit outside the
/// replayable payload).
json make_run_report(const std::string& command, json parameters, const std::string& mode,
                     std::uint64_t seed, json results, double elapsed_ms);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qap
