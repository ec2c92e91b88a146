#pragma once

// Problem files (JSON or CSV), canonical serialization and report emission.
//
// JSON schema: a top-level object whose keys are identifiers. A matrix is a
// list of rows, an entry is a real number or a two-element [re, im] list, and
// a subspace is {"span": matrix}. The reserved keys "tolerance" (object with
// rank_rel, cmp_abs, cmp_rel) and "seed" (nonnegative integer) are optional.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "shortcalc/numcore.hpp"

namespace shortcalc {

using Json = nlohmann::ordered_json;

class ParseError : public Error {
  public:
    using Error::Error;
};

class UsageError : public Error {
  public:
    using Error::Error;
};

struct ProblemFile {
    std::map<std::string, ComplexMatrix> matrices;
    /// Spanning sets as written; orthonormalized by subspace().
    std::map<std::string, ComplexMatrix> subspaces;
    std::optional<Tolerance> tolerance;
    std::optional<std::uint64_t> seed;

    [[nodiscard]] bool has(const std::string& id) const;
    /// Throws UsageError for unknown identifiers.
    [[nodiscard]] const ComplexMatrix& matrix(const std::string& id) const;
    /// A subspace entry, or a matrix entry read as a spanning set.
    [[nodiscard]] Subspace subspace(const std::string& id, const Tolerance& tol = {}) const;
    /// Raw entry (matrix or spanning set) for digests.
    [[nodiscard]] const ComplexMatrix& raw(const std::string& id) const;
};

ProblemFile parse_problem_text(const std::string& text, const std::string& source = "<input>");
ProblemFile parse_problem(const std::string& path);

/// Comma separated real matrix; blank lines and lines starting with '#' are skipped.
ComplexMatrix parse_csv_text(const std::string& text, const std::string& source = "<csv>");
ComplexMatrix parse_csv(const std::string& path);

/// Canonical form: sorted identifiers, 17 significant digits.
std::string serialize_problem(const ProblemFile& problem);

Json matrix_to_json(const ComplexMatrix& m);
Json subspace_to_json(const Subspace& s);
ComplexMatrix matrix_from_json(const Json& j, const std::string& field);

/// Deterministic JSON text: numbers with 17 significant digits, two-space
/// indent, rows of scalars kept on one line.
std::string emit_json(const Json& j);

std::string sha256_hex(const std::string& bytes);

}  // namespace shortcalc
