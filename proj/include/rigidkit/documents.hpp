#pragma once

// Structured-text (JSON) documents for every input kind, plus the Report
// tree the CLI prints. Serialization is key-sorted and stable, so a
// serialized document reloads and reserializes byte for byte.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rigidkit/decorated_complex.hpp"
#include "rigidkit/model_quasi_state.hpp"
#include "rigidkit/quantum_algebra.hpp"
#include "rigidkit/symplectic_index.hpp"
#include "rigidkit/toric.hpp"

namespace rigidkit {

using Json = nlohmann::json;

enum class DocumentKind { Ring, Complex, Path, Frame, Polytope, Body, PLFunction, MomentData };

std::string to_string(DocumentKind kind);
DocumentKind parse_document_kind(std::string_view name);

/// Parse failure (with line/field) or a violated invariant (with its name).
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Reads and parses a file; syntax errors carry line and column.
Json read_json_file(const std::string& path);
Json parse_json_text(std::string_view text);
/// Key-sorted, two-space indented, trailing newline.
std::string serialize(const Json& j);

QuantumAlgebra ring_from_json(const Json& j);
Json to_json(const QuantumAlgebra& alg);

DecoratedComplex complex_from_json(const Json& j);
Json to_json(const DecoratedComplex& v);

MatrixPath path_from_json(const Json& j);
Json to_json(const MatrixPath& path);

LagrangianFrame frame_from_json(const Json& j);
Json to_json(const LagrangianFrame& frame);

DelzantPolytope polytope_from_json(const Json& j);
Json to_json(const DelzantPolytope& p);

/// Polytope document with `kappa` and `compressible`; when κ is present the
/// special-point formula must be vertex-independent.
MomentData moment_from_json(const Json& j);
Json to_json(const MomentData& m);

/// A single body (`generators`) or a finite union (`bodies`).
std::vector<ConvexBody> bodies_from_json(const Json& j);
Json to_json(const std::vector<ConvexBody>& bodies);

PLFunction pl_from_json(const Json& j);
Json to_json(const PLFunction& f);

using Document = std::variant<QuantumAlgebra, DecoratedComplex, MatrixPath, LagrangianFrame, DelzantPolytope,
                              std::vector<ConvexBody>, PLFunction, MomentData>;

/// Parses `path` as `kind` and validates the kind's invariants.
Document load_document(const std::string& path, DocumentKind kind);
Document document_from_json(const Json& j, DocumentKind kind);
Json to_json(const Document& doc);

/// Chain text such as "[x1] - 1*s^(1)*[x2]" in the complex's preferred basis.
Chain parse_chain(const DecoratedComplex& v, std::string_view text);
std::string to_string(const DecoratedComplex& v, const Chain& x);

/// Comma-separated rationals, e.g. "1/3,-1/6".
RationalPoint parse_point(std::string_view text);

enum class Status { Ok, Violation, Error };
std::string to_string(Status s);

struct Report {
  std::string subcommand;
  std::string inputs_digest;
  Json results = Json::object();
  Status status = Status::Ok;
  double seconds = 0;

  Json to_json() const;
  /// Flattened "path: value" lines, sorted.
  std::string text() const;
};

/// FNV-1a 64-bit hex digest.
std::string digest(std::string_view data);

}  // namespace rigidkit
