#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "qjet/nervejet.hpp"
#include "qjet/schur.hpp"
#include "qjet/simplicial.hpp"

namespace qjet::io {

/// Parsed input document. Exactly one payload is populated, matching kind.
struct ParsedDoc {
  std::string kind;
  std::optional<LieAlgebraData> lie;
  std::optional<CrossedModule> crossed;
  std::optional<GroupCocycle> cocycle;
  std::optional<PolyGroupLaw> law;
  std::string law_error;  // set when a group_law payload fails its identities
  std::optional<TruncatedSimplicialSet> simplicial;
  std::optional<YoungDiagram> young;
  int young_n = -1;
  Parity young_parity = Parity::Even;
  int young_k = -1;
  int gerbe_dim = 0;
  std::optional<Element> gerbe_h;
};

/// Parses and validates a document; throws std::invalid_argument with a
/// field diagnostic on schema errors.
ParsedDoc parse_document(const nlohmann::json& doc);

/// Canonical serialization; parse-then-serialize is idempotent.
nlohmann::json serialize_document(const ParsedDoc& doc);

/// Polynomial parsing shared with the document schemas: a JSON array of
/// terms {"coeff": "p/q", "monomial": {"name": exponent}}.
Element parse_poly(const nlohmann::json& terms, const AlgebraPtr& alg);
nlohmann::json poly_to_json(const Element& e);

/// One verification verdict in a report.
struct Verdict {
  std::string name;
  bool ok = true;
  std::string witness;
};

struct Report {
  std::string command;
  std::string construction;
  std::string input;
  std::vector<Verdict> verdicts;
  nlohmann::json objects = nlohmann::json::object();

  bool all_ok() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Full command-line driver; returns the process exit code
/// (0 = all verdicts ok, 1 = failing verdicts, 2 = usage or input error).
int run_cli(int argc, const char* const* argv);

}  // namespace qjet::io
