#pragma once

// The structure-file format: a line-oriented, sectioned plain-text document
// declaring a carrier, one or two polyadic operations (with optional quers
// and candidate identities/zeros), and the laws to verify.  Documents parse
// into a StructureDoc, build into an AlgebraicStructure or PolyadicRing,
// and serialize back so that parse -> build -> serialize -> parse reaches a
// fixpoint.
//
//   [structure]
//   name = my-field
//
//   [carrier]
//   kind = scalar-ray 2 odd odd
//   param-limit = 50
//
//   [op add arity=3]
//   program = scalarsum
//   quer = negscale(1)
//
//   [op mul arity=3]
//   program = scalarprod
//   quer = power(-1)
//   identity = i        # repeatable; also: zero = <literal>
//
//   [verify]
//   laws = assoc, dornte, classify

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyprod/ringsfields.hpp"

namespace polyprod {

/// One `[op ...]` section.
struct OpDecl {
    std::string role = "mul";  ///< "mul" or "add"
    int arity = 0;
    std::string program;              ///< expression-language text
    std::optional<std::string> quer;  ///< unary program text
    std::vector<std::string> identity_literals;
    std::vector<std::string> zero_literals;

    bool operator==(const OpDecl&) const = default;
};

/// A parsed structure file.
struct StructureDoc {
    std::string name;
    std::string carrier_spec;
    std::int64_t param_limit = 50;
    std::vector<OpDecl> ops;
    std::vector<std::string> laws;

    bool operator==(const StructureDoc&) const = default;
};

/// Parse a document.  Throws ParseError annotated with the 1-based line.
StructureDoc parse_structure_doc(const std::string& text);

/// Render a document in canonical section order.
std::string serialize_structure_doc(const StructureDoc& doc);

/// A document with both an "add" and a "mul" section builds into a ring.
bool is_ring_doc(const StructureDoc& doc);

/// Build the declared single-operation structure.  Throws ParseError when
/// the document declares two operations (build the ring instead), and
/// ClosureViolation when a candidate literal is outside the carrier.
AlgebraicStructure build_structure(const StructureDoc& doc);

/// Build the declared (m,n)-ring from the "add" and "mul" sections.
PolyadicRing build_ring(const StructureDoc& doc);

/// Re-document built objects (used to emit products and for round-trips).
StructureDoc doc_of_structure(const AlgebraicStructure& s,
                              std::vector<std::string> laws = {});
StructureDoc doc_of_ring(const PolyadicRing& r, std::vector<std::string> laws = {});

}  // namespace polyprod
