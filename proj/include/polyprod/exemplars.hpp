#pragma once

// A catalog of named, ready-built polyadic structures — the worked examples
// exercised throughout the test-suite (nonderived groups on exact rational
// rays, (2,3)- and (9,3)-rings, zeroless (3,3)- and (5,5)-fields, a fixed
// non-Post quiver) — plus a generator of small derived n-ary groups on
// Z_m for exhaustive property testing.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyprod/ringsfields.hpp"

namespace polyprod {

/// The classification facts a catalog entry is pinned to.  Regression tests
/// rebuild the entry, classify it, and require every set field to match.
struct ExpectedTraits {
    std::optional<std::string> kind;   ///< ring ladder rung (rings only)
    std::optional<bool> zeroless;
    std::optional<bool> unital;
    std::optional<bool> derived;       ///< both operations iterates of binary ones
    std::optional<bool> commutative;   ///< the (multiplicative) operation
    std::optional<bool> semicommutative;
    std::optional<bool> quer_symmetric;
    std::optional<std::string> quer_factor;  ///< ratio of the two quer compositions
};

/// One named construction.  Exactly one of `structure`, `ring`, `quiver`
/// is populated; `expected` pins the classification for regression.
struct CatalogItem {
    std::string name;
    std::string summary;
    std::optional<AlgebraicStructure> structure;
    std::optional<PolyadicRing> ring;
    std::optional<QuiverSpec> quiver;
    ExpectedTraits expected;
};

/// Names of every catalog entry, in stable catalog order.
std::vector<std::string> catalog_names();

/// Build the named entry from scratch, with its declared queroperations and
/// candidate identities/zeros in place.  Throws UnknownEntry.
CatalogItem catalog_get(const std::string& name);

/// The n-ary group on Z_modulus whose operation is the (arity-1)-fold
/// iterate of binary modular addition.  Ships with quer(g) = -(arity-2)g
/// and the identity candidate 0.  Requires modulus >= 2 and arity >= 2.
AlgebraicStructure derived_group_zm(std::int64_t modulus, int arity);

}  // namespace polyprod
