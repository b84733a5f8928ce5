#pragma once

// Compiled law-check kernels for finite carriers.  An operation over an
// enumerable carrier is compiled once into a flat lookup table indexed by
// big-endian digit strings (first argument most significant), so the numeric
// scan order of an index space coincides with lexicographic order of the
// argument tuples.  The associativity scan over all (2n-1)-polyads is the
// hot loop and comes in three flavours: OpenMP-parallel over the flat index
// space, serial over the same table, and a serial element-by-element
// reference that never builds a table (kept as the test oracle and as the
// baseline for the benchmark).

#include <cstdint>
#include <optional>
#include <vector>

#include "polyprod/carriers.hpp"
#include "polyprod/programs.hpp"

namespace polyprod::kernels {

/// One operation compiled to a flat lookup table over an enumerated carrier.
struct FiniteOpTable {
    std::vector<Element> elems;  ///< carrier elements in enumeration order
    int arity = 0;
    std::uint32_t size = 0;            ///< number of elements S
    std::vector<std::uint32_t> table;  ///< S^arity entries, big-endian digits

    /// Flat index of a digit tuple (d[0] most significant).
    std::uint64_t index_of(const std::vector<std::uint32_t>& digits) const;
};

/// Compile `program` over `carrier`.  Returns nullopt when the carrier is not
/// enumerable or the table would exceed `max_entries`.  Throws
/// ClosureViolation if any table entry escapes the carrier.
std::optional<FiniteOpTable> compile_table(const Carrier& carrier,
                                           const OpProgram& program,
                                           std::uint64_t max_entries);

/// Outcome of an exhaustive scan.  When `passed` is false, `bad_index` is the
/// smallest failing flat index over the (2n-1)-polyad space (equivalently the
/// lexicographically first failing polyad), `bad_digits` its digits, and
/// `placement_a`/`placement_b` the two 0-based inner placements that disagree.
struct ScanOutcome {
    bool passed = true;
    std::uint64_t tuples = 0;
    std::uint64_t bad_index = 0;
    std::vector<std::uint32_t> bad_digits;
    int placement_a = 0;
    int placement_b = 0;
};

/// Total associativity over all S^(2n-1) polyads, OpenMP-parallel.
ScanOutcome assoc_scan_parallel(const FiniteOpTable& op);

/// Same scan, single thread, early exit on the first failure.
ScanOutcome assoc_scan_serial(const FiniteOpTable& op);

/// Element-level reference: no table, direct program evaluation.
ScanOutcome assoc_scan_reference(const Carrier& carrier, const OpProgram& program);

}  // namespace polyprod::kernels
