#pragma once

// External products of polyadic structures: the componentwise full direct
// product, the mixed-arity iterated product (constituents iterated to a
// common arity), and the hetero ("entangled") k-power whose output components
// mix elements across constituent copies according to a placement quiver.
// Includes the arity-compatibility solver and the quantization table of
// admissible (n, n') pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyprod/structures.hpp"

namespace polyprod {

/// One solution of ell_1*(n1-1) = ell_2*(n2-1) = n' - 1.
struct AritySolution {
    int n_prime = 0;
    int ell_1 = 0;
    int ell_2 = 0;
};

/// All common iterated arities n' <= bound for constituent arities n1, n2,
/// ascending; the first uses lcm(n1-1, n2-1). Throws ArityMismatch when an
/// arity is below 2.
std::vector<AritySolution> arity_compatible(int n1, int n2, int bound);

/// Output arity of a hetero k-power with ell_id intact slots:
/// n' = n - ((n-1)/k)*ell_id, defined when the quotient is integral and
/// 2 <= n' <= n.
std::optional<int> hetero_arity(int n, int k, int ell_id);

/// One quantization row: fixed (k, ell_mu, ell_id) with its admissible
/// (n, n') pairs.
struct QuantRow {
    int k = 0;
    int ell_mu = 0;
    int ell_id = 0;
    std::vector<std::pair<int, int>> pairs;
};

/// Rows for every k in 2..k_max and ell_id in 1..k-1 (ascending), pairs
/// limited to n <= n_max.
std::vector<QuantRow> quantization_table(int k_max, int n_max);

/// A placement quiver: how the k*n' source slots of n' input k-tuples are
/// distributed over ell_mu multiplication rows (n slots each, ordered) and
/// ell_id intact slots.  Slots are (argument 1..n', component 1..k).
struct QuiverSpec {
    int k = 0;
    int n_in = 0;
    int n_out = 0;
    int ell_mu = 0;
    int ell_id = 0;
    std::vector<std::vector<SourceSlot>> rows;
    std::vector<SourceSlot> intact;
    std::string str() const;
    bool operator==(const QuiverSpec& o) const {
        return k == o.k && n_in == o.n_in && n_out == o.n_out && ell_mu == o.ell_mu &&
               ell_id == o.ell_id && rows == o.rows && intact == o.intact;
    }
};

/// True iff the slot counts, integrality, and bijectivity constraints hold.
bool validate_quiver(const QuiverSpec& q);

/// Cartesian product of per-part candidate lists as tuple elements; empty
/// when any list is empty or the product would be large.
std::vector<Element> cross_candidates(const std::vector<std::vector<Element>>& lists);

/// The cyclic-diagonal placement: the k wrapped diagonals of the (argument x
/// component) grid are concatenated (each read in descending argument order),
/// the first ell_mu*n slots cut into rows, each row sorted by (argument,
/// diagonal), the rest intact in lexicographic order.  Reproduces the
/// classical Post-like placements.  Throws NotQuantized when (n, k, ell_id)
/// admits no output arity.
QuiverSpec make_quiver_postlike(int n, int k, int ell_id);

/// Componentwise product of same-arity structures.  Throws ArityMismatch.
AlgebraicStructure full_product(const std::vector<AlgebraicStructure>& parts);

/// Product at a common iterated arity: component i applies its constituent
/// operation ell_i times.  Throws IncompatibleArities when `sol` does not
/// match the constituent arities.
AlgebraicStructure mixed_product(const AlgebraicStructure& s1, const AlgebraicStructure& s2,
                                 const AritySolution& sol);

struct HeteroResult {
    AlgebraicStructure structure;
    CheckResult assoc;  ///< associativity is never assumed; verdict recorded
    QuiverSpec quiver;
};

/// The hetero k-power of s along quiver q: an n'-ary operation on k-tuples.
/// Associativity is checked at construction and recorded; with strict set,
/// a failed check throws NotAssociative.
HeteroResult hetero_power(const AlgebraicStructure& s, const QuiverSpec& q,
                          const CheckPolicy& policy = {}, bool strict = false);

/// Enumerate candidate quivers (rows with non-decreasing argument indices
/// covering every argument, row starts ascending) up to `budget` candidates,
/// and return those whose hetero power passes the associativity check on s.
/// Deterministic order; empty when the arity is not admissible.
std::vector<QuiverSpec> quiver_search(const AlgebraicStructure& s, int n_out, int k,
                                      int ell_id, std::uint64_t budget,
                                      const CheckPolicy& policy = {});

}  // namespace polyprod
