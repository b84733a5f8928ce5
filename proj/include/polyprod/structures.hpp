#pragma once

// Polyadic algebraic structures: a carrier together with one n-ary operation
// (plus optional unary querelement map and candidate identities/zeros), and
// the law checkers that prove or refute the defining properties — total
// associativity, commutativity, unique solvability, Dörnte relations —
// exhaustively on small finite carriers and by seeded sampling elsewhere.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyprod/carriers.hpp"
#include "polyprod/programs.hpp"

namespace polyprod {

/// One n-ary operation: an arity plus the expression program that realises it.
struct PolyadicOperation {
    int arity = 0;
    ProgramPtr program;
    std::string role = "mul";  ///< label used in reports ("mul", "add", "quer", ...)
};

PolyadicOperation make_op(ProgramPtr program, std::string role = "mul");

/// How a verdict was reached: full enumeration or a seeded sample.
struct Evidence {
    bool exhaustive = false;
    std::uint64_t count = 0;  ///< tuples (or instances) examined
    std::uint64_t seed = 0;   ///< RNG seed when sampled
    std::string str() const;
};

/// A concrete refutation: the witness tuple plus a human-readable account.
struct Counterexample {
    std::vector<Element> tuple;
    std::string detail;
};

struct CheckResult {
    bool passed = false;
    Evidence evidence;
    std::optional<Counterexample> counterexample;
    std::string note;
};

/// Knobs shared by every checker.  Exhaustive mode is used whenever the index
/// space of the law fits in `exhaustive_budget`; otherwise seeded sampling.
struct CheckPolicy {
    std::uint64_t exhaustive_budget = 10'000'000;
    std::uint64_t assoc_samples = 100'000;  ///< sampled tuples for associativity
    std::uint64_t law_samples = 200;        ///< sampled instances for other laws
    std::uint64_t seed = 0;
    enum class Engine {
        Auto,             ///< compiled tables + OpenMP where possible
        SerialReference,  ///< element-by-element serial evaluation (testing)
        TableParallel,    ///< force the compiled path
    };
    Engine engine = Engine::Auto;
};

enum class IdentityClass { TwoSided, LeftOnly, RightOnly, None };
std::string identity_class_name(IdentityClass cls);

/// A carrier with one polyadic operation and optional declared helpers.
/// Parametric carriers cannot be enumerated, so candidate identities and
/// zeros must be declared to be found.
struct AlgebraicStructure {
    std::string name;
    CarrierPtr carrier;
    PolyadicOperation mult;
    std::optional<PolyadicOperation> quer;  ///< declared closed-form querelement
    std::vector<Element> identity_candidates;
    std::vector<Element> zero_candidates;
};

/// Apply the structure's operation to one polyad.  Throws ArityMismatch on a
/// wrong-width polyad and ClosureViolation if the result leaves the carrier
/// (when check_closure is set).
Element evaluate(const AlgebraicStructure& s, const std::vector<Element>& polyad,
                 bool check_closure = true);

/// The ell-fold left-nested iterate: arity grows to ell*(n-1)+1.
PolyadicOperation iterate_op(const PolyadicOperation& op, int ell);

/// Polyadic power g^<ell>: the ell-fold iterate applied to copies of g.
Element polyadic_power(const AlgebraicStructure& s, const Element& g, int ell);

/// Least ell in [1, ell_max] with g^<ell> equal to the structure's zero, if
/// any.  Returns nullopt when there is no zero or no power reaches it.
std::optional<int> check_nilpotent(const AlgebraicStructure& s, const Element& g,
                                   int ell_max, const CheckPolicy& policy = {});

// --- law checkers -----------------------------------------------------------

/// Total associativity: both two-fold iterates agree for every placement of
/// the inner operation inside a (2n-1)-polyad.
CheckResult check_total_associativity(const AlgebraicStructure& s,
                                      const CheckPolicy& policy = {});

struct CommutativityReport {
    bool commutative = false;      ///< invariant under every permutation
    bool semicommutative = false;  ///< invariant under the first<->last swap
    std::vector<std::string> failing_permutations;  ///< up to a handful, cycle notation
    CheckResult result;  ///< passed == commutative; counterexample from first failure
};

/// Permutation invariance of the operation.  Exhaustive small-arity checks
/// try every permutation; otherwise the adjacent transpositions (which
/// generate the whole symmetric group) plus the first<->last swap are tested.
CommutativityReport check_commutativity(const AlgebraicStructure& s,
                                        const CheckPolicy& policy = {});

struct SolvabilityReport {
    std::vector<bool> positions;  ///< positions 1..n: uniquely solvable there?
    CheckResult result;           ///< passed == solvable at every position
};

/// Unique solvability of mu[u_1..u_{i-1}, x, u_{i+1}..u_n] = t in x, per slot.
SolvabilityReport check_solvability(const AlgebraicStructure& s,
                                    const CheckPolicy& policy = {});

/// Dörnte relations: for all g, h and every placement i of the querelement,
/// the neutral polyad of h absorbs g from either side.
CheckResult check_dornte(const AlgebraicStructure& s, const CheckPolicy& policy = {});

struct ZeroReport {
    std::optional<Element> zero;  ///< element absorbing at every placement
    Evidence evidence;
    std::string note;  ///< mentions single-placement absorbers when present
};

/// Search for a polyadic zero.  Finite carriers scan every element; parametric
/// carriers test only the declared zero candidates.
ZeroReport find_zero(const AlgebraicStructure& s, const CheckPolicy& policy = {});

struct IdentityReport {
    IdentityClass cls = IdentityClass::None;
    std::optional<Element> element;
    std::vector<int> placements;  ///< 1-based positions of the free argument that pass
    Evidence evidence;
    std::string note;
};

/// Search for a polyadic identity e with mu[e..e, g, e..e] = g.  The class is
/// two-sided when both boundary placements of g (first and last) pass,
/// right-only when only g first passes, left-only when only g last passes.
/// `placements` lists every passing position; a note records when interior
/// placements fail.
IdentityReport find_identity(const AlgebraicStructure& s, const CheckPolicy& policy = {});

/// The querelement of g: the unique h with mu[g..g, h] = g at every placement
/// of h, whose neutral polyads (g^{n-2} with h inserted) absorb every element
/// from both sides.  Throws NoSolution when no such h exists.
Element querelement(const AlgebraicStructure& s, const Element& g,
                    const CheckPolicy& policy = {});

/// querelement that reports failure as nullopt (reason in *why if given).
std::optional<Element> try_querelement(const AlgebraicStructure& s, const Element& g,
                                       const CheckPolicy& policy = {},
                                       std::string* why = nullptr);

/// The (n-1)-polyad g^{n-2} with the querelement inserted at `pos` (1-based).
/// Verified neutral before being returned.
std::vector<Element> neutral_polyad(const AlgebraicStructure& s, const Element& g,
                                    int pos, const CheckPolicy& policy = {});

/// Closed-form querelement for operation families that admit one:
/// m-ary sums give x -> -(m-2)x, n-ary products give x -> x^{-(n-2)},
/// conjugate chains give x -> x, componentwise combines per component.
std::optional<PolyadicOperation> derive_quer(const PolyadicOperation& op);

}  // namespace polyprod
