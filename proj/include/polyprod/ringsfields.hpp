#pragma once

// (m,n)-rings and fields: one carrier with an m-ary additive group and an
// n-ary multiplicative semigroup tied together by n sliding distributivity
// relations.  Provides the additive queroperation, the double (additive +
// multiplicative) Dörnte check, the ring -> commutative ring -> division
// ring -> field classification ladder, the quer-commutator with its scalar
// factor, and the three product constructions (full, mixed-arity, field).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyprod/products.hpp"

namespace polyprod {

/// One carrier, two operations.  The unary queroperations are declared
/// closed forms (additive x -> x-tilde, multiplicative x -> x-bar); the
/// additive one is derived automatically for sum-like operations.
/// Identity/zero candidates refer to the multiplicative operation.
struct PolyadicRing {
    std::string name;
    CarrierPtr carrier;
    PolyadicOperation add;                     ///< arity m
    PolyadicOperation mul;                     ///< arity n
    std::optional<PolyadicOperation> add_quer; ///< unary, role "add-quer"
    std::optional<PolyadicOperation> mul_quer; ///< unary, role "mul-quer"
    std::vector<Element> identity_candidates;
    std::vector<Element> zero_candidates;

    int add_arity() const { return add.arity; }
    int mul_arity() const { return mul.arity; }
};

/// Assemble a ring, deriving the additive queroperation when the additive
/// family admits a closed form.  Multiplicative quers must be declared by
/// the caller (they only exist on division rings).
PolyadicRing make_ring(std::string name, CarrierPtr carrier, ProgramPtr add, ProgramPtr mul);

/// The two faces of a ring as standalone structures.
AlgebraicStructure additive_structure(const PolyadicRing& r);
AlgebraicStructure multiplicative_structure(const PolyadicRing& r);

/// The n distributivity relations: the additive block slides through every
/// multiplicative position 1..n.  relations[i-1] is position i.
struct DistributivityReport {
    bool passed = false;
    std::vector<CheckResult> relations;
    CheckResult combined() const;
};

DistributivityReport check_distributivity(const PolyadicRing& r, const CheckPolicy& policy = {});

/// The additive querelement x-tilde (equals -(m-2)x on m-ary sum rings).
/// Throws NoSolution when none exists.
Element additive_quer(const PolyadicRing& r, const Element& x, const CheckPolicy& policy = {});

/// Both Dörnte relation families: the additive one always, the
/// multiplicative one when a multiplicative queroperation is declared.
struct DoubleDornteReport {
    bool passed = false;
    CheckResult additive;
    std::optional<CheckResult> multiplicative;
};

DoubleDornteReport check_double_dornte(const PolyadicRing& r, const CheckPolicy& policy = {});

enum class RingKind { Ring, CommutativeRing, DivisionRing, Field, SemicommutativeField };
std::string ring_kind_name(RingKind kind);

/// Everything classify() can establish, with the per-law evidence that
/// backs it.  kind is the highest rung whose laws pass; failing base laws
/// are visible in the evidence list.
struct ClassificationReport {
    RingKind kind = RingKind::Ring;
    bool zeroless = false;
    bool unital = false;
    bool derived = false;                     ///< both operations iterate binary ones
    std::optional<bool> quer_symmetric;       ///< quers commute (needs both quers)
    std::optional<ExactScalar> quer_factor;   ///< lhs = factor * rhs when proportional
    std::vector<std::pair<std::string, CheckResult>> evidence;
    std::string notes;                        ///< why higher rungs were not reached
    bool laws_pass() const;
};

ClassificationReport classify(const PolyadicRing& r, const CheckPolicy& policy = {});

/// lhs = add-quer(mul-quer(x)), rhs = mul-quer(add-quer(x)); factor reported
/// when lhs = factor * rhs exactly.  Throws NoSolution when a queroperation
/// is missing.
struct QuerCommutator {
    Element lhs;
    Element rhs;
    std::optional<ExactScalar> factor;
};

QuerCommutator quer_commutator(const PolyadicRing& r, const Element& x);

/// Componentwise product of two rings of the same arity shape (m,n).
/// Throws ArityShapeMismatch.
PolyadicRing ring_full_product(const PolyadicRing& r1, const PolyadicRing& r2);

/// Product at a common shape (m', n'): component i iterates its constituent
/// operations ell_nu_i / ell_mu_i times.  Throws IncompatibleArities when
/// either shape equation has no positive integer solution.
PolyadicRing ring_mixed_product(const PolyadicRing& r1, const PolyadicRing& r2, int m_prime,
                                int n_prime);

/// Product of two zeroless fields of the same shape, quers componentwise.
/// Throws NotAField when a constituent has a multiplicative zero (reporting
/// the noninvertible idempotent doubles) or fails its group checks, or when
/// the product's multiplicative structure fails them.
PolyadicRing field_product(const PolyadicRing& f1, const PolyadicRing& f2,
                           const CheckPolicy& policy = {});

}  // namespace polyprod
