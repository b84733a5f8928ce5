#include "polyprod/ringsfields.hpp"

#include <functional>
#include <sstream>
#include <utility>

namespace polyprod {

namespace {

std::uint64_t pow_sat(std::uint64_t base, int exp, std::uint64_t cap) {
    unsigned __int128 v = 1;
    for (int i = 0; i < exp; ++i) {
        v *= base;
        if (v > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(v);
}

using TupleCheck = std::function<std::optional<Counterexample>(const std::vector<Element>&)>;

/// Run a law over all nvars-tuples of the carrier (exhaustively when the
/// space fits the budget, by seeded sampling otherwise).  `check` returns a
/// counterexample when the tuple violates the law.
CheckResult scan_tuples(const CarrierPtr& carrier, int nvars, const CheckPolicy& policy,
                        const TupleCheck& check) {
    CheckResult res;
    res.evidence.seed = policy.seed;
    if (carrier->enumerable()) {
        const auto& elems = carrier->elements();
        const std::uint64_t space =
            pow_sat(elems.size(), nvars, policy.exhaustive_budget);
        if (space <= policy.exhaustive_budget && !elems.empty()) {
            res.evidence.exhaustive = true;
            std::vector<std::size_t> idx(static_cast<std::size_t>(nvars), 0);
            std::vector<Element> tuple(static_cast<std::size_t>(nvars), elems.front());
            std::uint64_t count = 0;
            while (true) {
                for (int i = 0; i < nvars; ++i) tuple[static_cast<std::size_t>(i)] = elems[idx[static_cast<std::size_t>(i)]];
                ++count;
                if (auto bad = check(tuple)) {
                    res.passed = false;
                    res.evidence.count = count;
                    res.counterexample = std::move(bad);
                    return res;
                }
                int p = nvars - 1;
                while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == elems.size()) {
                    idx[static_cast<std::size_t>(p)] = 0;
                    --p;
                }
                if (p < 0) break;
            }
            res.passed = true;
            res.evidence.count = count;
            return res;
        }
    }
    Rng rng(policy.seed);
    std::vector<Element> tuple;
    for (std::uint64_t s = 0; s < policy.law_samples; ++s) {
        tuple.clear();
        for (int i = 0; i < nvars; ++i) tuple.push_back(carrier->sample(rng));
        if (auto bad = check(tuple)) {
            res.passed = false;
            res.evidence.count = s + 1;
            res.counterexample = std::move(bad);
            return res;
        }
    }
    res.passed = true;
    res.evidence.count = policy.law_samples;
    return res;
}

/// True when the program is a binary operation or an iterate of one
/// (componentwise: every component is).
bool iterates_binary(const ProgramPtr& p) {
    if (!p) return false;
    if (p->kind() == OpProgram::Kind::Componentwise) {
        if (p->subs().empty()) return false;
        for (const auto& s : p->subs())
            if (!iterates_binary(s)) return false;
        return true;
    }
    return p->iterated_from() == 2;
}

std::string shape_str(const PolyadicRing& r) {
    return "(" + std::to_string(r.add_arity()) + "," + std::to_string(r.mul_arity()) + ")";
}

}  // namespace

PolyadicRing make_ring(std::string name, CarrierPtr carrier, ProgramPtr add, ProgramPtr mul) {
    PolyadicRing r;
    r.name = std::move(name);
    r.carrier = std::move(carrier);
    r.add = make_op(std::move(add), "add");
    r.mul = make_op(std::move(mul), "mul");
    if (auto q = derive_quer(r.add)) {
        r.add_quer = *q;
        r.add_quer->role = "add-quer";
    }
    return r;
}

AlgebraicStructure additive_structure(const PolyadicRing& r) {
    AlgebraicStructure s;
    s.name = r.name + " (additive)";
    s.carrier = r.carrier;
    s.mult = r.add;
    s.quer = r.add_quer;
    return s;
}

AlgebraicStructure multiplicative_structure(const PolyadicRing& r) {
    AlgebraicStructure s;
    s.name = r.name + " (multiplicative)";
    s.carrier = r.carrier;
    s.mult = r.mul;
    s.quer = r.mul_quer;
    s.identity_candidates = r.identity_candidates;
    s.zero_candidates = r.zero_candidates;
    return s;
}

CheckResult DistributivityReport::combined() const {
    CheckResult res;
    res.passed = passed;
    res.evidence.exhaustive = !relations.empty();
    for (const auto& rel : relations) {
        res.evidence.exhaustive = res.evidence.exhaustive && rel.evidence.exhaustive;
        res.evidence.count += rel.evidence.count;
        res.evidence.seed = rel.evidence.seed;
        if (!rel.passed && !res.counterexample) {
            res.counterexample = rel.counterexample;
            res.note = rel.note;
        }
    }
    if (res.passed)
        res.note = std::to_string(relations.size()) + " relations checked";
    return res;
}

DistributivityReport check_distributivity(const PolyadicRing& r, const CheckPolicy& policy) {
    const int n = r.mul_arity();
    const int m = r.add_arity();
    const int nvars = (n - 1) + m;
    DistributivityReport rep;
    rep.passed = true;
    for (int i = 1; i <= n; ++i) {
        CheckResult rel = scan_tuples(
            r.carrier, nvars, policy,
            [&](const std::vector<Element>& t) -> std::optional<Counterexample> {
                const std::vector<Element> xs(t.begin(), t.begin() + (n - 1));
                const std::vector<Element> ys(t.begin() + (n - 1), t.end());
                const Element inner = r.add.program->eval(ys);
                std::vector<Element> mu_args(xs);
                mu_args.insert(mu_args.begin() + (i - 1), inner);
                const Element lhs = r.mul.program->eval(mu_args);
                std::vector<Element> summands;
                summands.reserve(static_cast<std::size_t>(m));
                for (int j = 0; j < m; ++j) {
                    std::vector<Element> args(xs);
                    args.insert(args.begin() + (i - 1), ys[static_cast<std::size_t>(j)]);
                    summands.push_back(r.mul.program->eval(args));
                }
                const Element rhs = r.add.program->eval(summands);
                if (lhs == rhs) return std::nullopt;
                Counterexample ce;
                ce.tuple = t;
                ce.detail = "additive block at position " + std::to_string(i) +
                            ": sides differ, " + lhs.str() + " vs " + rhs.str();
                return ce;
            });
        rel.note = "additive block at position " + std::to_string(i) + " of " + std::to_string(n);
        rep.passed = rep.passed && rel.passed;
        rep.relations.push_back(std::move(rel));
    }
    return rep;
}

Element additive_quer(const PolyadicRing& r, const Element& x, const CheckPolicy& policy) {
    return querelement(additive_structure(r), x, policy);
}

DoubleDornteReport check_double_dornte(const PolyadicRing& r, const CheckPolicy& policy) {
    DoubleDornteReport rep;
    rep.additive = check_dornte(additive_structure(r), policy);
    rep.passed = rep.additive.passed;
    if (r.mul_quer) {
        rep.multiplicative = check_dornte(multiplicative_structure(r), policy);
        rep.passed = rep.passed && rep.multiplicative->passed;
    }
    return rep;
}

std::string ring_kind_name(RingKind kind) {
    switch (kind) {
        case RingKind::Ring: return "ring";
        case RingKind::CommutativeRing: return "commutative ring";
        case RingKind::DivisionRing: return "division ring";
        case RingKind::Field: return "field";
        case RingKind::SemicommutativeField: return "semicommutative field";
    }
    return "ring";
}

bool ClassificationReport::laws_pass() const {
    for (const auto& [name, res] : evidence)
        if (!res.passed) return false;
    return true;
}

ClassificationReport classify(const PolyadicRing& r, const CheckPolicy& policy) {
    ClassificationReport rep;
    const AlgebraicStructure adds = additive_structure(r);
    const AlgebraicStructure muls = multiplicative_structure(r);

    const CheckResult add_assoc = check_total_associativity(adds, policy);
    const CommutativityReport add_comm = check_commutativity(adds, policy);
    const CheckResult add_solv = check_solvability(adds, policy).result;
    const CheckResult mul_assoc = check_total_associativity(muls, policy);
    const DistributivityReport dist = check_distributivity(r, policy);
    rep.evidence.emplace_back("add-associativity", add_assoc);
    rep.evidence.emplace_back("add-commutativity", add_comm.result);
    rep.evidence.emplace_back("add-solvability", add_solv);
    rep.evidence.emplace_back("mul-associativity", mul_assoc);
    rep.evidence.emplace_back("distributivity", dist.combined());
    const bool ring_laws = add_assoc.passed && add_comm.result.passed && add_solv.passed &&
                           mul_assoc.passed && dist.passed;

    const ZeroReport zero = find_zero(muls, policy);
    rep.zeroless = !zero.zero.has_value();
    const IdentityReport ident = find_identity(muls, policy);
    rep.unital = ident.cls == IdentityClass::TwoSided;
    rep.derived = iterates_binary(r.add.program) && iterates_binary(r.mul.program);

    const CommutativityReport mul_comm = check_commutativity(muls, policy);

    // Division rung: the nonzero part under multiplication must be a group.
    bool division = false;
    if (ring_laws) {
        AlgebraicStructure star = muls;
        bool star_ready = true;
        if (zero.zero) {
            if (muls.carrier->enumerable()) {
                std::vector<Element> nonzero;
                for (const Element& e : muls.carrier->elements())
                    if (!(e == *zero.zero)) nonzero.push_back(e);
                if (nonzero.empty()) {
                    star_ready = false;
                    rep.notes += "multiplication has a zero and no nonzero part; ";
                } else {
                    star.carrier = Carrier::finite(
                        muls.carrier->spec_string() + " nonzero", std::move(nonzero));
                    star.zero_candidates.clear();
                }
            } else {
                star_ready = false;
                rep.notes += "zero found but carrier is not enumerable, division checks skipped; ";
            }
        }
        if (star_ready) {
            try {
                const CheckResult star_assoc =
                    zero.zero ? check_total_associativity(star, policy) : mul_assoc;
                const CheckResult star_solv = check_solvability(star, policy).result;
                division = star_assoc.passed && star_solv.passed;
                if (division) {
                    if (zero.zero) rep.evidence.emplace_back("mul-group-associativity", star_assoc);
                    rep.evidence.emplace_back("mul-solvability", star_solv);
                } else {
                    rep.notes += "not a division ring: ";
                    rep.notes += !star_assoc.passed ? "nonzero multiplication is not associative; "
                                                    : "multiplicative solvability fails; ";
                    if (!star_solv.passed && star_solv.counterexample)
                        rep.notes += star_solv.counterexample->detail + "; ";
                }
            } catch (const ClosureViolation& e) {
                rep.notes += std::string("not a division ring: nonzero part is not closed "
                                         "under multiplication (") + e.what() + "); ";
            }
        }
    }

    if (division) {
        if (mul_comm.commutative) {
            rep.kind = RingKind::Field;
            rep.evidence.emplace_back("mul-commutativity", mul_comm.result);
        } else if (mul_comm.semicommutative) {
            rep.kind = RingKind::SemicommutativeField;
            CheckResult semi = mul_comm.result;
            semi.passed = true;
            semi.counterexample.reset();
            semi.note = "first<->last swap invariance holds; full commutativity fails";
            rep.evidence.emplace_back("mul-semicommutativity", semi);
        } else {
            rep.kind = RingKind::DivisionRing;
        }
    } else {
        rep.kind = mul_comm.commutative ? RingKind::CommutativeRing : RingKind::Ring;
        if (mul_comm.commutative)
            rep.evidence.emplace_back("mul-commutativity", mul_comm.result);
    }

    // Quer interaction: exact factor on one sample, re-verified on ten more.
    if (r.add_quer && r.mul_quer) {
        try {
            const auto samples = r.carrier->sample_many(policy.seed, 11);
            bool symmetric = true;
            std::optional<ExactScalar> factor;
            bool consistent = !samples.empty();
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const QuerCommutator qc = quer_commutator(r, samples[i]);
                symmetric = symmetric && qc.lhs == qc.rhs;
                if (i == 0) {
                    factor = qc.factor;
                } else if (!factor || !qc.factor || !(*qc.factor == *factor)) {
                    consistent = false;
                }
                if (!factor) consistent = false;
            }
            rep.quer_symmetric = symmetric;
            if (consistent) {
                rep.quer_factor = factor;
            } else {
                const QuerCommutator qc = quer_commutator(r, samples.front());
                rep.notes += "no common quer factor; sample pair " + qc.lhs.str() + " vs " +
                             qc.rhs.str() + "; ";
            }
        } catch (const PolyprodError& e) {
            rep.notes += std::string("quer interaction not sampled: ") + e.what() + "; ";
        }
    }
    return rep;
}

QuerCommutator quer_commutator(const PolyadicRing& r, const Element& x) {
    if (!r.add_quer || !r.mul_quer)
        throw NoSolution("quer-commutator needs both queroperations declared on " + r.name);
    QuerCommutator out;
    out.lhs = r.add_quer->program->eval({r.mul_quer->program->eval({x})});
    out.rhs = r.mul_quer->program->eval({r.add_quer->program->eval({x})});
    out.factor = scalar_ratio(out.lhs, out.rhs);
    return out;
}

PolyadicRing ring_full_product(const PolyadicRing& r1, const PolyadicRing& r2) {
    if (r1.add_arity() != r2.add_arity() || r1.mul_arity() != r2.mul_arity())
        throw ArityShapeMismatch("full ring product needs equal shapes, got " + shape_str(r1) +
                                 " and " + shape_str(r2));
    PolyadicRing out;
    out.name = r1.name + " (x) " + r2.name;
    out.carrier = Carrier::product({r1.carrier, r2.carrier});
    out.add = make_op(OpProgram::componentwise({r1.add.program, r2.add.program}), "add");
    out.mul = make_op(OpProgram::componentwise({r1.mul.program, r2.mul.program}), "mul");
    if (r1.add_quer && r2.add_quer) {
        out.add_quer = make_op(
            OpProgram::componentwise({r1.add_quer->program, r2.add_quer->program}), "add-quer");
    } else if (auto q = derive_quer(out.add)) {
        out.add_quer = *q;
        out.add_quer->role = "add-quer";
    }
    if (r1.mul_quer && r2.mul_quer)
        out.mul_quer = make_op(
            OpProgram::componentwise({r1.mul_quer->program, r2.mul_quer->program}), "mul-quer");
    out.identity_candidates = cross_candidates({r1.identity_candidates, r2.identity_candidates});
    out.zero_candidates = cross_candidates({r1.zero_candidates, r2.zero_candidates});
    return out;
}

PolyadicRing ring_mixed_product(const PolyadicRing& r1, const PolyadicRing& r2, int m_prime,
                                int n_prime) {
    const auto ell = [](int target, int base) -> std::optional<int> {
        if (target < base || (target - 1) % (base - 1) != 0) return std::nullopt;
        return (target - 1) / (base - 1);
    };
    const auto ell_nu_1 = ell(m_prime, r1.add_arity());
    const auto ell_nu_2 = ell(m_prime, r2.add_arity());
    const auto ell_mu_1 = ell(n_prime, r1.mul_arity());
    const auto ell_mu_2 = ell(n_prime, r2.mul_arity());
    if (!ell_nu_1 || !ell_nu_2 || !ell_mu_1 || !ell_mu_2)
        throw IncompatibleArities("no iteration counts reach shape (" + std::to_string(m_prime) +
                                  "," + std::to_string(n_prime) + ") from " + shape_str(r1) +
                                  " and " + shape_str(r2));
    PolyadicRing out;
    out.name = r1.name + " (*) " + r2.name + " @(" + std::to_string(m_prime) + "," +
               std::to_string(n_prime) + ")";
    out.carrier = Carrier::product({r1.carrier, r2.carrier});
    out.add = make_op(OpProgram::componentwise({OpProgram::iterate(r1.add.program, *ell_nu_1),
                                                OpProgram::iterate(r2.add.program, *ell_nu_2)}),
                      "add");
    out.mul = make_op(OpProgram::componentwise({OpProgram::iterate(r1.mul.program, *ell_mu_1),
                                                OpProgram::iterate(r2.mul.program, *ell_mu_2)}),
                      "mul");
    if (auto q = derive_quer(out.add)) {
        out.add_quer = *q;
        out.add_quer->role = "add-quer";
    }
    out.identity_candidates = cross_candidates({r1.identity_candidates, r2.identity_candidates});
    out.zero_candidates = cross_candidates({r1.zero_candidates, r2.zero_candidates});
    return out;
}

PolyadicRing field_product(const PolyadicRing& f1, const PolyadicRing& f2,
                           const CheckPolicy& policy) {
    if (f1.add_arity() != f2.add_arity() || f1.mul_arity() != f2.mul_arity())
        throw ArityShapeMismatch("field product needs equal shapes, got " + shape_str(f1) +
                                 " and " + shape_str(f2));

    const AlgebraicStructure m1 = multiplicative_structure(f1);
    const AlgebraicStructure m2 = multiplicative_structure(f2);
    const ZeroReport z1 = find_zero(m1, policy);
    const ZeroReport z2 = find_zero(m2, policy);
    if (z1.zero || z2.zero) {
        // The binary-style obstruction: zeros produce idempotent doubles that
        // no multiplication can invert.
        std::ostringstream msg;
        msg << "constituents are not zeroless";
        const IdentityReport e1 = find_identity(m1, policy);
        const IdentityReport e2 = find_identity(m2, policy);
        if (z1.zero && e2.element)
            msg << "; noninvertible idempotent double (" << z1.zero->str() << ", "
                << e2.element->str() << ")";
        if (z2.zero && e1.element)
            msg << "; noninvertible idempotent double (" << e1.element->str() << ", "
                << z2.zero->str() << ")";
        throw NotAField(msg.str());
    }

    for (const auto* m : {&m1, &m2}) {
        const CheckResult assoc = check_total_associativity(*m, policy);
        if (!assoc.passed)
            throw NotAField(m->name + ": multiplication is not associative");
        const CheckResult solv = check_solvability(*m, policy).result;
        if (!solv.passed)
            throw NotAField(m->name + ": multiplication is not uniquely solvable" +
                            (solv.counterexample ? " (" + solv.counterexample->detail + ")" : ""));
    }

    PolyadicRing prod = ring_full_product(f1, f2);
    const AlgebraicStructure mp = multiplicative_structure(prod);
    const CheckResult assoc = check_total_associativity(mp, policy);
    const CheckResult solv = check_solvability(mp, policy).result;
    if (!assoc.passed || !solv.passed)
        throw NotAField("product multiplication fails the group checks on the doubles");
    return prod;
}

}  // namespace polyprod
