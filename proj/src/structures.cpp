#include "polyprod/structures.hpp"

#include <algorithm>
#include <sstream>

#include "polyprod/kernels.hpp"

namespace polyprod {

namespace {

using kernels::FiniteOpTable;

/// min(base^exp, cap+1): saturates just above cap so callers can compare.
std::uint64_t pow_capped(std::uint64_t base, int exp, std::uint64_t cap) {
    __int128 v = 1;
    for (int i = 0; i < exp; ++i) {
        v *= base;
        if (v > static_cast<__int128>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(v);
}

/// Value of the two-level composition with the inner block at position p.
Element placement_value(const AlgebraicStructure& s, const std::vector<Element>& t, int p) {
    const int n = s.mult.arity;
    std::vector<Element> inner(t.begin() + p, t.begin() + p + n);
    Element w = s.mult.program->eval(inner);
    std::vector<Element> outer;
    outer.reserve(static_cast<std::size_t>(n));
    outer.insert(outer.end(), t.begin(), t.begin() + p);
    outer.push_back(std::move(w));
    outer.insert(outer.end(), t.begin() + p + n, t.end());
    return s.mult.program->eval(outer);
}

Counterexample assoc_counterexample(const AlgebraicStructure& s, std::vector<Element> t,
                                    int pa, int pb) {
    Counterexample cex;
    const Element va = placement_value(s, t, pa);
    const Element vb = placement_value(s, t, pb);
    std::ostringstream os;
    os << "inner block at position " << (pa + 1) << " gives " << va.str()
       << ", at position " << (pb + 1) << " gives " << vb.str();
    cex.detail = os.str();
    cex.tuple = std::move(t);
    return cex;
}

std::vector<Element> digits_to_elements(const std::vector<Element>& elems,
                                        const std::vector<std::uint32_t>& digits) {
    std::vector<Element> t;
    t.reserve(digits.size());
    for (std::uint32_t d : digits) t.push_back(elems[d]);
    return t;
}

/// Compiled table for the structure's operation, when the engine allows it
/// and the table fits the budget.
std::optional<FiniteOpTable> table_for(const AlgebraicStructure& s, const CheckPolicy& pol) {
    if (pol.engine == CheckPolicy::Engine::SerialReference) return std::nullopt;
    if (!s.carrier->enumerable()) return std::nullopt;
    return kernels::compile_table(*s.carrier, *s.mult.program, pol.exhaustive_budget);
}

std::string one_line_permutation(const std::vector<int>& sig) {
    std::ostringstream os;
    os << "[";
    for (std::size_t j = 0; j < sig.size(); ++j) {
        if (j) os << ",";
        os << sig[j] + 1;
    }
    os << "]";
    return os.str();
}

/// mu[g^{n-1} with h inserted at every placement] == g?
bool pointwise_quer_ok(const AlgebraicStructure& s, const Element& g, const Element& h) {
    const int n = s.mult.arity;
    for (int pos = 0; pos < n; ++pos) {
        std::vector<Element> args(static_cast<std::size_t>(n), g);
        args[static_cast<std::size_t>(pos)] = h;
        if (!(evaluate(s, args, false) == g)) return false;
    }
    return true;
}

/// The (n-1)-polyad g^{n-2} with h at 0-based slot i.
std::vector<Element> polyad_with(const Element& g, const Element& h, int n, int i) {
    std::vector<Element> playd(static_cast<std::size_t>(n - 1), g);
    playd[static_cast<std::size_t>(i)] = h;
    return playd;
}

/// Do the polyads (g^{n-2}, h at i) absorb every x from both sides?
bool neutral_ok(const AlgebraicStructure& s, const Element& g, const Element& h,
                const CheckPolicy& pol, std::string* why) {
    const int n = s.mult.arity;
    std::vector<Element> probes;
    if (s.carrier->enumerable() &&
        pow_capped(s.carrier->elements().size(), 1, pol.exhaustive_budget) <=
            pol.exhaustive_budget) {
        probes = s.carrier->elements();
    } else {
        Rng rng(pol.seed);
        for (std::uint64_t k = 0; k < pol.law_samples; ++k) probes.push_back(s.carrier->sample(rng));
    }
    for (int i = 0; i < n - 1; ++i) {
        const std::vector<Element> neutral = polyad_with(g, h, n, i);
        for (const Element& x : probes) {
            std::vector<Element> front;
            front.reserve(static_cast<std::size_t>(n));
            front.push_back(x);
            front.insert(front.end(), neutral.begin(), neutral.end());
            std::vector<Element> back(neutral);
            back.push_back(x);
            if (!(evaluate(s, front, false) == x) || !(evaluate(s, back, false) == x)) {
                if (why) {
                    std::ostringstream os;
                    os << "polyad (g^" << n - 2 << " with quer at slot " << i + 1
                       << ") is not neutral at x = " << x.str();
                    *why = os.str();
                }
                return false;
            }
        }
    }
    return true;
}

}  // namespace

PolyadicOperation make_op(ProgramPtr program, std::string role) {
    PolyadicOperation op;
    op.arity = program->arity();
    op.program = std::move(program);
    op.role = std::move(role);
    return op;
}

std::string Evidence::str() const {
    std::ostringstream os;
    if (exhaustive)
        os << "exhaustive (" << count << " cases)";
    else
        os << "sampled (" << count << " cases, seed " << seed << ")";
    return os.str();
}

std::string identity_class_name(IdentityClass cls) {
    switch (cls) {
        case IdentityClass::TwoSided: return "two_sided";
        case IdentityClass::LeftOnly: return "left_only";
        case IdentityClass::RightOnly: return "right_only";
        case IdentityClass::None: return "none";
    }
    return "none";
}

Element evaluate(const AlgebraicStructure& s, const std::vector<Element>& polyad,
                 bool check_closure) {
    if (static_cast<int>(polyad.size()) != s.mult.arity)
        throw ArityMismatch("operation of " + s.name + " wants " +
                            std::to_string(s.mult.arity) + " arguments, got " +
                            std::to_string(polyad.size()));
    Element v = s.mult.program->eval(polyad);
    if (check_closure && !s.carrier->contains(v))
        throw ClosureViolation(s.name + ": value " + v.str() + " escapes the carrier");
    return v;
}

PolyadicOperation iterate_op(const PolyadicOperation& op, int ell) {
    PolyadicOperation out;
    out.program = OpProgram::iterate(op.program, ell);
    out.arity = out.program->arity();
    out.role = op.role;
    return out;
}

Element polyadic_power(const AlgebraicStructure& s, const Element& g, int ell) {
    const PolyadicOperation wide = iterate_op(s.mult, ell);
    const std::vector<Element> args(static_cast<std::size_t>(wide.arity), g);
    Element v = wide.program->eval(args);
    if (!s.carrier->contains(v))
        throw ClosureViolation(s.name + ": power " + v.str() + " escapes the carrier");
    return v;
}

std::optional<int> check_nilpotent(const AlgebraicStructure& s, const Element& g,
                                   int ell_max, const CheckPolicy& policy) {
    const ZeroReport zr = find_zero(s, policy);
    if (!zr.zero) return std::nullopt;
    for (int ell = 1; ell <= ell_max; ++ell)
        if (polyadic_power(s, g, ell) == *zr.zero) return ell;
    return std::nullopt;
}

// --- total associativity -----------------------------------------------------

CheckResult check_total_associativity(const AlgebraicStructure& s, const CheckPolicy& policy) {
    const int n = s.mult.arity;
    const int L = 2 * n - 1;
    CheckResult res;

    if (s.carrier->enumerable()) {
        const auto elems = s.carrier->elements();
        const auto S = static_cast<std::uint64_t>(elems.size());
        if (pow_capped(S, L, policy.exhaustive_budget) <= policy.exhaustive_budget) {
            kernels::ScanOutcome out;
            if (policy.engine == CheckPolicy::Engine::SerialReference) {
                out = kernels::assoc_scan_reference(*s.carrier, *s.mult.program);
            } else {
                auto table = kernels::compile_table(*s.carrier, *s.mult.program,
                                                    policy.exhaustive_budget);
                out = table ? kernels::assoc_scan_parallel(*table)
                            : kernels::assoc_scan_reference(*s.carrier, *s.mult.program);
            }
            res.evidence = {true, out.tuples, policy.seed};
            res.passed = out.passed;
            if (!out.passed)
                res.counterexample = assoc_counterexample(
                    s, digits_to_elements(elems, out.bad_digits), out.placement_a,
                    out.placement_b);
            return res;
        }
    }

    Rng rng(policy.seed);
    res.evidence = {false, policy.assoc_samples, policy.seed};
    for (std::uint64_t k = 0; k < policy.assoc_samples; ++k) {
        std::vector<Element> t;
        t.reserve(static_cast<std::size_t>(L));
        for (int j = 0; j < L; ++j) t.push_back(s.carrier->sample(rng));
        const Element v0 = placement_value(s, t, 0);
        for (int p = 1; p < n; ++p) {
            if (!(placement_value(s, t, p) == v0)) {
                res.passed = false;
                res.evidence.count = k + 1;
                res.counterexample = assoc_counterexample(s, std::move(t), 0, p);
                return res;
            }
        }
    }
    res.passed = true;
    return res;
}

// --- commutativity ------------------------------------------------------------

CommutativityReport check_commutativity(const AlgebraicStructure& s, const CheckPolicy& policy) {
    const int n = s.mult.arity;
    CommutativityReport rep;
    if (n == 1) {
        rep.commutative = true;
        rep.semicommutative = true;
        rep.result.passed = true;
        rep.result.evidence = {true, 0, policy.seed};
        rep.result.note = "unary operation: permutation invariance is vacuous";
        return rep;
    }

    std::vector<Element> elems;
    bool exhaustive = false;
    if (s.carrier->enumerable()) {
        elems = s.carrier->elements();
        exhaustive = pow_capped(elems.size(), n, policy.exhaustive_budget) <=
                     policy.exhaustive_budget;
    }

    // Permutations to test, as images: permuted tuple u[j] = t[sig[j]].
    std::vector<std::vector<int>> sigmas;
    std::vector<int> identity(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) identity[static_cast<std::size_t>(j)] = j;
    std::vector<int> firstlast = identity;
    std::swap(firstlast.front(), firstlast.back());
    const bool all_perms = exhaustive && n <= 5;
    if (all_perms) {
        std::vector<int> sig = identity;
        while (std::next_permutation(sig.begin(), sig.end())) sigmas.push_back(sig);
        // next_permutation from the identity walks every non-identity image once
    } else {
        for (int j = 0; j + 1 < n; ++j) {
            std::vector<int> sig = identity;
            std::swap(sig[static_cast<std::size_t>(j)], sig[static_cast<std::size_t>(j + 1)]);
            sigmas.push_back(sig);
        }
        if (n > 2) sigmas.push_back(firstlast);
        rep.result.note =
            "tested the adjacent transpositions (generators of the full symmetric group) "
            "plus the first<->last swap";
    }

    std::optional<FiniteOpTable> table;
    if (exhaustive) table = table_for(s, policy);

    bool firstlast_passed = true;
    bool all_passed = true;
    std::uint64_t checked = 0;

    for (const auto& sig : sigmas) {
        bool sig_passed = true;
        std::optional<Counterexample> cex;

        if (exhaustive) {
            const auto S = static_cast<std::uint64_t>(elems.size());
            std::uint64_t space = 1;
            for (int j = 0; j < n; ++j) space *= S;
            if (table) {
                std::vector<std::uint32_t> d(static_cast<std::size_t>(n));
                for (std::uint64_t t = 0; t < space && sig_passed; ++t) {
                    std::uint64_t rem = t;
                    for (int j = n - 1; j >= 0; --j) {
                        d[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(rem % S);
                        rem /= S;
                    }
                    std::uint64_t pidx = 0;
                    for (int j = 0; j < n; ++j)
                        pidx = pidx * S + d[static_cast<std::size_t>(sig[static_cast<std::size_t>(j)])];
                    if (table->table[t] != table->table[pidx]) {
                        sig_passed = false;
                        std::vector<std::uint32_t> digits(d);
                        Counterexample c;
                        c.tuple = digits_to_elements(elems, digits);
                        c.detail = "argument order " + one_line_permutation(sig) +
                                   " changes the value from " +
                                   elems[table->table[t]].str() + " to " +
                                   elems[table->table[pidx]].str();
                        cex = std::move(c);
                    }
                }
            } else {
                std::vector<std::uint32_t> d(static_cast<std::size_t>(n), 0);
                for (std::uint64_t t = 0; t < space && sig_passed; ++t) {
                    std::vector<Element> args;
                    args.reserve(static_cast<std::size_t>(n));
                    for (int j = 0; j < n; ++j) args.push_back(elems[d[static_cast<std::size_t>(j)]]);
                    std::vector<Element> permuted;
                    permuted.reserve(static_cast<std::size_t>(n));
                    for (int j = 0; j < n; ++j)
                        permuted.push_back(args[static_cast<std::size_t>(sig[static_cast<std::size_t>(j)])]);
                    const Element va = evaluate(s, args, false);
                    const Element vb = evaluate(s, permuted, false);
                    if (!(va == vb)) {
                        sig_passed = false;
                        Counterexample c;
                        c.tuple = args;
                        c.detail = "argument order " + one_line_permutation(sig) +
                                   " changes the value from " + va.str() + " to " + vb.str();
                        cex = std::move(c);
                    }
                    for (int j = n - 1; j >= 0; --j) {
                        auto& dj = d[static_cast<std::size_t>(j)];
                        if (++dj < elems.size()) break;
                        dj = 0;
                    }
                }
            }
            checked += space;
        } else {
            Rng rng(policy.seed);
            for (std::uint64_t k = 0; k < policy.law_samples && sig_passed; ++k) {
                std::vector<Element> args;
                args.reserve(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j) args.push_back(s.carrier->sample(rng));
                std::vector<Element> permuted;
                permuted.reserve(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j)
                    permuted.push_back(args[static_cast<std::size_t>(sig[static_cast<std::size_t>(j)])]);
                const Element va = evaluate(s, args, true);
                const Element vb = evaluate(s, permuted, true);
                if (!(va == vb)) {
                    sig_passed = false;
                    Counterexample c;
                    c.tuple = args;
                    c.detail = "argument order " + one_line_permutation(sig) +
                               " changes the value from " + va.str() + " to " + vb.str();
                    cex = std::move(c);
                }
            }
            checked += policy.law_samples;
        }

        if (!sig_passed) {
            all_passed = false;
            if (rep.failing_permutations.size() < 8)
                rep.failing_permutations.push_back(one_line_permutation(sig));
            if (!rep.result.counterexample) rep.result.counterexample = std::move(cex);
            if (sig == firstlast) firstlast_passed = false;
        }
    }

    rep.commutative = all_passed;
    rep.semicommutative = firstlast_passed;
    rep.result.passed = all_passed;
    rep.result.evidence = {exhaustive, checked, policy.seed};
    if (!all_perms && exhaustive && all_passed && rep.result.note.empty() == false) {
        rep.result.note += "; generator invariance implies invariance under every permutation";
    }
    return rep;
}

// --- unique solvability ---------------------------------------------------------

SolvabilityReport check_solvability(const AlgebraicStructure& s, const CheckPolicy& policy) {
    const int n = s.mult.arity;
    SolvabilityReport rep;
    rep.positions.assign(static_cast<std::size_t>(n), false);

    bool exhaustive = false;
    std::vector<Element> elems;
    if (s.carrier->enumerable()) {
        elems = s.carrier->elements();
        exhaustive = pow_capped(elems.size(), n, policy.exhaustive_budget) <=
                     policy.exhaustive_budget;
    }

    if (exhaustive) {
        const auto S = static_cast<std::uint64_t>(elems.size());
        std::uint64_t space = 1;
        for (int j = 0; j < n; ++j) space *= S;
        auto table = table_for(s, policy);

        const auto value_at = [&](const std::vector<std::uint32_t>& d) -> std::uint32_t {
            if (table) return table->table[table->index_of(d)];
            std::vector<Element> args = digits_to_elements(elems, d);
            const Element v = evaluate(s, args, false);
            for (std::uint32_t i = 0; i < elems.size(); ++i)
                if (elems[i] == v) return i;
            throw ClosureViolation("operation escapes the carrier: value " + v.str());
        };

        bool all_ok = true;
        for (int i = 0; i < n; ++i) {
            std::vector<std::uint32_t> counts(space, 0);
            std::vector<std::uint32_t> d(static_cast<std::size_t>(n), 0);
            for (std::uint64_t t = 0; t < space; ++t) {
                const std::uint32_t v = value_at(d);
                std::uint64_t key = 0;
                for (int j = 0; j < n; ++j)
                    if (j != i) key = key * S + d[static_cast<std::size_t>(j)];
                key = key * S + v;
                counts[key]++;
                for (int j = n - 1; j >= 0; --j) {
                    auto& dj = d[static_cast<std::size_t>(j)];
                    if (++dj < S) break;
                    dj = 0;
                }
            }
            bool pos_ok = true;
            for (std::uint64_t key = 0; key < space && pos_ok; ++key) {
                if (counts[key] == 1) continue;
                pos_ok = false;
                if (all_ok && !rep.result.counterexample) {
                    // Decode the (n-1) fixed arguments and the target.
                    std::vector<std::uint32_t> rest(static_cast<std::size_t>(n - 1));
                    std::uint64_t rem = key;
                    const auto target = static_cast<std::uint32_t>(rem % S);
                    rem /= S;
                    for (int j = n - 2; j >= 0; --j) {
                        rest[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(rem % S);
                        rem /= S;
                    }
                    std::vector<std::uint32_t> solutions;
                    for (std::uint32_t x = 0; x < S; ++x) {
                        std::vector<std::uint32_t> full;
                        full.reserve(static_cast<std::size_t>(n));
                        for (int j = 0, r = 0; j < n; ++j)
                            full.push_back(j == i ? x : rest[static_cast<std::size_t>(r++)]);
                        if (value_at(full) == target) solutions.push_back(x);
                    }
                    Counterexample cex;
                    cex.tuple = digits_to_elements(elems, rest);
                    cex.tuple.push_back(elems[target]);
                    std::ostringstream os;
                    os << "slot " << i + 1 << ": equation with target " << elems[target].str()
                       << " has " << solutions.size() << " solutions";
                    if (!solutions.empty()) {
                        os << " (";
                        for (std::size_t k = 0; k < solutions.size() && k < 3; ++k) {
                            if (k) os << ", ";
                            os << elems[solutions[k]].str();
                        }
                        os << ")";
                    }
                    cex.detail = os.str();
                    rep.result.counterexample = std::move(cex);
                }
            }
            rep.positions[static_cast<std::size_t>(i)] = pos_ok;
            all_ok = all_ok && pos_ok;
        }
        rep.result.passed = all_ok;
        rep.result.evidence = {true, static_cast<std::uint64_t>(n) * space, policy.seed};
        return rep;
    }

    // Sampled: use the per-slot algebraic solver, round-tripping every answer.
    const auto kind = s.mult.program->kind();
    if (kind == OpProgram::Kind::Iterate || kind == OpProgram::Kind::Hetero) {
        rep.result.passed = false;
        rep.result.note =
            "no per-slot solver for this operation family; solvability was not sampled";
        rep.result.evidence = {false, 0, policy.seed};
        return rep;
    }

    bool all_ok = true;
    std::uint64_t checked = 0;
    for (int i = 0; i < n; ++i) {
        Rng rng(policy.seed + static_cast<std::uint64_t>(i));
        bool pos_ok = true;
        for (std::uint64_t k = 0; k < policy.law_samples && pos_ok; ++k) {
            std::vector<Element> args;
            args.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) args.push_back(s.carrier->sample(rng));
            const Element target = s.carrier->sample(rng);
            ++checked;

            const auto fail = [&](const std::string& what, const Element* got) {
                pos_ok = false;
                if (all_ok && !rep.result.counterexample) {
                    Counterexample cex;
                    for (int j = 0; j < n; ++j)
                        if (j != i) cex.tuple.push_back(args[static_cast<std::size_t>(j)]);
                    cex.tuple.push_back(target);
                    cex.detail = "slot " + std::to_string(i + 1) + ": " + what +
                                 (got ? " (solver returned " + got->str() + ")" : "");
                    rep.result.counterexample = std::move(cex);
                }
            };

            // Existence: solve for the sampled target and round-trip.
            auto y = s.mult.program->solve_at(args, i, target);
            if (!y) {
                fail("no solution for the sampled target", nullptr);
                break;
            }
            if (!s.carrier->contains(*y)) {
                fail("the unique algebraic solution leaves the carrier", &*y);
                break;
            }
            std::vector<Element> probe = args;
            probe[static_cast<std::size_t>(i)] = *y;
            if (!(evaluate(s, probe, false) == target)) {
                fail("solver produced a non-solution; solvability could not be certified", &*y);
                break;
            }

            // Uniqueness: solving for a produced value must return the input.
            const Element x = args[static_cast<std::size_t>(i)];
            const Element made = evaluate(s, args, false);
            auto back = s.mult.program->solve_at(args, i, made);
            if (!back || !(*back == x)) {
                fail("two distinct solutions for the same equation", back ? &*back : nullptr);
                break;
            }
        }
        rep.positions[static_cast<std::size_t>(i)] = pos_ok;
        all_ok = all_ok && pos_ok;
    }
    rep.result.passed = all_ok;
    rep.result.evidence = {false, checked, policy.seed};
    return rep;
}

// --- querelement and neutral polyads -------------------------------------------

/// Resolve the querelement candidate of g (declared map, unique pointwise
/// candidate on enumerable carriers, or per-slot solve) and verify the
/// pointwise relations mu[g..g, h..] = g.  No neutrality validation: callers
/// that need it (try_querelement) add it, while the Dörnte checker tests
/// neutral-polyad absorption itself.
static std::optional<Element> quer_candidate(const AlgebraicStructure& s, const Element& g,
                                             std::string* why) {
    const int n = s.mult.arity;
    const auto reject = [&](const std::string& reason) -> std::optional<Element> {
        if (why) *why = reason;
        return std::nullopt;
    };

    Element h = g;
    if (s.quer) {
        try {
            h = s.quer->program->eval({g});
        } catch (const PolyprodError& e) {
            return reject(std::string("declared querelement map failed: ") + e.what());
        }
        if (!s.carrier->contains(h))
            return reject("declared querelement " + h.str() + " leaves the carrier");
    } else if (s.carrier->enumerable()) {
        std::vector<Element> candidates;
        for (const Element& c : s.carrier->elements())
            if (pointwise_quer_ok(s, g, c)) candidates.push_back(c);
        if (candidates.size() != 1)
            return reject("expected exactly one pointwise candidate, found " +
                          std::to_string(candidates.size()));
        return candidates.front();
    } else {
        std::vector<Element> args(static_cast<std::size_t>(n), g);
        auto solved = s.mult.program->solve_at(args, n - 1, g);
        if (!solved) return reject("no per-slot solver could produce a querelement");
        h = *solved;
        if (!s.carrier->contains(h))
            return reject("solved querelement " + h.str() + " leaves the carrier");
    }

    if (!pointwise_quer_ok(s, g, h))
        return reject("candidate " + h.str() + " fails mu[g..g, quer] = g at some placement");
    return h;
}

std::optional<Element> try_querelement(const AlgebraicStructure& s, const Element& g,
                                       const CheckPolicy& policy, std::string* why) {
    auto h = quer_candidate(s, g, why);
    if (!h) return std::nullopt;
    std::string neutral_why;
    if (!neutral_ok(s, g, *h, policy, &neutral_why)) {
        if (why) *why = neutral_why;
        return std::nullopt;
    }
    return h;
}

Element querelement(const AlgebraicStructure& s, const Element& g, const CheckPolicy& policy) {
    std::string why;
    auto h = try_querelement(s, g, policy, &why);
    if (!h) throw NoSolution("querelement of " + g.str() + " in " + s.name + ": " + why);
    return *h;
}

std::vector<Element> neutral_polyad(const AlgebraicStructure& s, const Element& g, int pos,
                                    const CheckPolicy& policy) {
    const int n = s.mult.arity;
    if (pos < 1 || pos > n - 1)
        throw ArityMismatch("neutral polyad slot must lie in 1.." + std::to_string(n - 1) +
                            ", got " + std::to_string(pos));
    const Element h = querelement(s, g, policy);
    return polyad_with(g, h, n, pos - 1);
}

// --- Dörnte relations -----------------------------------------------------------

CheckResult check_dornte(const AlgebraicStructure& s, const CheckPolicy& policy) {
    const int n = s.mult.arity;
    CheckResult res;

    // Pairs (g, h) to examine, with the querelement of h resolved per pair.
    struct Pair {
        Element g, h, hq;
    };
    std::vector<Pair> pairs;
    bool exhaustive = false;

    if (s.carrier->enumerable()) {
        const auto elems = s.carrier->elements();
        exhaustive = pow_capped(elems.size(), 2, policy.exhaustive_budget) <=
                     policy.exhaustive_budget;
        if (exhaustive) {
            // Resolve querelements once per h.
            std::vector<Element> quer_of;
            quer_of.reserve(elems.size());
            for (const Element& hh : elems) {
                std::string why;
                auto hq = quer_candidate(s, hh, &why);
                if (!hq) {
                    res.passed = false;
                    res.evidence = {true, static_cast<std::uint64_t>(quer_of.size()), policy.seed};
                    res.counterexample = Counterexample{{hh}, "querelement missing: " + why};
                    return res;
                }
                quer_of.push_back(*hq);
            }
            for (const Element& gg : elems)
                for (std::size_t hi = 0; hi < elems.size(); ++hi)
                    pairs.push_back({gg, elems[hi], quer_of[hi]});
        }
    }
    if (!exhaustive) {
        Rng rng(policy.seed);
        for (std::uint64_t k = 0; k < policy.law_samples; ++k) {
            Element gg = s.carrier->sample(rng);
            Element hh = s.carrier->sample(rng);
            std::string why;
            auto hq = quer_candidate(s, hh, &why);
            if (!hq) {
                res.passed = false;
                res.evidence = {false, k + 1, policy.seed};
                res.counterexample = Counterexample{{hh}, "querelement missing: " + why};
                return res;
            }
            pairs.push_back({std::move(gg), std::move(hh), std::move(*hq)});
        }
    }

    std::uint64_t checked = 0;
    for (const Pair& pr : pairs) {
        for (int i = 0; i < n - 1; ++i) {
            const std::vector<Element> neutral = polyad_with(pr.h, pr.hq, n, i);
            std::vector<Element> front;
            front.reserve(static_cast<std::size_t>(n));
            front.push_back(pr.g);
            front.insert(front.end(), neutral.begin(), neutral.end());
            std::vector<Element> back(neutral);
            back.push_back(pr.g);
            const Element vf = evaluate(s, front, false);
            const Element vb = evaluate(s, back, false);
            ++checked;
            if (!(vf == pr.g) || !(vb == pr.g)) {
                res.passed = false;
                res.evidence = {exhaustive, checked, policy.seed};
                Counterexample cex;
                cex.tuple = {pr.g, pr.h};
                std::ostringstream os;
                os << "neutral polyad of h = " << pr.h.str() << " (quer at slot " << i + 1
                   << ") sends g = " << pr.g.str() << " to " << vf.str() << " / " << vb.str();
                cex.detail = os.str();
                res.counterexample = std::move(cex);
                return res;
            }
        }
    }
    res.passed = true;
    res.evidence = {exhaustive, checked, policy.seed};
    return res;
}

// --- zeros and identities ---------------------------------------------------------

ZeroReport find_zero(const AlgebraicStructure& s, const CheckPolicy& policy) {
    const int n = s.mult.arity;
    ZeroReport rep;

    std::vector<Element> candidates;
    bool exhaustive = false;
    std::vector<Element> elems;
    if (s.carrier->enumerable()) {
        elems = s.carrier->elements();
        candidates = elems;
        // Full scan over the (n-1) companions of every candidate and placement.
        const std::uint64_t per_candidate =
            pow_capped(elems.size(), n - 1, policy.exhaustive_budget);
        exhaustive =
            per_candidate <= policy.exhaustive_budget / std::max<std::uint64_t>(1, n) &&
            pow_capped(elems.size(), n, policy.exhaustive_budget) <= policy.exhaustive_budget;
    } else {
        candidates = s.zero_candidates;
        if (candidates.empty()) {
            rep.note = "no declared zero candidates for a non-enumerable carrier";
            rep.evidence = {false, 0, policy.seed};
            return rep;
        }
    }

    std::uint64_t checked = 0;
    std::vector<std::string> partial;
    std::optional<kernels::FiniteOpTable> table;
    if (exhaustive) table = table_for(s, policy);

    std::uint32_t zi = 0;  // index of the current candidate within elems
    for (const Element& z : candidates) {
        if (exhaustive) {
            while (zi < elems.size() && !(elems[zi] == z)) ++zi;
        }
        std::vector<int> passing;
        for (int p = 0; p < n; ++p) {
            bool ok = true;
            if (exhaustive) {
                const auto S = static_cast<std::uint64_t>(elems.size());
                std::uint64_t space = 1;
                for (int j = 0; j < n - 1; ++j) space *= S;
                std::vector<std::uint32_t> d(static_cast<std::size_t>(n - 1), 0);
                for (std::uint64_t t = 0; t < space && ok; ++t) {
                    if (table) {
                        std::uint64_t idx = 0;
                        for (int j = 0, r = 0; j < n; ++j)
                            idx = idx * S + (j == p ? zi : d[static_cast<std::size_t>(r++)]);
                        ok = table->table[idx] == zi;
                    } else {
                        std::vector<Element> args;
                        args.reserve(static_cast<std::size_t>(n));
                        for (int j = 0, r = 0; j < n; ++j)
                            args.push_back(j == p ? z : elems[d[static_cast<std::size_t>(r++)]]);
                        ok = evaluate(s, args, false) == z;
                    }
                    ++checked;
                    for (int j = n - 2; j >= 0; --j) {
                        auto& dj = d[static_cast<std::size_t>(j)];
                        if (++dj < S) break;
                        dj = 0;
                    }
                }
            } else {
                Rng rng(policy.seed + static_cast<std::uint64_t>(p));
                for (std::uint64_t k = 0; k < policy.law_samples && ok; ++k) {
                    std::vector<Element> args;
                    args.reserve(static_cast<std::size_t>(n));
                    for (int j = 0; j < n; ++j)
                        args.push_back(j == p ? z : s.carrier->sample(rng));
                    ok = evaluate(s, args, true) == z;
                    ++checked;
                }
            }
            if (ok) passing.push_back(p + 1);
        }
        if (static_cast<int>(passing.size()) == n) {
            if (!rep.zero) rep.zero = z;
        } else if (!passing.empty() && partial.size() < 4) {
            std::ostringstream os;
            os << z.str() << " absorbs only at placement";
            for (int p : passing) os << " " << p;
            partial.push_back(os.str());
        }
    }

    rep.evidence = {exhaustive, checked, policy.seed};
    if (!partial.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < partial.size(); ++i) {
            if (i) os << "; ";
            os << partial[i];
        }
        rep.note = os.str();
    }
    return rep;
}

IdentityReport find_identity(const AlgebraicStructure& s, const CheckPolicy& policy) {
    const int n = s.mult.arity;
    IdentityReport rep;

    std::vector<Element> candidates;
    bool exhaustive = false;
    std::vector<Element> elems;
    if (s.carrier->enumerable()) {
        elems = s.carrier->elements();
        candidates = elems;
        exhaustive = pow_capped(elems.size(), 2, policy.exhaustive_budget) <=
                     policy.exhaustive_budget;
    } else {
        candidates = s.identity_candidates;
        if (candidates.empty()) {
            rep.note = "no declared identity candidates for a non-enumerable carrier";
            rep.evidence = {false, 0, policy.seed};
            return rep;
        }
    }

    const auto rank = [](IdentityClass c) {
        switch (c) {
            case IdentityClass::TwoSided: return 3;
            case IdentityClass::LeftOnly:
            case IdentityClass::RightOnly: return 2;
            case IdentityClass::None: return 0;
        }
        return 0;
    };

    std::uint64_t checked = 0;
    int extra = 0;

    for (const Element& e : candidates) {
        std::vector<int> passing;
        for (int p = 0; p < n; ++p) {
            bool ok = true;
            if (exhaustive) {
                for (const Element& g : elems) {
                    std::vector<Element> args(static_cast<std::size_t>(n), e);
                    args[static_cast<std::size_t>(p)] = g;
                    ++checked;
                    if (!(evaluate(s, args, false) == g)) {
                        ok = false;
                        break;
                    }
                }
            } else {
                Rng rng(policy.seed + static_cast<std::uint64_t>(p));
                for (std::uint64_t k = 0; k < policy.law_samples && ok; ++k) {
                    const Element g = s.carrier->sample(rng);
                    std::vector<Element> args(static_cast<std::size_t>(n), e);
                    args[static_cast<std::size_t>(p)] = g;
                    ++checked;
                    ok = evaluate(s, args, true) == g;
                }
            }
            if (ok) passing.push_back(p + 1);
        }

        const bool as_right = std::find(passing.begin(), passing.end(), 1) != passing.end();
        const bool as_left = std::find(passing.begin(), passing.end(), n) != passing.end();
        IdentityClass cls = IdentityClass::None;
        if (as_right && as_left)
            cls = IdentityClass::TwoSided;
        else if (as_right)
            cls = IdentityClass::RightOnly;
        else if (as_left)
            cls = IdentityClass::LeftOnly;

        if (rank(cls) > rank(rep.cls)) {
            rep.cls = cls;
            rep.element = e;
            rep.placements = passing;
        } else if (rank(cls) >= 2 && rep.element && !(e == *rep.element)) {
            ++extra;
        } else if (cls == IdentityClass::None && !passing.empty() && !rep.element &&
                   rep.placements.empty()) {
            rep.placements = passing;  // partial data worth surfacing
            rep.note = e.str() + " is neutral only at placements of the free argument " +
                       [&] {
                           std::ostringstream os;
                           for (std::size_t i = 0; i < passing.size(); ++i) {
                               if (i) os << ",";
                               os << passing[i];
                           }
                           return os.str();
                       }();
        }
    }

    if (rep.cls != IdentityClass::None && static_cast<int>(rep.placements.size()) < n) {
        if (!rep.note.empty()) rep.note += "; ";
        rep.note += "neutral at placements";
        for (int p : rep.placements) rep.note += " " + std::to_string(p);
        rep.note += " only";
    }
    rep.evidence = {exhaustive, checked, policy.seed};
    if (extra > 0) {
        if (!rep.note.empty()) rep.note += "; ";
        rep.note += std::to_string(extra) + " further identity element(s) found";
    }
    return rep;
}

// --- derived querelement maps ----------------------------------------------------

std::optional<PolyadicOperation> derive_quer(const PolyadicOperation& op) {
    const OpProgram& p = *op.program;
    const int n = p.arity();
    ProgramPtr out;
    switch (p.kind()) {
        case OpProgram::Kind::ModLin: {
            const auto& c = p.coeffs();
            const bool plain_sum =
                p.bias() == 0 &&
                std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 1; });
            if (plain_sum) out = OpProgram::neg_scale(n - 2);
            break;
        }
        case OpProgram::Kind::ScalarSum:
        case OpProgram::Kind::MatSum:
            out = OpProgram::neg_scale(n - 2);
            break;
        case OpProgram::Kind::ScalarProd:
        case OpProgram::Kind::MatProd:
            out = OpProgram::power(-(n - 2));
            break;
        case OpProgram::Kind::ConjProd:
            out = OpProgram::power(1);
            break;
        case OpProgram::Kind::Componentwise: {
            std::vector<ProgramPtr> subs;
            for (const auto& sub : p.subs()) {
                auto q = derive_quer(make_op(sub, "quer"));
                if (!q) return std::nullopt;
                subs.push_back(q->program);
            }
            out = OpProgram::componentwise(std::move(subs));
            break;
        }
        default:
            break;
    }
    if (!out) return std::nullopt;
    return make_op(std::move(out), "quer");
}

}  // namespace polyprod
