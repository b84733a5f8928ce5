#include "polyprod/products.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace polyprod {

std::vector<AritySolution> arity_compatible(int n1, int n2, int bound) {
    if (n1 < 2 || n2 < 2)
        throw ArityMismatch("constituent arities must be at least 2, got " +
                            std::to_string(n1) + " and " + std::to_string(n2));
    std::vector<AritySolution> out;
    const long long step = std::lcm<long long>(n1 - 1, n2 - 1);
    for (long long c = step; c + 1 <= bound; c += step)
        out.push_back({static_cast<int>(c + 1), static_cast<int>(c / (n1 - 1)),
                       static_cast<int>(c / (n2 - 1))});
    return out;
}

std::optional<int> hetero_arity(int n, int k, int ell_id) {
    if (n < 2 || k < 2 || ell_id < 0 || ell_id > k - 1) return std::nullopt;
    const long long cut = static_cast<long long>(n - 1) * ell_id;
    if (cut % k != 0) return std::nullopt;
    const long long np = n - cut / k;
    if (np < 2 || np > n) return std::nullopt;
    return static_cast<int>(np);
}

std::vector<QuantRow> quantization_table(int k_max, int n_max) {
    std::vector<QuantRow> rows;
    for (int k = 2; k <= k_max; ++k) {
        for (int ell_id = 1; ell_id <= k - 1; ++ell_id) {
            QuantRow row;
            row.k = k;
            row.ell_id = ell_id;
            row.ell_mu = k - ell_id;
            for (int n = 2; n <= n_max; ++n)
                if (auto np = hetero_arity(n, k, ell_id)) row.pairs.emplace_back(n, *np);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string QuiverSpec::str() const {
    std::ostringstream os;
    os << "k=" << k << " n=" << n_in << " -> n'=" << n_out << " (ell_mu=" << ell_mu
       << ", ell_id=" << ell_id << ")";
    const auto slot = [](const SourceSlot& s) {
        return "(" + std::to_string(s.first) + "," + std::to_string(s.second) + ")";
    };
    for (std::size_t r = 0; r < rows.size(); ++r) {
        os << "\n  mul row " << r + 1 << ":";
        for (const auto& sl : rows[r]) os << " " << slot(sl);
    }
    if (!intact.empty()) {
        os << "\n  intact:";
        for (const auto& sl : intact) os << " " << slot(sl);
    }
    return os.str();
}

bool validate_quiver(const QuiverSpec& q) {
    if (q.k < 2 || q.n_in < 2 || q.n_out < 2 || q.n_out > q.n_in) return false;
    if (q.ell_mu < 1 || q.ell_id < 0) return false;
    if (q.ell_mu + q.ell_id != q.k) return false;
    if (q.ell_mu * q.n_in + q.ell_id != q.k * q.n_out) return false;
    if (static_cast<long long>(q.n_in - 1) * q.ell_id % q.k != 0) return false;
    if (static_cast<int>(q.rows.size()) != q.ell_mu) return false;
    if (static_cast<int>(q.intact.size()) != q.ell_id) return false;
    std::vector<bool> used(static_cast<std::size_t>(q.k) * q.n_out, false);
    const auto mark = [&](const SourceSlot& s) {
        if (s.first < 1 || s.first > q.n_out || s.second < 1 || s.second > q.k) return false;
        const auto idx = static_cast<std::size_t>(s.first - 1) * q.k + (s.second - 1);
        if (used[idx]) return false;
        used[idx] = true;
        return true;
    };
    for (const auto& row : q.rows) {
        if (static_cast<int>(row.size()) != q.n_in) return false;
        for (const auto& s : row)
            if (!mark(s)) return false;
    }
    for (const auto& s : q.intact)
        if (!mark(s)) return false;
    return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

QuiverSpec make_quiver_postlike(int n, int k, int ell_id) {
    const auto np = hetero_arity(n, k, ell_id);
    if (!np)
        throw NotQuantized("no admissible output arity for n=" + std::to_string(n) +
                           ", k=" + std::to_string(k) + ", ell_id=" + std::to_string(ell_id));
    const int n_out = *np;
    QuiverSpec q;
    q.k = k;
    q.n_in = n;
    q.n_out = n_out;
    q.ell_id = ell_id;
    q.ell_mu = k - ell_id;

    // Concatenate the k wrapped diagonals of the (argument x component) grid,
    // each read in descending argument order.
    std::vector<SourceSlot> seq;
    seq.reserve(static_cast<std::size_t>(k) * n_out);
    for (int d = 0; d < k; ++d)
        for (int a = n_out; a >= 1; --a) seq.emplace_back(a, (a - 1 + d) % k + 1);

    const auto diagonal = [&](const SourceSlot& s) {
        return ((s.second - 1) - (s.first - 1) % k + k) % k;
    };
    for (int r = 0; r < q.ell_mu; ++r) {
        std::vector<SourceSlot> row(seq.begin() + static_cast<std::ptrdiff_t>(r) * n,
                                    seq.begin() + static_cast<std::ptrdiff_t>(r + 1) * n);
        std::sort(row.begin(), row.end(), [&](const SourceSlot& x, const SourceSlot& y) {
            if (x.first != y.first) return x.first < y.first;
            return diagonal(x) < diagonal(y);
        });
        q.rows.push_back(std::move(row));
    }
    q.intact.assign(seq.begin() + static_cast<std::ptrdiff_t>(q.ell_mu) * n, seq.end());
    std::sort(q.intact.begin(), q.intact.end());
    return q;
}

std::vector<Element> cross_candidates(const std::vector<std::vector<Element>>& lists) {
    constexpr std::size_t kCap = 64;
    for (const auto& l : lists)
        if (l.empty()) return {};
    std::vector<Element> out{Element(Tuple{})};
    for (const auto& l : lists) {
        std::vector<Element> next;
        for (const Element& acc : out) {
            for (const Element& e : l) {
                Tuple t = acc.tuple();
                t.parts.push_back(e);
                next.push_back(Element(std::move(t)));
                if (next.size() > kCap) return {};
            }
        }
        out = std::move(next);
    }
    return out;
}

namespace {

std::optional<ProgramPtr> componentwise_quer(const std::vector<AlgebraicStructure>& parts) {
    std::vector<ProgramPtr> quers;
    for (const auto& p : parts) {
        if (p.quer) {
            quers.push_back(p.quer->program);
        } else if (auto derived = derive_quer(p.mult)) {
            quers.push_back(derived->program);
        } else {
            return std::nullopt;
        }
    }
    return OpProgram::componentwise(std::move(quers));
}

}  // namespace

AlgebraicStructure full_product(const std::vector<AlgebraicStructure>& parts) {
    if (parts.empty()) throw ArityMismatch("a product needs at least one constituent");
    const int n = parts.front().mult.arity;
    for (const auto& p : parts)
        if (p.mult.arity != n)
            throw ArityMismatch("full product needs equal arities, got " +
                                std::to_string(p.mult.arity) + " vs " + std::to_string(n));

    AlgebraicStructure out;
    std::vector<CarrierPtr> carriers;
    std::vector<ProgramPtr> programs;
    std::vector<std::vector<Element>> ids, zeros;
    std::string name;
    for (const auto& p : parts) {
        carriers.push_back(p.carrier);
        programs.push_back(p.mult.program);
        ids.push_back(p.identity_candidates);
        zeros.push_back(p.zero_candidates);
        if (!name.empty()) name += " (x) ";
        name += p.name;
    }
    out.name = name;
    out.carrier = Carrier::product(std::move(carriers));
    out.mult = make_op(OpProgram::componentwise(std::move(programs)));
    if (auto q = componentwise_quer(parts)) out.quer = make_op(*q, "quer");
    out.identity_candidates = cross_candidates(ids);
    out.zero_candidates = cross_candidates(zeros);
    return out;
}

AlgebraicStructure mixed_product(const AlgebraicStructure& s1, const AlgebraicStructure& s2,
                                 const AritySolution& sol) {
    const int n1 = s1.mult.arity;
    const int n2 = s2.mult.arity;
    if (sol.ell_1 < 1 || sol.ell_2 < 1 ||
        sol.n_prime != sol.ell_1 * (n1 - 1) + 1 || sol.n_prime != sol.ell_2 * (n2 - 1) + 1)
        throw IncompatibleArities(
            "requested arity " + std::to_string(sol.n_prime) + " does not match " +
            std::to_string(sol.ell_1) + "x(" + std::to_string(n1) + "-1)+1 and " +
            std::to_string(sol.ell_2) + "x(" + std::to_string(n2) + "-1)+1");

    AlgebraicStructure out;
    out.name = s1.name + " (*) " + s2.name + " @" + std::to_string(sol.n_prime);
    out.carrier = Carrier::product({s1.carrier, s2.carrier});
    out.mult = make_op(OpProgram::componentwise({OpProgram::iterate(s1.mult.program, sol.ell_1),
                                                 OpProgram::iterate(s2.mult.program, sol.ell_2)}));
    if (auto q = derive_quer(out.mult)) out.quer = *q;
    out.identity_candidates = cross_candidates({s1.identity_candidates, s2.identity_candidates});
    out.zero_candidates = cross_candidates({s1.zero_candidates, s2.zero_candidates});
    return out;
}

HeteroResult hetero_power(const AlgebraicStructure& s, const QuiverSpec& q,
                          const CheckPolicy& policy, bool strict) {
    if (!validate_quiver(q))
        throw NotQuantized("placement fails the quiver shape constraints");
    if (s.mult.arity != q.n_in)
        throw ArityMismatch("quiver expects constituent arity " + std::to_string(q.n_in) +
                            ", structure has " + std::to_string(s.mult.arity));

    HeteroResult res;
    res.quiver = q;
    res.structure.name = s.name + " hetero k=" + std::to_string(q.k) + " (n'=" +
                         std::to_string(q.n_out) + ")";
    res.structure.carrier =
        Carrier::product(std::vector<CarrierPtr>(static_cast<std::size_t>(q.k), s.carrier));
    res.structure.mult = make_op(OpProgram::hetero(s.mult.program, q.k, q.rows, q.intact));

    const auto lift = [&](const std::vector<Element>& cands) {
        std::vector<Element> out;
        for (const Element& e : cands) {
            Tuple t;
            t.parts.assign(static_cast<std::size_t>(q.k), e);
            out.push_back(Element(std::move(t)));
        }
        return out;
    };
    res.structure.identity_candidates = lift(s.identity_candidates);
    res.structure.zero_candidates = lift(s.zero_candidates);

    res.assoc = check_total_associativity(res.structure, policy);
    if (strict && !res.assoc.passed) {
        std::string detail = "hetero power is not associative";
        if (res.assoc.counterexample) detail += ": " + res.assoc.counterexample->detail;
        throw NotAssociative(detail);
    }
    return res;
}

std::vector<QuiverSpec> quiver_search(const AlgebraicStructure& s, int n_out, int k,
                                      int ell_id, std::uint64_t budget,
                                      const CheckPolicy& policy) {
    const int n = s.mult.arity;
    const auto np = hetero_arity(n, k, ell_id);
    if (!np || *np != n_out || budget == 0) return {};
    const int ell_mu = k - ell_id;

    // Enumerate candidate placements: within a row, argument indices are
    // non-decreasing and every argument 1..n_out appears; the rows' first
    // slots are strictly increasing.  Deterministic lexicographic order.
    std::vector<QuiverSpec> candidates;
    std::vector<bool> used(static_cast<std::size_t>(n_out) * k, false);
    std::vector<std::vector<SourceSlot>> rows;
    std::vector<SourceSlot> current;
    std::uint64_t generated = 0;

    const auto slot_index = [&](int a, int c) {
        return static_cast<std::size_t>(a - 1) * k + (c - 1);
    };

    const auto finish_candidate = [&]() {
        QuiverSpec q;
        q.k = k;
        q.n_in = n;
        q.n_out = n_out;
        q.ell_mu = ell_mu;
        q.ell_id = ell_id;
        q.rows = rows;
        for (int a = 1; a <= n_out; ++a)
            for (int c = 1; c <= k; ++c)
                if (!used[slot_index(a, c)]) q.intact.emplace_back(a, c);
        candidates.push_back(std::move(q));
        ++generated;
    };

    // Arguments still missing from the current row must fit into the
    // remaining positions.
    const auto row_can_cover = [&](int covered_upto, int pos) {
        return (n_out - covered_upto) <= (n - pos);
    };

    const std::function<void(int)> fill_row = [&](int pos) {
        if (generated >= budget) return;
        if (pos == n) {
            rows.push_back(std::move(current));
            current.clear();
            if (static_cast<int>(rows.size()) == ell_mu) {
                finish_candidate();
            } else {
                // Next row starts strictly after this row's first slot.
                fill_row(0);
            }
            current = std::move(rows.back());
            rows.pop_back();
            return;
        }
        const int min_arg = pos == 0 ? 1 : current.back().first;
        // Covered arguments so far form a prefix 1..covered (non-decreasing).
        const int covered = pos == 0 ? 0 : current.back().first;
        for (int a = min_arg; a <= n_out; ++a) {
            if (a > covered + 1) break;  // would skip an argument for good
            if (!row_can_cover(std::max(covered, a), pos + 1)) continue;
            for (int c = 1; c <= k; ++c) {
                if (used[slot_index(a, c)]) continue;
                if (pos == 0 && !rows.empty() &&
                    SourceSlot(a, c) <= rows.back().front())
                    continue;
                used[slot_index(a, c)] = true;
                current.emplace_back(a, c);
                fill_row(pos + 1);
                current.pop_back();
                used[slot_index(a, c)] = false;
                if (generated >= budget) return;
            }
        }
    };
    fill_row(0);

    std::vector<QuiverSpec> hits;
    for (const auto& q : candidates) {
        if (!validate_quiver(q)) continue;
        auto res = hetero_power(s, q, policy, false);
        if (res.assoc.passed) hits.push_back(q);
    }
    return hits;
}

}  // namespace polyprod
