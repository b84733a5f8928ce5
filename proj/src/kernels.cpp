#include "polyprod/kernels.hpp"

#include <atomic>
#include <map>

namespace polyprod::kernels {

std::uint64_t FiniteOpTable::index_of(const std::vector<std::uint32_t>& digits) const {
    std::uint64_t idx = 0;
    for (std::uint32_t d : digits) idx = idx * size + d;
    return idx;
}

std::optional<FiniteOpTable> compile_table(const Carrier& carrier,
                                           const OpProgram& program,
                                           std::uint64_t max_entries) {
    if (!carrier.enumerable()) return std::nullopt;
    FiniteOpTable out;
    out.elems = carrier.elements();
    out.arity = program.arity();
    out.size = static_cast<std::uint32_t>(out.elems.size());

    __int128 entries = 1;
    for (int j = 0; j < out.arity; ++j) {
        entries *= out.size;
        if (entries > static_cast<__int128>(max_entries)) return std::nullopt;
    }
    const auto total = static_cast<std::uint64_t>(entries);

    std::map<Element, std::uint32_t> position;
    for (std::uint32_t i = 0; i < out.size; ++i) position.emplace(out.elems[i], i);

    out.table.resize(total);
    std::vector<std::uint32_t> d(static_cast<std::size_t>(out.arity), 0);
    std::vector<Element> args;
    args.reserve(static_cast<std::size_t>(out.arity));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        args.clear();
        for (int j = 0; j < out.arity; ++j) args.push_back(out.elems[d[static_cast<std::size_t>(j)]]);
        Element v = program.eval(args);
        auto it = position.find(v);
        if (it == position.end())
            throw ClosureViolation("operation escapes the carrier: value " + v.str());
        out.table[idx] = it->second;
        for (int j = out.arity - 1; j >= 0; --j) {
            auto& dj = d[static_cast<std::size_t>(j)];
            if (++dj < out.size) break;
            dj = 0;
        }
    }
    return out;
}

namespace {

/// Geometry of the (2n-1)-polyad scan for one compiled table.
struct AssocShape {
    int n = 0;
    int length = 0;  ///< 2n-1
    std::uint64_t size = 0;
    std::uint64_t total = 0;               ///< size^length
    std::vector<std::uint64_t> weight;     ///< weight[j] = size^j
};

AssocShape assoc_shape(const FiniteOpTable& op) {
    AssocShape sh;
    sh.n = op.arity;
    sh.length = 2 * op.arity - 1;
    sh.size = op.size;
    sh.weight.assign(static_cast<std::size_t>(sh.length) + 1, 1);
    for (int j = 1; j <= sh.length; ++j)
        sh.weight[static_cast<std::size_t>(j)] = sh.weight[static_cast<std::size_t>(j - 1)] * sh.size;
    sh.total = sh.weight[static_cast<std::size_t>(sh.length)];
    return sh;
}

void decode(const AssocShape& sh, std::uint64_t t, std::uint32_t* d) {
    for (int j = 0; j < sh.length; ++j)
        d[j] = static_cast<std::uint32_t>((t / sh.weight[static_cast<std::size_t>(sh.length - 1 - j)]) % sh.size);
}

std::uint32_t placement_value(const FiniteOpTable& op, const AssocShape& sh,
                              const std::uint32_t* d, int p) {
    std::uint64_t inner = 0;
    for (int q = p; q < p + sh.n; ++q) inner = inner * sh.size + d[q];
    const std::uint32_t w = op.table[inner];
    std::uint64_t outer = 0;
    for (int q = 0; q < p; ++q) outer = outer * sh.size + d[q];
    outer = outer * sh.size + w;
    for (int q = p + sh.n; q < sh.length; ++q) outer = outer * sh.size + d[q];
    return op.table[outer];
}

/// First pair of placements that disagree on polyad d, if any.
bool disagreement(const FiniteOpTable& op, const AssocShape& sh, const std::uint32_t* d,
                  int& a, int& b) {
    const std::uint32_t v0 = placement_value(op, sh, d, 0);
    for (int p = 1; p < sh.n; ++p) {
        if (placement_value(op, sh, d, p) != v0) {
            a = 0;
            b = p;
            return true;
        }
    }
    return false;
}

ScanOutcome failure_at(const FiniteOpTable& op, const AssocShape& sh, std::uint64_t t) {
    ScanOutcome out;
    out.passed = false;
    out.tuples = sh.total;
    out.bad_index = t;
    out.bad_digits.resize(static_cast<std::size_t>(sh.length));
    decode(sh, t, out.bad_digits.data());
    disagreement(op, sh, out.bad_digits.data(), out.placement_a, out.placement_b);
    return out;
}

}  // namespace

ScanOutcome assoc_scan_serial(const FiniteOpTable& op) {
    const AssocShape sh = assoc_shape(op);
    std::vector<std::uint32_t> d(static_cast<std::size_t>(sh.length));
    for (std::uint64_t t = 0; t < sh.total; ++t) {
        decode(sh, t, d.data());
        int a = 0, b = 0;
        if (disagreement(op, sh, d.data(), a, b)) return failure_at(op, sh, t);
    }
    ScanOutcome out;
    out.tuples = sh.total;
    return out;
}

ScanOutcome assoc_scan_parallel(const FiniteOpTable& op) {
    const AssocShape sh = assoc_shape(op);
    std::atomic<std::uint64_t> first_bad{UINT64_MAX};
    const auto total = static_cast<long long>(sh.total);
#pragma omp parallel
    {
        std::vector<std::uint32_t> d(static_cast<std::size_t>(sh.length));
#pragma omp for schedule(static)
        for (long long t = 0; t < total; ++t) {
            const auto tu = static_cast<std::uint64_t>(t);
            if (tu >= first_bad.load(std::memory_order_relaxed)) continue;
            decode(sh, tu, d.data());
            int a = 0, b = 0;
            if (disagreement(op, sh, d.data(), a, b)) {
                std::uint64_t cur = first_bad.load(std::memory_order_relaxed);
                while (tu < cur &&
                       !first_bad.compare_exchange_weak(cur, tu, std::memory_order_relaxed)) {
                }
            }
        }
    }
    const std::uint64_t bad = first_bad.load();
    if (bad == UINT64_MAX) {
        ScanOutcome out;
        out.tuples = sh.total;
        return out;
    }
    return failure_at(op, sh, bad);
}

ScanOutcome assoc_scan_reference(const Carrier& carrier, const OpProgram& program) {
    if (!carrier.enumerable())
        throw NotSamplable("reference associativity scan needs an enumerable carrier");
    const auto elems = carrier.elements();
    const auto S = static_cast<std::uint64_t>(elems.size());
    const int n = program.arity();
    const int L = 2 * n - 1;

    std::uint64_t total = 1;
    for (int j = 0; j < L; ++j) total *= S;

    const auto value_at = [&](const std::vector<Element>& t, int p) {
        std::vector<Element> inner(t.begin() + p, t.begin() + p + n);
        Element w = program.eval(inner);
        std::vector<Element> outer;
        outer.reserve(static_cast<std::size_t>(n));
        outer.insert(outer.end(), t.begin(), t.begin() + p);
        outer.push_back(std::move(w));
        outer.insert(outer.end(), t.begin() + p + n, t.end());
        return program.eval(outer);
    };

    std::vector<std::uint32_t> d(static_cast<std::size_t>(L), 0);
    std::vector<Element> t;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        t.clear();
        for (int j = 0; j < L; ++j) t.push_back(elems[d[static_cast<std::size_t>(j)]]);
        const Element v0 = value_at(t, 0);
        for (int p = 1; p < n; ++p) {
            if (!(value_at(t, p) == v0)) {
                ScanOutcome out;
                out.passed = false;
                out.tuples = total;
                out.bad_index = idx;
                out.bad_digits = d;
                out.placement_a = 0;
                out.placement_b = p;
                return out;
            }
        }
        for (int j = L - 1; j >= 0; --j) {
            auto& dj = d[static_cast<std::size_t>(j)];
            if (++dj < S) break;
            dj = 0;
        }
    }
    ScanOutcome out;
    out.tuples = total;
    return out;
}

}  // namespace polyprod::kernels
