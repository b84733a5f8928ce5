#include "polyprod/programs.hpp"

#include <algorithm>
#include <sstream>

#include "polyprod/textutil.hpp"

namespace polyprod {

using text::parse_i64;
using text::split;
using text::trim;

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m) {
    a = ((a % m) + m) % m;
    std::int64_t old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t tr = old_r - q * r;
        old_r = r;
        r = tr;
        std::int64_t ts = old_s - q * s;
        old_s = s;
        s = ts;
    }
    if (old_r != 1) return std::nullopt;
    return ((old_s % m) + m) % m;
}

namespace {

std::int64_t norm_mod(__int128 v, std::int64_t m) {
    auto r = static_cast<std::int64_t>(v % m);
    return r < 0 ? r + m : r;
}

std::int64_t mod_pow(std::int64_t base, std::uint64_t exp, std::int64_t m) {
    __int128 acc = 1 % m;
    __int128 b = ((base % m) + m) % m;
    while (exp) {
        if (exp & 1) acc = acc * b % m;
        b = b * b % m;
        exp >>= 1;
    }
    return static_cast<std::int64_t>(acc);
}

std::int64_t common_modulus(const std::vector<Element>& args) {
    std::int64_t m = args.at(0).modular().modulus;
    for (const auto& a : args)
        if (a.modular().modulus != m)
            throw ShapeMismatch("mixed moduli in one polyad");
    return m;
}

/// Conjugate-chain exponent of 0-based slot j: x1 * x2^-1 * x3 * ...
int conj_exponent(int j) { return (j % 2 == 0) ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------------------
// factories
// ---------------------------------------------------------------------------

std::shared_ptr<OpProgram> OpProgram::blank() {
    return std::shared_ptr<OpProgram>(new OpProgram());
}

#define POLYPROD_REQUIRE_ARITY(n, lo)                                              \
    if ((n) < (lo))                                                                \
    throw ArityMismatch("arity must be >= " + std::to_string(lo) + ", got " +      \
                        std::to_string(n))

ProgramPtr OpProgram::mod_sum(int arity) {
    return mod_lin(std::vector<std::int64_t>(static_cast<std::size_t>(arity), 1), 0);
}

ProgramPtr OpProgram::mod_lin(std::vector<std::int64_t> coeffs, std::int64_t bias) {
    POLYPROD_REQUIRE_ARITY(static_cast<int>(coeffs.size()), 1);
    auto p = blank();
    p->kind_ = Kind::ModLin;
    p->arity_ = static_cast<int>(coeffs.size());
    p->iterated_from_ = p->arity_;
    p->coeffs_ = std::move(coeffs);
    p->bias_ = bias;
    return p;
}

#define POLYPROD_SIMPLE_FACTORY(fn, KIND, lo)         \
    ProgramPtr OpProgram::fn(int arity) {             \
        POLYPROD_REQUIRE_ARITY(arity, lo);            \
        auto p = blank();                             \
        p->kind_ = Kind::KIND;                        \
        p->arity_ = arity;                            \
        p->iterated_from_ = arity;                    \
        return p;                                     \
    }

POLYPROD_SIMPLE_FACTORY(mod_prod, ModProd, 1)
POLYPROD_SIMPLE_FACTORY(scalar_sum, ScalarSum, 1)
POLYPROD_SIMPLE_FACTORY(scalar_prod, ScalarProd, 1)
POLYPROD_SIMPLE_FACTORY(mat_sum, MatSum, 1)
POLYPROD_SIMPLE_FACTORY(mat_prod, MatProd, 1)

#undef POLYPROD_SIMPLE_FACTORY

ProgramPtr OpProgram::conj_prod(int arity) {
    POLYPROD_REQUIRE_ARITY(arity, 3);
    if (arity % 2 == 0)
        throw ArityMismatch("conjugate chain needs odd arity, got " + std::to_string(arity));
    auto p = blank();
    p->kind_ = Kind::ConjProd;
    p->arity_ = arity;
    p->iterated_from_ = arity;
    return p;
}

ProgramPtr OpProgram::neg_scale(std::int64_t k) {
    auto p = blank();
    p->kind_ = Kind::NegScale;
    p->arity_ = 1;
    p->iterated_from_ = 1;
    p->scalar_param_ = k;
    return p;
}

ProgramPtr OpProgram::power(std::int64_t pw) {
    auto p = blank();
    p->kind_ = Kind::Power;
    p->arity_ = 1;
    p->iterated_from_ = 1;
    p->scalar_param_ = pw;
    return p;
}

ProgramPtr OpProgram::componentwise(std::vector<ProgramPtr> subs) {
    if (subs.empty()) throw ArityMismatch("componentwise needs at least one program");
    int arity = subs[0]->arity();
    for (const auto& s : subs)
        if (s->arity() != arity)
            throw ArityMismatch("componentwise programs must share one arity");
    auto p = blank();
    p->kind_ = Kind::Componentwise;
    p->arity_ = arity;
    p->iterated_from_ = arity;
    p->subs_ = std::move(subs);
    return p;
}

ProgramPtr OpProgram::iterate(ProgramPtr sub, int ell) {
    if (ell < 1) throw ArityMismatch("iteration count must be >= 1");
    if (ell == 1) return sub;
    const int n0 = sub->arity();
    const int n1 = ell * (n0 - 1) + 1;
    const int base = sub->iterated_from_;

    // Exact foldings: iterating a fold is the same fold, wider. The conjugate
    // chain stays alternating because its arity is odd.
    auto folded = [&]() -> ProgramPtr {
        switch (sub->kind_) {
            case Kind::ModLin: {
                bool all_ones = std::all_of(sub->coeffs_.begin(), sub->coeffs_.end(),
                                            [](std::int64_t c) { return c == 1; });
                if (!all_ones) return nullptr;
                return mod_lin(std::vector<std::int64_t>(static_cast<std::size_t>(n1), 1),
                               sub->bias_ * ell);
            }
            case Kind::ModProd: return mod_prod(n1);
            case Kind::ScalarSum: return scalar_sum(n1);
            case Kind::ScalarProd: return scalar_prod(n1);
            case Kind::ConjProd: return conj_prod(n1);
            case Kind::MatSum: return mat_sum(n1);
            case Kind::MatProd: return mat_prod(n1);
            case Kind::Componentwise: {
                std::vector<ProgramPtr> subs;
                subs.reserve(sub->subs_.size());
                for (const auto& s : sub->subs_) subs.push_back(iterate(s, ell));
                return componentwise(std::move(subs));
            }
            default: return nullptr;
        }
    }();
    if (folded) {
        const_cast<OpProgram&>(*folded).iterated_from_ = base;
        return folded;
    }

    auto p = blank();
    p->kind_ = Kind::Iterate;
    p->arity_ = n1;
    p->iterated_from_ = base;
    p->subs_ = {std::move(sub)};
    p->ell_ = ell;
    return p;
}

ProgramPtr OpProgram::hetero(ProgramPtr sub, int k, std::vector<std::vector<SourceSlot>> rows,
                             std::vector<SourceSlot> intact) {
    if (k < 2) throw ArityMismatch("hetero power needs k >= 2");
    if (rows.empty()) throw ArityMismatch("hetero power needs at least one multiplication row");
    const int n_in = sub->arity();
    const std::int64_t slots =
        static_cast<std::int64_t>(rows.size()) * n_in + static_cast<std::int64_t>(intact.size());
    if (slots % k != 0)
        throw ArityMismatch("slot count " + std::to_string(slots) + " is not a multiple of k");
    const int n_out = static_cast<int>(slots / k);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n_in)
            throw ArityMismatch("each multiplication row must list exactly n sources");
    }
    auto in_range = [&](const SourceSlot& s) {
        return s.first >= 1 && s.first <= n_out && s.second >= 1 && s.second <= k;
    };
    for (const auto& row : rows)
        for (const auto& s : row)
            if (!in_range(s)) throw ArityMismatch("source slot out of range");
    for (const auto& s : intact)
        if (!in_range(s)) throw ArityMismatch("intact slot out of range");

    auto p = blank();
    p->kind_ = Kind::Hetero;
    p->arity_ = n_out;
    p->iterated_from_ = n_out;
    p->subs_ = {std::move(sub)};
    p->k_ = k;
    p->rows_ = std::move(rows);
    p->intact_ = std::move(intact);
    return p;
}

#undef POLYPROD_REQUIRE_ARITY

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

Element OpProgram::eval(const std::vector<Element>& args) const {
    if (static_cast<int>(args.size()) != arity_)
        throw ArityMismatch("program of arity " + std::to_string(arity_) + " applied to " +
                            std::to_string(args.size()) + " arguments");

    switch (kind_) {
        case Kind::ModLin: {
            const std::int64_t m = common_modulus(args);
            __int128 acc = bias_ % m;
            for (std::size_t i = 0; i < args.size(); ++i)
                acc += static_cast<__int128>(coeffs_[i] % m) * args[i].modular().residue;
            return Element(Modular(norm_mod(acc, m), m));
        }
        case Kind::ModProd: {
            const std::int64_t m = common_modulus(args);
            __int128 acc = 1 % m;
            for (const auto& a : args) acc = acc * a.modular().residue % m;
            return Element(Modular(norm_mod(acc, m), m));
        }
        case Kind::ScalarSum: {
            ExactScalar acc = args[0].scalar();
            for (std::size_t i = 1; i < args.size(); ++i) acc = acc + args[i].scalar();
            return Element(acc);
        }
        case Kind::ScalarProd: {
            ExactScalar acc = args[0].scalar();
            for (std::size_t i = 1; i < args.size(); ++i) acc = acc * args[i].scalar();
            return Element(acc);
        }
        case Kind::ConjProd: {
            ExactScalar acc = args[0].scalar();
            for (std::size_t i = 1; i < args.size(); ++i) {
                const auto& x = args[i].scalar();
                acc = acc * (conj_exponent(static_cast<int>(i)) == 1 ? x : x.inverse());
            }
            return Element(acc);
        }
        case Kind::MatSum: {
            CycMatrix acc = args[0].matrix();
            for (std::size_t i = 1; i < args.size(); ++i) acc = acc + args[i].matrix();
            return Element(acc);
        }
        case Kind::MatProd: {
            CycMatrix acc = args[0].matrix();
            for (std::size_t i = 1; i < args.size(); ++i) acc = acc * args[i].matrix();
            return Element(acc);
        }
        case Kind::NegScale: {
            const Element& x = args[0];
            if (x.is_modular()) {
                const auto& mod = x.modular();
                return Element(Modular(
                    norm_mod(-static_cast<__int128>(scalar_param_ % mod.modulus) * mod.residue,
                             mod.modulus),
                    mod.modulus));
            }
            ExactScalar factor(Rat(-scalar_param_), 0);
            if (x.is_scalar()) return Element(x.scalar() * factor);
            return Element(x.matrix().scale(factor));
        }
        case Kind::Power: {
            const Element& x = args[0];
            if (x.is_modular()) {
                const auto& mod = x.modular();
                std::int64_t base = mod.residue;
                if (scalar_param_ < 0) {
                    auto inv = mod_inverse(base, mod.modulus);
                    if (!inv) throw NoSolution("residue " + std::to_string(base) +
                                               " has no inverse mod " +
                                               std::to_string(mod.modulus));
                    return Element(Modular(
                        mod_pow(*inv, static_cast<std::uint64_t>(-scalar_param_), mod.modulus),
                        mod.modulus));
                }
                return Element(Modular(
                    mod_pow(base, static_cast<std::uint64_t>(scalar_param_), mod.modulus),
                    mod.modulus));
            }
            if (x.is_scalar()) return Element(x.scalar().pow(scalar_param_));
            return Element(x.matrix().pow(scalar_param_));
        }
        case Kind::Componentwise: {
            Tuple out;
            out.parts.reserve(subs_.size());
            std::vector<Element> column(args.size());
            for (std::size_t c = 0; c < subs_.size(); ++c) {
                for (std::size_t i = 0; i < args.size(); ++i) {
                    const auto& parts = args[i].tuple().parts;
                    if (parts.size() != subs_.size())
                        throw ShapeMismatch("tuple width " + std::to_string(parts.size()) +
                                            " does not match " + std::to_string(subs_.size()) +
                                            " component programs");
                    column[i] = parts[c];
                }
                out.parts.push_back(subs_[c]->eval(column));
            }
            return Element(std::move(out));
        }
        case Kind::Iterate: {
            const auto& sub = *subs_[0];
            const int n0 = sub.arity();
            std::vector<Element> window(args.begin(), args.begin() + n0);
            Element acc = sub.eval(window);
            std::size_t pos = static_cast<std::size_t>(n0);
            for (int it = 1; it < ell_; ++it) {
                window[0] = acc;
                for (int j = 1; j < n0; ++j) window[static_cast<std::size_t>(j)] = args[pos++];
                acc = sub.eval(window);
            }
            return acc;
        }
        case Kind::Hetero: {
            const auto& sub = *subs_[0];
            auto slot_value = [&](const SourceSlot& s) -> const Element& {
                const auto& parts = args[static_cast<std::size_t>(s.first - 1)].tuple().parts;
                if (static_cast<int>(parts.size()) != k_)
                    throw ShapeMismatch("hetero power expects " + std::to_string(k_) +
                                        "-tuples");
                return parts[static_cast<std::size_t>(s.second - 1)];
            };
            Tuple out;
            out.parts.reserve(rows_.size() + intact_.size());
            std::vector<Element> gathered(static_cast<std::size_t>(sub.arity()));
            for (const auto& row : rows_) {
                for (std::size_t j = 0; j < row.size(); ++j) gathered[j] = slot_value(row[j]);
                out.parts.push_back(sub.eval(gathered));
            }
            for (const auto& s : intact_) out.parts.push_back(slot_value(s));
            return Element(std::move(out));
        }
    }
    throw ShapeMismatch("unreachable program kind");
}

// ---------------------------------------------------------------------------
// exact per-slot solving
// ---------------------------------------------------------------------------

std::optional<Element> OpProgram::solve_at(const std::vector<Element>& args, int pos,
                                           const Element& target) const {
    if (pos < 0 || pos >= arity_) throw ArityMismatch("solve position out of range");
    try {
        switch (kind_) {
            case Kind::ModLin: {
                const std::int64_t m = target.modular().modulus;
                __int128 rest = bias_ % m;
                for (int i = 0; i < arity_; ++i) {
                    if (i == pos) continue;
                    rest += static_cast<__int128>(coeffs_[static_cast<std::size_t>(i)] % m) *
                            args[static_cast<std::size_t>(i)].modular().residue;
                }
                auto inv = mod_inverse(coeffs_[static_cast<std::size_t>(pos)], m);
                if (!inv) return std::nullopt;
                std::int64_t rhs = norm_mod(static_cast<__int128>(target.modular().residue) -
                                                norm_mod(rest, m),
                                            m);
                return Element(Modular(norm_mod(static_cast<__int128>(*inv) * rhs, m), m));
            }
            case Kind::ModProd: {
                const std::int64_t m = target.modular().modulus;
                __int128 prod = 1 % m;
                for (int i = 0; i < arity_; ++i) {
                    if (i == pos) continue;
                    prod = prod * args[static_cast<std::size_t>(i)].modular().residue % m;
                }
                auto inv = mod_inverse(static_cast<std::int64_t>(prod), m);
                if (!inv) return std::nullopt;
                return Element(
                    Modular(norm_mod(static_cast<__int128>(*inv) * target.modular().residue, m),
                            m));
            }
            case Kind::ScalarSum: {
                ExactScalar acc = target.scalar();
                for (int i = 0; i < arity_; ++i) {
                    if (i == pos) continue;
                    acc = acc - args[static_cast<std::size_t>(i)].scalar();
                }
                return Element(acc);
            }
            case Kind::ScalarProd: {
                ExactScalar rest = ExactScalar::one();
                for (int i = 0; i < arity_; ++i) {
                    if (i == pos) continue;
                    rest = rest * args[static_cast<std::size_t>(i)].scalar();
                }
                if (rest.is_zero()) return std::nullopt;
                return Element(target.scalar() * rest.inverse());
            }
            case Kind::ConjProd: {
                // Scalars commute: value = (product of odd slots) / (product
                // of even slots), solve directly for the requested slot.
                ExactScalar rest = ExactScalar::one();
                for (int i = 0; i < arity_; ++i) {
                    if (i == pos) continue;
                    const auto& x = args[static_cast<std::size_t>(i)].scalar();
                    if (x.is_zero()) return std::nullopt;
                    rest = rest * (conj_exponent(i) == 1 ? x : x.inverse());
                }
                if (rest.is_zero()) return std::nullopt;
                ExactScalar rhs = target.scalar() * rest.inverse();
                if (conj_exponent(pos) == 1) return Element(rhs);
                if (rhs.is_zero()) return std::nullopt;
                return Element(rhs.inverse());
            }
            case Kind::MatSum: {
                CycMatrix acc = target.matrix();
                for (int i = 0; i < arity_; ++i) {
                    if (i == pos) continue;
                    acc = acc + (-args[static_cast<std::size_t>(i)].matrix());
                }
                return Element(acc);
            }
            case Kind::MatProd: {
                const auto& t = target.matrix();
                CycMatrix prefix = CycMatrix::identity(t.size());
                CycMatrix suffix = CycMatrix::identity(t.size());
                for (int i = 0; i < pos; ++i)
                    prefix = prefix * args[static_cast<std::size_t>(i)].matrix();
                for (int i = pos + 1; i < arity_; ++i)
                    suffix = suffix * args[static_cast<std::size_t>(i)].matrix();
                return Element(prefix.inverse() * t * suffix.inverse());
            }
            case Kind::NegScale: {
                if (target.is_modular()) {
                    const auto& mod = target.modular();
                    auto inv = mod_inverse(-scalar_param_, mod.modulus);
                    if (!inv) return std::nullopt;
                    return Element(Modular(
                        norm_mod(static_cast<__int128>(*inv) * mod.residue, mod.modulus),
                        mod.modulus));
                }
                if (scalar_param_ == 0) return std::nullopt;
                ExactScalar inv_factor = ExactScalar(Rat(-scalar_param_), 0).inverse();
                if (target.is_scalar()) return Element(target.scalar() * inv_factor);
                return Element(target.matrix().scale(inv_factor));
            }
            case Kind::Power: {
                if (scalar_param_ == 1) return target;
                if (scalar_param_ == -1) {
                    if (target.is_scalar()) {
                        if (target.scalar().is_zero()) return std::nullopt;
                        return Element(target.scalar().inverse());
                    }
                    if (target.is_matrix()) return Element(target.matrix().inverse());
                    return std::nullopt;
                }
                return std::nullopt;
            }
            case Kind::Componentwise: {
                const auto& tparts = target.tuple().parts;
                if (tparts.size() != subs_.size()) return std::nullopt;
                Tuple out;
                out.parts.reserve(subs_.size());
                std::vector<Element> column(args.size());
                for (std::size_t c = 0; c < subs_.size(); ++c) {
                    for (std::size_t i = 0; i < args.size(); ++i)
                        column[i] = args[i].tuple().parts[c];
                    auto part = subs_[c]->solve_at(column, pos, tparts[c]);
                    if (!part) return std::nullopt;
                    out.parts.push_back(std::move(*part));
                }
                return Element(std::move(out));
            }
            case Kind::Iterate:
            case Kind::Hetero:
                return std::nullopt;
        }
    } catch (const PhaseMismatch&) {
        return std::nullopt;  // the exact solution leaves every single ray
    } catch (const ShapeMismatch&) {
        return std::nullopt;
    } catch (const NoSolution&) {
        return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// text form
// ---------------------------------------------------------------------------

std::string OpProgram::serialize() const {
    switch (kind_) {
        case Kind::ModLin: {
            bool plain = bias_ == 0 && std::all_of(coeffs_.begin(), coeffs_.end(),
                                                   [](std::int64_t c) { return c == 1; });
            if (plain) return "modsum";
            std::ostringstream os;
            os << "modlin(" << bias_ << ";";
            for (std::size_t i = 0; i < coeffs_.size(); ++i)
                os << (i ? ", " : " ") << coeffs_[i];
            os << ")";
            return os.str();
        }
        case Kind::ModProd: return "modprod";
        case Kind::ScalarSum: return "scalarsum";
        case Kind::ScalarProd: return "scalarprod";
        case Kind::ConjProd: return "conjprod";
        case Kind::MatSum: return "matsum";
        case Kind::MatProd: return "matprod";
        case Kind::NegScale: return "negscale(" + std::to_string(scalar_param_) + ")";
        case Kind::Power: return "power(" + std::to_string(scalar_param_) + ")";
        case Kind::Componentwise: {
            std::string out = "comp(";
            for (std::size_t i = 0; i < subs_.size(); ++i) {
                if (i) out += " | ";
                out += subs_[i]->serialize();
            }
            return out + ")";
        }
        case Kind::Iterate:
            return "iterate(" + subs_[0]->serialize() + ", " + std::to_string(ell_) + ")";
        case Kind::Hetero: {
            std::ostringstream os;
            os << "hetero(k=" << k_ << "; sub=" << subs_[0]->serialize() << "; rows=[";
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                os << (r ? ", [" : "[");
                for (std::size_t j = 0; j < rows_[r].size(); ++j)
                    os << (j ? ", (" : "(") << rows_[r][j].first << "," << rows_[r][j].second
                       << ")";
                os << "]";
            }
            os << "]; intact=[";
            for (std::size_t j = 0; j < intact_.size(); ++j)
                os << (j ? ", (" : "(") << intact_[j].first << "," << intact_[j].second << ")";
            os << "])";
            return os.str();
        }
    }
    return "?";
}

ProgramPtr OpProgram::parse(const std::string& raw, int arity) {
    std::string t = trim(raw);
    if (t.empty()) throw ParseError("empty operation program");

    auto args_of = [&](const std::string& head) -> std::optional<std::string> {
        if (t.rfind(head + "(", 0) != 0 || t.back() != ')') return std::nullopt;
        return t.substr(head.size() + 1, t.size() - head.size() - 2);
    };

    if (t == "modsum") return mod_sum(arity);
    if (t == "modprod") return mod_prod(arity);
    if (t == "scalarsum") return scalar_sum(arity);
    if (t == "scalarprod") return scalar_prod(arity);
    if (t == "conjprod") return conj_prod(arity);
    if (t == "matsum") return mat_sum(arity);
    if (t == "matprod") return mat_prod(arity);

    if (auto body = args_of("modlin")) {
        auto halves = split(*body, ';');
        if (halves.size() != 2) throw ParseError("modlin wants 'modlin(bias; c1, ..)'");
        std::vector<std::int64_t> coeffs;
        for (const auto& c : split(halves[1], ',')) coeffs.push_back(parse_i64(c));
        if (static_cast<int>(coeffs.size()) != arity)
            throw ParseError("modlin lists " + std::to_string(coeffs.size()) +
                             " coefficients for arity " + std::to_string(arity));
        return mod_lin(std::move(coeffs), parse_i64(halves[0]));
    }
    if (auto body = args_of("negscale")) {
        if (arity != 1) throw ParseError("negscale is unary");
        return neg_scale(parse_i64(*body));
    }
    if (auto body = args_of("power")) {
        if (arity != 1) throw ParseError("power is unary");
        return power(parse_i64(*body));
    }
    if (auto body = args_of("comp")) {
        std::vector<ProgramPtr> subs;
        for (const auto& part : split(*body, '|')) subs.push_back(parse(part, arity));
        return componentwise(std::move(subs));
    }
    if (auto body = args_of("iterate")) {
        auto parts = split(*body, ',');
        if (parts.size() < 2) throw ParseError("iterate wants 'iterate(program, ell)'");
        // The program part may itself contain commas; ell is the last piece.
        std::int64_t ell = parse_i64(parts.back());
        std::string subtext = parts.front();
        for (std::size_t i = 1; i + 1 < parts.size(); ++i) subtext += ", " + parts[i];
        if (ell < 1 || (arity - 1) % ell != 0)
            throw ParseError("iterate(_, " + std::to_string(ell) +
                             ") cannot produce arity " + std::to_string(arity));
        int sub_arity = static_cast<int>((arity - 1) / ell + 1);
        return iterate(parse(subtext, sub_arity), static_cast<int>(ell));
    }
    if (t.rfind("hetero(", 0) == 0)
        throw ParseError("hetero programs are built by the product commands, not from files");
    throw ParseError("unknown operation program '" + t + "'");
}

}  // namespace polyprod
