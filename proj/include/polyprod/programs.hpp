#pragma once

/**
 * Operation programs: a tiny closed expression language over the argument
 * slots x1..xn. Every polyadic operation in the engine is one of these
 * programs, so evaluators are serializable (structure files), auditable, and
 * where the algebra allows it, exactly solvable for a single unknown slot —
 * which is what powers querelement computation on infinite carriers.
 *
 * Atoms (arity from context):
 *   modsum, modprod           modular sum / product of residues
 *   modlin(b; c1, .., cn)     c1*x1 + .. + cn*xn + b on residues
 *   scalarsum, scalarprod     same-ray scalar sum / chain product
 *   conjprod                  x1 * x2^-1 * x3 * x4^-1 * .. (odd arity)
 *   matsum, matprod           matrix chain sum / product
 *   negscale(k), power(p)     unary maps x -> -k*x and x -> x^p
 * Composites:
 *   comp(p1 | p2 | ..)        componentwise action on tuples
 *   iterate(p, ell)           left-nested iterate, arity ell*(n-1)+1
 *   hetero powers             built programmatically (not file-parseable)
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyprod/carriers.hpp"

namespace polyprod {

class OpProgram;
using ProgramPtr = std::shared_ptr<const OpProgram>;

/// One source slot of a hetero placement: (argument index 1..n', component
/// index 1..k).
using SourceSlot = std::pair<int, int>;

class OpProgram {
public:
    enum class Kind {
        ModLin,
        ModProd,
        ScalarSum,
        ScalarProd,
        ConjProd,
        MatSum,
        MatProd,
        NegScale,
        Power,
        Componentwise,
        Iterate,
        Hetero,
    };

    // ---- constructors ------------------------------------------------------
    static ProgramPtr mod_sum(int arity);
    static ProgramPtr mod_lin(std::vector<std::int64_t> coeffs, std::int64_t bias);
    static ProgramPtr mod_prod(int arity);
    static ProgramPtr scalar_sum(int arity);
    static ProgramPtr scalar_prod(int arity);
    static ProgramPtr conj_prod(int arity);  // odd arity >= 3
    static ProgramPtr mat_sum(int arity);
    static ProgramPtr mat_prod(int arity);
    static ProgramPtr neg_scale(std::int64_t k);
    static ProgramPtr power(std::int64_t p);
    static ProgramPtr componentwise(std::vector<ProgramPtr> subs);
    /// Left-nested iterate; folds into a wider atom of the same family when
    /// the algebra makes that exact (sums, chain products, conjugate chains).
    static ProgramPtr iterate(ProgramPtr sub, int ell);
    static ProgramPtr hetero(ProgramPtr sub, int k, std::vector<std::vector<SourceSlot>> rows,
                             std::vector<SourceSlot> intact);

    // ---- shape -------------------------------------------------------------
    Kind kind() const { return kind_; }
    int arity() const { return arity_; }
    /// Base arity this program was iterated up from (derived-structure
    /// detection); the program's own arity when it was never iterated.
    int iterated_from() const { return iterated_from_; }

    const std::vector<ProgramPtr>& subs() const { return subs_; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
    std::int64_t bias() const { return bias_; }
    const std::vector<std::vector<SourceSlot>>& hetero_rows() const { return rows_; }
    const std::vector<SourceSlot>& hetero_intact() const { return intact_; }
    int hetero_k() const { return k_; }
    std::int64_t scale_or_power() const { return scalar_param_; }

    // ---- behaviour ---------------------------------------------------------
    Element eval(const std::vector<Element>& args) const;

    /// Exact solve of eval(args[pos] := h) == target for h. Returns nullopt
    /// when this program kind admits no algebraic per-slot solver or the
    /// equation has no (unique) solution on the value level. pos is 0-based.
    std::optional<Element> solve_at(const std::vector<Element>& args, int pos,
                                    const Element& target) const;

    std::string serialize() const;
    /// Parse in the context of a declared arity (file section header).
    static ProgramPtr parse(const std::string& text, int arity);

private:
    OpProgram() = default;
    static std::shared_ptr<OpProgram> blank();

    Kind kind_ = Kind::ModLin;
    int arity_ = 0;
    int iterated_from_ = 0;
    std::vector<std::int64_t> coeffs_;   // ModLin
    std::int64_t bias_ = 0;              // ModLin
    std::int64_t scalar_param_ = 0;      // NegScale k / Power p
    std::vector<ProgramPtr> subs_;       // Componentwise, Iterate, Hetero
    int ell_ = 0;                        // Iterate
    int k_ = 0;                          // Hetero
    std::vector<std::vector<SourceSlot>> rows_;  // Hetero
    std::vector<SourceSlot> intact_;             // Hetero
};

/// Modular inverse of a mod m (m >= 1), when gcd(a, m) = 1.
std::optional<std::int64_t> mod_inverse(std::int64_t a, std::int64_t m);

}  // namespace polyprod
