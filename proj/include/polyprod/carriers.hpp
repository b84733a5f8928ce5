#pragma once

/**
 * Exact element domains and carrier sets.
 *
 * Every value the engine touches is exact: unbounded rationals (GMP) on a
 * ray q * zeta^e of the primitive 8th root of unity zeta (zeta^2 = i), cyclic
 * shift-pattern matrices over those scalars, modular residues, and tuples.
 * No floating point anywhere; equality is structural on canonical forms.
 */

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace polyprod {

using Rat = mpq_class;
using Int = mpz_class;

// ---------------------------------------------------------------------------
// Errors. Input/shape errors (CLI exit 2) vs. law verdicts is decided by the
// caller; these carry a stable code string for reports.
// ---------------------------------------------------------------------------

class PolyprodError : public std::runtime_error {
public:
    PolyprodError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define POLYPROD_ERROR(NAME)                                                   \
    class NAME : public PolyprodError {                                        \
    public:                                                                    \
        explicit NAME(const std::string& what) : PolyprodError(#NAME, what) {} \
    }

POLYPROD_ERROR(PhaseMismatch);      // same-ray addition applied across rays
POLYPROD_ERROR(ShapeMismatch);      // matrix size/shift disagreement
POLYPROD_ERROR(ArityMismatch);      // operation applied to wrong polyad length
POLYPROD_ERROR(ClosureViolation);   // evaluator escaped its carrier
POLYPROD_ERROR(NotSamplable);       // carrier lacks a sampler
POLYPROD_ERROR(NoSolution);         // quer/zero/identity equation unsolvable
POLYPROD_ERROR(NotQuantized);       // hetero arity formula has no integer value
POLYPROD_ERROR(NotAssociative);     // strict-mode hetero power failed the check
POLYPROD_ERROR(IncompatibleArities);
POLYPROD_ERROR(ArityShapeMismatch);
POLYPROD_ERROR(NotAField);
POLYPROD_ERROR(UnknownEntry);
POLYPROD_ERROR(ParseError);

#undef POLYPROD_ERROR

// ---------------------------------------------------------------------------
// Deterministic RNG. mt19937_64 has a standardized sequence; the integer
// draw is hand-rolled (rejection sampling) because std distributions are
// not bit-reproducible across library implementations.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform draw from [lo, hi], inclusive. Requires lo <= hi.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % span;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return lo + static_cast<std::int64_t>(r % span);
    }

private:
    std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// ExactScalar: reduced rational magnitude on a zeta_8 ray.
// ---------------------------------------------------------------------------

/**
 * A scalar (num/den) * zeta^phase with zeta = exp(i*pi/4), held canonically:
 * the stored phase is always in {0,1,2,3} (zeta^4 = -1 is absorbed into the
 * sign of the magnitude), the fraction is reduced with positive denominator,
 * and zero forces phase 0. Phase 2 is the imaginary unit i; phase 1 is the
 * square root of i.
 *
 * Addition is defined only within a shared ray (or with zero): all additive
 * carriers in scope live on single rays, and widening to the full cyclotomic
 * field would mask closure bugs.
 */
class ExactScalar {
public:
    ExactScalar() : mag_(0), phase_(0) {}
    ExactScalar(long v) : mag_(v), phase_(0) {}  // NOLINT(google-explicit-constructor)
    ExactScalar(Rat magnitude) : mag_(std::move(magnitude)), phase_(0) {
        canonicalize();
    }  // NOLINT(google-explicit-constructor)
    ExactScalar(Rat magnitude, int phase) : mag_(std::move(magnitude)), phase_(phase) {
        canonicalize();
    }

    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar one() { return ExactScalar(1); }
    /// The imaginary unit i = zeta^2.
    static ExactScalar imag(Rat magnitude = 1) { return ExactScalar(std::move(magnitude), 2); }
    /// sqrt(i) = zeta.
    static ExactScalar root_i(Rat magnitude = 1) { return ExactScalar(std::move(magnitude), 1); }

    const Rat& magnitude() const { return mag_; }
    int phase() const { return phase_; }
    bool is_zero() const { return sgn(mag_) == 0; }

    ExactScalar operator*(const ExactScalar& o) const {
        return ExactScalar(mag_ * o.mag_, phase_ + o.phase_);
    }

    ExactScalar operator+(const ExactScalar& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (phase_ != o.phase_)
            throw PhaseMismatch("cannot add " + str() + " and " + o.str() +
                                " (different rays)");
        return ExactScalar(mag_ + o.mag_, phase_);
    }

    ExactScalar operator-() const { return ExactScalar(-mag_, phase_); }
    ExactScalar operator-(const ExactScalar& o) const { return *this + (-o); }

    ExactScalar inverse() const {
        if (is_zero()) throw NoSolution("inverse of zero scalar");
        // 1/zeta^p = zeta^(8-p); the constructor re-canonicalizes.
        return ExactScalar(1 / mag_, (8 - phase_) % 8);
    }

    ExactScalar pow(long k) const {
        if (k < 0) return inverse().pow(-k);
        ExactScalar acc = one();
        ExactScalar base = *this;
        for (unsigned long e = static_cast<unsigned long>(k); e != 0; e >>= 1) {
            if (e & 1UL) acc = acc * base;
            base = base * base;
        }
        return acc;
    }

    bool operator==(const ExactScalar& o) const {
        return phase_ == o.phase_ && mag_ == o.mag_;
    }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }
    bool operator<(const ExactScalar& o) const {
        if (phase_ != o.phase_) return phase_ < o.phase_;
        return cmp(mag_, o.mag_) < 0;
    }

    /// Canonical text form: "-3/5", "i", "7*i", "3/5*z", "2*z3" (z = zeta).
    std::string str() const;
    static ExactScalar parse(const std::string& text);

private:
    void canonicalize() {
        mag_.canonicalize();
        phase_ = ((phase_ % 8) + 8) % 8;
        if (phase_ >= 4) {  // zeta^4 = -1
            phase_ -= 4;
            mag_ = -mag_;
        }
        if (sgn(mag_) == 0) phase_ = 0;
    }

    Rat mag_;
    int phase_;
};

// ---------------------------------------------------------------------------
// CycMatrix: the cyclic shift-pattern matrix family.
// ---------------------------------------------------------------------------

/**
 * A size x size matrix (size 2 or 4) whose support lies on the cyclic
 * shift-by-t pattern: entry i sits at (i, (i+t) mod size), all other cells are
 * zero. The shift-by-one members are the carriers of interest (the 2x2 case is
 * the antidiagonal family); general t appears transiently because a product of
 * n shift-one matrices has shift n mod size — which is why the shape is
 * preserved exactly when n = 1 (mod size).
 *
 * Products compose as M(t1) * M(t2) = M(t1 + t2) with entries
 * (a*b)_i = a_i * b_(i+t1 mod size); sums require identical shape.
 */
class CycMatrix {
public:
    CycMatrix(int size, int shift, std::vector<ExactScalar> entries)
        : size_(size), shift_(((shift % size) + size) % size), entries_(std::move(entries)) {
        if (size_ != 2 && size_ != 4)
            throw ShapeMismatch("matrix size must be 2 or 4, got " + std::to_string(size_));
        if (entries_.size() != static_cast<std::size_t>(size_))
            throw ShapeMismatch("expected " + std::to_string(size_) + " entries");
    }

    /// Identity matrix (shift 0, unit entries).
    static CycMatrix identity(int size) {
        return CycMatrix(size, 0, std::vector<ExactScalar>(size, ExactScalar::one()));
    }

    int size() const { return size_; }
    int shift() const { return shift_; }
    const std::vector<ExactScalar>& entries() const { return entries_; }
    const ExactScalar& entry(int i) const { return entries_[static_cast<std::size_t>(i)]; }

    CycMatrix operator*(const CycMatrix& o) const {
        require_size(o);
        std::vector<ExactScalar> e(static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i)
            e[static_cast<std::size_t>(i)] =
                entries_[static_cast<std::size_t>(i)] * o.entry((i + shift_) % size_);
        return CycMatrix(size_, shift_ + o.shift_, std::move(e));
    }

    CycMatrix operator+(const CycMatrix& o) const {
        require_size(o);
        if (shift_ != o.shift_)
            throw ShapeMismatch("cannot add matrices of shift " + std::to_string(shift_) +
                                " and " + std::to_string(o.shift_));
        std::vector<ExactScalar> e(static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i)
            e[static_cast<std::size_t>(i)] =
                entries_[static_cast<std::size_t>(i)] + o.entry(i);
        return CycMatrix(size_, shift_, std::move(e));
    }

    CycMatrix operator-() const { return scale(ExactScalar(-1)); }

    CycMatrix scale(const ExactScalar& s) const {
        std::vector<ExactScalar> e = entries_;
        for (auto& x : e) x = x * s;
        return CycMatrix(size_, shift_, std::move(e));
    }

    bool invertible() const {
        for (const auto& x : entries_)
            if (x.is_zero()) return false;
        return true;
    }

    CycMatrix inverse() const {
        if (!invertible()) throw NoSolution("matrix has a zero entry");
        // (M^-1)_j = 1 / M_((j - t) mod size) at shift -t.
        std::vector<ExactScalar> e(static_cast<std::size_t>(size_));
        for (int j = 0; j < size_; ++j)
            e[static_cast<std::size_t>(j)] =
                entries_[static_cast<std::size_t>(((j - shift_) % size_ + size_) % size_)]
                    .inverse();
        return CycMatrix(size_, -shift_, std::move(e));
    }

    CycMatrix pow(long k) const {
        if (k < 0) return inverse().pow(-k);
        CycMatrix acc = identity(size_);
        CycMatrix base = *this;
        for (unsigned long e = static_cast<unsigned long>(k); e != 0; e >>= 1) {
            if (e & 1UL) acc = acc * base;
            base = base * base;
        }
        return acc;
    }

    bool operator==(const CycMatrix& o) const {
        return size_ == o.size_ && shift_ == o.shift_ && entries_ == o.entries_;
    }
    bool operator!=(const CycMatrix& o) const { return !(*this == o); }
    bool operator<(const CycMatrix& o) const {
        if (size_ != o.size_) return size_ < o.size_;
        if (shift_ != o.shift_) return shift_ < o.shift_;
        return entries_ < o.entries_;
    }

    /// Text form: "cyc(4,1)[a, b, c, d]".
    std::string str() const;
    static CycMatrix parse(const std::string& text);

private:
    void require_size(const CycMatrix& o) const {
        if (size_ != o.size_)
            throw ShapeMismatch("matrix sizes differ: " + std::to_string(size_) + " vs " +
                                std::to_string(o.size_));
    }

    int size_;
    int shift_;
    std::vector<ExactScalar> entries_;
};

// ---------------------------------------------------------------------------
// Element: the variant all carriers share.
// ---------------------------------------------------------------------------

/// A residue in [0, modulus).
struct Modular {
    std::int64_t residue;
    std::int64_t modulus;

    Modular(std::int64_t r, std::int64_t m) : residue(((r % m) + m) % m), modulus(m) {
        if (m < 1) throw ShapeMismatch("modulus must be positive");
    }
    bool operator==(const Modular& o) const {
        return residue == o.residue && modulus == o.modulus;
    }
    bool operator<(const Modular& o) const {
        if (modulus != o.modulus) return modulus < o.modulus;
        return residue < o.residue;
    }
};

class Element;

/// Ordered components of a direct-product element ("the doubles (x1, x2)").
struct Tuple {
    std::vector<Element> parts;
};

class Element {
public:
    Element() : v_(Modular(0, 1)) {}
    Element(Modular m) : v_(std::move(m)) {}          // NOLINT
    Element(ExactScalar s) : v_(std::move(s)) {}      // NOLINT
    Element(CycMatrix m) : v_(std::move(m)) {}        // NOLINT
    Element(Tuple t) : v_(std::move(t)) {}            // NOLINT

    bool is_modular() const { return std::holds_alternative<Modular>(v_); }
    bool is_scalar() const { return std::holds_alternative<ExactScalar>(v_); }
    bool is_matrix() const { return std::holds_alternative<CycMatrix>(v_); }
    bool is_tuple() const { return std::holds_alternative<Tuple>(v_); }

    const Modular& modular() const { return expect<Modular>("modular"); }
    const ExactScalar& scalar() const { return expect<ExactScalar>("scalar"); }
    const CycMatrix& matrix() const { return expect<CycMatrix>("matrix"); }
    const Tuple& tuple() const { return expect<Tuple>("tuple"); }

    bool operator==(const Element& o) const;
    bool operator!=(const Element& o) const { return !(*this == o); }
    /// Total order: deterministic tie-breaking for counterexamples and maps.
    bool operator<(const Element& o) const;

    std::string str() const;

private:
    template <class T>
    const T& expect(const char* what) const {
        const T* p = std::get_if<T>(&v_);
        if (!p) throw ShapeMismatch(std::string("element is not a ") + what + ": " + str());
        return *p;
    }

    std::variant<Modular, ExactScalar, CycMatrix, Tuple> v_;
};

/// lhs = factor * rhs with a common scalar factor across all entries and
/// components, when one exists (used by the quer-commutator report).
std::optional<ExactScalar> scalar_ratio(const Element& lhs, const Element& rhs);

// ---------------------------------------------------------------------------
// Carrier.
// ---------------------------------------------------------------------------

class Carrier;
using CarrierPtr = std::shared_ptr<const Carrier>;

/**
 * A carrier set: finite-enumerated, parametric (exact membership predicate
 * plus seeded sampler), or a direct product of carriers. Parametric carriers
 * are created from a textual family spec so structure files round-trip:
 *
 *   zmod M                        residues 0..M-1
 *   int-class M R                 integer scalars = R (mod M), e.g. {8l+7}
 *   scalar-ray P NCLASS DCLASS    (num/den)*zeta^P with NCLASS,DCLASS in
 *                                 {any, odd, nonzero, one}
 *   frac-mod4                     reduced p/q, p,q odd, p = q (mod 4)
 *   cyc-matrix SIZE SHIFT ECLASS  ECLASS in {int, int-4k3, frac-mod4}
 *
 * Samplers draw raw parameters from seeded uniform ranges bounded by
 * param_limit (default 50) and always return members.
 */
class Carrier {
public:
    enum class Kind { Finite, Parametric, Product };

    using Membership = std::function<bool(const Element&)>;
    using Sampler = std::function<Element(Rng&)>;

    static CarrierPtr finite(std::string spec, std::vector<Element> elements);
    static CarrierPtr zmod(std::int64_t modulus);
    static CarrierPtr parametric(std::string spec, Membership member, Sampler sampler);
    static CarrierPtr product(std::vector<CarrierPtr> components);
    /// Parse a family spec string (table above).
    static CarrierPtr make(const std::string& spec, std::int64_t param_limit = 50);

    Kind kind() const { return kind_; }
    const std::string& spec_string() const { return spec_; }

    bool contains(const Element& x) const;

    /// Number of elements when finite (products multiply); nullopt otherwise.
    std::optional<std::uint64_t> size() const;

    /// True when the full element list is materialized (finite carriers and
    /// small products of them).
    bool enumerable() const { return !elems_.empty(); }
    const std::vector<Element>& elements() const;

    Element sample(Rng& rng) const;
    std::vector<Element> sample_many(std::uint64_t seed, std::size_t count) const;

    const std::vector<CarrierPtr>& components() const { return components_; }

private:
    Carrier() = default;

    Kind kind_ = Kind::Finite;
    std::string spec_;
    std::vector<Element> elems_;            // finite / enumerable product
    Membership member_;                     // parametric
    Sampler sampler_;                       // parametric (optional)
    std::vector<CarrierPtr> components_;    // product
    std::optional<std::uint64_t> size_;
};

/// Parse an element literal in the context of a carrier (resolves the
/// plain-integer ambiguity between residues and scalars).
Element parse_element_in(const Carrier& carrier, const std::string& text);

}  // namespace polyprod
