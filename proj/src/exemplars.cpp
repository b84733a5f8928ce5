#include "polyprod/exemplars.hpp"

namespace polyprod {

namespace {

Element scalar(long num, long den = 1, int phase = 0) {
    Rat r(num, den);
    r.canonicalize();
    return Element(ExactScalar(std::move(r), phase));
}

Element const_matrix(int size, int shift, long value) {
    std::vector<ExactScalar> entries(static_cast<std::size_t>(size), ExactScalar(value));
    return Element(CycMatrix(size, shift, std::move(entries)));
}

ExpectedTraits group_traits(bool commutative, bool semicommutative) {
    ExpectedTraits t;
    t.commutative = commutative;
    t.semicommutative = semicommutative;
    t.unital = false;
    t.derived = false;
    return t;
}

ExpectedTraits ring_traits(const std::string& kind, bool zeroless, bool unital) {
    ExpectedTraits t;
    t.kind = kind;
    t.zeroless = zeroless;
    t.unital = unital;
    t.derived = false;
    return t;
}

CatalogItem structure_item(std::string name, std::string summary, AlgebraicStructure s,
                           ExpectedTraits expected) {
    CatalogItem item;
    item.name = std::move(name);
    item.summary = std::move(summary);
    item.structure = std::move(s);
    item.expected = std::move(expected);
    return item;
}

CatalogItem ring_item(std::string summary, PolyadicRing r, ExpectedTraits expected) {
    CatalogItem item;
    item.name = r.name;
    item.summary = std::move(summary);
    item.ring = std::move(r);
    item.expected = std::move(expected);
    return item;
}

CatalogItem build_entry(const std::string& name) {
    if (name == "ternary-iR-group") {
        AlgebraicStructure s;
        s.name = name;
        s.carrier = Carrier::make("scalar-ray 2 nonzero any");
        s.mult = make_op(OpProgram::scalar_prod(3));
        s.quer = make_op(OpProgram::power(-1), "quer");
        return structure_item(name,
                              "nonderived commutative ternary group on the punctured "
                              "imaginary ray; no identity, quer(g) = g^-1",
                              std::move(s), group_traits(true, true));
    }
    if (name == "ternary-conjugate-group") {
        AlgebraicStructure s;
        s.name = name;
        s.carrier = Carrier::make("scalar-ray 0 nonzero any");
        s.mult = make_op(OpProgram::conj_prod(3));
        s.quer = make_op(OpProgram::power(1), "quer");
        return structure_item(name,
                              "ternary group g1*g2^-1*g3 on nonzero rationals; "
                              "semicommutative only, quer(g) = g",
                              std::move(s), group_traits(false, true));
    }
    if (name == "ring-23-iZ") {
        auto r = make_ring(name, Carrier::make("scalar-ray 2 any one"),
                           OpProgram::scalar_sum(2), OpProgram::scalar_prod(3));
        r.zero_candidates = {scalar(0)};
        return ring_item("(2,3)-ring of imaginary integers; ternary product is not "
                         "reducible to a binary one",
                         std::move(r), ring_traits("commutative ring", false, false));
    }
    if (name == "ring-23-adiag") {
        auto r = make_ring(name, Carrier::make("cyc-matrix 2 1 int"),
                           OpProgram::mat_sum(2), OpProgram::mat_prod(3));
        r.zero_candidates = {const_matrix(2, 1, 0)};
        return ring_item("(2,3)-ring of integer antidiagonal 2x2 matrices; "
                         "noncommutative, semicommutative",
                         std::move(r), ring_traits("ring", false, false));
    }
    if (name == "ring-93-8l7") {
        auto r = make_ring(name, Carrier::make("int-class 8 7"),
                           OpProgram::scalar_sum(9), OpProgram::scalar_prod(3));
        return ring_item("nonderived (9,3)-ring on the integers 8l+7; closed under "
                         "9-ary sums and ternary products only",
                         std::move(r), ring_traits("commutative ring", true, false));
    }
    if (name == "ring-55-matrix43") {
        auto r = make_ring(name, Carrier::make("cyc-matrix 4 1 int-4k3"),
                           OpProgram::mat_sum(5), OpProgram::mat_prod(5));
        return ring_item("nonderived (5,5)-ring of shift-1 4x4 matrices with entries "
                         "4k+3; zeroless, noncommutative",
                         std::move(r), ring_traits("ring", true, false));
    }
    if (name == "field-33-iodd") {
        auto r = make_ring(name, Carrier::make("scalar-ray 2 odd odd"),
                           OpProgram::scalar_sum(3), OpProgram::scalar_prod(3));
        r.mul_quer = make_op(OpProgram::power(-1), "mul-quer");
        auto t = ring_traits("field", true, false);
        t.quer_symmetric = true;
        t.quer_factor = "1";
        return ring_item("zeroless nonunital (3,3)-field of odd/odd imaginary "
                         "fractions; quer-symmetric",
                         std::move(r), std::move(t));
    }
    if (name == "field-55-matrix") {
        auto r = make_ring(name, Carrier::make("cyc-matrix 4 1 frac-mod4"),
                           OpProgram::mat_sum(5), OpProgram::mat_prod(5));
        r.mul_quer = make_op(OpProgram::power(-3), "mul-quer");
        r.identity_candidates = {const_matrix(4, 1, 1)};
        auto t = ring_traits("semicommutative field", true, true);
        t.quer_symmetric = false;
        t.quer_factor = "81";
        return ring_item("zeroless unital semicommutative (5,5)-field of shift-1 4x4 "
                         "matrices with (4k+1)/(4l+1) entries; quer factor 81",
                         std::move(r), std::move(t));
    }
    if (name == "field-55-sqrti") {
        auto r = make_ring(name, Carrier::make("scalar-ray 1 odd odd"),
                           OpProgram::scalar_sum(5), OpProgram::scalar_prod(5));
        r.mul_quer = make_op(OpProgram::power(-3), "mul-quer");
        auto t = ring_traits("field", true, false);
        t.quer_symmetric = false;
        t.quer_factor = "81";
        return ring_item("zeroless nonunital (5,5)-field on the square-root-of-i ray "
                         "with odd/odd fractions; quer factor 81",
                         std::move(r), std::move(t));
    }
    if (name == "quiver-4ary-nonpost") {
        QuiverSpec q;
        q.k = 3;
        q.n_in = 4;
        q.n_out = 4;
        q.ell_mu = 3;
        q.ell_id = 0;
        q.rows = {{{1, 1}, {2, 3}, {3, 2}, {4, 1}},
                  {{1, 2}, {2, 1}, {3, 3}, {4, 2}},
                  {{1, 3}, {2, 2}, {3, 1}, {4, 3}}};
        CatalogItem item;
        item.name = name;
        item.summary =
            "associative 4-ary cube placement that is not of the diagonal-chunk "
            "family; all three components multiply, nothing intact";
        item.quiver = std::move(q);
        return item;
    }
    throw UnknownEntry("no catalog entry named '" + name + "'");
}

}  // namespace

std::vector<std::string> catalog_names() {
    return {"ternary-iR-group", "ternary-conjugate-group", "ring-23-iZ",
            "ring-23-adiag",    "ring-93-8l7",             "ring-55-matrix43",
            "field-33-iodd",    "field-55-matrix",         "field-55-sqrti",
            "quiver-4ary-nonpost"};
}

CatalogItem catalog_get(const std::string& name) { return build_entry(name); }

AlgebraicStructure derived_group_zm(std::int64_t modulus, int arity) {
    if (modulus < 2) throw ShapeMismatch("derived_group_zm needs modulus >= 2");
    if (arity < 2) throw ArityMismatch("derived_group_zm needs arity >= 2");
    AlgebraicStructure s;
    s.name = "z" + std::to_string(modulus) + "-sum-" + std::to_string(arity);
    s.carrier = Carrier::zmod(modulus);
    s.mult = make_op(OpProgram::iterate(OpProgram::mod_sum(2), arity - 1));
    s.quer = make_op(OpProgram::neg_scale(arity - 2), "quer");
    s.identity_candidates = {Element(Modular(0, modulus))};
    return s;
}

}  // namespace polyprod
