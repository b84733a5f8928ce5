#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyprod/carriers.hpp"

using namespace polyprod;

namespace {

ExactScalar random_scalar(Rng& rng, bool nonzero = false) {
    for (;;) {
        Rat q(rng.uniform(-20, 20), rng.uniform(1, 20));
        ExactScalar s(q, static_cast<int>(rng.uniform(0, 7)));
        if (!nonzero || !s.is_zero()) return s;
    }
}

CycMatrix random_cyc(Rng& rng, int size, int shift) {
    std::vector<ExactScalar> e;
    for (int i = 0; i < size; ++i) e.push_back(random_scalar(rng, true));
    return CycMatrix(size, shift, std::move(e));
}

}  // namespace

TEST_CASE("scalar arithmetic agrees with polynomial arithmetic in the 8th root") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        ExactScalar a = random_scalar(rng);
        ExactScalar b = random_scalar(rng);
        CHECK(oracle::Zeta8::of(a * b) == oracle::Zeta8::of(a) * oracle::Zeta8::of(b));
        CHECK(oracle::Zeta8::of(-a) == -oracle::Zeta8::of(a));
        // Addition is only defined on a shared ray; put b on a's ray first.
        ExactScalar b_ray(b.magnitude(), a.phase());
        if (!a.is_zero() && !b_ray.is_zero())
            CHECK(oracle::Zeta8::of(a + b_ray) ==
                  oracle::Zeta8::of(a) + oracle::Zeta8::of(b_ray));
        if (!a.is_zero()) {
            CHECK(a * a.inverse() == ExactScalar::one());
            CHECK(a.pow(3) == a * a * a);
            CHECK(a.pow(-2) * a.pow(2) == ExactScalar::one());
        }
    }
}

TEST_CASE("scalar canonical form") {
    // zeta^4 = -1 folds into the sign; zero collapses to phase 0.
    CHECK(ExactScalar(Rat(3), 5) == ExactScalar(Rat(-3), 1));
    CHECK(ExactScalar(Rat(1), 4) == ExactScalar(Rat(-1), 0));
    CHECK(ExactScalar(Rat(0), 3) == ExactScalar::zero());
    CHECK(ExactScalar(Rat(0), 3).phase() == 0);
    CHECK(ExactScalar(Rat(2, 4), 2) == ExactScalar(Rat(1, 2), 2));
    CHECK(ExactScalar::imag() * ExactScalar::imag() == ExactScalar(-1));
    CHECK(ExactScalar::root_i() * ExactScalar::root_i() == ExactScalar::imag());

    SUBCASE("text forms round-trip") {
        for (const char* text : {"0", "1", "-1", "3/5", "-3/5", "i", "-i", "7*i", "z", "3/5*z",
                                 "2*z3", "-2/7*z3"}) {
            ExactScalar s = ExactScalar::parse(text);
            CHECK(s.str() == text);
            CHECK(ExactScalar::parse(s.str()) == s);
        }
    }

    SUBCASE("cross-ray addition is refused") {
        CHECK_THROWS_AS(ExactScalar::one() + ExactScalar::imag(), PhaseMismatch);
        // ... but zero joins any ray.
        CHECK(ExactScalar::zero() + ExactScalar::imag() == ExactScalar::imag());
    }

    SUBCASE("inverse of zero") { CHECK_THROWS_AS(ExactScalar::zero().inverse(), NoSolution); }
}

TEST_CASE("matrix chain products agree with dense multiplication") {
    Rng rng(23);
    for (int size : {2, 4}) {
        for (int trial = 0; trial < 40; ++trial) {
            // A chain of five shift-one factors walks the shift through every
            // residue (1, 2, 3, 0, 1 for size 4) before returning to 1.
            std::vector<CycMatrix> chain;
            for (int i = 0; i < 5; ++i) chain.push_back(random_cyc(rng, size, 1));
            CycMatrix lib = chain[0];
            oracle::Dense dense = oracle::Dense::of(chain[0]);
            for (int i = 1; i < 5; ++i) {
                lib = lib * chain[static_cast<std::size_t>(i)];
                dense = dense * oracle::Dense::of(chain[static_cast<std::size_t>(i)]);
            }
            CHECK(lib.shift() == 5 % size);
            CHECK(oracle::Dense::of(lib) == dense);

            CycMatrix a = random_cyc(rng, size, 2 % size);
            // Sums are entrywise, so each entry pair must share a ray.
            std::vector<ExactScalar> rerayed;
            for (int i = 0; i < size; ++i)
                rerayed.emplace_back(random_scalar(rng, true).magnitude(),
                                     a.entries()[static_cast<std::size_t>(i)].phase());
            CycMatrix b(size, 2 % size, std::move(rerayed));
            CHECK(oracle::Dense::of(a + b) == oracle::Dense::of(a) + oracle::Dense::of(b));
            CHECK(oracle::Dense::of(a * a.inverse()) ==
                  oracle::Dense::of(CycMatrix::identity(size)));
            CHECK(a.pow(3) == a * a * a);
        }
    }
}

TEST_CASE("matrix shape rules") {
    CHECK_THROWS_AS(CycMatrix(3, 1, std::vector<ExactScalar>(3, ExactScalar::one())),
                    ShapeMismatch);
    CHECK_THROWS_AS(CycMatrix(4, 1, std::vector<ExactScalar>(3, ExactScalar::one())),
                    ShapeMismatch);
    CycMatrix s1(4, 1, {1, 2, 3, 4});
    CycMatrix s2(4, 2, {1, 2, 3, 4});
    CHECK_THROWS_AS(s1 + s2, ShapeMismatch);          // different shifts never add
    CHECK((s1 * s2).shift() == 3);                    // shifts add under product
    CHECK(CycMatrix(4, 5, {1, 2, 3, 4}).shift() == 1);  // shift stored mod size

    CycMatrix with_zero(4, 1, {1, 0, 3, 4});
    CHECK(!with_zero.invertible());
    CHECK_THROWS_AS(with_zero.inverse(), NoSolution);

    SUBCASE("text form round-trips") {
        CycMatrix m(4, 1, {ExactScalar(Rat(1, 2), 0), ExactScalar(3), ExactScalar(Rat(-2), 2),
                           ExactScalar::one()});
        CHECK(m.str() == "cyc(4,1)[1/2, 3, -2*i, 1]");
        CHECK(CycMatrix::parse(m.str()) == m);
        CHECK_THROWS_AS(CycMatrix::parse("cyc(4)[1, 2]"), ParseError);
    }
}

TEST_CASE("modular residues normalize into [0, modulus)") {
    CHECK(Modular(-1, 5) == Modular(4, 5));
    CHECK(Modular(12, 5).residue == 2);
    CHECK_THROWS_AS(Modular(0, 0), ShapeMismatch);
    CHECK(Modular(1, 5) < Modular(2, 5));
    CHECK(Modular(4, 3) < Modular(0, 5));  // modulus is the major key
}

TEST_CASE("elements are typed variants with a total order") {
    Element m(Modular(3, 5));
    Element s(ExactScalar::imag());
    Element t(Tuple{{m, s}});
    CHECK(m.is_modular());
    CHECK(s.is_scalar());
    CHECK(t.is_tuple());
    CHECK_THROWS_AS(m.scalar(), ShapeMismatch);
    CHECK_THROWS_AS(s.tuple(), ShapeMismatch);
    CHECK(m.str() == "3");
    CHECK(s.str() == "i");
    CHECK(t.str() == "(3; i)");
    CHECK(t == Element(Tuple{{Element(Modular(3, 5)), Element(ExactScalar::imag())}}));
    CHECK(t != Element(Tuple{{Element(Modular(2, 5)), Element(ExactScalar::imag())}}));

    std::vector<Element> v = {s, t, m};
    std::sort(v.begin(), v.end());
    CHECK(std::is_sorted(v.begin(), v.end()));
}

TEST_CASE("scalar ratio extraction") {
    Element a(ExactScalar(Rat(6), 2));
    Element b(ExactScalar(Rat(2), 2));
    auto r = scalar_ratio(a, b);
    REQUIRE(r.has_value());
    CHECK(*r == ExactScalar(3));

    // Matrices: a single factor must work across every entry.
    CycMatrix m(4, 1, {1, 2, 3, 4});
    CHECK(*scalar_ratio(Element(m.scale(ExactScalar(Rat(81)))), Element(m)) == ExactScalar(81));
    CycMatrix skew(4, 1, {2, 2, 3, 4});
    CHECK(!scalar_ratio(Element(skew), Element(m)).has_value());

    // Tuples: the factor must be shared by all components.
    Element t1(Tuple{{a, Element(ExactScalar(Rat(3), 1))}});
    Element t2(Tuple{{b, Element(ExactScalar(Rat(1), 1))}});
    CHECK(*scalar_ratio(t1, t2) == ExactScalar(3));
    CHECK(!scalar_ratio(a, Element(m)).has_value());
}

TEST_CASE("finite carriers enumerate") {
    auto z5 = Carrier::zmod(5);
    CHECK(z5->kind() == Carrier::Kind::Finite);
    CHECK(z5->spec_string() == "zmod 5");
    CHECK(z5->size() == 5);
    REQUIRE(z5->enumerable());
    CHECK(z5->elements().size() == 5);
    CHECK(z5->elements()[3] == Element(Modular(3, 5)));
    CHECK(z5->contains(Element(Modular(4, 5))));
    CHECK(!z5->contains(Element(Modular(4, 7))));
    CHECK(!z5->contains(Element(ExactScalar(3))));

    auto same = Carrier::make("zmod 5");
    CHECK(same->size() == 5);
}

TEST_CASE("integer residue class carriers") {
    auto c = Carrier::make("int-class 8 7");
    CHECK(c->kind() == Carrier::Kind::Parametric);
    CHECK(c->spec_string() == "int-class 8 7");
    CHECK(!c->size().has_value());
    CHECK(!c->enumerable());
    CHECK(c->contains(Element(ExactScalar(7))));
    CHECK(c->contains(Element(ExactScalar(15))));
    CHECK(c->contains(Element(ExactScalar(-1))));  // -1 = 7 (mod 8)
    CHECK(!c->contains(Element(ExactScalar(6))));
    CHECK(!c->contains(Element(ExactScalar(Rat(7, 3)))));   // not an integer
    CHECK(!c->contains(Element(ExactScalar(Rat(7), 2))));   // off the rational ray
    for (const Element& x : c->sample_many(3, 50)) CHECK(c->contains(x));
}

TEST_CASE("scalar ray carriers") {
    SUBCASE("odd/odd ray of i") {
        auto c = Carrier::make("scalar-ray 2 odd odd");
        CHECK(c->contains(Element(ExactScalar(Rat(3, 5), 2))));
        CHECK(c->contains(Element(ExactScalar(Rat(-1, 7), 2))));
        CHECK(!c->contains(Element(ExactScalar(Rat(2, 5), 2))));  // even numerator
        CHECK(!c->contains(Element(ExactScalar(Rat(3, 5), 0))));  // wrong ray
        CHECK(!c->contains(Element(ExactScalar::zero())));        // zero needs class any
        for (const Element& x : c->sample_many(5, 50)) CHECK(c->contains(x));
    }
    SUBCASE("integer multiples of i, zero included") {
        auto c = Carrier::make("scalar-ray 2 any one");
        CHECK(c->contains(Element(ExactScalar(Rat(4), 2))));
        CHECK(c->contains(Element(ExactScalar::zero())));
        CHECK(!c->contains(Element(ExactScalar(Rat(1, 2), 2))));  // non-unit denominator
    }
    SUBCASE("nonzero rational ray") {
        auto c = Carrier::make("scalar-ray 0 nonzero any");
        CHECK(c->contains(Element(ExactScalar(Rat(2, 3), 0))));
        CHECK(!c->contains(Element(ExactScalar::zero())));
        CHECK(!c->contains(Element(ExactScalar(Rat(1), 1))));
    }
    SUBCASE("sampling respects the parameter limit") {
        auto c = Carrier::make("scalar-ray 2 odd odd", 9);
        for (const Element& x : c->sample_many(1, 80)) {
            const Rat& q = x.scalar().magnitude();
            CHECK(abs(q.get_num()) <= 9);
            CHECK(abs(q.get_den()) <= 9);
        }
    }
}

TEST_CASE("fraction carriers matched modulo four") {
    auto c = Carrier::make("frac-mod4");
    CHECK(c->contains(Element(ExactScalar(Rat(3, 7)))));   // 3 = 7 = 3 (mod 4)
    CHECK(c->contains(Element(ExactScalar(Rat(1, 5)))));   // 1 = 5 = 1 (mod 4)
    CHECK(c->contains(Element(ExactScalar(Rat(5)))));
    CHECK(!c->contains(Element(ExactScalar(Rat(1, 3)))));  // 1 vs 3
    CHECK(!c->contains(Element(ExactScalar(Rat(2, 7)))));  // even numerator
    CHECK(!c->contains(Element(ExactScalar::zero())));
    for (const Element& x : c->sample_many(7, 50)) CHECK(c->contains(x));
}

TEST_CASE("cyclic matrix carriers") {
    auto c = Carrier::make("cyc-matrix 4 1 int-4k3");
    CHECK(c->contains(Element(CycMatrix(4, 1, {3, 7, -1, 11}))));
    CHECK(!c->contains(Element(CycMatrix(4, 1, {3, 7, -1, 4}))));  // 4 != 3 (mod 4)
    CHECK(!c->contains(Element(CycMatrix(4, 2, {3, 7, -1, 11}))));  // wrong shift
    CHECK(!c->contains(Element(CycMatrix(2, 1, {3, 7}))));          // wrong size
    for (const Element& x : c->sample_many(9, 40)) CHECK(c->contains(x));

    auto f = Carrier::make("cyc-matrix 4 1 frac-mod4");
    CHECK(f->contains(Element(CycMatrix(
        4, 1, {ExactScalar(Rat(3, 7)), ExactScalar(Rat(1, 5)), ExactScalar(Rat(-1, 3)),
               ExactScalar(Rat(5))}))));
    CHECK(!f->contains(Element(CycMatrix(4, 1, {ExactScalar(Rat(1, 3)), ExactScalar(Rat(1, 5)),
                                                ExactScalar(Rat(3)), ExactScalar(Rat(7))}))));
    for (const Element& x : f->sample_many(2, 40)) CHECK(f->contains(x));
}

TEST_CASE("product carriers") {
    auto p = Carrier::product({Carrier::zmod(2), Carrier::zmod(3)});
    CHECK(p->kind() == Carrier::Kind::Product);
    CHECK(p->spec_string() == "product 2");
    CHECK(p->size() == 6);
    REQUIRE(p->enumerable());
    CHECK(p->elements().size() == 6);
    Element good(Tuple{{Element(Modular(1, 2)), Element(Modular(2, 3))}});
    CHECK(p->contains(good));
    CHECK(!p->contains(Element(Modular(1, 2))));
    CHECK(!p->contains(Element(Tuple{{Element(Modular(1, 2))}})));

    // A product with a parametric component samples but cannot enumerate.
    auto q = Carrier::product({Carrier::zmod(2), Carrier::make("int-class 8 7")});
    CHECK(!q->enumerable());
    CHECK(!q->size().has_value());
    for (const Element& x : q->sample_many(4, 30)) CHECK(q->contains(x));
}

TEST_CASE("sampling is deterministic per seed") {
    auto c = Carrier::make("scalar-ray 1 odd odd");
    auto a = c->sample_many(42, 25);
    auto b = c->sample_many(42, 25);
    CHECK(a == b);
    auto d = c->sample_many(43, 25);
    CHECK(a != d);

    auto parametric_without_sampler =
        Carrier::parametric("opaque", [](const Element&) { return true; }, nullptr);
    Rng rng(0);
    CHECK_THROWS_AS(parametric_without_sampler->sample(rng), NotSamplable);
    CHECK_THROWS_AS(parametric_without_sampler->elements(), NotSamplable);
}

TEST_CASE("carrier spec parsing rejects malformed families") {
    CHECK_THROWS_AS(Carrier::make("bogus 3"), ParseError);
    CHECK_THROWS_AS(Carrier::make(""), ParseError);
    CHECK_THROWS_AS(Carrier::make("zmod"), ParseError);
    CHECK_THROWS_AS(Carrier::make("zmod 0"), ParseError);
    CHECK_THROWS_AS(Carrier::make("scalar-ray 5 odd odd"), ParseError);
    CHECK_THROWS_AS(Carrier::make("scalar-ray 2 weird odd"), ParseError);
    CHECK_THROWS_AS(Carrier::make("cyc-matrix 3 1 int"), ParseError);
    CHECK_THROWS_AS(Carrier::make("cyc-matrix 4 1 float"), ParseError);
}

TEST_CASE("element literals parse in carrier context") {
    auto z5 = Carrier::zmod(5);
    CHECK(parse_element_in(*z5, "3") == Element(Modular(3, 5)));
    CHECK(parse_element_in(*z5, "-1") == Element(Modular(4, 5)));

    auto ray = Carrier::make("scalar-ray 2 odd odd");
    CHECK(parse_element_in(*ray, "3/5*i") == Element(ExactScalar(Rat(3, 5), 2)));
    CHECK(parse_element_in(*ray, "7*i") == Element(ExactScalar(Rat(7), 2)));
    // Parsing in a carrier context enforces membership, not just shape.
    CHECK_THROWS_AS(parse_element_in(*ray, "7"), ClosureViolation);

    auto mats = Carrier::make("cyc-matrix 4 1 int");
    CHECK(parse_element_in(*mats, "cyc(4,1)[1, 1, 1, 1]") ==
          Element(CycMatrix(4, 1, {1, 1, 1, 1})));

    auto p = Carrier::product({Carrier::zmod(5), Carrier::zmod(5)});
    CHECK(parse_element_in(*p, "(0; 0)") ==
          Element(Tuple{{Element(Modular(0, 5)), Element(Modular(0, 5))}}));

    // Round-trip: every element's text form parses back to itself.
    for (const Element& x : p->elements()) CHECK(parse_element_in(*p, x.str()) == x);
}
