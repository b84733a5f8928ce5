#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polyprod/exemplars.hpp"
#include "polyprod/structures.hpp"

using namespace polyprod;

namespace {

AlgebraicStructure sum_group(std::int64_t modulus, int arity) {
    return derived_group_zm(modulus, arity);
}

AlgebraicStructure bare(CarrierPtr carrier, ProgramPtr program, std::string name = "s") {
    AlgebraicStructure s;
    s.name = std::move(name);
    s.carrier = std::move(carrier);
    s.mult = make_op(std::move(program));
    return s;
}

std::vector<Element> residues(std::initializer_list<std::int64_t> rs, std::int64_t m) {
    std::vector<Element> out;
    for (auto r : rs) out.emplace_back(Modular(r, m));
    return out;
}

}  // namespace

TEST_CASE("program text forms round-trip") {
    struct Case {
        const char* text;
        int arity;
    };
    for (const Case& c : {Case{"modsum", 3}, Case{"modprod", 4}, Case{"modlin(2; 1, 2, 1)", 3},
                          Case{"scalarsum", 9}, Case{"scalarprod", 5}, Case{"conjprod", 3},
                          Case{"matsum", 5}, Case{"matprod", 5}, Case{"negscale(7)", 1},
                          Case{"power(-3)", 1}, Case{"comp(modsum | modprod)", 3},
                          Case{"iterate(modlin(0; 1, 2, 1), 2)", 5}}) {
        ProgramPtr p = OpProgram::parse(c.text, c.arity);
        CHECK(p->arity() == c.arity);
        CHECK(p->serialize() == c.text);
        CHECK(OpProgram::parse(p->serialize(), c.arity)->serialize() == c.text);
    }

    CHECK_THROWS_AS(OpProgram::parse("modlin(0; 1, 2)", 3), ParseError);  // coeffs vs arity
    CHECK_THROWS_AS(OpProgram::parse("frobnicate", 3), ParseError);
    CHECK_THROWS_AS(OpProgram::parse("hetero(k=2; sub=modsum; rows=[]; intact=[])", 2),
                    ParseError);  // built programmatically only
    CHECK_THROWS(OpProgram::conj_prod(4));  // conjugate chains need odd arity
}

TEST_CASE("evaluation matches independent arithmetic") {
    Rng rng(5);

    SUBCASE("modular sums and affine maps") {
        auto sum4 = OpProgram::mod_sum(4);
        auto lin = OpProgram::mod_lin({3, 1, 4}, 2);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<std::int64_t> xs;
            std::vector<Element> args;
            for (int i = 0; i < 4; ++i) {
                xs.push_back(rng.uniform(0, 6));
                args.emplace_back(Modular(xs.back(), 7));
            }
            CHECK(sum4->eval(args) ==
                  Element(Modular(oracle::mod_affine({1, 1, 1, 1}, 0, xs, 7), 7)));
            args.pop_back();
            xs.pop_back();
            CHECK(lin->eval(args) == Element(Modular(oracle::mod_affine({3, 1, 4}, 2, xs, 7), 7)));
        }
    }

    SUBCASE("scalar chains and conjugate chains") {
        auto prod3 = OpProgram::scalar_prod(3);
        auto conj3 = OpProgram::conj_prod(3);
        for (int trial = 0; trial < 100; ++trial) {
            ExactScalar a(Rat(rng.uniform(1, 9), rng.uniform(1, 9)), (int)rng.uniform(0, 3));
            ExactScalar b(Rat(rng.uniform(1, 9), rng.uniform(1, 9)), (int)rng.uniform(0, 3));
            ExactScalar c(Rat(rng.uniform(1, 9), rng.uniform(1, 9)), (int)rng.uniform(0, 3));
            std::vector<Element> args = {Element(a), Element(b), Element(c)};
            CHECK(oracle::Zeta8::of(prod3->eval(args).scalar()) ==
                  oracle::Zeta8::of(a) * oracle::Zeta8::of(b) * oracle::Zeta8::of(c));
            CHECK(conj3->eval(args) == Element(a * b.inverse() * c));
        }
    }

    SUBCASE("matrix chains") {
        auto mp = OpProgram::mat_prod(5);
        auto ms = OpProgram::mat_sum(3);
        auto carrier = Carrier::make("cyc-matrix 4 1 int");
        auto xs = carrier->sample_many(8, 15);
        for (std::size_t t = 0; t + 5 <= xs.size(); t += 5) {
            std::vector<Element> args(xs.begin() + (long)t, xs.begin() + (long)t + 5);
            oracle::Dense expect = oracle::Dense::of(args[0].matrix());
            for (int i = 1; i < 5; ++i) expect = expect * oracle::Dense::of(args[(size_t)i].matrix());
            CHECK(oracle::Dense::of(mp->eval(args).matrix()) == expect);

            std::vector<Element> three(args.begin(), args.begin() + 3);
            oracle::Dense sum = oracle::Dense::of(three[0].matrix()) +
                                oracle::Dense::of(three[1].matrix()) +
                                oracle::Dense::of(three[2].matrix());
            CHECK(oracle::Dense::of(ms->eval(three).matrix()) == sum);
        }
    }

    SUBCASE("unary maps and componentwise action") {
        auto neg3 = OpProgram::neg_scale(3);
        CHECK(neg3->eval({Element(Modular(2, 7))}) == Element(Modular(1, 7)));  // -6 = 1
        CHECK(neg3->eval({Element(ExactScalar(Rat(1, 2), 2))}) ==
              Element(ExactScalar(Rat(-3, 2), 2)));
        auto pw = OpProgram::power(-3);
        CHECK(pw->eval({Element(ExactScalar(Rat(2)))}) == Element(ExactScalar(Rat(1, 8))));

        auto comp = OpProgram::componentwise({OpProgram::mod_sum(2), OpProgram::mod_prod(2)});
        Element x(Tuple{{Element(Modular(3, 5)), Element(Modular(3, 5))}});
        Element y(Tuple{{Element(Modular(4, 5)), Element(Modular(4, 5))}});
        CHECK(comp->eval({x, y}) ==
              Element(Tuple{{Element(Modular(2, 5)), Element(Modular(2, 5))}}));
    }
}

TEST_CASE("per-slot solving") {
    auto sum3 = OpProgram::mod_sum(3);
    std::vector<Element> args = residues({1, 0, 4}, 5);
    Element target(Modular(2, 5));
    auto x = sum3->solve_at(args, 1, target);
    REQUIRE(x.has_value());
    args[1] = *x;
    CHECK(sum3->eval(args) == target);

    // 2x = 1 (mod 4) has no solution; 2x = 2 has two. Neither is unique.
    auto lin = OpProgram::mod_lin({2}, 0);
    CHECK(!lin->solve_at({Element(Modular(0, 4))}, 0, Element(Modular(1, 4))).has_value());
    CHECK(!lin->solve_at({Element(Modular(0, 4))}, 0, Element(Modular(2, 4))).has_value());

    auto prod3 = OpProgram::scalar_prod(3);
    std::vector<Element> sargs = {Element(ExactScalar(Rat(2), 2)), Element(ExactScalar(Rat(3))),
                                  Element(ExactScalar(Rat(5)))};
    auto h = prod3->solve_at(sargs, 2, Element(ExactScalar(Rat(1))));
    REQUIRE(h.has_value());
    sargs[2] = *h;
    CHECK(prod3->eval(sargs) == Element(ExactScalar(Rat(1))));

    CHECK(mod_inverse(3, 7) == 5);
    CHECK(!mod_inverse(2, 4).has_value());
}

TEST_CASE("left-nested iterates") {
    SUBCASE("sum families fold into wider atoms") {
        auto it = OpProgram::iterate(OpProgram::mod_sum(3), 2);
        CHECK(it->arity() == 5);
        CHECK(it->iterated_from() == 3);
        CHECK(it->serialize() == "modsum");
    }
    SUBCASE("affine maps keep the explicit nesting") {
        auto it = OpProgram::iterate(OpProgram::mod_lin({1, 2, 1}, 0), 2);
        CHECK(it->arity() == 5);
        CHECK(it->kind() == OpProgram::Kind::Iterate);
        CHECK(it->iterated_from() == 3);
        CHECK(it->serialize() == "iterate(modlin(0; 1, 2, 1), 2)");
    }
    SUBCASE("iterates evaluate as explicit substitution") {
        Rng rng(17);
        for (ProgramPtr base : {OpProgram::mod_sum(3), OpProgram::mod_lin({1, 2, 1}, 3),
                                OpProgram::mod_prod(2)}) {
            for (int ell : {2, 3, 4}) {
                auto op = make_op(base);
                auto it = OpProgram::iterate(base, ell);
                int width = ell * (base->arity() - 1) + 1;
                CHECK(it->arity() == width);
                for (int trial = 0; trial < 20; ++trial) {
                    std::vector<Element> args;
                    for (int i = 0; i < width; ++i)
                        args.emplace_back(Modular(rng.uniform(0, 10), 11));
                    CHECK(it->eval(args) == oracle::nest_eval(op, args));
                }
            }
        }
        // Scalar chains fold too; the oracle nesting must agree.
        auto base = OpProgram::scalar_prod(3);
        auto it = OpProgram::iterate(base, 3);
        std::vector<Element> args;
        for (int i = 0; i < 7; ++i)
            args.emplace_back(ExactScalar(Rat(rng.uniform(1, 9), rng.uniform(1, 9)),
                                          (int)rng.uniform(0, 3)));
        CHECK(it->eval(args) == oracle::nest_eval(make_op(base), args));
    }
    SUBCASE("the structure-level power agrees with the closed form") {
        auto s = sum_group(5, 3);
        for (std::int64_t g = 0; g < 5; ++g)
            for (int ell = 1; ell <= 4; ++ell)
                CHECK(polyadic_power(s, Element(Modular(g, 5)), ell) ==
                      Element(Modular((2 * ell + 1) * g, 5)));
    }
}

TEST_CASE("evaluation guards arity and closure") {
    auto s = sum_group(5, 3);
    CHECK(evaluate(s, residues({1, 2, 3}, 5)) == Element(Modular(1, 5)));
    CHECK_THROWS_AS(evaluate(s, residues({1, 2}, 5)), ArityMismatch);

    // {8l+7} is not closed under the binary sum (7+7 = 14 is in class 6).
    auto cls = bare(Carrier::make("int-class 8 7"), OpProgram::scalar_sum(2));
    CHECK_THROWS_AS(evaluate(cls, {Element(ExactScalar(7)), Element(ExactScalar(7))}),
                    ClosureViolation);
    // ... but the 9-ary sum stays inside (9*7 = 63 = 7 mod 8).
    auto cls9 = bare(Carrier::make("int-class 8 7"), OpProgram::scalar_sum(9));
    std::vector<Element> nine(9, Element(ExactScalar(7)));
    CHECK(evaluate(cls9, nine) == Element(ExactScalar(63)));
}

TEST_CASE("total associativity") {
    SUBCASE("derived sums pass exhaustively") {
        auto r = check_total_associativity(sum_group(5, 3));
        CHECK(r.passed);
        CHECK(r.evidence.exhaustive);
        CHECK(r.evidence.count == 3125);
        CHECK(r.evidence.str() == "exhaustive (3125 cases)");
    }
    SUBCASE("a skewed affine map fails with a checkable counterexample") {
        auto s = bare(Carrier::zmod(5), OpProgram::mod_lin({1, 2, 1}, 0), "skew");
        auto r = check_total_associativity(s);
        REQUIRE(!r.passed);
        REQUIRE(r.counterexample.has_value());
        const auto& tuple = r.counterexample->tuple;
        REQUIRE(tuple.size() == 5);
        // Re-validate independently: nest the affine map at each placement of
        // the inner block and demand two placements disagree.
        std::vector<std::int64_t> xs;
        for (const auto& e : tuple) xs.push_back(e.modular().residue);
        std::vector<std::int64_t> values;
        for (int pos = 0; pos <= 2; ++pos) {
            std::vector<std::int64_t> inner(xs.begin() + pos, xs.begin() + pos + 3);
            std::vector<std::int64_t> outer;
            for (int i = 0; i < 5; ++i) {
                if (i == pos) outer.push_back(oracle::mod_affine({1, 2, 1}, 0, inner, 5));
                if (i < pos || i >= pos + 3) outer.push_back(xs[(size_t)i]);
            }
            values.push_back(oracle::mod_affine({1, 2, 1}, 0, outer, 5));
        }
        CHECK((values[0] != values[1] || values[1] != values[2]));
        CHECK(!r.counterexample->detail.empty());
    }
    SUBCASE("all engines agree") {
        for (auto engine : {CheckPolicy::Engine::Auto, CheckPolicy::Engine::SerialReference,
                            CheckPolicy::Engine::TableParallel}) {
            CheckPolicy pol;
            pol.engine = engine;
            auto good = check_total_associativity(sum_group(7, 3), pol);
            CHECK(good.passed);
            CHECK(good.evidence.count == 16807);
            auto bad = check_total_associativity(
                bare(Carrier::zmod(5), OpProgram::mod_lin({1, 2, 1}, 0)), pol);
            CHECK(!bad.passed);
        }
    }
    SUBCASE("parametric carriers are sampled") {
        auto s = bare(Carrier::make("scalar-ray 0 nonzero any"), OpProgram::scalar_prod(3));
        CheckPolicy pol;
        pol.assoc_samples = 500;
        pol.seed = 9;
        auto r = check_total_associativity(s, pol);
        CHECK(r.passed);
        CHECK(!r.evidence.exhaustive);
        CHECK(r.evidence.count == 500);
        CHECK(r.evidence.seed == 9);
        CHECK(r.evidence.str() == "sampled (500 cases, seed 9)");
    }
}

TEST_CASE("commutativity and the first-last swap") {
    auto rep = check_commutativity(sum_group(5, 3));
    CHECK(rep.commutative);
    CHECK(rep.semicommutative);
    CHECK(rep.failing_permutations.empty());

    // The conjugate chain x1 * x2^-1 * x3 is symmetric only in its boundary.
    auto conj = bare(Carrier::make("scalar-ray 0 nonzero any"), OpProgram::conj_prod(3));
    CheckPolicy pol;
    pol.law_samples = 60;
    auto rep2 = check_commutativity(conj, pol);
    CHECK(!rep2.commutative);
    CHECK(rep2.semicommutative);
    CHECK(!rep2.failing_permutations.empty());
    CHECK(!rep2.result.passed);
    CHECK(rep2.result.counterexample.has_value());
}

TEST_CASE("unique solvability") {
    auto rep = check_solvability(sum_group(5, 3));
    CHECK(rep.result.passed);
    CHECK(rep.positions == std::vector<bool>{true, true, true});
    CHECK(rep.result.evidence.count == 375);

    // Modular multiplication on a non-prime modulus is not a group.
    auto rep2 = check_solvability(bare(Carrier::zmod(6), OpProgram::mod_prod(3)));
    CHECK(!rep2.result.passed);
}

TEST_CASE("identity search") {
    SUBCASE("sums have a full two-sided identity") {
        auto rep = find_identity(sum_group(5, 3));
        CHECK(rep.cls == IdentityClass::TwoSided);
        CHECK(identity_class_name(rep.cls) == "two_sided");
        REQUIRE(rep.element.has_value());
        CHECK(*rep.element == Element(Modular(0, 5)));
        CHECK(rep.placements == std::vector<int>{1, 2, 3});
        CHECK(rep.note.empty());
    }
    SUBCASE("parametric carriers need declared candidates") {
        auto s = bare(Carrier::make("scalar-ray 0 nonzero any"), OpProgram::scalar_prod(3));
        CHECK(find_identity(s).cls == IdentityClass::None);
        s.identity_candidates = {Element(ExactScalar::one())};
        auto rep = find_identity(s);
        CHECK(rep.cls == IdentityClass::TwoSided);
        CHECK(rep.placements == std::vector<int>{1, 2, 3});
    }
}

TEST_CASE("querelements and neutral polyads") {
    auto s = sum_group(5, 3);
    CHECK(querelement(s, Element(Modular(2, 5))) == Element(Modular(3, 5)));
    // The declared closed form is the same map.
    REQUIRE(s.quer.has_value());
    for (std::int64_t g = 0; g < 5; ++g)
        CHECK(s.quer->program->eval({Element(Modular(g, 5))}) ==
              querelement(s, Element(Modular(g, 5))));

    auto polyad1 = neutral_polyad(s, Element(Modular(2, 5)), 1);
    CHECK(polyad1 == residues({3, 2}, 5));
    auto polyad2 = neutral_polyad(s, Element(Modular(2, 5)), 2);
    CHECK(polyad2 == residues({2, 3}, 5));
    // Neutrality: the polyad absorbs every x from the left and the right.
    for (std::int64_t x = 0; x < 5; ++x) {
        std::vector<Element> left = {Element(Modular(x, 5)), polyad1[0], polyad1[1]};
        CHECK(evaluate(s, left) == Element(Modular(x, 5)));
    }

    // 0 * 0 * h = 0 holds for every h, so no unique querelement exists.
    auto prod = bare(Carrier::zmod(5), OpProgram::mod_prod(3));
    std::string why;
    CHECK(!try_querelement(prod, Element(Modular(0, 5)), {}, &why).has_value());
    CHECK(!why.empty());
    CHECK_THROWS_AS(querelement(prod, Element(Modular(0, 5))), NoSolution);

    CHECK(check_dornte(s).passed);
}

TEST_CASE("zeros and nilpotency") {
    auto prod = bare(Carrier::zmod(4), OpProgram::mod_prod(2));
    auto z = find_zero(prod);
    REQUIRE(z.zero.has_value());
    CHECK(*z.zero == Element(Modular(0, 4)));

    CHECK(!find_zero(sum_group(5, 3)).zero.has_value());

    CHECK(check_nilpotent(prod, Element(Modular(2, 4)), 5) == 1);
    CHECK(!check_nilpotent(prod, Element(Modular(3, 4)), 5).has_value());
}

TEST_CASE("closed-form querelement derivation") {
    auto q1 = derive_quer(make_op(OpProgram::scalar_sum(9)));
    REQUIRE(q1.has_value());
    CHECK(q1->program->serialize() == "negscale(7)");
    auto q2 = derive_quer(make_op(OpProgram::mod_sum(5)));
    REQUIRE(q2.has_value());
    CHECK(q2->program->serialize() == "negscale(3)");
    auto q3 = derive_quer(make_op(OpProgram::conj_prod(3)));
    REQUIRE(q3.has_value());
    CHECK(q3->program->serialize() == "power(1)");
    CHECK(!derive_quer(make_op(OpProgram::mod_lin({1, 2, 1}, 0))).has_value());
}
