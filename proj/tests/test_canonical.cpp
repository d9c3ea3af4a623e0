#include <catch2/catch_amalgamated.hpp>

#include "equivar/canonical.hpp"
#include "equivar/random.hpp"

using namespace equivar;

namespace {

// canonical decomposition plus a null modification: a random extra
// (Lambda, X) pair whose operator is immediately subtracted back out through
// its own coordinate decomposition
DecompositionD1p with_null_pair(const DecompositionD1p& dec, Rng& rng) {
    int m = dec.m, p = dec.p;
    AltPoly L(m, p);
    for (const auto& I : tuples_of(m, p))
        if (rng.uniform(0, 1) == 0) L.add(I, rng.poly(m, 2, 2));
    PolyVectorField X = rng.vector_field(m, 2, 2);
    OpSymbol S = pair_lie_symbol(L, X);
    DecompositionD1p cancel = decompose_D1p(S);

    DecompositionD1p out = dec;
    out.pairs.emplace_back(L, X);
    for (auto& [cl, cx] : cancel.pairs) out.pairs.emplace_back(cl * Rat(-1), cx);
    out.remainder -= cancel.remainder;
    return out;
}

OpSymbol random_d1p(Rng& rng, int m, int p) {
    OpSymbol D(m, 1, p);
    for (int t = 0; t < 4; ++t)
        D.add(rng.multi_index(m, 2), rng.multi_index(m, 1), rng.tuple(m, p), rng.small_rat());
    return D;
}

}  // namespace

TEST_CASE("identity and i_zero") {
    int m = 2;
    SECTION("identity returns its argument, zero included") {
        OpSymbol D = OpSymbol::monomial(m, 1, 0, MultiIndex{1, 0}, MultiIndex{1, 0}, IdxTuple{});
        REQUIRE(identity_op(D) == D);
        REQUIRE(identity_op(OpSymbol(m, 1, 0)).is_zero());
    }
    SECTION("pure derivative evaluates to zero on constants") {
        OpSymbol D = OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{});
        REQUIRE(i_zero(D).is_zero());
    }
    SECTION("multiplication operators are fixed points") {
        OpSymbol D = OpSymbol::monomial(m, 1, 0, MultiIndex{2, 1}, MultiIndex{0, 0}, IdxTuple{}, rat(3, 2));
        REQUIRE(i_zero(D) == D);
    }
    SECTION("xi1 + x1 becomes multiplication by x1") {
        OpSymbol D(m, 1, 0);
        D.add(MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}, Rat(1));
        D.add(MultiIndex{1, 0}, MultiIndex{0, 0}, IdxTuple{}, Rat(1));
        REQUIRE(i_zero(D) == OpSymbol::monomial(m, 1, 0, MultiIndex{1, 0}, MultiIndex{0, 0}, IdxTuple{}));
    }
    SECTION("p != 0 rejected") {
        REQUIRE_THROWS_AS(i_zero(OpSymbol(m, 0, 1)), std::invalid_argument);
    }
    SECTION("i_zero is idempotent and equivariant on random input") {
        Rng rng(12);
        for (int t = 0; t < 20; ++t) {
            OpSymbol D = rng.op_symbol(2, 2, 0, 2, 3);
            REQUIRE(i_zero(i_zero(D)) == i_zero(D));
            PolyVectorField X = rng.vector_field(2, 3, 2);
            REQUIRE(lie_op(X, i_zero(D)) == i_zero(lie_op(X, D)));
        }
    }
}

TEST_CASE("decompose_D1p") {
    int m = 2, p = 1;
    SECTION("d1 w_2 gives Lambda_1 = e2") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1});
        DecompositionD1p dec = decompose_D1p(D);
        REQUIRE(dec.pairs.size() == 1);
        REQUIRE(dec.pairs[0].second == PolyVectorField::coordinate(m, 0));
        REQUIRE(dec.pairs[0].first.coeff(IdxTuple{1}) == Poly::constant(m, 1));
        REQUIRE(dec.remainder.is_zero());
        REQUIRE(reconstruct(dec) == D.with_order_bound(1));
    }
    SECTION("zero-order operators go entirely to the remainder") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{1, 1}, MultiIndex{0, 0}, IdxTuple{0}, rat(5));
        DecompositionD1p dec = decompose_D1p(D);
        REQUIRE(dec.pairs.empty());
        REQUIRE(dec.remainder.coeff(IdxTuple{0}) == Poly::monomial(MultiIndex{1, 1}, 5));
    }
    SECTION("zero operator gives the empty decomposition") {
        DecompositionD1p dec = decompose_D1p(OpSymbol(m, 1, p));
        REQUIRE(dec.pairs.empty());
        REQUIRE(dec.remainder.is_zero());
    }
    SECTION("order > 1 rejected") {
        OpSymbol D = OpSymbol::monomial(m, 2, p, MultiIndex{0, 0}, MultiIndex{2, 0}, IdxTuple{0});
        REQUIRE_THROWS_AS(decompose_D1p(D), std::invalid_argument);
    }
    SECTION("reconstruction is exact on random input") {
        Rng rng(34);
        for (int t = 0; t < 100; ++t) {
            int mm = rng.uniform(1, 4);
            int pp = rng.uniform(0, std::min(3, mm));
            OpSymbol D = random_d1p(rng, mm, pp);
            REQUIRE(reconstruct(decompose_D1p(D)) == D);
        }
    }
}

TEST_CASE("K on first-order operators") {
    int m = 2, p = 1;
    SECTION("d1 w_2 maps to half the (1,2)-component") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1});
        OpSymbol K = k_d1p(D);
        REQUIRE(K.p == 2);
        REQUIRE(K == OpSymbol::monomial(m, 0, 2, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0, 1}, rat(1, 2)));
        FormField w(m, 2);
        w.add(MultiIndex{1, 1}, IdxTuple{0, 1}, Rat(4));
        REQUIRE(apply(K, w) == Poly::monomial(MultiIndex{1, 1}, 2));
    }
    SECTION("zero-order part contributes nothing") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{2, 0}, MultiIndex{0, 0}, IdxTuple{0}, rat(7));
        REQUIRE(k_d1p(D).is_zero());
    }
    SECTION("p+1 > m rejected") {
        OpSymbol D(1, 1, 1);
        REQUIRE_THROWS_AS(k_d1p(D), std::invalid_argument);
    }
    SECTION("equivariant under x1 d2") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1});
        PolyVectorField X = PolyVectorField::monomial(MultiIndex{1, 0}, 1);
        REQUIRE(lie_op(X, k_d1p(D)) == k_d1p(lie_op(X, D)));
    }
    SECTION("independent of the decomposition") {
        Rng rng(56);
        for (int t = 0; t < 60; ++t) {
            int mm = rng.uniform(2, 4);
            int pp = rng.uniform(0, mm - 1);
            OpSymbol D = random_d1p(rng, mm, pp);
            DecompositionD1p dec = decompose_D1p(D);
            DecompositionD1p aug = with_null_pair(dec, rng);
            REQUIRE(reconstruct(aug) == D);
            REQUIRE(k_d1p(aug) == k_d1p(dec));
        }
    }
}

TEST_CASE("K on second-order operators on functions") {
    int m = 2;
    SECTION("d1 d2 maps to the symmetrized first-derivative average") {
        OpSymbol D = OpSymbol::monomial(m, 2, 0, MultiIndex{0, 0}, MultiIndex{1, 1}, IdxTuple{});
        OpSymbol K = k_d20(D);
        OpSymbol expected(m, 1, 1);
        expected.add(MultiIndex{0, 0}, MultiIndex{0, 1}, IdxTuple{0}, rat(1, 2));
        expected.add(MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1}, rat(1, 2));
        REQUIRE(K == expected);
    }
    SECTION("first-order part: d1 maps to nu_1") {
        OpSymbol D = OpSymbol::monomial(m, 2, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{});
        REQUIRE(k_d20(D) == OpSymbol::monomial(m, 1, 1, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0}));
    }
    SECTION("multiplication operators contribute nothing") {
        OpSymbol D = OpSymbol::monomial(m, 2, 0, MultiIndex{1, 1}, MultiIndex{0, 0}, IdxTuple{}, rat(9));
        REQUIRE(k_d20(D).is_zero());
    }
    SECTION("order > 2 rejected") {
        OpSymbol D = OpSymbol::monomial(m, 3, 0, MultiIndex{0, 0}, MultiIndex{3, 0}, IdxTuple{});
        REQUIRE_THROWS_AS(k_d20(D), std::invalid_argument);
    }
    SECTION("reconstruction of the canonical decomposition is exact") {
        Rng rng(78);
        for (int t = 0; t < 40; ++t) {
            int mm = rng.uniform(1, 3);
            OpSymbol D = rng.op_symbol(mm, 2, 0, 2, 4);
            REQUIRE(reconstruct(decompose_D20(D)) == D.with_order_bound(2));
        }
    }
    SECTION("independent of the decomposition: extra null triple") {
        Rng rng(90);
        for (int t = 0; t < 25; ++t) {
            int mm = rng.uniform(1, 3);
            OpSymbol D = rng.op_symbol(mm, 2, 0, 2, 3);
            DecompositionD20 dec = decompose_D20(D);
            // null modification: Lambda L_X L_Y minus its own decomposition
            Poly L = rng.poly(mm, 1, 2);
            PolyVectorField X = rng.vector_field(mm, 1, 2);
            PolyVectorField Y = rng.vector_field(mm, 1, 2);
            DecompositionD20 extra(mm);
            extra.triples.emplace_back(L, X, Y);
            DecompositionD20 cancel = decompose_D20(reconstruct(extra));
            DecompositionD20 aug = dec;
            aug.triples.emplace_back(L, X, Y);
            for (auto& [cl, cx, cy] : cancel.triples) aug.triples.emplace_back(cl * Rat(-1), cx, cy);
            for (auto& [co, cz] : cancel.pairs) aug.pairs.emplace_back(co * Rat(-1), cz);
            aug.theta -= cancel.theta;
            REQUIRE(reconstruct(aug) == D.with_order_bound(2));
            REQUIRE(k_d20(aug) == k_d20(dec));
        }
    }
}

TEST_CASE("d*K") {
    int m = 2, p = 1;
    SECTION("d1 w_2 maps to half the curl") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1});
        OpSymbol got = dstar_k(D);
        OpSymbol expected(m, 1, 1);
        expected.add(MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1}, rat(1, 2));
        expected.add(MultiIndex{0, 0}, MultiIndex{0, 1}, IdxTuple{0}, rat(-1, 2));
        REQUIRE(got == expected);
    }
    SECTION("zero-order operators map to zero") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{0, 1}, MultiIndex{0, 0}, IdxTuple{0});
        REQUIRE(dstar_k(D).is_zero());
    }
    SECTION("linearly independent from the identity") {
        OpSymbol D = OpSymbol::monomial(m, 1, p, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1});
        OpSymbol diff = dstar_k(D) - D.with_order_bound(1) * rat(1, 2);
        REQUIRE(!diff.is_zero());
    }
    SECTION("route agreement with the closed form") {
        Rng rng(1234);
        for (int t = 0; t < 60; ++t) {
            int mm = rng.uniform(2, 4);
            int pp = rng.uniform(1, mm - 1);
            OpSymbol D = random_d1p(rng, mm, pp);
            DecompositionD1p dec = decompose_D1p(D);
            REQUIRE(dstar_k(D) == dstar_k_direct(dec));
            DecompositionD1p aug = with_null_pair(dec, rng);
            REQUIRE(dstar_k(D) == dstar_k_direct(aug));
        }
    }
}
