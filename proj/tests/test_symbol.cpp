#include <catch2/catch_amalgamated.hpp>

#include "equivar/random.hpp"
#include "equivar/symbol.hpp"

using namespace equivar;

namespace {

OpSymbol zero_like(const OpSymbol& D) { return OpSymbol(D.m, D.k, D.p); }

}  // namespace

TEST_CASE("apply evaluates a symbol on a form field") {
    int m = 2;
    SECTION("d_1 acting on (x1)^2") {
        OpSymbol D = OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{});
        FormField f(m, 0);
        f.add(MultiIndex{2, 0}, IdxTuple{}, Rat(1));
        REQUIRE(apply(D, f) == Poly::monomial(MultiIndex{1, 0}, 2));
    }
    SECTION("component evaluation <e1, .>") {
        OpSymbol D = OpSymbol::monomial(m, 0, 1, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0});
        FormField w(m, 1);
        w.add(MultiIndex{0, 1}, IdxTuple{0}, Rat(1));  // x2 dx1
        REQUIRE(apply(D, w) == Poly::monomial(MultiIndex{0, 1}));
    }
    SECTION("xi1 tensor <e2, .> on x1 dx2") {
        OpSymbol D = OpSymbol::monomial(m, 1, 1, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1});
        FormField w(m, 1);
        w.add(MultiIndex{1, 0}, IdxTuple{1}, Rat(1));
        REQUIRE(apply(D, w) == Poly::constant(m, 1));
    }
    SECTION("shape mismatch rejected") {
        OpSymbol D = OpSymbol::monomial(m, 0, 1, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0});
        FormField f(m, 0);
        REQUIRE_THROWS_AS(apply(D, f), std::invalid_argument);
    }
}

TEST_CASE("lie_form basic cases") {
    int m = 2;
    FormField x1dx2(m, 1);
    x1dx2.add(MultiIndex{1, 0}, IdxTuple{1}, Rat(1));

    SECTION("constant field differentiates the coefficient") {
        FormField got = lie_form(PolyVectorField::coordinate(m, 0), x1dx2);
        FormField dx2(m, 1);
        dx2.add(MultiIndex{0, 0}, IdxTuple{1}, Rat(1));
        REQUIRE(got == dx2);
    }
    SECTION("L_{x1 d1} dx1 = dx1") {
        FormField dx1(m, 1);
        dx1.add(MultiIndex{0, 0}, IdxTuple{0}, Rat(1));
        PolyVectorField X = PolyVectorField::monomial(MultiIndex{1, 0}, 0);
        REQUIRE(lie_form(X, dx1) == dx1);
    }
    SECTION("constant form, constant field") {
        FormField dx2(m, 1);
        dx2.add(MultiIndex{0, 0}, IdxTuple{1}, Rat(1));
        REQUIRE(lie_form(PolyVectorField::coordinate(m, 0), dx2).is_zero());
    }
}

TEST_CASE("lie_op operational examples") {
    int m = 2;
    SECTION("constant-coefficient D is killed by constant fields") {
        OpSymbol D = OpSymbol::monomial(m, 2, 1, MultiIndex{0, 0}, MultiIndex{1, 1}, IdxTuple{0});
        REQUIRE(lie_op(PolyVectorField::coordinate(m, 0), D) == zero_like(D));
    }
    SECTION("L_{x1 d1} xi1 = -xi1") {
        OpSymbol D = OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{});
        PolyVectorField X = PolyVectorField::monomial(MultiIndex{1, 0}, 0);
        REQUIRE(lie_op(X, D) == D * Rat(-1));
    }
    SECTION("L_{d1} <e1, .> = 0") {
        OpSymbol D = OpSymbol::monomial(m, 0, 1, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0});
        REQUIRE(lie_op(PolyVectorField::coordinate(m, 0), D) == zero_like(D));
    }
}

TEST_CASE("lie_symbolic matches lie_op on the worked cases") {
    int m = 2;
    std::vector<std::pair<PolyVectorField, OpSymbol>> cases;
    cases.emplace_back(PolyVectorField::coordinate(m, 0),
                       OpSymbol::monomial(m, 2, 1, MultiIndex{0, 0}, MultiIndex{1, 1}, IdxTuple{0}));
    cases.emplace_back(PolyVectorField::monomial(MultiIndex{1, 0}, 0),
                       OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}));
    cases.emplace_back(PolyVectorField::coordinate(m, 0),
                       OpSymbol::monomial(m, 0, 1, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0}));
    // linear field on a xi-monomial: the gl(m) action
    cases.emplace_back(PolyVectorField::monomial(MultiIndex{0, 1}, 0),
                       OpSymbol::monomial(m, 2, 0, MultiIndex{0, 0}, MultiIndex{1, 1}, IdxTuple{}));
    // quadratic field on a 2-form evaluation: the substitution term alone
    cases.emplace_back(PolyVectorField::monomial(MultiIndex{2, 0}, 1),
                       OpSymbol::monomial(m, 0, 2, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0, 1}));
    for (const auto& [X, D] : cases) {
        REQUIRE(lie_symbolic(X, D) == lie_op(X, D));
    }
}

TEST_CASE("lie_op equals lie_symbolic on random instances") {
    Rng rng(606);
    for (int trial = 0; trial < 120; ++trial) {
        int m = rng.uniform(1, 4);
        int k = rng.uniform(0, 3);
        int p = rng.uniform(0, std::min(3, m));
        OpSymbol D = rng.op_symbol(m, k, p, 2, 4);
        PolyVectorField X = rng.vector_field(m, 3, 3);
        REQUIRE(lie_symbolic(X, D) == lie_op(X, D));
    }
}

TEST_CASE("the Lie derivative is a Lie algebra action") {
    Rng rng(707);
    for (int trial = 0; trial < 50; ++trial) {
        int m = rng.uniform(1, 3);
        int k = rng.uniform(0, 2);
        int p = rng.uniform(0, std::min(2, m));
        OpSymbol D = rng.op_symbol(m, k, p, 2, 3);
        PolyVectorField X = rng.vector_field(m, 2, 2);
        PolyVectorField Y = rng.vector_field(m, 2, 2);
        OpSymbol lhs = lie_symbolic(bracket(X, Y), D);
        OpSymbol rhs = lie_symbolic(X, lie_symbolic(Y, D)) - lie_symbolic(Y, lie_symbolic(X, D));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("Leibniz compatibility: apply(L_X D, w) = X.apply(D,w) - apply(D, L_X w)") {
    Rng rng(808);
    for (int trial = 0; trial < 50; ++trial) {
        int m = rng.uniform(1, 3);
        int k = rng.uniform(0, 2);
        int p = rng.uniform(0, std::min(2, m));
        OpSymbol D = rng.op_symbol(m, k, p, 2, 3);
        PolyVectorField X = rng.vector_field(m, 2, 2);
        FormField w = rng.form_field(m, p, 3, 3);
        Poly lhs = apply(lie_symbolic(X, D), w);
        Poly rhs = lie_function(X, apply(D, w)) - apply(D, lie_form(X, w));
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("principal symbol") {
    int m = 2;
    SECTION("drops lower order parts") {
        OpSymbol D(m, 1, 0);
        D.add(MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}, Rat(1));
        D.add(MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{}, Rat(1));
        TensorFieldSymbol s = principal_symbol(D);
        REQUIRE(s.xi_degree == 1);
        REQUIRE(s.sym == OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}));
    }
    SECTION("keeps only the top homogeneous layer") {
        OpSymbol D(m, 2, 0);
        D.add(MultiIndex{0, 0}, MultiIndex{2, 0}, IdxTuple{}, Rat(1));
        D.add(MultiIndex{0, 0}, MultiIndex{0, 1}, IdxTuple{}, Rat(1));
        TensorFieldSymbol s = principal_symbol(D);
        REQUIRE(s.xi_degree == 2);
        REQUIRE(s.sym.terms.size() == 1);
    }
    SECTION("zero operator rejected") {
        REQUIRE_THROWS_AS(principal_symbol(OpSymbol(m, 1, 0)), std::invalid_argument);
    }
}

TEST_CASE("principal symbol is equivariant when the top degree survives") {
    Rng rng(909);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 50; ++trial) {
        int m = rng.uniform(1, 3);
        int k = rng.uniform(0, 2);
        int p = rng.uniform(0, std::min(2, m));
        OpSymbol D = rng.op_symbol(m, k, p, 2, 3);
        if (D.is_zero()) continue;
        PolyVectorField X = rng.vector_field(m, 2, 2);
        OpSymbol LD = lie_symbolic(X, D);
        if (LD.is_zero() || LD.order() != D.order()) continue;
        ++checked;
        REQUIRE(principal_symbol(LD) == lie_tensor(X, principal_symbol(D)));
    }
    REQUIRE(checked >= 50);
}

TEST_CASE("lie_tensor basics") {
    int m = 2;
    SECTION("constant field, constant tensor") {
        TensorFieldSymbol s(OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}), 1);
        REQUIRE(lie_tensor(PolyVectorField::coordinate(m, 0), s).sym.is_zero());
    }
    SECTION("L_{x1 d1} e1 = -e1 as a degree-1 symbol") {
        TensorFieldSymbol s(OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}), 1);
        PolyVectorField X = PolyVectorField::monomial(MultiIndex{1, 0}, 0);
        TensorFieldSymbol got = lie_tensor(X, s);
        REQUIRE(got.sym == s.sym * Rat(-1));
    }
    SECTION("homogeneity is preserved") {
        Rng rng(111);
        for (int trial = 0; trial < 30; ++trial) {
            int m2 = rng.uniform(1, 3);
            int k = rng.uniform(0, 3);
            int p = rng.uniform(0, std::min(2, m2));
            OpSymbol D = rng.op_symbol(m2, k, p, 2, 3);
            if (D.is_zero()) continue;
            TensorFieldSymbol s = principal_symbol(D);
            PolyVectorField X = rng.vector_field(m2, 3, 2);
            // the constructor re-checks homogeneity
            TensorFieldSymbol got = lie_tensor(X, s);
            REQUIRE(got.xi_degree == s.xi_degree);
        }
    }
}

TEST_CASE("de_rham") {
    int m = 2;
    SECTION("d of x1 is dx1") {
        FormField f(m, 0);
        f.add(MultiIndex{1, 0}, IdxTuple{}, Rat(1));
        FormField got = de_rham(f);
        FormField dx1(m, 1);
        dx1.add(MultiIndex{0, 0}, IdxTuple{0}, Rat(1));
        REQUIRE(got == dx1);
    }
    SECTION("d(x2 dx1) = -dx1^dx2") {
        FormField w(m, 1);
        w.add(MultiIndex{0, 1}, IdxTuple{0}, Rat(1));
        FormField got = de_rham(w);
        FormField expected(m, 2);
        expected.add(MultiIndex{0, 0}, IdxTuple{0, 1}, Rat(-1));
        REQUIRE(got == expected);
    }
    SECTION("d o d = 0 on random fields") {
        Rng rng(222);
        for (int trial = 0; trial < 40; ++trial) {
            int m2 = rng.uniform(1, 4);
            int p = rng.uniform(0, m2 - 1);
            FormField w = rng.form_field(m2, p, 3, 4);
            REQUIRE(de_rham(de_rham(w)).is_zero());
        }
    }
    SECTION("d of a top form is zero") {
        FormField w(2, 2);
        w.add(MultiIndex{1, 1}, IdxTuple{0, 1}, Rat(3));
        REQUIRE(de_rham(w).is_zero());
    }
}

TEST_CASE("dual_d") {
    int m = 2;
    SECTION("<e1, .> becomes d_1 on functions") {
        OpSymbol D = OpSymbol::monomial(m, 0, 1, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0});
        OpSymbol got = dual_d(D);
        REQUIRE(got == OpSymbol::monomial(m, 1, 0, MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{}));
    }
    SECTION("zero maps to zero") {
        REQUIRE(dual_d(OpSymbol(m, 0, 1)).is_zero());
    }
    SECTION("<e1^e2, .> becomes a -> d1 a2 - d2 a1") {
        OpSymbol D = OpSymbol::monomial(m, 0, 2, MultiIndex{0, 0}, MultiIndex{0, 0}, IdxTuple{0, 1});
        OpSymbol got = dual_d(D);
        OpSymbol expected(m, 1, 1);
        expected.add(MultiIndex{0, 0}, MultiIndex{1, 0}, IdxTuple{1}, Rat(1));
        expected.add(MultiIndex{0, 0}, MultiIndex{0, 1}, IdxTuple{0}, Rat(-1));
        REQUIRE(got == expected);
    }
    SECTION("p = 0 rejected") {
        REQUIRE_THROWS_AS(dual_d(OpSymbol(m, 1, 0)), std::invalid_argument);
    }
    SECTION("agrees with precomposition by d on random inputs") {
        Rng rng(333);
        for (int trial = 0; trial < 30; ++trial) {
            int m2 = rng.uniform(2, 3);
            int p = rng.uniform(1, m2);
            int k = rng.uniform(0, 2);
            OpSymbol D = rng.op_symbol(m2, k, p, 2, 3);
            FormField a = rng.form_field(m2, p - 1, 3, 3);
            REQUIRE(apply(dual_d(D), a) == apply(D, de_rham(a)));
        }
    }
    SECTION("dual_d o dual_d = 0") {
        Rng rng(444);
        for (int trial = 0; trial < 30; ++trial) {
            int m2 = rng.uniform(2, 4);
            int p = rng.uniform(2, m2);
            OpSymbol D = rng.op_symbol(m2, 1, p, 2, 3);
            REQUIRE(dual_d(dual_d(D)).is_zero());
        }
    }
    SECTION("dual_d commutes with the Lie derivative") {
        Rng rng(555);
        for (int trial = 0; trial < 30; ++trial) {
            int m2 = rng.uniform(2, 3);
            int p = rng.uniform(1, m2);
            int k = rng.uniform(0, 2);
            OpSymbol D = rng.op_symbol(m2, k, p, 2, 3);
            PolyVectorField X = rng.vector_field(m2, 2, 2);
            REQUIRE(dual_d(lie_op(X, D)) == lie_op(X, dual_d(D)));
        }
    }
}

TEST_CASE("order bound violations fail loudly") {
    OpSymbol D(2, 1, 0);
    REQUIRE_THROWS_AS(D.add(MultiIndex{0, 0}, MultiIndex{2, 0}, IdxTuple{}, Rat(1)),
                      std::invalid_argument);
}
