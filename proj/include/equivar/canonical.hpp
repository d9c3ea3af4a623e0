#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "equivar/symbol.hpp"

namespace equivar {

// ---------------------------------------------------------------------------
// The explicitly known equivariant operators: id, I0, the homotopy operator K
// restricted to first-order operators on p-forms and second-order operators
// on functions, and the composite d*K.
// ---------------------------------------------------------------------------

inline OpSymbol identity_op(const OpSymbol& D) { return D; }

// I0 : D -> D(1) id, multiplication by the function D(1). Only defined on
// operators acting on functions.
inline OpSymbol i_zero(const OpSymbol& D) {
    if (D.p != 0) throw std::invalid_argument("i_zero: needs p = 0");
    FormField one(D.m, 0);
    one.add(MultiIndex(D.m), IdxTuple{}, Rat(1));
    Poly g = apply(D, one);
    OpSymbol out(D.m, D.k, 0);
    for (const auto& [mu, c] : g.terms) out.add(mu, MultiIndex(D.m), IdxTuple{}, c);
    return out;
}

// A first-order operator on p-forms written as
//   D' = sum_i <Lambda_i, L_{X_i} .> + <Omega, .>,
// with antisymmetric p-tensor coefficients. Reconstruction must reproduce D'
// exactly; K is built from any such decomposition.
struct DecompositionD1p {
    int m = 0;
    int p = 0;
    std::vector<std::pair<AltPoly, PolyVectorField>> pairs;  // (Lambda_i, X_i)
    AltPoly remainder;                                       // Omega

    DecompositionD1p() = default;
    DecompositionD1p(int m_, int p_) : m(m_), p(p_), remainder(m_, p_) {}
};

// A second-order operator on functions written as
//   D'' = sum Lambda L_X o L_Y + sum Omega L_Z + Theta.
struct DecompositionD20 {
    int m = 0;
    std::vector<std::tuple<Poly, PolyVectorField, PolyVectorField>> triples;
    std::vector<std::pair<Poly, PolyVectorField>> pairs;
    Poly theta;

    explicit DecompositionD20(int m_ = 0) : m(m_), theta(m_) {}
};

// Pairing <Lambda, w> of a polynomial-coefficient p-multivector with the
// argument p-form, as an order-0 symbol.
inline OpSymbol pairing_symbol(const AltPoly& L, int order_bound = 0) {
    OpSymbol out(L.m, order_bound, L.p);
    for (const auto& [I, f] : L.terms)
        for (const auto& [mu, c] : f.terms) out.add(mu, MultiIndex(L.m), I, c);
    return out;
}

// <Lambda, L_X .> as a symbol of order <= 1.
inline OpSymbol pair_lie_symbol(const AltPoly& L, const PolyVectorField& X) {
    auto op = [&](const FormField& w) {
        FormField lw = lie_form(X, w);
        Poly out(L.m);
        for (const auto& [I, f] : L.terms) {
            Poly comp = lw.component(I);
            out += f * comp;
        }
        return out;
    };
    return extract_symbol(L.m, L.p, 1, op);
}

// Canonical coordinate decomposition of a first-order operator: constant
// fields X_i = d_i carry the first-order part, Omega the zero-order part.
inline DecompositionD1p decompose_D1p(const OpSymbol& D) {
    if (D.order() > 1) throw std::invalid_argument("decompose_D1p: order exceeds 1");
    DecompositionD1p dec(D.m, D.p);
    std::vector<AltPoly> lambdas(static_cast<size_t>(D.m), AltPoly(D.m, D.p));
    for (const auto& [key, c] : D.terms) {
        if (key.alpha.is_zero()) {
            dec.remainder.add(key.I, Poly::monomial(key.mu, c));
        } else {
            for (int i = 0; i < D.m; ++i) {
                if (key.alpha[i] == 1) {
                    lambdas[static_cast<size_t>(i)].add(key.I, Poly::monomial(key.mu, c));
                    break;
                }
            }
        }
    }
    for (int i = 0; i < D.m; ++i) {
        if (lambdas[static_cast<size_t>(i)].is_zero()) continue;
        dec.pairs.emplace_back(lambdas[static_cast<size_t>(i)], PolyVectorField::coordinate(D.m, i));
    }
    return dec;
}

// Rebuild the operator from a decomposition (used to check exactness and to
// build null modifications in tests).
inline OpSymbol reconstruct(const DecompositionD1p& dec) {
    OpSymbol out(dec.m, 1, dec.p);
    for (const auto& [L, X] : dec.pairs) out += pair_lie_symbol(L, X);
    out += pairing_symbol(dec.remainder, 1);
    return out;
}

// X as a degree-1 multivector with polynomial coefficients.
inline AltPoly field_as_alt(const PolyVectorField& X) {
    AltPoly a(X.m, 1);
    for (int i = 0; i < X.m; ++i) {
        Poly f = X.component(i);
        if (!f.is_zero()) a.add(IdxTuple{i}, f);
    }
    return a;
}

// K on a decomposed first-order operator:
//   K(D') = 1/(1+p) sum_i <Lambda_i, i_{X_i} .>,
// an order-0 operator on (p+1)-forms. Independent of the decomposition used.
inline OpSymbol k_d1p(const DecompositionD1p& dec) {
    if (dec.p + 1 > dec.m) throw std::invalid_argument("k_d1p: p+1 exceeds m");
    AltPoly acc(dec.m, dec.p + 1);
    for (const auto& [L, X] : dec.pairs) acc += wedge(field_as_alt(X), L);
    OpSymbol out = pairing_symbol(acc);
    out *= Rat(1, 1 + dec.p);
    return out;
}

inline OpSymbol k_d1p(const OpSymbol& D) { return k_d1p(decompose_D1p(D)); }

// Canonical decomposition of a second-order operator on functions with
// coordinate fields; the second-order coefficients are symmetrized since the
// d_i d_j commute.
inline DecompositionD20 decompose_D20(const OpSymbol& D) {
    if (D.p != 0) throw std::invalid_argument("decompose_D20: needs p = 0");
    if (D.order() > 2) throw std::invalid_argument("decompose_D20: order exceeds 2");
    DecompositionD20 dec(D.m);
    for (const auto& [key, c] : D.terms) {
        int deg = key.alpha.total();
        if (deg == 0) {
            dec.theta += Poly::monomial(key.mu, c);
        } else if (deg == 1) {
            for (int i = 0; i < D.m; ++i)
                if (key.alpha[i] == 1)
                    dec.pairs.emplace_back(Poly::monomial(key.mu, c), PolyVectorField::coordinate(D.m, i));
        } else {
            int a = -1, b = -1;
            for (int i = 0; i < D.m; ++i) {
                if (key.alpha[i] >= 1 && a < 0) a = i;
                if (key.alpha[i] >= 1) b = i;
            }
            if (a == b) {
                dec.triples.emplace_back(Poly::monomial(key.mu, c), PolyVectorField::coordinate(D.m, a),
                                         PolyVectorField::coordinate(D.m, a));
            } else {
                dec.triples.emplace_back(Poly::monomial(key.mu, c / 2), PolyVectorField::coordinate(D.m, a),
                                         PolyVectorField::coordinate(D.m, b));
                dec.triples.emplace_back(Poly::monomial(key.mu, c / 2), PolyVectorField::coordinate(D.m, b),
                                         PolyVectorField::coordinate(D.m, a));
            }
        }
    }
    return dec;
}

inline OpSymbol reconstruct(const DecompositionD20& dec) {
    auto op = [&](const FormField& f) {
        Poly out(dec.m);
        for (const auto& [L, X, Y] : dec.triples) {
            FormField ly = lie_form(Y, f);
            FormField lxy = lie_form(X, ly);
            out += L * lxy.component(IdxTuple{});
        }
        for (const auto& [O, Z] : dec.pairs) out += O * lie_form(Z, f).component(IdxTuple{});
        out += dec.theta * f.component(IdxTuple{});
        return out;
    };
    return extract_symbol(dec.m, 0, 2, op);
}

// K on a decomposed second-order operator on functions:
//   K(D'') = 1/2 sum Lambda (i_X L_Y + L_X i_Y) + sum Omega i_Z,
// an order-1 operator on 1-forms. The zero-order remainder does not appear.
inline OpSymbol k_d20(const DecompositionD20& dec) {
    if (dec.m < 1) throw std::invalid_argument("k_d20: needs m >= 1");
    const int m = dec.m;
    OpSymbol out(m, 1, 1);
    auto add_poly = [&](const Poly& f, const MultiIndex& alpha, const IdxTuple& I, const Rat& scale) {
        for (const auto& [mu, c] : f.terms) out.add(mu, alpha, I, c * scale);
    };
    for (const auto& [L, X, Y] : dec.triples) {
        for (int a = 0; a < m; ++a) {
            Poly Xa = X.component(a);
            if (Xa.is_zero()) continue;
            for (int b = 0; b < m; ++b) {
                Poly Yb = Y.component(b);
                if (Yb.is_zero()) continue;
                // 1/2 (i_X L_Y + L_X i_Y) nu
                //   = 1/2 sum X^a Y^b (d_b nu_a + d_a nu_b) + sum X^a (d_a Y^b) nu_b
                add_poly(L * Xa * Yb, MultiIndex::unit(m, b), IdxTuple{a}, Rat(1, 2));
                add_poly(L * Xa * Yb, MultiIndex::unit(m, a), IdxTuple{b}, Rat(1, 2));
                Poly dYb = Yb.derivative(a);
                if (!dYb.is_zero()) add_poly(L * Xa * dYb, MultiIndex(m), IdxTuple{b}, Rat(1));
            }
        }
    }
    for (const auto& [O, Z] : dec.pairs)
        for (int a = 0; a < m; ++a) {
            Poly Za = Z.component(a);
            if (!Za.is_zero()) add_poly(O * Za, MultiIndex(m), IdxTuple{a}, Rat(1));
        }
    return out;
}

inline OpSymbol k_d20(const OpSymbol& D) { return k_d20(decompose_D20(D)); }

// d* K on first-order operators, as the composite of the two symbol maps.
inline OpSymbol dstar_k(const OpSymbol& D) { return dual_d(k_d1p(D)); }

// The closed form (1/(1+p)) sum <Lambda_i, i_{X_i} d .> evaluated through the
// form-field machinery; an independent route that must agree with dstar_k.
inline OpSymbol dstar_k_direct(const DecompositionD1p& dec) {
    if (dec.p + 1 > dec.m) throw std::invalid_argument("dstar_k_direct: p+1 exceeds m");
    auto op = [&](const FormField& w) {
        FormField dw = de_rham(w);
        Poly out(dec.m);
        for (const auto& [L, X] : dec.pairs) {
            FormField ix = interior_field(X, dw);
            for (const auto& [I, f] : L.terms) out += f * ix.component(I);
        }
        out *= Rat(1, 1 + dec.p);
        return out;
    };
    return extract_symbol(dec.m, dec.p, 1, op);
}

}  // namespace equivar
