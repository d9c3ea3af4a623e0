#pragma once

#include <compare>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

#include "equivar/poly.hpp"
#include "equivar/tensor.hpp"

namespace equivar {

// ---------------------------------------------------------------------------
// Fields on R^m with polynomial coefficients
// ---------------------------------------------------------------------------

struct FormKey {
    MultiIndex mu;  // x-exponent of the coefficient
    IdxTuple I;     // increasing p-tuple labeling dx^I
    friend bool operator==(const FormKey&, const FormKey&) = default;
    friend auto operator<=>(const FormKey& a, const FormKey& b) {
        return std::tie(a.mu, a.I) <=> std::tie(b.mu, b.I);
    }
};

// Differential p-form with polynomial coefficients, canonical antisymmetric
// storage.
struct FormField {
    int m = 0;
    int p = 0;
    std::map<FormKey, Rat> terms;

    FormField() = default;
    FormField(int m_, int p_) : m(m_), p(p_) {
        if (p < 0 || p > m) throw std::invalid_argument("FormField: degree out of range");
    }

    bool is_zero() const { return terms.empty(); }

    void add(const MultiIndex& mu, const IdxTuple& I, const Rat& c) {
        if (mu.size() != m) throw std::invalid_argument("FormField: bad x-exponent");
        if (I.size() != p || !I.increasing()) throw std::invalid_argument("FormField: non-canonical tuple");
        add_term(terms, FormKey{mu, I}, c);
    }

    Poly component(const IdxTuple& I) const {
        Poly f(m);
        for (const auto& [key, c] : terms)
            if (key.I == I) add_term(f.terms, key.mu, c);
        return f;
    }

    FormField& operator+=(const FormField& o) {
        check_same(o);
        for (const auto& [key, c] : o.terms) add_term(terms, key, c);
        return *this;
    }
    FormField& operator-=(const FormField& o) {
        check_same(o);
        for (const auto& [key, c] : o.terms) add_term(terms, key, -c);
        return *this;
    }
    FormField& operator*=(const Rat& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [key, c] : terms) c *= s;
        return *this;
    }
    friend FormField operator+(FormField a, const FormField& b) { return a += b; }
    friend FormField operator-(FormField a, const FormField& b) { return a -= b; }
    friend FormField operator*(FormField a, const Rat& s) { return a *= s; }
    friend bool operator==(const FormField& a, const FormField& b) {
        return a.m == b.m && a.p == b.p && a.terms == b.terms;
    }

    void check_same(const FormField& o) const {
        if (m != o.m || p != o.p) throw std::invalid_argument("FormField: shape mismatch");
    }
};

struct VfKey {
    MultiIndex mu;
    int i = 0;  // coordinate direction
    friend bool operator==(const VfKey&, const VfKey&) = default;
    friend auto operator<=>(const VfKey& a, const VfKey& b) {
        return std::tie(a.mu, a.i) <=> std::tie(b.mu, b.i);
    }
};

// Vector field on R^m with polynomial coefficients.
struct PolyVectorField {
    int m = 0;
    std::map<VfKey, Rat> terms;

    PolyVectorField() = default;
    explicit PolyVectorField(int m_) : m(m_) {}

    // x^mu d_i
    static PolyVectorField monomial(const MultiIndex& mu, int i, const Rat& c = 1) {
        PolyVectorField X(mu.size());
        X.add(mu, i, c);
        return X;
    }
    static PolyVectorField coordinate(int m, int i) { return monomial(MultiIndex(m), i); }

    bool is_zero() const { return terms.empty(); }

    void add(const MultiIndex& mu, int i, const Rat& c) {
        if (mu.size() != m || i < 0 || i >= m) throw std::invalid_argument("PolyVectorField: bad term");
        add_term(terms, VfKey{mu, i}, c);
    }

    Poly component(int i) const {
        Poly f(m);
        for (const auto& [key, c] : terms)
            if (key.i == i) add_term(f.terms, key.mu, c);
        return f;
    }

    PolyVectorField& operator+=(const PolyVectorField& o) {
        if (m != o.m) throw std::invalid_argument("PolyVectorField: shape mismatch");
        for (const auto& [key, c] : o.terms) add_term(terms, key, c);
        return *this;
    }
    PolyVectorField& operator*=(const Rat& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [key, c] : terms) c *= s;
        return *this;
    }
    friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
        return a.m == b.m && a.terms == b.terms;
    }
};

// Lie bracket [X, Y] of polynomial vector fields.
inline PolyVectorField bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    if (X.m != Y.m) throw std::invalid_argument("bracket: dimension mismatch");
    PolyVectorField r(X.m);
    for (const auto& [kx, cx] : X.terms)
        for (const auto& [ky, cy] : Y.terms) {
            // X^i d_i (Y^j) d_j - Y^j d_j (X^i) d_i
            if (ky.mu[kx.i] > 0) {
                MultiIndex mu = ky.mu;
                mu[kx.i] -= 1;
                r.add(kx.mu + mu, ky.i, cx * cy * Rat(ky.mu[kx.i]));
            }
            if (kx.mu[ky.i] > 0) {
                MultiIndex mu = kx.mu;
                mu[ky.i] -= 1;
                r.add(ky.mu + mu, kx.i, -cx * cy * Rat(kx.mu[ky.i]));
            }
        }
    return r;
}

// ---------------------------------------------------------------------------
// Operator symbols
// ---------------------------------------------------------------------------

struct SymKey {
    MultiIndex mu;     // x-exponent of the coefficient
    MultiIndex alpha;  // xi-exponent (derivatives acting on the argument)
    IdxTuple I;        // wedge part, pairs with the argument form
    friend bool operator==(const SymKey&, const SymKey&) = default;
    friend auto operator<=>(const SymKey& a, const SymKey& b) {
        return std::tie(a.mu, a.alpha, a.I) <=> std::tie(b.mu, b.alpha, b.I);
    }
};

// Polynomial symbol of a differential operator of order <= k from p-forms to
// functions: D = sum c x^mu xi^alpha <e_I, .>. The order bound is enforced at
// construction and after every operation; nothing is truncated silently.
struct OpSymbol {
    int m = 0;
    int k = 0;
    int p = 0;
    std::map<SymKey, Rat> terms;

    OpSymbol() = default;
    OpSymbol(int m_, int k_, int p_) : m(m_), k(k_), p(p_) {
        if (k < 0) throw std::invalid_argument("OpSymbol: negative order bound");
        if (p < 0 || p > m) throw std::invalid_argument("OpSymbol: form degree out of range");
    }

    static OpSymbol monomial(int m, int k, int p, const MultiIndex& mu, const MultiIndex& alpha,
                             const IdxTuple& I, const Rat& c = 1) {
        OpSymbol D(m, k, p);
        D.add(mu, alpha, I, c);
        return D;
    }

    bool is_zero() const { return terms.empty(); }

    // Max xi-degree actually present, -1 when zero.
    int order() const {
        int d = -1;
        for (const auto& [key, c] : terms) d = std::max(d, key.alpha.total());
        return d;
    }

    void add(const MultiIndex& mu, const MultiIndex& alpha, const IdxTuple& I, const Rat& c) {
        if (mu.size() != m || alpha.size() != m) throw std::invalid_argument("OpSymbol: bad exponent");
        if (alpha.total() > k) throw std::invalid_argument("OpSymbol: order bound exceeded");
        if (I.size() != p || !I.increasing()) throw std::invalid_argument("OpSymbol: non-canonical tuple");
        add_term(terms, SymKey{mu, alpha, I}, c);
    }

    // The coefficient function of the (alpha, I) basis slot.
    Poly coefficient(const MultiIndex& alpha, const IdxTuple& I) const {
        Poly f(m);
        for (const auto& [key, c] : terms)
            if (key.alpha == alpha && key.I == I) add_term(f.terms, key.mu, c);
        return f;
    }

    // Same symbol under a higher (or equal) order bound.
    OpSymbol with_order_bound(int k2) const {
        if (k2 < order()) throw std::invalid_argument("OpSymbol: bound below actual order");
        OpSymbol r(m, k2, p);
        r.terms = terms;
        return r;
    }

    OpSymbol& operator+=(const OpSymbol& o) {
        check_same(o);
        for (const auto& [key, c] : o.terms) add_term(terms, key, c);
        return *this;
    }
    OpSymbol& operator-=(const OpSymbol& o) {
        check_same(o);
        for (const auto& [key, c] : o.terms) add_term(terms, key, -c);
        return *this;
    }
    OpSymbol& operator*=(const Rat& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [key, c] : terms) c *= s;
        return *this;
    }
    friend OpSymbol operator+(OpSymbol a, const OpSymbol& b) { return a += b; }
    friend OpSymbol operator-(OpSymbol a, const OpSymbol& b) { return a -= b; }
    friend OpSymbol operator*(OpSymbol a, const Rat& s) { return a *= s; }
    friend OpSymbol operator*(const Rat& s, OpSymbol a) { return a *= s; }
    friend bool operator==(const OpSymbol& a, const OpSymbol& b) {
        return a.m == b.m && a.p == b.p && a.terms == b.terms;
    }

    void check_same(const OpSymbol& o) const {
        if (m != o.m || k != o.k || p != o.p) throw std::invalid_argument("OpSymbol: shape mismatch");
    }
};

// Homogeneous part of a symbol, transforming as a contravariant tensor field.
struct TensorFieldSymbol {
    OpSymbol sym;
    int xi_degree = 0;

    TensorFieldSymbol() = default;
    TensorFieldSymbol(OpSymbol s, int deg) : sym(std::move(s)), xi_degree(deg) {
        for (const auto& [key, c] : sym.terms)
            if (key.alpha.total() != deg)
                throw std::invalid_argument("TensorFieldSymbol: not homogeneous");
    }

    friend bool operator==(const TensorFieldSymbol& a, const TensorFieldSymbol& b) {
        return a.xi_degree == b.xi_degree && a.sym == b.sym;
    }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// D(w): apply the operator to a p-form field, yielding a function.
inline Poly apply(const OpSymbol& D, const FormField& w) {
    if (D.m != w.m || D.p != w.p) throw std::invalid_argument("apply: shape mismatch");
    Poly out(D.m);
    for (const auto& [dk, c] : D.terms)
        for (const auto& [wk, a] : w.terms) {
            if (wk.I != dk.I) continue;
            auto rest = try_sub(wk.mu, dk.alpha);
            if (!rest) continue;
            add_term(out.terms, dk.mu + *rest, c * a * falling_factorial(wk.mu, dk.alpha));
        }
    return out;
}

// X . f, the derivation of a function along a polynomial vector field.
inline Poly lie_function(const PolyVectorField& X, const Poly& f) {
    if (X.m != f.m) throw std::invalid_argument("lie_function: dimension mismatch");
    Poly out(f.m);
    for (const auto& [xk, xc] : X.terms) {
        Poly df = f.derivative(xk.i);
        for (const auto& [mu, c] : df.terms) add_term(out.terms, mu + xk.mu, c * xc);
    }
    return out;
}

// i_X w with polynomial X; slot-1 contraction matching the tensor layer.
inline FormField interior_field(const PolyVectorField& X, const FormField& w) {
    if (X.m != w.m) throw std::invalid_argument("interior_field: dimension mismatch");
    if (w.p < 1) throw std::invalid_argument("interior_field: degree must be >= 1");
    FormField r(w.m, w.p - 1);
    for (const auto& [wk, a] : w.terms)
        for (int b = 0; b < wk.I.size(); ++b) {
            int j = wk.I[b];
            int sign = (b % 2 == 0) ? 1 : -1;
            for (const auto& [xk, xc] : X.terms) {
                if (xk.i != j) continue;
                r.add(wk.mu + xk.mu, wk.I.without(b), a * xc * Rat(sign));
            }
        }
    return r;
}

// Exterior derivative; d of a top-degree form is zero.
inline FormField de_rham(const FormField& w) {
    if (w.p >= w.m) return FormField(w.m, w.m);
    FormField r(w.m, w.p + 1);
    for (const auto& [wk, a] : w.terms)
        for (int j = 0; j < w.m; ++j) {
            if (wk.mu[j] == 0) continue;
            auto ins = wedge_insert(j, wk.I);
            if (!ins) continue;
            MultiIndex mu = wk.mu;
            mu[j] -= 1;
            r.add(mu, ins->second, a * Rat(wk.mu[j] * ins->first));
        }
    return r;
}

// Lie derivative of a form field via the Cartan formula i_X d + d i_X.
// The boundary degrees drop the term that lands in a nonexistent degree.
inline FormField lie_form(const PolyVectorField& X, const FormField& w) {
    if (X.m != w.m) throw std::invalid_argument("lie_form: dimension mismatch");
    if (w.m == 0) return w;
    if (w.p == 0) return interior_field(X, de_rham(w));
    if (w.p == w.m) return de_rham(interior_field(X, w));
    return interior_field(X, de_rham(w)) + de_rham(interior_field(X, w));
}

// ---------------------------------------------------------------------------
// Symbol extraction (Peetre-style): reconstruct the polynomial symbol of a
// linear local operator from its values on the test fields x^mu eps_I. The
// loop is triangular in |mu|, so coefficients come out exactly.
// ---------------------------------------------------------------------------

template <class Fn>
OpSymbol extract_symbol(int m, int p, int order_bound, Fn&& phi) {
    OpSymbol S(m, order_bound, p);
    auto alphas = multi_indices_up_to(m, order_bound);
    auto tuples = tuples_of(m, p);
    for (const auto& alpha : alphas) {
        for (const auto& I : tuples) {
            FormField test(m, p);
            test.add(alpha, I, Rat(1));
            Poly g = phi(test) ;
            g -= apply(S, test);
            Rat fact = multi_factorial(alpha);
            for (const auto& [mu, c] : g.terms) S.add(mu, alpha, I, c / fact);
        }
    }
    return S;
}

// L_X D computed operationally from L_X o D - D o L_X on test fields, then
// re-extracted as a symbol. The composite has order at most k+1 a priori; the
// top layer must cancel exactly, which is checked rather than assumed.
inline OpSymbol lie_op(const PolyVectorField& X, const OpSymbol& D) {
    if (X.m != D.m) throw std::invalid_argument("lie_op: dimension mismatch");
    auto composite = [&](const FormField& w) {
        Poly a = lie_function(X, apply(D, w));
        Poly b = apply(D, lie_form(X, w));
        return a - b;
    };
    OpSymbol raw = extract_symbol(D.m, D.p, D.k + 1, composite);
    OpSymbol out(D.m, D.k, D.p);
    for (const auto& [key, c] : raw.terms) {
        if (key.alpha.total() > D.k)
            throw std::logic_error("lie_op: order-(k+1) part failed to cancel");
        out.add(key.mu, key.alpha, key.I, c);
    }
    return out;
}

// L_X D computed from the three-term symbol formula
//   <X,eta> D - <X,xi> tau_zeta D - D(xi + zeta; zeta ^ i_X .),
// where eta acts as differentiation of D's coefficients and zeta as
// differentiation of X's. Must agree with lie_op exactly; the test suite
// pins that equality.
inline OpSymbol lie_symbolic(const PolyVectorField& X, const OpSymbol& D) {
    if (X.m != D.m) throw std::invalid_argument("lie_symbolic: dimension mismatch");
    const int m = D.m;
    OpSymbol out(m, D.k, D.p);

    for (const auto& [dk, c] : D.terms) {
        // term 1: <X,eta> D -- differentiate the coefficient along X
        for (const auto& [xk, xc] : X.terms) {
            if (dk.mu[xk.i] == 0) continue;
            MultiIndex mu = dk.mu;
            mu[xk.i] -= 1;
            out.add(mu + xk.mu, dk.alpha, dk.I, c * xc * Rat(dk.mu[xk.i]));
        }

        // term 2: -<X,xi> tau_zeta D, zeta-degree >= 1 pieces of D(xi+zeta)
        for (const auto& beta : multi_indices_up_to(m, dk.alpha.total())) {
            if (beta.is_zero() || !leq(beta, dk.alpha)) continue;
            Rat binom = multi_binomial(dk.alpha, beta);
            auto alpha_rest = *try_sub(dk.alpha, beta);
            for (const auto& [xk, xc] : X.terms) {
                Rat fall = falling_factorial(xk.mu, beta);
                if (fall == 0) continue;
                MultiIndex xi_part = alpha_rest;
                xi_part[xk.i] += 1;
                out.add(dk.mu + *try_sub(xk.mu, beta), xi_part, dk.I,
                        -c * xc * binom * fall);
            }
        }

        // term 3: -D(xi + zeta; zeta ^ i_X .), via X ^ i_zeta on the wedge slot
        for (const auto& beta : multi_indices_up_to(m, dk.alpha.total())) {
            if (!leq(beta, dk.alpha)) continue;
            Rat binom = multi_binomial(dk.alpha, beta);
            auto alpha_rest = *try_sub(dk.alpha, beta);
            for (int b = 0; b < dk.I.size(); ++b) {
                int j = dk.I[b];
                int csign = (b % 2 == 0) ? 1 : -1;
                IdxTuple rest = dk.I.without(b);
                MultiIndex gamma = beta;
                gamma[j] += 1;
                for (const auto& [xk, xc] : X.terms) {
                    Rat fall = falling_factorial(xk.mu, gamma);
                    if (fall == 0) continue;
                    auto ins = wedge_insert(xk.i, rest);
                    if (!ins) continue;
                    out.add(dk.mu + *try_sub(xk.mu, gamma), alpha_rest, ins->second,
                            -c * xc * binom * fall * Rat(csign * ins->first));
                }
            }
        }
    }
    return out;
}

// Top actually-present xi-degree part of a nonzero symbol.
inline TensorFieldSymbol principal_symbol(const OpSymbol& D) {
    if (D.is_zero()) throw std::invalid_argument("principal_symbol: zero operator has no maximal degree");
    int top = D.order();
    OpSymbol s(D.m, D.k, D.p);
    for (const auto& [key, c] : D.terms)
        if (key.alpha.total() == top) s.add(key.mu, key.alpha, key.I, c);
    return TensorFieldSymbol(s, top);
}

// Natural Lie derivative of contravariant tensor fields:
//   <X,eta> s - <X,xi> (zeta d_xi) s - s(xi; zeta ^ i_X .).
// Only first derivatives of X enter; the xi-degree is preserved.
inline TensorFieldSymbol lie_tensor(const PolyVectorField& X, const TensorFieldSymbol& sigma) {
    const OpSymbol& S = sigma.sym;
    if (X.m != S.m) throw std::invalid_argument("lie_tensor: dimension mismatch");
    const int m = S.m;
    OpSymbol out(m, S.k, S.p);

    for (const auto& [sk, c] : S.terms) {
        // <X,eta> part
        for (const auto& [xk, xc] : X.terms) {
            if (sk.mu[xk.i] == 0) continue;
            MultiIndex mu = sk.mu;
            mu[xk.i] -= 1;
            out.add(mu + xk.mu, sk.alpha, sk.I, c * xc * Rat(sk.mu[xk.i]));
        }
        // -<X,xi>(zeta d_xi) part: single zeta, i.e. first derivatives of X
        for (int j = 0; j < m; ++j) {
            if (sk.alpha[j] == 0) continue;
            for (const auto& [xk, xc] : X.terms) {
                if (xk.mu[j] == 0) continue;
                MultiIndex xmu = xk.mu;
                xmu[j] -= 1;
                MultiIndex xi_part = sk.alpha;
                xi_part[j] -= 1;
                xi_part[xk.i] += 1;
                out.add(sk.mu + xmu, xi_part, sk.I, -c * xc * Rat(sk.alpha[j] * xk.mu[j]));
            }
        }
        // -s(xi; zeta ^ i_X .) part
        for (int b = 0; b < sk.I.size(); ++b) {
            int j = sk.I[b];
            int csign = (b % 2 == 0) ? 1 : -1;
            IdxTuple rest = sk.I.without(b);
            for (const auto& [xk, xc] : X.terms) {
                if (xk.mu[j] == 0) continue;
                MultiIndex xmu = xk.mu;
                xmu[j] -= 1;
                auto ins = wedge_insert(xk.i, rest);
                if (!ins) continue;
                out.add(sk.mu + xmu, sk.alpha, ins->second,
                        -c * xc * Rat(xk.mu[j] * csign * ins->first));
            }
        }
    }
    return TensorFieldSymbol(out, sigma.xi_degree);
}

// d* at the symbol level: (d*D)(a) = D(da). Raises the order bound by one and
// lowers the form degree by one.
inline OpSymbol dual_d(const OpSymbol& D) {
    if (D.p < 1) throw std::invalid_argument("dual_d: needs form degree >= 1");
    OpSymbol out(D.m, D.k + 1, D.p - 1);
    for (const auto& [dk, c] : D.terms)
        for (int b = 0; b < dk.I.size(); ++b) {
            MultiIndex alpha = dk.alpha;
            alpha[dk.I[b]] += 1;
            out.add(dk.mu, alpha, dk.I.without(b), c * Rat(b % 2 == 0 ? 1 : -1));
        }
    return out;
}

}  // namespace equivar
