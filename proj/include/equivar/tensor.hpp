#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "equivar/multi_index.hpp"
#include "equivar/poly.hpp"
#include "equivar/rational.hpp"

namespace equivar {

namespace detail {
inline bool coeff_is_zero(const Rat& c) { return c == 0; }
inline bool coeff_is_zero(const Poly& c) { return c.is_zero(); }
// the ring unit sized for an Alt tensor over R^m (Poly coefficients carry m)
template <class C>
C coeff_one(int m);
template <>
inline Rat coeff_one<Rat>(int) { return Rat(1); }
template <>
inline Poly coeff_one<Poly>(int m) { return Poly::constant(m, 1); }
template <class C>
C coeff_zero(int m);
template <>
inline Rat coeff_zero<Rat>(int) { return Rat(0); }
template <>
inline Poly coeff_zero<Poly>(int m) { return Poly::zero(m); }
template <class C>
void alt_add(std::map<IdxTuple, C>& terms, const IdxTuple& key, const C& val) {
    if (coeff_is_zero(val)) return;
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms.emplace(key, val);
    } else {
        it->second += val;
        if (coeff_is_zero(it->second)) terms.erase(it);
    }
}
}  // namespace detail

// Antisymmetric degree-p tensor in canonical form: only strictly increasing
// index tuples are stored and zero coefficients are pruned. The same storage
// represents both multivectors (wedges of e_i) and exterior forms (wedges of
// the dual basis); pair_alt couples the two.
template <class C>
struct Alt {
    int m = 0;
    int p = 0;
    std::map<IdxTuple, C> terms;

    Alt() = default;
    Alt(int m_, int p_) : m(m_), p(p_) {
        if (p_ < 0) throw std::invalid_argument("Alt: negative degree");
    }

    static Alt basis(int m, const IdxTuple& I) {
        Alt a(m, I.size());
        a.add(I, detail::coeff_one<C>(m));
        return a;
    }

    bool is_zero() const { return terms.empty(); }

    void add(const IdxTuple& I, const C& c) {
        if (!I.increasing() || I.size() != p) throw std::invalid_argument("Alt: non-canonical tuple");
        if (I.size() > 0 && (I[0] < 0 || I[I.size() - 1] >= m)) throw std::invalid_argument("Alt: index out of range");
        detail::alt_add(terms, I, c);
    }

    C coeff(const IdxTuple& I) const {
        auto it = terms.find(I);
        return it == terms.end() ? detail::coeff_zero<C>(m) : it->second;
    }

    Alt& operator+=(const Alt& o) {
        check_compatible(o);
        for (const auto& [I, c] : o.terms) detail::alt_add(terms, I, c);
        return *this;
    }
    Alt& operator-=(const Alt& o) {
        check_compatible(o);
        for (const auto& [I, c] : o.terms) {
            C neg = c;
            neg *= Rat(-1);
            detail::alt_add(terms, I, neg);
        }
        return *this;
    }
    Alt& operator*=(const Rat& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [I, c] : terms) c *= s;
        return *this;
    }
    friend Alt operator+(Alt a, const Alt& b) { return a += b; }
    friend Alt operator-(Alt a, const Alt& b) { return a -= b; }
    friend Alt operator*(Alt a, const Rat& s) { return a *= s; }
    friend Alt operator*(const Rat& s, Alt a) { return a *= s; }
    friend bool operator==(const Alt& a, const Alt& b) {
        return a.m == b.m && a.p == b.p && a.terms == b.terms;
    }

    void check_compatible(const Alt& o) const {
        if (m != o.m || p != o.p) throw std::invalid_argument("Alt: shape mismatch");
    }
};

using AltTensor = Alt<Rat>;
using AltCovector = Alt<Rat>;
using AltPoly = Alt<Poly>;

// Vector / linear form on R^m with exact components.
struct Vec {
    std::vector<Rat> c;
    Vec() = default;
    explicit Vec(int m) : c(static_cast<size_t>(m), Rat(0)) {}
    static Vec basis(int m, int i) {
        Vec v(m);
        v.c[static_cast<size_t>(i)] = 1;
        return v;
    }
    int m() const { return static_cast<int>(c.size()); }
    Rat operator[](int i) const { return c[static_cast<size_t>(i)]; }
    Rat& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

struct Covec {
    std::vector<Rat> c;
    Covec() = default;
    explicit Covec(int m) : c(static_cast<size_t>(m), Rat(0)) {}
    static Covec basis(int m, int i) {
        Covec v(m);
        v.c[static_cast<size_t>(i)] = 1;
        return v;
    }
    int m() const { return static_cast<int>(c.size()); }
    Rat operator[](int i) const { return c[static_cast<size_t>(i)]; }
    Rat& operator[](int i) { return c[static_cast<size_t>(i)]; }
};

inline Rat eval(const Vec& X, const Covec& z) {
    if (X.m() != z.m()) throw std::invalid_argument("eval: dimension mismatch");
    Rat r = 0;
    for (int i = 0; i < X.m(); ++i) r += X[i] * z[i];
    return r;
}

namespace detail {
inline Rat coeff_mul(const Rat& a, const Rat& b) { return a * b; }
inline Poly coeff_mul(const Poly& a, const Poly& b) { return a * b; }
}  // namespace detail

// Graded-antisymmetric bilinear wedge product, result in canonical form.
template <class C>
Alt<C> wedge(const Alt<C>& a, const Alt<C>& b) {
    if (a.m != b.m) throw std::invalid_argument("wedge: dimension mismatch between operands");
    Alt<C> r(a.m, a.p + b.p);
    for (const auto& [I, ci] : a.terms)
        for (const auto& [J, cj] : b.terms) {
            auto merged = wedge_merge(I, J);
            if (!merged) continue;
            C v = detail::coeff_mul(ci, cj);
            v *= Rat(merged->first);
            detail::alt_add(r.terms, merged->second, v);
        }
    return r;
}

template <class C>
Alt<C> wedge_basis_vector(int m, int i, const Alt<C>& b) {
    Alt<C> a(m, 1);
    a.add(IdxTuple{i}, detail::coeff_one<C>(m));
    return wedge(a, b);
}

// Contraction in the first slot: i_X(eps_I) = sum_b (-1)^(b-1) X[I_b] eps_(I\I_b).
// The normalization <e_I, eps_I> = 1 together with this slot convention makes
// <X ^ L, w> = <L, i_X w> hold exactly.
inline AltCovector interior(const Vec& X, const AltCovector& w) {
    if (X.m() != w.m) throw std::invalid_argument("interior: dimension mismatch");
    if (w.p < 1) throw std::invalid_argument("interior: degree must be >= 1");
    AltCovector r(w.m, w.p - 1);
    for (const auto& [I, c] : w.terms)
        for (int b = 0; b < I.size(); ++b) {
            Rat v = c * X[I[b]] * Rat(b % 2 == 0 ? 1 : -1);
            detail::alt_add(r.terms, I.without(b), v);
        }
    return r;
}

// i_z L for a linear form z against a multivector L (same slot-1 convention).
template <class C>
Alt<C> interior_co(const Covec& z, const Alt<C>& L) {
    if (z.m() != L.m) throw std::invalid_argument("interior_co: dimension mismatch");
    if (L.p < 1) throw std::invalid_argument("interior_co: degree must be >= 1");
    Alt<C> r(L.m, L.p - 1);
    for (const auto& [I, c] : L.terms)
        for (int b = 0; b < I.size(); ++b) {
            C v = c;
            v *= z[I[b]] * Rat(b % 2 == 0 ? 1 : -1);
            detail::alt_add(r.terms, I.without(b), v);
        }
    return r;
}

// Full contraction <L, w>, normalized so <e_I, eps_I> = 1 for increasing I.
inline Rat pair_alt(const AltTensor& L, const AltCovector& w) {
    if (L.m != w.m) throw std::invalid_argument("pair_alt: dimension mismatch");
    if (L.p != w.p) throw std::invalid_argument("pair_alt: degree mismatch");
    Rat r = 0;
    for (const auto& [I, c] : L.terms) {
        auto it = w.terms.find(I);
        if (it != w.terms.end()) r += c * it->second;
    }
    return r;
}

// X ^ i_z L, the substitution operator: replaces the slot of L paired by z
// with X. Degree 0 input yields zero (empty substitution).
inline AltTensor alt_substitute(const Vec& X, const Covec& z, const AltTensor& L) {
    if (X.m() != L.m || z.m() != L.m) throw std::invalid_argument("alt_substitute: dimension mismatch");
    if (L.p == 0) return AltTensor(L.m, 0);
    AltTensor xa(L.m, 1);
    for (int i = 0; i < X.m(); ++i)
        if (X[i] != 0) xa.add(IdxTuple{i}, X[i]);
    return wedge(xa, interior_co(z, L));
}

// Symmetric tensors of degree <= k, identified with polynomials on the dual
// space. Construction enforces the degree bound; nothing is truncated silently.
struct SymTensor {
    int m = 0;
    int k = 0;
    Poly p;

    SymTensor() = default;
    SymTensor(int m_, int k_, Poly poly) : m(m_), k(k_), p(std::move(poly)) {
        if (p.m != m) throw std::invalid_argument("SymTensor: variable-count mismatch");
        if (p.degree() > k) throw std::invalid_argument("SymTensor: degree bound exceeded");
    }
};

// The derivation z d/dxi in the direction of z, acting on polynomials in xi.
inline Poly directional_derivative(const Covec& z, const Poly& P) {
    if (z.m() != P.m) throw std::invalid_argument("directional_derivative: dimension mismatch");
    Poly r(P.m);
    for (int i = 0; i < P.m; ++i) {
        if (z[i] == 0) continue;
        r += P.derivative(i) * z[i];
    }
    return r;
}

}  // namespace equivar
