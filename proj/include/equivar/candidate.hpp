#pragma once

#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "equivar/symbol.hpp"

namespace equivar {

// ---------------------------------------------------------------------------
// Finite-dimensional candidate space of local constant-coefficient operators
// from E_p^k-symbols to E_q^l-symbols. A candidate acts through jets:
//   (T D)(x) = sum t_(mu,beta,in,out) x^mu (d^beta D_in)(x) . out
// where D_in is the coefficient function of the input basis slot. mu is zero
// unless the space is built with a positive coefficient degree; classified
// operators always come out constant-coefficient, which the stabilization
// runs confirm rather than assume.
// ---------------------------------------------------------------------------

// Monomial basis of sym^{<=k} tensor wedge^p over R^m, in canonical
// (graded-lex alpha, lex I) order.
struct SymbolBasis {
    int m = 0, k = 0, p = 0;
    std::vector<std::pair<MultiIndex, IdxTuple>> elems;
    std::map<std::pair<MultiIndex, IdxTuple>, int> index;

    SymbolBasis() = default;
    SymbolBasis(int m_, int k_, int p_) : m(m_), k(k_), p(p_) {
        for (const auto& alpha : multi_indices_up_to(m, k))
            for (const auto& I : tuples_of(m, p)) {
                index[{alpha, I}] = static_cast<int>(elems.size());
                elems.emplace_back(alpha, I);
            }
    }

    int size() const { return static_cast<int>(elems.size()); }
    int find(const MultiIndex& alpha, const IdxTuple& I) const {
        auto it = index.find({alpha, I});
        return it == index.end() ? -1 : it->second;
    }
};

struct CandidateKey {
    MultiIndex beta;  // eta-exponent: derivative order taken of the argument's coefficients
    int in = 0;       // input basis slot
    int out = 0;      // output basis slot
    MultiIndex mu;    // x-exponent of the candidate's own coefficient

    friend bool operator==(const CandidateKey&, const CandidateKey&) = default;
    friend auto operator<=>(const CandidateKey& a, const CandidateKey& b) {
        return std::tie(a.beta, a.in, a.out, a.mu) <=> std::tie(b.beta, b.in, b.out, b.mu);
    }
};

struct CandidateOperator {
    int m = 0, p = 0, q = 0, k = 0, l = 0, R = 0, x_deg = 0;
    std::map<CandidateKey, Rat> terms;

    CandidateOperator() = default;
    CandidateOperator(int m_, int p_, int q_, int k_, int l_, int R_, int x_deg_ = 0)
        : m(m_), p(p_), q(q_), k(k_), l(l_), R(R_), x_deg(x_deg_) {}

    bool is_zero() const { return terms.empty(); }

    bool same_shape(const CandidateOperator& o) const {
        return m == o.m && p == o.p && q == o.q && k == o.k && l == o.l;
    }

    CandidateOperator& operator+=(const CandidateOperator& o) {
        if (!same_shape(o)) throw std::invalid_argument("CandidateOperator: shape mismatch");
        for (const auto& [key, c] : o.terms) add_term(terms, key, c);
        return *this;
    }
    CandidateOperator& operator*=(const Rat& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [key, c] : terms) c *= s;
        return *this;
    }
};

// The whole candidate space for one parameter cell: column enumeration plus
// the two symbol bases it refers to.
struct CandidateSpace {
    int m = 0, p = 0, q = 0, k = 0, l = 0, R = 0, x_deg = 0;
    SymbolBasis in, out;
    std::vector<CandidateKey> keys;
    std::map<CandidateKey, int> col;

    CandidateOperator materialize(const std::vector<std::pair<int, Rat>>& coords) const {
        CandidateOperator T(m, p, q, k, l, R, x_deg);
        for (const auto& [j, c] : coords) add_term(T.terms, keys[static_cast<size_t>(j)], c);
        return T;
    }
};

inline void validate_cell(int m, int p, int q, int k, int l) {
    if (m < 1) throw std::invalid_argument("cell: m must be >= 1");
    if (p < 0 || q < 0 || k < 0 || l < 0) throw std::invalid_argument("cell: negative parameter");
    if (p > m || q > m) throw std::invalid_argument("cell: form degree exceeds m");
}

// Per-coordinate weight of a candidate under the Euler field x^c d_c; the
// residual against that field is exactly weight * candidate, so equivariant
// combinations live in the weight-zero slice.
inline int candidate_weight(const CandidateSpace& S, const CandidateKey& key, int c) {
    const auto& [alpha, I] = S.in.elems[static_cast<size_t>(key.in)];
    const auto& [alpha2, J] = S.out.elems[static_cast<size_t>(key.out)];
    return key.mu[c] + alpha[c] + (I.contains(c) ? 1 : 0) - key.beta[c] - alpha2[c] -
           (J.contains(c) ? 1 : 0);
}

inline bool weight_zero(const CandidateSpace& S, const CandidateKey& key) {
    for (int c = 0; c < S.m; ++c)
        if (candidate_weight(S, key, c) != 0) return false;
    return true;
}

enum class CandidateFilter {
    none,          // the full tensor-product enumeration
    weight_zero,   // keep the weight-zero, x-independent slice
};

// Enumerate the candidate space for a cell. The weight_zero filter is the
// exact elimination of the Euler-field and translation-field constraint rows
// (they are diagonal resp. triangular on this basis); the full enumeration is
// kept for brute-force cross-checks.
inline CandidateSpace candidate_space_ctx(int m, int p, int q, int k, int l, int R, int x_deg,
                                          CandidateFilter filter) {
    validate_cell(m, p, q, k, l);
    if (m < std::max({p, q, 1})) throw std::invalid_argument("candidate_space: m too small");
    if (R < 0 || x_deg < 0) throw std::invalid_argument("candidate_space: negative bound");
    CandidateSpace S;
    S.m = m;
    S.p = p;
    S.q = q;
    S.k = k;
    S.l = l;
    S.R = R;
    S.x_deg = x_deg;
    S.in = SymbolBasis(m, k, p);
    S.out = SymbolBasis(m, l, q);
    auto betas = multi_indices_up_to(m, R);
    auto mus = multi_indices_up_to(m, x_deg);
    for (const auto& beta : betas)
        for (int in = 0; in < S.in.size(); ++in)
            for (int out = 0; out < S.out.size(); ++out)
                for (const auto& mu : mus) {
                    CandidateKey key{beta, in, out, mu};
                    if (filter == CandidateFilter::weight_zero) {
                        if (!mu.is_zero() || !weight_zero(S, key)) continue;
                    }
                    S.keys.push_back(key);
                }
    std::sort(S.keys.begin(), S.keys.end());
    for (int j = 0; j < static_cast<int>(S.keys.size()); ++j) S.col[S.keys[static_cast<size_t>(j)]] = j;
    return S;
}

// The spec-level operation: a basis of one-term candidates spanning all local
// operators with the given eta-order and coefficient-degree bounds.
inline std::vector<CandidateOperator> candidate_space(int m, int p, int q, int k, int l, int R,
                                                      int x_deg = 0) {
    CandidateSpace S = candidate_space_ctx(m, p, q, k, l, R, x_deg, CandidateFilter::none);
    std::vector<CandidateOperator> out;
    out.reserve(S.keys.size());
    for (const auto& key : S.keys) {
        CandidateOperator T(m, p, q, k, l, R, x_deg);
        T.terms[key] = 1;
        out.push_back(std::move(T));
    }
    return out;
}

// T(D) as an operator symbol of shape (l, q).
inline OpSymbol apply_candidate(const CandidateOperator& T, const OpSymbol& D) {
    if (T.m != D.m || T.p != D.p) throw std::invalid_argument("apply_candidate: shape mismatch");
    if (D.order() > T.k) throw std::invalid_argument("apply_candidate: argument order exceeds k");
    SymbolBasis in_basis(T.m, T.k, T.p);
    SymbolBasis out_basis(T.m, T.l, T.q);
    OpSymbol result(T.m, T.l, T.q);
    for (const auto& [key, t] : T.terms) {
        const auto& [alpha2, J] = out_basis.elems[static_cast<size_t>(key.out)];
        const auto& [alpha, I] = in_basis.elems[static_cast<size_t>(key.in)];
        for (const auto& [dk, c] : D.terms) {
            if (dk.alpha != alpha || dk.I != I) continue;
            auto rest = try_sub(dk.mu, key.beta);
            if (!rest) continue;
            result.add(*rest + key.mu, alpha2, J, t * c * falling_factorial(dk.mu, key.beta));
        }
    }
    return result;
}

// L_X(T(D)) - T(L_X D), computed through the operational Lie derivative.
// Identically zero exactly when T intertwines the action.
inline OpSymbol equivariance_residual(const CandidateOperator& T, const PolyVectorField& X,
                                      const OpSymbol& D) {
    OpSymbol a = lie_op(X, apply_candidate(T, D));
    OpSymbol b = apply_candidate(T, lie_op(X, D));
    return a - b;
}

// Build the candidate encoding of a concrete local operator (a callable
// OpSymbol(k,p) -> OpSymbol(l,q)) by probing it on the jets x^beta b_in. The
// x^0 output coefficient of the probe at order beta is beta! times the table
// entry. The reconstruction is checked against every probe, so an undersized
// R or a non-constant-coefficient operator fails loudly.
template <class Fn>
CandidateOperator encode_local_operator(int m, int p, int q, int k, int l, int R, Fn&& op) {
    CandidateOperator T(m, p, q, k, l, R);
    SymbolBasis in_basis(m, k, p);
    SymbolBasis out_basis(m, l, q);
    std::vector<std::pair<MultiIndex, OpSymbol>> probes;
    for (const auto& beta : multi_indices_up_to(m, R)) {
        Rat fact = multi_factorial(beta);
        for (int in = 0; in < in_basis.size(); ++in) {
            const auto& [alpha, I] = in_basis.elems[static_cast<size_t>(in)];
            OpSymbol probe = OpSymbol::monomial(m, k, p, beta, alpha, I);
            OpSymbol image = op(probe);
            if (image.m != m || image.p != q) throw std::invalid_argument("encode_local_operator: bad image shape");
            if (image.order() > l) throw std::invalid_argument("encode_local_operator: image order exceeds l");
            probes.emplace_back(beta, probe);
            for (const auto& [key, c] : image.terms) {
                if (!key.mu.is_zero()) continue;
                int out = out_basis.find(key.alpha, key.I);
                add_term(T.terms, CandidateKey{beta, in, out, MultiIndex(m)}, c / fact);
            }
        }
    }
    for (const auto& [beta, probe] : probes) {
        if (!(apply_candidate(T, probe) == op(probe)))
            throw std::logic_error("encode_local_operator: reconstruction failed (R too small or non-constant coefficients)");
    }
    return T;
}

// ---------------------------------------------------------------------------
// Jet tables: the Lie derivative as a finite table over basis slots. Entry
// (kappa, beta, src, w) of the table for slot b means
//   L_X(f . b) contains w x^kappa (d^beta f) . src-slot.
// Composing candidate tables with these yields the full equivariance residual
// as an operator identity, with no test-field truncation to reason about.
// ---------------------------------------------------------------------------

struct JetEntry {
    MultiIndex kappa;
    MultiIndex beta;
    int slot = 0;
    Rat w;
};

inline std::vector<JetEntry> lie_jet(const PolyVectorField& X, const SymbolBasis& basis, int b) {
    const int m = basis.m;
    const auto& [alpha, I] = basis.elems[static_cast<size_t>(b)];
    std::vector<JetEntry> out;
    // <X,eta>: differentiate the coefficient along X
    for (const auto& [xk, xc] : X.terms)
        out.push_back({xk.mu, MultiIndex::unit(m, xk.i), b, xc});
    // -<X,xi> tau_zeta
    for (const auto& beta2 : multi_indices_up_to(m, alpha.total())) {
        if (beta2.is_zero() || !leq(beta2, alpha)) continue;
        Rat binom = multi_binomial(alpha, beta2);
        MultiIndex alpha_rest = *try_sub(alpha, beta2);
        for (const auto& [xk, xc] : X.terms) {
            Rat fall = falling_factorial(xk.mu, beta2);
            if (fall == 0) continue;
            MultiIndex a2 = alpha_rest;
            a2[xk.i] += 1;
            int slot = basis.find(a2, I);
            if (slot < 0) throw std::logic_error("lie_jet: slot left the basis");
            out.push_back({*try_sub(xk.mu, beta2), MultiIndex(m), slot, -xc * binom * fall});
        }
    }
    // -D(xi + zeta; zeta ^ i_X .)
    for (const auto& beta2 : multi_indices_up_to(m, alpha.total())) {
        if (!leq(beta2, alpha)) continue;
        Rat binom = multi_binomial(alpha, beta2);
        MultiIndex alpha_rest = *try_sub(alpha, beta2);
        for (int pos = 0; pos < I.size(); ++pos) {
            int j = I[pos];
            int csign = (pos % 2 == 0) ? 1 : -1;
            IdxTuple rest = I.without(pos);
            MultiIndex gamma = beta2;
            gamma[j] += 1;
            for (const auto& [xk, xc] : X.terms) {
                Rat fall = falling_factorial(xk.mu, gamma);
                if (fall == 0) continue;
                auto ins = wedge_insert(xk.i, rest);
                if (!ins) continue;
                int slot = basis.find(alpha_rest, ins->second);
                if (slot < 0) throw std::logic_error("lie_jet: slot left the basis");
                out.push_back({*try_sub(xk.mu, gamma), MultiIndex(m), slot,
                               -xc * binom * fall * Rat(csign * ins->first)});
            }
        }
    }
    return out;
}

struct JetKey {
    MultiIndex kappa;
    MultiIndex beta;
    int in = 0;
    int out = 0;
    friend bool operator==(const JetKey&, const JetKey&) = default;
    friend auto operator<=>(const JetKey& a, const JetKey& b) {
        return std::tie(a.kappa, a.beta, a.in, a.out) <=> std::tie(b.kappa, b.beta, b.in, b.out);
    }
};

// Lie tables of one field over a symbol basis, indexed both by source slot
// and (transposed) by target slot. In the transposed view, entry.slot names
// the source.
struct LieJetCache {
    std::vector<std::vector<JetEntry>> from;
    std::vector<std::vector<JetEntry>> to;
};

inline LieJetCache build_lie_jets(const PolyVectorField& X, const SymbolBasis& basis) {
    LieJetCache cache;
    cache.from.resize(static_cast<size_t>(basis.size()));
    cache.to.resize(static_cast<size_t>(basis.size()));
    for (int b = 0; b < basis.size(); ++b) {
        cache.from[static_cast<size_t>(b)] = lie_jet(X, basis, b);
        for (const auto& e : cache.from[static_cast<size_t>(b)]) {
            JetEntry t = e;
            t.slot = b;
            cache.to[static_cast<size_t>(e.slot)].push_back(std::move(t));
        }
    }
    return cache;
}

// Residual table of a single one-term candidate against one field:
//   L_X o T_key - T_key o L_X,
// as jet entries (kappa, beta, in, out) -> coefficient.
inline void residual_jet_table(const CandidateSpace& S, const CandidateKey& key,
                               const LieJetCache& lie_in, const LieJetCache& lie_out,
                               std::map<JetKey, Rat>& acc) {
    const int m = S.m;
    const MultiIndex& muT = key.mu;
    const MultiIndex& beta = key.beta;
    // L_X o T: apply the output-side Lie table to x^muT d^beta D_in . out
    for (const auto& e : lie_out.from[static_cast<size_t>(key.out)]) {
        // d^{e.beta}(x^muT g) = sum_delta binom(e.beta,delta) fall(muT,delta)
        //                        x^(muT-delta) d^(e.beta-delta) g
        for (const auto& delta : multi_indices_up_to(m, std::min(e.beta.total(), muT.total()))) {
            if (!leq(delta, e.beta) || !leq(delta, muT)) continue;
            Rat c = e.w * multi_binomial(e.beta, delta) * falling_factorial(muT, delta);
            if (c == 0) continue;
            JetKey jk{e.kappa + *try_sub(muT, delta), *try_sub(e.beta, delta) + beta, key.in, e.slot};
            add_term(acc, jk, c);
        }
    }
    // -T o L_X: collect the pieces of (L_X D) landing in the candidate's
    // input slot; entry.slot names the D-slot they came from
    for (const auto& e : lie_in.to[static_cast<size_t>(key.in)]) {
        // d^beta(x^e.kappa d^{e.beta} D) expanded the same way
        for (const auto& delta : multi_indices_up_to(m, std::min(beta.total(), e.kappa.total()))) {
            if (!leq(delta, beta) || !leq(delta, e.kappa)) continue;
            Rat c = e.w * multi_binomial(beta, delta) * falling_factorial(e.kappa, delta);
            if (c == 0) continue;
            JetKey jk{muT + *try_sub(e.kappa, delta), *try_sub(beta, delta) + e.beta, e.slot, key.out};
            add_term(acc, jk, -c);
        }
    }
}

// Evaluate a jet table on a concrete symbol (test oracle for the table route).
inline OpSymbol apply_jet_entries(const CandidateSpace& S, const std::map<JetKey, Rat>& table,
                                  const OpSymbol& D) {
    OpSymbol out(S.m, S.l, S.q);
    for (const auto& [jk, w] : table) {
        const auto& [alpha, I] = S.in.elems[static_cast<size_t>(jk.in)];
        const auto& [alpha2, J] = S.out.elems[static_cast<size_t>(jk.out)];
        for (const auto& [dk, c] : D.terms) {
            if (dk.alpha != alpha || dk.I != I) continue;
            auto rest = try_sub(dk.mu, jk.beta);
            if (!rest) continue;
            out.add(*rest + jk.kappa, alpha2, J, w * c * falling_factorial(dk.mu, jk.beta));
        }
    }
    return out;
}

}  // namespace equivar
