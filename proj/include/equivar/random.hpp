#pragma once

#include <cstdint>

#include "equivar/symbol.hpp"

namespace equivar {

// Deterministic splitmix64 generator. The standard <random> distributions are
// implementation-defined, so byte-identical output across toolchains needs a
// fixed algorithm.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [lo, hi], inclusive
    int uniform(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    // small rational, occasionally non-integer, never zero unless allow_zero
    Rat small_rat(bool allow_zero = true) {
        int num = uniform(-4, 4);
        if (!allow_zero && num == 0) num = 1;
        int den = (uniform(0, 3) == 0) ? uniform(2, 3) : 1;
        return rat(num, den);
    }

    MultiIndex multi_index(int m, int max_total) {
        MultiIndex a(m);
        int budget = uniform(0, max_total);
        for (int t = 0; t < budget; ++t) a[uniform(0, m - 1)] += 1;
        return a;
    }

    IdxTuple tuple(int m, int p) {
        auto all = tuples_of(m, p);
        return all[static_cast<size_t>(uniform(0, static_cast<int>(all.size()) - 1))];
    }

    Poly poly(int m, int max_deg, int nterms) {
        Poly f(m);
        for (int t = 0; t < nterms; ++t) add_term(f.terms, multi_index(m, max_deg), small_rat());
        return f;
    }

    PolyVectorField vector_field(int m, int max_deg, int nterms) {
        PolyVectorField X(m);
        for (int t = 0; t < nterms; ++t) X.add(multi_index(m, max_deg), uniform(0, m - 1), small_rat());
        return X;
    }

    FormField form_field(int m, int p, int max_deg, int nterms) {
        FormField w(m, p);
        for (int t = 0; t < nterms; ++t) w.add(multi_index(m, max_deg), tuple(m, p), small_rat());
        return w;
    }

    OpSymbol op_symbol(int m, int k, int p, int max_xdeg, int nterms) {
        OpSymbol D(m, k, p);
        for (int t = 0; t < nterms; ++t)
            D.add(multi_index(m, max_xdeg), multi_index(m, k), tuple(m, p), small_rat());
        return D;
    }

    AltTensor alt_tensor(int m, int p, int nterms) {
        AltTensor L(m, p);
        for (int t = 0; t < nterms; ++t) L.add(tuple(m, p), small_rat());
        return L;
    }

    Vec vec(int m) {
        Vec v(m);
        for (int i = 0; i < m; ++i) v[i] = small_rat();
        return v;
    }

    Covec covec(int m) {
        Covec v(m);
        for (int i = 0; i < m; ++i) v[i] = small_rat();
        return v;
    }
};

}  // namespace equivar
