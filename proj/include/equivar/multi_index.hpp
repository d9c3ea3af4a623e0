#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "equivar/rational.hpp"

namespace equivar {

// Exponent vector over the m coordinates of R^m. Orders graded-lexicographically
// so that enumerations and matrix column orders are canonical.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(int m) : e(static_cast<size_t>(m), 0) {}
    MultiIndex(std::initializer_list<int> init) : e(init) {}

    static MultiIndex unit(int m, int i) {
        MultiIndex a(m);
        a.e.at(static_cast<size_t>(i)) = 1;
        return a;
    }

    int size() const { return static_cast<int>(e.size()); }
    int total() const { return std::accumulate(e.begin(), e.end(), 0); }
    bool is_zero() const { return total() == 0; }
    int operator[](int i) const { return e[static_cast<size_t>(i)]; }
    int& operator[](int i) { return e[static_cast<size_t>(i)]; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }

    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (auto c = a.size() <=> b.size(); c != 0) return c;
        if (auto c = a.total() <=> b.total(); c != 0) return c;
        for (int i = 0; i < a.size(); ++i)
            if (auto c = a[i] <=> b[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
};

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("MultiIndex: size mismatch");
    MultiIndex r = a;
    for (int i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

// Componentwise a - b, or nullopt if any coordinate would go negative.
inline std::optional<MultiIndex> try_sub(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("MultiIndex: size mismatch");
    MultiIndex r = a;
    for (int i = 0; i < b.size(); ++i) {
        r[i] -= b[i];
        if (r[i] < 0) return std::nullopt;
    }
    return r;
}

inline bool leq(const MultiIndex& b, const MultiIndex& a) {
    if (a.size() != b.size()) throw std::invalid_argument("MultiIndex: size mismatch");
    for (int i = 0; i < b.size(); ++i)
        if (b[i] > a[i]) return false;
    return true;
}

// prod_i binom(a_i, b_i); zero when b !<= a.
inline Rat multi_binomial(const MultiIndex& a, const MultiIndex& b) {
    Rat r = 1;
    for (int i = 0; i < a.size(); ++i) {
        int n = a[i], k = b[i];
        if (k < 0 || k > n) return Rat(0);
        Rat c = 1;
        for (int j = 0; j < k; ++j) c *= Rat(n - j) / Rat(j + 1);
        r *= c;
    }
    return r;
}

// prod_i mu_i (mu_i - 1) ... (mu_i - beta_i + 1), i.e. the coefficient in
// d^beta x^mu = fall(mu, beta) x^(mu - beta). Zero when beta !<= mu.
inline Rat falling_factorial(const MultiIndex& mu, const MultiIndex& beta) {
    Rat r = 1;
    for (int i = 0; i < mu.size(); ++i) {
        if (beta[i] > mu[i]) return Rat(0);
        for (int j = 0; j < beta[i]; ++j) r *= Rat(mu[i] - j);
    }
    return r;
}

inline Rat multi_factorial(const MultiIndex& a) {
    Rat r = 1;
    for (int i = 0; i < a.size(); ++i)
        for (int j = 2; j <= a[i]; ++j) r *= Rat(j);
    return r;
}

// All multi-indices with total degree <= d, in graded-lex order.
inline std::vector<MultiIndex> multi_indices_up_to(int m, int d) {
    std::vector<MultiIndex> out;
    MultiIndex cur(m);
    std::function<void(int, int)> rec = [&](int pos, int budget) {
        if (pos == m) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            cur[pos] = v;
            rec(pos + 1, budget - v);
        }
        cur[pos] = 0;
    };
    if (m == 0) {
        out.push_back(cur);
    } else {
        rec(0, d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Strictly increasing tuple of coordinate indices (0-based), the canonical
// key for antisymmetric tensors.
struct IdxTuple {
    std::vector<int> idx;

    IdxTuple() = default;
    IdxTuple(std::initializer_list<int> init) : idx(init) {}
    explicit IdxTuple(std::vector<int> v) : idx(std::move(v)) {}

    int size() const { return static_cast<int>(idx.size()); }
    int operator[](int i) const { return idx[static_cast<size_t>(i)]; }
    bool contains(int j) const { return std::binary_search(idx.begin(), idx.end(), j); }
    bool increasing() const { return std::is_sorted(idx.begin(), idx.end()) &&
                                     std::adjacent_find(idx.begin(), idx.end()) == idx.end(); }

    IdxTuple without(int pos) const {
        IdxTuple r = *this;
        r.idx.erase(r.idx.begin() + pos);
        return r;
    }

    friend bool operator==(const IdxTuple& a, const IdxTuple& b) { return a.idx == b.idx; }
    friend auto operator<=>(const IdxTuple& a, const IdxTuple& b) {
        if (auto c = a.size() <=> b.size(); c != 0) return c;
        return a.idx <=> b.idx;
    }
};

// e_i wedge e_J in canonical form: sign and merged tuple, or nullopt if i in J.
inline std::optional<std::pair<int, IdxTuple>> wedge_insert(int i, const IdxTuple& J) {
    if (J.contains(i)) return std::nullopt;
    int pos = static_cast<int>(std::lower_bound(J.idx.begin(), J.idx.end(), i) - J.idx.begin());
    IdxTuple r = J;
    r.idx.insert(r.idx.begin() + pos, i);
    return std::make_pair(pos % 2 == 0 ? 1 : -1, r);
}

// e_I wedge e_J in canonical form, nullopt when the tuples share an index.
inline std::optional<std::pair<int, IdxTuple>> wedge_merge(const IdxTuple& I, const IdxTuple& J) {
    int sign = 1;
    IdxTuple acc = J;
    for (int t = I.size() - 1; t >= 0; --t) {
        auto ins = wedge_insert(I[t], acc);
        if (!ins) return std::nullopt;
        sign *= ins->first;
        acc = std::move(ins->second);
    }
    return std::make_pair(sign, acc);
}

// All strictly increasing p-tuples in {0..m-1}, lexicographic.
inline std::vector<IdxTuple> tuples_of(int m, int p) {
    std::vector<IdxTuple> out;
    if (p < 0 || p > m) return out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == p) {
            out.push_back(IdxTuple(cur));
            return;
        }
        for (int i = start; i < m; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace equivar
