#pragma once

#include <map>
#include <stdexcept>

#include "equivar/multi_index.hpp"
#include "equivar/rational.hpp"

namespace equivar {

// Sparse polynomial with exact rational coefficients over m commuting
// variables. Serves both for coefficient functions on R^m (variables x_i)
// and for symbol polynomials (variables xi_i); the variable meaning is
// decided by the caller.
struct Poly {
    int m = 0;
    std::map<MultiIndex, Rat> terms;

    Poly() = default;
    explicit Poly(int m_) : m(m_) {}

    static Poly zero(int m) { return Poly(m); }
    static Poly constant(int m, const Rat& c) {
        Poly p(m);
        add_term(p.terms, MultiIndex(m), c);
        return p;
    }
    static Poly monomial(const MultiIndex& mu, const Rat& c = 1) {
        Poly p(mu.size());
        add_term(p.terms, mu, c);
        return p;
    }
    static Poly variable(int m, int i) { return monomial(MultiIndex::unit(m, i)); }

    bool is_zero() const { return terms.empty(); }
    // Max total degree of a present term, -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [mu, c] : terms) d = std::max(d, mu.total());
        return d;
    }
    Rat coeff(const MultiIndex& mu) const {
        auto it = terms.find(mu);
        return it == terms.end() ? Rat(0) : it->second;
    }

    Poly& operator+=(const Poly& o) {
        check_same(o);
        for (const auto& [mu, c] : o.terms) add_term(terms, mu, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_same(o);
        for (const auto& [mu, c] : o.terms) add_term(terms, mu, -c);
        return *this;
    }
    Poly& operator*=(const Rat& s) {
        if (s == 0) {
            terms.clear();
            return *this;
        }
        for (auto& [mu, c] : terms) c *= s;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rat& s) { return a *= s; }
    friend Poly operator*(const Rat& s, Poly a) { return a *= s; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_same(b);
        Poly r(a.m);
        for (const auto& [mu, c] : a.terms)
            for (const auto& [nu, d] : b.terms) add_term(r.terms, mu + nu, c * d);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.m == b.m && a.terms == b.terms; }

    Poly derivative(int i) const {
        Poly r(m);
        for (const auto& [mu, c] : terms) {
            if (mu[i] == 0) continue;
            MultiIndex nu = mu;
            nu[i] -= 1;
            add_term(r.terms, nu, c * Rat(mu[i]));
        }
        return r;
    }

    Poly derivative(const MultiIndex& beta) const {
        Poly r(m);
        for (const auto& [mu, c] : terms) {
            auto nu = try_sub(mu, beta);
            if (!nu) continue;
            add_term(r.terms, *nu, c * falling_factorial(mu, beta));
        }
        return r;
    }

    // pow with small non-negative exponent
    Poly pow(int n) const {
        if (n < 0) throw std::invalid_argument("Poly::pow: negative exponent");
        Poly r = Poly::constant(m, 1);
        for (int i = 0; i < n; ++i) r = r * (*this);
        return r;
    }

private:
    void check_same(const Poly& o) const {
        if (m != o.m) throw std::invalid_argument("Poly: variable-count mismatch");
    }
};

// Polynomial coefficient functions on R^m; the spec's stand-in for smooth
// functions at desk scale.
using PolyFunction = Poly;

}  // namespace equivar
