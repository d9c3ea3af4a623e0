#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>

namespace equivar {

// Every scalar in this library is an exact rational. Dimensions of solution
// spaces are the deliverable, so there is no floating point anywhere.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Canonical "num/den" form, denominator always spelled out ("5/1", "-3/2").
inline std::string rat_to_string(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("rat_from_string: bad rational '" + s + "'");
    r.canonicalize();
    return r;
}

// Accumulate c into m[k], dropping the entry when it cancels to zero.
// All sparse containers in the library stay zero-free through this helper.
template <class K>
void add_term(std::map<K, Rat>& m, const K& k, const Rat& c) {
    if (c == 0) return;
    auto it = m.find(k);
    if (it == m.end()) {
        m.emplace(k, c);
    } else {
        it->second += c;
        if (it->second == 0) m.erase(it);
    }
}

template <class K>
std::map<K, Rat> map_sum(const std::map<K, Rat>& a, const std::map<K, Rat>& b, const Rat& scale_b = 1) {
    std::map<K, Rat> out = a;
    for (const auto& [k, c] : b) add_term(out, k, c * scale_b);
    return out;
}

}  // namespace equivar
