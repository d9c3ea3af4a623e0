#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "equivar/rational.hpp"

namespace equivar {

// Sparse row: (column index, coefficient) pairs sorted by column, zero-free.
using SparseVec = std::vector<std::pair<int, Rat>>;

inline SparseVec sparse_normalize(SparseVec v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    out.reserve(v.size());
    for (auto& [i, c] : v) {
        if (!out.empty() && out.back().first == i) {
            out.back().second += c;
            if (out.back().second == 0) out.pop_back();
        } else if (c != 0) {
            out.emplace_back(i, std::move(c));
        }
    }
    return out;
}

// a += s * b, both sorted
inline void sparse_axpy(SparseVec& a, const Rat& s, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(std::move(a[i++]));
        } else if (i == a.size() || b[j].first < a[i].first) {
            Rat c = s * b[j].second;
            if (c != 0) out.emplace_back(b[j].first, std::move(c));
            ++j;
        } else {
            Rat c = a[i].second + s * b[j].second;
            if (c != 0) out.emplace_back(a[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    a = std::move(out);
}

inline Rat sparse_get(const SparseVec& v, int col) {
    auto it = std::lower_bound(v.begin(), v.end(), col,
                               [](const auto& e, int c) { return e.first < c; });
    return (it != v.end() && it->first == col) ? it->second : Rat(0);
}

// Incrementally row-reduced exact matrix. Rows are inserted one at a time and
// reduced against the pivots found so far; only independent rows are kept, so
// memory stays at O(rank * row length) however many constraint rows stream in.
// After finalize() the rows form the unique reduced row echelon form of the
// row space, which makes every downstream artifact (kernel bases, golden
// files) independent of row generation order.
class RrefMatrix {
public:
    explicit RrefMatrix(int ncols) : ncols_(ncols) {}

    int ncols() const { return ncols_; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<SparseVec>& rows() const { return rows_; }

    // Returns true if the row was independent (rank grew).
    bool add_row(SparseVec row) {
        row = sparse_normalize(std::move(row));
        while (!row.empty()) {
            int lead = row.front().first;
            auto it = pivot_row_.find(lead);
            if (it == pivot_row_.end()) break;
            sparse_axpy(row, -row.front().second, rows_[static_cast<size_t>(it->second)]);
        }
        if (row.empty()) return false;
        Rat inv = 1 / row.front().second;
        for (auto& [i, c] : row) c *= inv;
        pivot_row_[row.front().first] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(row));
        reduced_ = false;
        return true;
    }

    // Back-substitute so every pivot column is cleared from the other rows,
    // then order rows by pivot column.
    void finalize() {
        if (reduced_) return;
        std::vector<int> pivots;
        pivots.reserve(pivot_row_.size());
        for (const auto& [col, r] : pivot_row_) pivots.push_back(col);
        // eliminate from highest pivot down
        for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
            int pcol = *it;
            const SparseVec& prow = rows_[static_cast<size_t>(pivot_row_[pcol])];
            for (auto& [col, ridx] : pivot_row_) {
                if (col == pcol) continue;
                SparseVec& r = rows_[static_cast<size_t>(ridx)];
                Rat c = sparse_get(r, pcol);
                if (c != 0) sparse_axpy(r, -c, prow);
            }
        }
        std::vector<SparseVec> ordered;
        ordered.reserve(rows_.size());
        std::map<int, int> new_index;
        for (const auto& [col, ridx] : pivot_row_) {
            new_index[col] = static_cast<int>(ordered.size());
            ordered.push_back(std::move(rows_[static_cast<size_t>(ridx)]));
        }
        rows_ = std::move(ordered);
        pivot_row_ = std::move(new_index);
        reduced_ = true;
    }

    std::vector<int> pivot_columns() const {
        std::vector<int> out;
        out.reserve(pivot_row_.size());
        for (const auto& [col, r] : pivot_row_) out.push_back(col);
        return out;
    }

    // Basis of the null space, one vector per free column, in reduced echelon
    // form with each first nonzero coordinate equal to 1.
    std::vector<SparseVec> kernel() {
        finalize();
        std::vector<bool> is_pivot(static_cast<size_t>(ncols_), false);
        for (const auto& [col, r] : pivot_row_) is_pivot[static_cast<size_t>(col)] = true;
        std::vector<SparseVec> raw;
        for (int f = 0; f < ncols_; ++f) {
            if (is_pivot[static_cast<size_t>(f)]) continue;
            SparseVec v;
            v.emplace_back(f, Rat(1));
            for (const auto& [pcol, ridx] : pivot_row_) {
                Rat c = sparse_get(rows_[static_cast<size_t>(ridx)], f);
                if (c != 0) v.emplace_back(pcol, -c);
            }
            raw.push_back(sparse_normalize(std::move(v)));
        }
        // canonicalize: RREF of the kernel subspace itself
        RrefMatrix canon(ncols_);
        for (auto& v : raw) canon.add_row(std::move(v));
        canon.finalize();
        return canon.rows();
    }

private:
    int ncols_;
    std::vector<SparseVec> rows_;
    std::map<int, int> pivot_row_;  // pivot column -> row index
    bool reduced_ = true;
};

// Convenience for the spec-level kernel operation on an explicit row list.
inline std::pair<int, std::vector<SparseVec>> kernel_of(int ncols, const std::vector<SparseVec>& rows) {
    RrefMatrix M(ncols);
    for (const auto& r : rows) M.add_row(r);
    auto basis = M.kernel();
    return {static_cast<int>(basis.size()), std::move(basis)};
}

}  // namespace equivar
