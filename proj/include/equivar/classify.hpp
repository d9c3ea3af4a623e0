#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "equivar/candidate.hpp"
#include "equivar/linalg.hpp"
#include "equivar/random.hpp"

namespace equivar {

// ---------------------------------------------------------------------------
// Direct classification: exact linear algebra on the candidate space, with
// the equivariance constraints as rows.
// ---------------------------------------------------------------------------

// All monomial fields x^nu d_i with |nu| <= g, in canonical order.
inline std::vector<PolyVectorField> monomial_fields(int m, int g, int min_deg = 0) {
    std::vector<PolyVectorField> out;
    for (const auto& nu : multi_indices_up_to(m, g)) {
        if (nu.total() < min_deg) continue;
        for (int i = 0; i < m; ++i) out.push_back(PolyVectorField::monomial(nu, i));
    }
    return out;
}

// The literal constraint matrix: one row per output coefficient of the
// residual of each (generator, test symbol) pair, over the candidate columns.
// Test symbols are the monomial basis of E_p^k times x-monomials up to
// test_degree. Kept as the brute-force reference; classify_direct streams the
// equivalent jet-level rows instead.
inline std::vector<SparseVec> constraint_system(const CandidateSpace& S,
                                                const std::vector<PolyVectorField>& generators,
                                                int test_degree) {
    std::vector<SparseVec> rows;
    // group candidate columns by input slot
    std::vector<std::vector<int>> cols_by_in(static_cast<size_t>(S.in.size()));
    for (int j = 0; j < static_cast<int>(S.keys.size()); ++j)
        cols_by_in[static_cast<size_t>(S.keys[static_cast<size_t>(j)].in)].push_back(j);

    for (const auto& X : generators) {
        for (const auto& mu : multi_indices_up_to(S.m, test_degree)) {
            for (int b = 0; b < S.in.size(); ++b) {
                const auto& [alpha, I] = S.in.elems[static_cast<size_t>(b)];
                OpSymbol D = OpSymbol::monomial(S.m, S.k, S.p, mu, alpha, I);
                OpSymbol LD = lie_symbolic(X, D);
                std::map<SymKey, SparseVec> row_map;
                // L_X(T_j(D)) side: columns whose input slot matches D
                for (int j : cols_by_in[static_cast<size_t>(b)]) {
                    const CandidateKey& key = S.keys[static_cast<size_t>(j)];
                    Rat fall = falling_factorial(mu, key.beta);
                    if (fall == 0) continue;
                    const auto& [alpha2, J] = S.out.elems[static_cast<size_t>(key.out)];
                    OpSymbol TD = OpSymbol::monomial(S.m, S.l, S.q, *try_sub(mu, key.beta) + key.mu,
                                                     alpha2, J, fall);
                    OpSymbol LTD = lie_symbolic(X, TD);
                    for (const auto& [sk, c] : LTD.terms) row_map[sk].emplace_back(j, c);
                }
                // -T_j(L_X D) side
                for (const auto& [lk, w] : LD.terms) {
                    int b2 = S.in.find(lk.alpha, lk.I);
                    for (int j : cols_by_in[static_cast<size_t>(b2)]) {
                        const CandidateKey& key = S.keys[static_cast<size_t>(j)];
                        Rat fall = falling_factorial(lk.mu, key.beta);
                        if (fall == 0) continue;
                        const auto& [alpha2, J] = S.out.elems[static_cast<size_t>(key.out)];
                        row_map[SymKey{*try_sub(lk.mu, key.beta) + key.mu, alpha2, J}]
                            .emplace_back(j, -w * fall);
                    }
                }
                for (auto& [sk, row] : row_map) rows.push_back(sparse_normalize(std::move(row)));
            }
        }
    }
    return rows;
}

// Stream the jet-level residual rows for one generator into the reducer.
// Row identity: residual coefficient at (kappa, beta, in, out); two candidates
// share a row exactly when their residual tables overlap on that jet.
inline void add_jet_rows(RrefMatrix& M, const CandidateSpace& S, const PolyVectorField& X) {
    LieJetCache lie_in = build_lie_jets(X, S.in);
    LieJetCache lie_out = (S.in.k == S.out.k && S.in.p == S.out.p)
                              ? lie_in
                              : build_lie_jets(X, S.out);
    std::map<JetKey, SparseVec> row_map;
    std::map<JetKey, Rat> table;
    for (int j = 0; j < static_cast<int>(S.keys.size()); ++j) {
        table.clear();
        residual_jet_table(S, S.keys[static_cast<size_t>(j)], lie_in, lie_out, table);
        for (const auto& [jk, w] : table) row_map[jk].emplace_back(j, w);
    }
    for (auto& [jk, row] : row_map) M.add_row(std::move(row));
}

struct ClassifyOptions {
    int R = -1;       // eta-order bound; defaults to k + l + 2
    int x_deg = 0;    // coefficient-degree bound for the candidates
    int g = 2;        // generator degree
    uint64_t seed = 1;
    bool brute_force = false;  // no filtering, literal test-family rows
};

struct ClassificationResult {
    int m = 0, p = 0, q = 0, k = 0, l = 0;
    int dimension = 0;
    std::vector<CandidateOperator> basis;
    std::string path;  // "direct" or "ansatz"
    bool stabilized = true;
    bool borderline = false;
    // solver metadata
    int R = 0, x_deg = 0, g = 0;
    int dimension_pre_verify = 0;
    std::string note;
};

inline bool is_borderline(int m, int p, int q) { return m < std::min(p + 2, q + 3); }

// Verify a set of candidate combinations against extended generators: returns
// the coordinates (over the given operators) of the subspace with vanishing
// residual rows.
inline std::vector<SparseVec> verified_subspace(const CandidateSpace& S,
                                                const std::vector<CandidateOperator>& ops,
                                                const std::vector<PolyVectorField>& gens) {
    RrefMatrix M(static_cast<int>(ops.size()));
    for (const auto& X : gens) {
        LieJetCache lie_in = build_lie_jets(X, S.in);
        LieJetCache lie_out = (S.in.k == S.out.k && S.in.p == S.out.p) ? lie_in : build_lie_jets(X, S.out);
        std::map<JetKey, SparseVec> row_map;
        for (int t = 0; t < static_cast<int>(ops.size()); ++t) {
            std::map<JetKey, Rat> table;
            for (const auto& [key, c] : ops[static_cast<size_t>(t)].terms) {
                std::map<JetKey, Rat> one;
                residual_jet_table(S, key, lie_in, lie_out, one);
                for (const auto& [jk, w] : one) add_term(table, jk, w * c);
            }
            for (const auto& [jk, w] : table) row_map[jk].emplace_back(t, w);
        }
        for (auto& [jk, row] : row_map) M.add_row(std::move(row));
    }
    return M.kernel();
}

// Direct path: kernel of the constraint system over the candidate space.
inline ClassificationResult classify_direct(int m, int p, int q, int k, int l,
                                            ClassifyOptions opt = {}) {
    validate_cell(m, p, q, k, l);
    if (m < std::max({p, q, 1})) throw std::invalid_argument("classify_direct: m too small");
    const int R = opt.R < 0 ? k + l + 2 : opt.R;

    ClassificationResult res;
    res.m = m; res.p = p; res.q = q; res.k = k; res.l = l;
    res.path = "direct";
    res.R = R;
    res.x_deg = opt.x_deg;
    res.g = opt.g;
    res.borderline = is_borderline(m, p, q);

    // The Euler-field rows are diagonal on the candidate basis and the
    // translation rows are triangular in the coefficient degree, so for g >= 1
    // those eliminations are applied up front as a column filter. The brute
    // route keeps every column and every literal row instead; both kernels
    // agree (pinned by tests).
    CandidateFilter filter = (!opt.brute_force && opt.g >= 1) ? CandidateFilter::weight_zero
                                                              : CandidateFilter::none;
    CandidateSpace S = candidate_space_ctx(m, p, q, k, l, R, opt.x_deg, filter);
    std::vector<PolyVectorField> gens = monomial_fields(m, opt.g);

    RrefMatrix M(static_cast<int>(S.keys.size()));
    if (opt.brute_force) {
        int beta_max = 0;
        for (const auto& key : S.keys) beta_max = std::max(beta_max, key.beta.total());
        int test_degree = std::max(opt.g + 1, beta_max + opt.x_deg + 1);
        for (auto& row : constraint_system(S, gens, test_degree)) M.add_row(std::move(row));
    } else {
        for (const auto& X : gens) add_jet_rows(M, S, X);
    }

    std::vector<SparseVec> kernel = M.kernel();
    res.dimension_pre_verify = static_cast<int>(kernel.size());

    std::vector<CandidateOperator> ops;
    ops.reserve(kernel.size());
    for (const auto& v : kernel) ops.push_back(S.materialize(v));

    // stabilization: the extra generator degree must not cut the kernel down
    std::vector<PolyVectorField> extra = monomial_fields(m, opt.g + 1, opt.g + 1);
    std::vector<SparseVec> keep = verified_subspace(S, ops, extra);
    if (static_cast<int>(keep.size()) != res.dimension_pre_verify) {
        res.stabilized = false;
        res.note = "dimension dropped from " + std::to_string(res.dimension_pre_verify) + " to " +
                   std::to_string(keep.size()) + " at generator degree " + std::to_string(opt.g + 1);
        std::vector<CandidateOperator> verified;
        for (const auto& comb : keep) {
            CandidateOperator T(m, p, q, k, l, R, opt.x_deg);
            for (const auto& [t, c] : comb) {
                CandidateOperator scaled = ops[static_cast<size_t>(t)];
                scaled *= c;
                T += scaled;
            }
            verified.push_back(std::move(T));
        }
        ops = std::move(verified);
    }

    // operational spot check: the lie_op route must agree that the residual
    // vanishes on sampled fields and arguments
    Rng rng(opt.seed);
    for (const auto& T : ops) {
        for (int trial = 0; trial < 4; ++trial) {
            PolyVectorField X = rng.vector_field(m, std::min(opt.g + 1, 3), 2);
            OpSymbol D = rng.op_symbol(m, k, p, 2, 3);
            if (!equivariance_residual(T, X, D).is_zero()) {
                res.stabilized = false;
                res.note += (res.note.empty() ? "" : "; ");
                res.note += "operational residual check failed";
                break;
            }
        }
    }

    res.basis = std::move(ops);
    res.dimension = static_cast<int>(res.basis.size());
    return res;
}

// ---------------------------------------------------------------------------
// Known dimensions of the equivariant-operator spaces, for the table command
// and the acceptance grid. Returns nullopt where no value is asserted
// (borderline dimensions, or order bounds below the natural target).
// ---------------------------------------------------------------------------

inline std::optional<int> known_dimension(int m, int p, int q, int k, int l) {
    if (p > m || q > m) return std::nullopt;
    if (is_borderline(m, p, q)) return std::nullopt;
    int off = q - p;
    if (off < -2 || off > 1) return 0;
    if (off == -2) return 0;
    if (off == 1) {
        // one-dimensional exactly for first-order input, and for second order
        // when the input acts on functions
        int value = (k == 1 || (k == 2 && p == 0)) ? 1 : 0;
        if (l >= std::max(k - 1, 0)) return value;
        return std::nullopt;
    }
    if (off == -1) {
        if (p < 1) return std::nullopt;
        if (l >= k + 1) return 1;
        return std::nullopt;
    }
    // q == p
    int value = ((p == 0 && k >= 1) || (p > 0 && k == 1)) ? 2 : 1;
    if (l >= k) return value;
    return std::nullopt;
}

}  // namespace equivar
