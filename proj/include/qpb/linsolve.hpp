#pragma once

// Exact sparse linear algebra over QRat.
//
// SpanSolver keeps an echelon of inserted vectors together with the
// expression of each echelon row as a combination of the originals, so both
// membership (solve) and kernel combinations (nullspace) come out exactly.
// Pivots are the smallest live coordinate, rows are processed in insertion
// order; results are deterministic functions of the input sequence.

#include "qpb/qrat.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qpb {

using SparseVec = std::map<int, QRat>;  // coordinate index -> coefficient

void sparse_axpy(SparseVec& acc, const QRat& factor, const SparseVec& v);

class SpanSolver {
public:
    // Returns the index the vector got (== number of calls so far).
    // If the vector is dependent, records a kernel combination.
    size_t insert(SparseVec v);

    size_t rank() const { return rows_.size(); }
    size_t inserted() const { return n_inserted_; }

    // Kernel combinations found so far: coefficients over inserted vectors
    // (dense, length == inserted()). Each combo c satisfies sum c_i v_i = 0
    // and has a 1 at the position of the dependent vector that produced it.
    const std::vector<std::vector<QRat>>& kernel() const { return kernel_; }

    // Coefficients x over the inserted vectors with sum x_i v_i = target.
    std::optional<std::vector<QRat>> solve(const SparseVec& target) const;

    bool contains(const SparseVec& target) const { return solve(target).has_value(); }

    // Forward-eliminates target against the echelon without inserting it;
    // zero iff the target lies in the span. Deterministic coset representative.
    SparseVec residual(const SparseVec& target) const;

private:
    struct Row {
        SparseVec vec;                    // pivot coefficient normalised to 1
        std::map<size_t, QRat> combo;     // row as combination of inserted vectors
    };
    // Eliminates v in place; accumulates the combination used into combo.
    void eliminate_(SparseVec& v, std::map<size_t, QRat>& combo) const;

    std::map<int, Row> rows_;             // keyed by pivot coordinate
    std::vector<std::vector<QRat>> kernel_;
    size_t n_inserted_ = 0;
};

// Assigns dense indices to keys in first-seen order.
template <class K, class Less>
class Indexer {
public:
    int id(const K& k) {
        auto [it, inserted] = map_.try_emplace(k, static_cast<int>(map_.size()));
        (void)inserted;
        return it->second;
    }
    size_t size() const { return map_.size(); }

private:
    std::map<K, int, Less> map_;
};

}  // namespace qpb
