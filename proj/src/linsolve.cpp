#include "qpb/linsolve.hpp"

namespace qpb {

void sparse_axpy(SparseVec& acc, const QRat& factor, const SparseVec& v) {
    if (factor.is_zero()) return;
    for (const auto& [k, c] : v) {
        auto it = acc.find(k);
        if (it == acc.end()) {
            acc.emplace(k, factor * c);
        } else {
            it->second += factor * c;
            if (it->second.is_zero()) acc.erase(it);
        }
    }
}

void SpanSolver::eliminate_(SparseVec& v, std::map<size_t, QRat>& combo) const {
    while (!v.empty()) {
        int pivot = v.begin()->first;
        auto it = rows_.find(pivot);
        if (it == rows_.end()) return;
        QRat f = -v.begin()->second;  // row pivot is 1
        sparse_axpy(v, f, it->second.vec);
        for (const auto& [idx, c] : it->second.combo) {
            auto ct = combo.find(idx);
            if (ct == combo.end()) {
                combo.emplace(idx, f * c);
            } else {
                ct->second += f * c;
                if (ct->second.is_zero()) combo.erase(ct);
            }
        }
    }
}

size_t SpanSolver::insert(SparseVec v) {
    size_t index = n_inserted_++;
    std::map<size_t, QRat> combo;
    combo.emplace(index, QRat::one());
    eliminate_(v, combo);
    if (v.empty()) {
        std::vector<QRat> dense(n_inserted_, QRat::zero());
        for (const auto& [idx, c] : combo) dense[idx] = c;
        kernel_.push_back(std::move(dense));
        return index;
    }
    QRat inv = v.begin()->second.inverse();
    SparseVec norm;
    for (const auto& [k, c] : v) norm.emplace(k, inv * c);
    std::map<size_t, QRat> ncombo;
    for (const auto& [idx, c] : combo) ncombo.emplace(idx, inv * c);
    int pivot_key = norm.begin()->first;  // read before the move below
    rows_.emplace(pivot_key, Row{std::move(norm), std::move(ncombo)});
    return index;
}

std::optional<std::vector<QRat>> SpanSolver::solve(const SparseVec& target) const {
    SparseVec rem = target;
    std::map<size_t, QRat> combo;
    eliminate_(rem, combo);
    if (!rem.empty()) return std::nullopt;
    // eliminate_ computed target + sum combo_i v_i = 0, so negate.
    std::vector<QRat> x(n_inserted_, QRat::zero());
    for (const auto& [idx, c] : combo) x[idx] = -c;
    return x;
}

SparseVec SpanSolver::residual(const SparseVec& target) const {
    SparseVec rem = target;
    std::map<size_t, QRat> combo;
    eliminate_(rem, combo);
    return rem;
}

}  // namespace qpb
