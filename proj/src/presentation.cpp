#include "qpb/presentation.hpp"

#include "qpb/linsolve.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qpb {

std::shared_ptr<const Presentation> Presentation::make(std::string name, GeneratorTable gens,
                                                       std::vector<RewriteRule> rules,
                                                       std::vector<int> grading,
                                                       std::vector<int> inverse_gen,
                                                       bool validate) {
    auto p = std::shared_ptr<Presentation>(new Presentation());
    p->name_ = std::move(name);
    p->gens_ = std::move(gens);
    p->rules_ = std::move(rules);
    p->grading_ = std::move(grading);
    p->inverse_gen_ = std::move(inverse_gen);

    // Zero generators is legal: the scalars, with the empty word as its
    // only basis element.
    const int n = p->gens_.size();
    {
        std::set<std::string> seen;
        for (const auto& nm : p->gens_.names)
            if (nm.empty() || !seen.insert(nm).second)
                throw std::invalid_argument("generator names must be distinct and nonempty");
    }
    if (!p->gens_.weights.empty() && static_cast<int>(p->gens_.weights.size()) != n)
        throw std::invalid_argument("weight table size mismatch");
    if (!p->grading_.empty() && static_cast<int>(p->grading_.size()) != n)
        throw std::invalid_argument("grading size mismatch");
    if (!p->inverse_gen_.empty() && static_cast<int>(p->inverse_gen_.size()) != n)
        throw std::invalid_argument("inverse table size mismatch");

    auto check_word = [&](const Word& w) {
        for (int g : w)
            if (g < 0 || g >= n) throw std::invalid_argument("generator index out of range");
    };
    for (const auto& r : p->rules_) {
        if (r.lhs.empty()) throw std::invalid_argument("rule lhs must be a nonempty word");
        check_word(r.lhs);
        for (const auto& [w, c] : r.rhs.terms()) check_word(w);
    }

    // Rule elements may have been built over a scaffolding presentation (the
    // rules of the one being made cannot reference it before it exists);
    // re-home them so stored rules always point at their owner.
    for (auto& r : p->rules_) {
        NCElement rh(p.get());
        for (const auto& [w, c] : r.rhs.terms()) rh.add_term(w, c);
        r.rhs = std::move(rh);
    }

    p->rules_by_first_.assign(static_cast<size_t>(n), {});
    for (size_t i = 0; i < p->rules_.size(); ++i)
        p->rules_by_first_[static_cast<size_t>(p->rules_[i].lhs.front())].push_back(i);

    if (validate) {
        std::set<Word> lhs_seen;
        for (size_t i = 0; i < p->rules_.size(); ++i) {
            const auto& r = p->rules_[i];
            std::ostringstream where;
            where << "rule " << i + 1 << " (" << word_to_string(r.lhs, p->gens_) << " -> "
                  << NCElement(r.rhs).to_string() << ")";
            if (!lhs_seen.insert(r.lhs).second)
                throw std::invalid_argument("duplicate rule lhs in " + where.str());
            for (const auto& [w, c] : r.rhs.terms()) {
                if (!reduction_less(w, r.lhs, p->gens_))
                    throw std::invalid_argument("orientation not decreasing in " + where.str());
                if (!p->is_irreducible(w))
                    throw std::invalid_argument("rhs word not in normal form in " + where.str());
            }
            if (!p->grading_.empty() && !r.inhomogeneous) {
                long gl = p->graded_degree(r.lhs);
                for (const auto& [w, c] : r.rhs.terms())
                    if (p->graded_degree(w) != gl)
                        throw std::invalid_argument("grading violated in " + where.str());
            }
        }
        for (int g = 0; g < n; ++g) {
            int h = p->inverse_gen(g);
            if (h < 0) continue;
            if (h >= n || p->inverse_gen(h) != g)
                throw std::invalid_argument("inverse table is not an involution");
            if (!p->reduce_word(Word{g, h}, QRat::one()).is_unit() ||
                !p->reduce_word(Word{h, g}, QRat::one()).is_unit())
                throw std::invalid_argument("declared inverse pair does not reduce to 1");
        }
    }
    return p;
}

NCElement Presentation::gen(int idx) const {
    if (idx < 0 || idx >= gens_.size()) throw std::invalid_argument("generator index out of range");
    return NCElement::from_word(this, Word{idx});
}

NCElement Presentation::gen(const std::string& name) const {
    int idx = gens_.index_of(name);
    if (idx < 0) throw std::invalid_argument("unknown generator: " + name);
    return gen(idx);
}

long Presentation::graded_degree(const Word& w) const {
    if (grading_.empty()) return static_cast<long>(w.size());
    long total = 0;
    for (int g : w) total += grading_[static_cast<size_t>(g)];
    return total;
}

int Presentation::match_at_(const Word& w, size_t pos) const {
    const auto& bucket = rules_by_first_[static_cast<size_t>(w[pos])];
    for (size_t ri : bucket) {
        const Word& lhs = rules_[ri].lhs;
        if (lhs.size() > w.size() - pos) continue;
        if (std::equal(lhs.begin(), lhs.end(), w.begin() + static_cast<long>(pos)))
            return static_cast<int>(ri);
    }
    return -1;
}

bool Presentation::is_irreducible(const Word& w) const {
    for (size_t pos = 0; pos < w.size(); ++pos)
        if (match_at_(w, pos) >= 0) return false;
    return true;
}

NCElement Presentation::reduce_word(Word w, QRat coeff) const {
    NCElement out(this);
    if (coeff.is_zero()) return out;
    long steps = 0;
    std::deque<std::pair<Word, QRat>> work;
    work.emplace_back(std::move(w), std::move(coeff));
    while (!work.empty()) {
        auto [cur, c] = std::move(work.front());
        work.pop_front();
        int rule = -1;
        size_t pos = 0;
        for (; pos < cur.size(); ++pos) {
            rule = match_at_(cur, pos);
            if (rule >= 0) break;
        }
        if (rule < 0) {
            out.add_term(cur, c);
            continue;
        }
        if (++steps > step_budget_) {
            std::ostringstream os;
            os << "rewriting budget exceeded after " << step_budget_
               << " steps; offending word " << word_to_string(cur, gens_);
            throw std::runtime_error(os.str());
        }
        const RewriteRule& r = rules_[static_cast<size_t>(rule)];
        for (const auto& [rw, rc] : r.rhs.terms()) {
            Word next;
            next.reserve(cur.size() - r.lhs.size() + rw.size());
            next.insert(next.end(), cur.begin(), cur.begin() + static_cast<long>(pos));
            next.insert(next.end(), rw.begin(), rw.end());
            next.insert(next.end(), cur.begin() + static_cast<long>(pos + r.lhs.size()), cur.end());
            work.emplace_back(std::move(next), c * rc);
        }
    }
    return out;
}

NCElement Presentation::reduce(const NCElement& x) const {
    NCElement out(this);
    for (const auto& [w, c] : x.terms()) {
        NCElement part = reduce_word(w, c);
        for (const auto& [pw, pc] : part.terms()) out.add_term(pw, pc);
    }
    return out;
}

NCElement Presentation::multiply(const NCElement& x, const NCElement& y) const {
    if (x.pres() != this || y.pres() != this)
        throw std::invalid_argument("elements over different presentations");
    NCElement out(this);
    for (const auto& [wx, cx] : x.terms()) {
        for (const auto& [wy, cy] : y.terms()) {
            Word w;
            w.reserve(wx.size() + wy.size());
            w.insert(w.end(), wx.begin(), wx.end());
            w.insert(w.end(), wy.begin(), wy.end());
            NCElement part = reduce_word(std::move(w), cx * cy);
            for (const auto& [pw, pc] : part.terms()) out.add_term(pw, pc);
        }
    }
    return out;
}

std::vector<Word> Presentation::monomial_basis(int maxdeg) const {
    std::vector<Word> out{Word{}};
    std::vector<Word> level{Word{}};
    for (int d = 1; d <= maxdeg; ++d) {
        std::vector<Word> next;
        for (const auto& w : level) {
            for (int g = 0; g < gens_.size(); ++g) {
                Word cand = w;
                cand.push_back(g);
                // The prefix is irreducible, so only suffixes ending at the
                // new letter can match a rule lhs.
                bool reducible = false;
                for (const auto& r : rules_) {
                    if (r.lhs.size() > cand.size()) continue;
                    if (std::equal(r.lhs.begin(), r.lhs.end(),
                                   cand.end() - static_cast<long>(r.lhs.size()))) {
                        reducible = true;
                        break;
                    }
                }
                if (!reducible) next.push_back(std::move(cand));
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return out;
}

ConfluenceReport Presentation::confluence_check(int maxdeg) const {
    ConfluenceReport report;
    auto record = [&](size_t a, size_t b, const Word& overlap, const NCElement& na,
                      const NCElement& nb) {
        ++report.pairs_checked;
        if (na != nb) report.failures.push_back({a, b, overlap, na, nb});
    };
    for (size_t i = 0; i < rules_.size(); ++i) {
        const Word& li = rules_[i].lhs;
        for (size_t j = 0; j < rules_.size(); ++j) {
            const Word& lj = rules_[j].lhs;
            // Proper overlap: a nonempty proper suffix of li equals a prefix of lj.
            size_t kmax = std::min(li.size(), lj.size()) - 1;
            for (size_t k = 1; k <= kmax; ++k) {
                if (li.size() + lj.size() - k > static_cast<size_t>(maxdeg)) continue;
                if (!std::equal(li.end() - static_cast<long>(k), li.end(), lj.begin())) continue;
                Word overlap(li.begin(), li.end());
                overlap.insert(overlap.end(), lj.begin() + static_cast<long>(k), lj.end());
                // resolve with rule i at position 0
                NCElement ra(this);
                for (const auto& [w, c] : rules_[i].rhs.terms()) {
                    Word t = w;
                    t.insert(t.end(), lj.begin() + static_cast<long>(k), lj.end());
                    ra = ra + reduce_word(std::move(t), c);
                }
                // resolve with rule j at position |li| - k
                NCElement rb(this);
                for (const auto& [w, c] : rules_[j].rhs.terms()) {
                    Word t(li.begin(), li.end() - static_cast<long>(k));
                    t.insert(t.end(), w.begin(), w.end());
                    rb = rb + reduce_word(std::move(t), c);
                }
                record(i, j, overlap, ra, rb);
            }
            // Containment: lj occurs inside li.  Covers duplicate-lhs rule sets
            // (pos 0, equal length) once, via the j > i ordered pair.
            if (i != j && lj.size() <= li.size() && li.size() <= static_cast<size_t>(maxdeg)) {
                for (size_t pos = 0; pos + lj.size() <= li.size(); ++pos) {
                    if (lj.size() == li.size() && j < i) break;
                    if (!std::equal(lj.begin(), lj.end(), li.begin() + static_cast<long>(pos)))
                        continue;
                    NCElement ra = reduce(rules_[i].rhs);
                    NCElement rb(this);
                    for (const auto& [w, c] : rules_[j].rhs.terms()) {
                        Word t(li.begin(), li.begin() + static_cast<long>(pos));
                        t.insert(t.end(), w.begin(), w.end());
                        t.insert(t.end(), li.begin() + static_cast<long>(pos + lj.size()), li.end());
                        rb = rb + reduce_word(std::move(t), c);
                    }
                    record(i, j, li, ra, rb);
                }
            }
        }
    }
    return report;
}

std::optional<std::vector<QRat>> Presentation::solve_membership(
    const NCElement& target, const std::vector<NCElement>& span) {
    Indexer<Word, DegLexLess> coords;
    SpanSolver solver;
    for (const auto& v : span) {
        SparseVec sv;
        for (const auto& [w, c] : v.terms()) sv.emplace(coords.id(w), c);
        solver.insert(std::move(sv));
    }
    SparseVec tv;
    for (const auto& [w, c] : target.terms()) tv.emplace(coords.id(w), c);
    return solver.solve(tv);
}

}  // namespace qpb
