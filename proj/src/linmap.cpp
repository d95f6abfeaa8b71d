#include "qpb/linmap.hpp"

#include "qpb/linsolve.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qpb {

BasisLinearMap::BasisLinearMap(PresPtr domain, std::vector<const Presentation*> target_legs,
                               int max_degree)
    : domain_(std::move(domain)), legs_(std::move(target_legs)), max_degree_(max_degree) {
    for (const Word& w : domain_->monomial_basis(max_degree_))
        values_.emplace(w, TensorElement(legs_));
}

BasisLinearMap BasisLinearMap::from_function(
    PresPtr domain, std::vector<const Presentation*> target_legs, int max_degree,
    const std::function<TensorElement(const Word&)>& fn) {
    BasisLinearMap m(std::move(domain), std::move(target_legs), max_degree);
    for (auto& [w, v] : m.values_) {
        TensorElement img = fn(w);
        if (img.legs() != m.legs_)
            throw std::invalid_argument("tabulated value has wrong leg profile");
        v = std::move(img);
    }
    return m;
}

BasisLinearMap BasisLinearMap::unit_map(const HopfAlgebra& h,
                                        std::vector<const Presentation*> target_legs,
                                        int max_degree) {
    std::vector<const Presentation*> legs = target_legs;
    return from_function(h.pres_ptr(), std::move(target_legs), max_degree,
                         [&h, legs](const Word& w) {
                             return TensorElement::unit(legs).scaled(h.counit_word(w));
                         });
}

BasisLinearMap BasisLinearMap::identity_map(PresPtr pres, int max_degree) {
    const Presentation* p = pres.get();
    return from_function(pres, {p}, max_degree, [&](const Word& w) {
        return TensorElement::single(NCElement::from_word(p, w));
    });
}

BasisLinearMap BasisLinearMap::antipode_map(const HopfAlgebra& h, int max_degree) {
    const Presentation* p = h.pres();
    return from_function(h.pres_ptr(), {p}, max_degree, [&](const Word& w) {
        return TensorElement::single(h.antipode_word(w));
    });
}

void BasisLinearMap::set_value(const Word& w, TensorElement v) {
    auto it = values_.find(w);
    if (it == values_.end())
        throw std::invalid_argument("set_value target is not a basis word within degree");
    if (v.legs() != legs_) throw std::invalid_argument("value has wrong leg profile");
    it->second = std::move(v);
}

const TensorElement& BasisLinearMap::value(const Word& w) const {
    auto it = values_.find(w);
    if (it == values_.end()) {
        std::ostringstream os;
        os << "beyond truncation degree " << max_degree_ << ": "
           << word_to_string(w, domain_->gens());
        throw std::out_of_range(os.str());
    }
    return it->second;
}

bool BasisLinearMap::defined_for(const NCElement& x) const {
    for (const auto& [w, c] : x.terms())
        if (!values_.count(w)) return false;
    return true;
}

TensorElement BasisLinearMap::apply(const NCElement& x) const {
    TensorElement out(legs_);
    for (const auto& [w, c] : x.terms()) out = out + value(w).scaled(c);
    return out;
}

bool BasisLinearMap::operator==(const BasisLinearMap& o) const {
    return domain_ == o.domain_ && legs_ == o.legs_ && max_degree_ == o.max_degree_ &&
           values_ == o.values_;
}

BasisLinearMap convolve(const HopfAlgebra& h, const BasisLinearMap& f, const BasisLinearMap& g) {
    if (f.domain().get() != h.pres() || g.domain().get() != h.pres())
        throw std::invalid_argument("convolution domain mismatch");
    if (f.target_legs().empty() || g.target_legs().empty() ||
        f.target_legs().back() != g.target_legs().front())
        throw std::invalid_argument("convolution values are not envelope-composable");
    std::vector<const Presentation*> legs(f.target_legs().begin(), f.target_legs().end() - 1);
    legs.insert(legs.end(), g.target_legs().begin(), g.target_legs().end());
    int maxdeg = std::min(f.max_degree(), g.max_degree());
    return BasisLinearMap::from_function(
        f.domain(), legs, maxdeg, [&](const Word& w) {
            TensorElement acc(legs);
            for (const auto& [t, c] : h.coproduct_word(w).terms())
                acc = acc + f.value(t[0]).envelope_product(g.value(t[1])).scaled(c);
            return acc;
        });
}

bool is_unital_algebra_map(const BasisLinearMap& f) {
    if (f.target_legs().size() != 1) return false;
    const Presentation* dom = f.domain().get();
    if (f.value(Word{}) != TensorElement::unit(f.target_legs())) return false;
    auto basis = dom->monomial_basis(f.max_degree());
    for (const auto& u : basis) {
        for (const auto& v : basis) {
            if (static_cast<int>(u.size() + v.size()) > f.max_degree()) continue;
            NCElement prod = dom->multiply(NCElement::from_word(dom, u),
                                           NCElement::from_word(dom, v));
            TensorElement lhs = f.value(u).envelope_product(f.value(v));
            if (lhs != f.apply(prod)) return false;
        }
    }
    return true;
}

namespace {

// Strategy 1: every basis word group-like, every value one invertible term.
bool try_pointwise(const HopfAlgebra& h, const BasisLinearMap& f, BasisLinearMap& out) {
    if (f.target_legs().size() != 1) return false;
    const Presentation* tgt = f.target_legs().front();
    const Presentation* dom = f.domain().get();
    for (const auto& w : dom->monomial_basis(f.max_degree())) {
        TensorElement gl({dom, dom});
        gl.add_term({w, w}, QRat::one());
        if (h.coproduct_word(w) != gl) return false;
        const TensorElement& v = f.value(w);
        if (v.term_count() != 1) return false;
        for (int g : v.terms().begin()->first[0])
            if (tgt->inverse_gen(g) < 0) return false;
    }
    out = BasisLinearMap::from_function(
        f.domain(), f.target_legs(), f.max_degree(), [&](const Word& w) {
            const auto& [t, c] = *f.value(w).terms().begin();
            Word inv;
            for (auto it = t[0].rbegin(); it != t[0].rend(); ++it)
                inv.push_back(tgt->inverse_gen(*it));
            TensorElement r(f.target_legs());
            NCElement red = tgt->reduce_word(inv, c.inverse());
            for (const auto& [rw, rc] : red.terms()) r.add_term({rw}, rc);
            return r;
        });
    return true;
}

// Strategy 2: unital algebra maps invert through the antipode.
bool try_antipode(const HopfAlgebra& h, const BasisLinearMap& f, BasisLinearMap& out) {
    if (f.target_legs().size() != 1) return false;
    if (!is_unital_algebra_map(f)) return false;
    try {
        out = BasisLinearMap::from_function(f.domain(), f.target_legs(), f.max_degree(),
                                            [&](const Word& w) {
                                                return f.apply(h.antipode_word(w));
                                            });
    } catch (const std::out_of_range&) {
        return false;  // antipode image escapes the truncation degree
    }
    return true;
}

// Strategy 3: triangular coproduct — Delta(w) = w (x) 1 + strictly shorter
// first legs; solve for the inverse degree by degree.
bool try_recursion(const HopfAlgebra& h, const BasisLinearMap& f, BasisLinearMap& out) {
    if (f.target_legs().size() != 1) return false;
    const Presentation* dom = f.domain().get();
    if (f.value(Word{}) != TensorElement::unit(f.target_legs())) return false;
    auto basis = dom->monomial_basis(f.max_degree());
    for (const auto& w : basis) {
        if (w.empty()) continue;
        TensorElement rest = h.coproduct_word(w);
        TensorElement lead({dom, dom});
        lead.add_term({w, Word{}}, QRat::one());
        rest = rest - lead;
        for (const auto& [t, c] : rest.terms())
            if (t[0].size() >= w.size()) return false;
    }
    BasisLinearMap inv(f.domain(), f.target_legs(), f.max_degree());
    inv.set_value(Word{}, TensorElement::unit(f.target_legs()));
    for (const auto& w : basis) {  // term order: shorter words first
        if (w.empty()) continue;
        TensorElement acc(f.target_legs());
        TensorElement lead({dom, dom});
        lead.add_term({w, Word{}}, QRat::one());
        TensorElement rest = h.coproduct_word(w) - lead;
        for (const auto& [t, c] : rest.terms())
            acc = acc + inv.value(t[0]).envelope_product(f.value(t[1])).scaled(c);
        inv.set_value(w, -acc);
    }
    out = inv;
    return true;
}

// Strategy 4: exact linear solve, degree by degree. The left-inverse
// equations sum g(w_(1)) f(w_(2)) = eps(w) 1 couple unknown values only
// across coproduct first legs of the same length as w (any longer first leg
// aborts the strategy), so each length is one sparse system whose unknowns
// are coefficients of target basis words up to length * (largest value
// degree of f).
bool try_linear(const HopfAlgebra& h, const BasisLinearMap& f, BasisLinearMap& out) {
    if (f.target_legs().size() != 1) return false;
    const Presentation* dom = f.domain().get();
    const Presentation* tgt = f.target_legs().front();
    if (f.value(Word{}) != TensorElement::unit(f.target_legs())) return false;

    int val_deg = 1;
    std::map<size_t, std::vector<Word>> by_len;
    for (const auto& w : dom->monomial_basis(f.max_degree())) {
        if (!w.empty()) by_len[w.size()].push_back(w);
        for (const auto& [t, c] : f.value(w).terms())
            val_deg = std::max(val_deg, static_cast<int>(t[0].size()));
    }

    auto strip_zeros = [](SparseVec& v) {
        for (auto it = v.begin(); it != v.end();)
            it = it->second.is_zero() ? v.erase(it) : std::next(it);
    };

    BasisLinearMap inv(f.domain(), f.target_legs(), f.max_degree());
    inv.set_value(Word{}, TensorElement::unit(f.target_legs()));

    for (const auto& [len, words] : by_len) {
        Indexer<WordTuple, WordTupleLess> coords;  // {equation word, value word}
        struct SameLenTerm {
            Word w, v;
            QRat c;
        };
        std::map<Word, std::vector<SameLenTerm>> by_first;
        SparseVec rhs;
        for (const Word& w : words) {
            QRat& e0 = rhs[coords.id(WordTuple{w, Word{}})];
            e0 = e0 + h.counit_word(w);
            for (const auto& [t, c] : h.coproduct_word(w).terms()) {
                if (t[0].size() > len) return false;
                if (t[0].size() == len) {
                    by_first[t[0]].push_back({w, t[1], c});
                    continue;
                }
                TensorElement known =
                    inv.value(t[0]).envelope_product(f.value(t[1])).scaled(c);
                for (const auto& [rt, rc] : known.terms()) {
                    QRat& e = rhs[coords.id(WordTuple{w, rt[0]})];
                    e = e - rc;
                }
            }
        }
        strip_zeros(rhs);

        SpanSolver solver;
        std::vector<std::pair<Word, Word>> meta;  // insertion order: (basis word, value word)
        const int budget = static_cast<int>(len) * val_deg;
        const auto val_basis = tgt->monomial_basis(budget);
        for (const Word& u : words) {
            auto hits = by_first.find(u);
            if (hits == by_first.end()) continue;
            for (const Word& p : val_basis) {
                TensorElement lead = TensorElement::single(NCElement::from_word(tgt, p));
                SparseVec col;
                for (const SameLenTerm& term : hits->second) {
                    TensorElement prod =
                        lead.envelope_product(f.value(term.v)).scaled(term.c);
                    for (const auto& [rt, rc] : prod.terms()) {
                        QRat& e = col[coords.id(WordTuple{term.w, rt[0]})];
                        e = e + rc;
                    }
                }
                strip_zeros(col);
                if (col.empty()) continue;
                solver.insert(std::move(col));
                meta.emplace_back(u, p);
            }
        }
        auto combo = solver.solve(rhs);
        if (!combo) return false;
        std::map<Word, TensorElement> solved;
        for (size_t i = 0; i < meta.size(); ++i) {
            if ((*combo)[i].is_zero()) continue;
            auto [it, fresh] =
                solved.try_emplace(meta[i].first, TensorElement(f.target_legs()));
            (void)fresh;
            TensorElement part(f.target_legs());
            part.add_term({meta[i].second}, (*combo)[i]);
            it->second = it->second + part;
        }
        for (auto& [u, val] : solved) inv.set_value(u, std::move(val));
    }
    out = inv;
    return true;
}

bool certifies(const HopfAlgebra& h, const BasisLinearMap& f, const BasisLinearMap& finv) {
    BasisLinearMap unit = BasisLinearMap::unit_map(h, f.target_legs(), f.max_degree());
    return convolve(h, f, finv) == unit && convolve(h, finv, f) == unit;
}

}  // namespace

BasisLinearMap convolution_inverse(const HopfAlgebra& h, const BasisLinearMap& f,
                                   std::string* strategy_used) {
    if (f.domain().get() != h.pres())
        throw std::invalid_argument("map domain is not the given Hopf algebra");
    BasisLinearMap out(f.domain(), f.target_legs(), 0);
    const char* name = nullptr;
    if (try_pointwise(h, f, out)) {
        name = "pointwise";
    } else if (try_antipode(h, f, out)) {
        name = "antipode";
    } else if (try_recursion(h, f, out)) {
        name = "recursion";
    } else if (try_linear(h, f, out)) {
        name = "linear";
    } else {
        throw std::domain_error("no convolution inverse strategy applies to this map");
    }
    if (!certifies(h, f, out))
        throw std::domain_error(std::string("convolution inverse certification failed (") +
                                name + " strategy)");
    if (strategy_used) *strategy_used = name;
    return out;
}

}  // namespace qpb
