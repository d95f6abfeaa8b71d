#include "qpb/tensor.hpp"

#include <stdexcept>

namespace qpb {

TensorElement TensorElement::unit(std::vector<const Presentation*> legs) {
    TensorElement e(std::move(legs));
    e.add_term(WordTuple(e.legs_.size()), QRat::one());
    return e;
}

TensorElement TensorElement::single(const NCElement& x) {
    TensorElement e({x.pres()});
    for (const auto& [w, c] : x.terms()) e.add_term({w}, c);
    return e;
}

TensorElement TensorElement::tensor(const TensorElement& a, const TensorElement& b) {
    std::vector<const Presentation*> legs = a.legs_;
    legs.insert(legs.end(), b.legs_.begin(), b.legs_.end());
    TensorElement e(std::move(legs));
    for (const auto& [ta, ca] : a.terms_) {
        for (const auto& [tb, cb] : b.terms_) {
            WordTuple t = ta;
            t.insert(t.end(), tb.begin(), tb.end());
            e.add_term(t, ca * cb);
        }
    }
    return e;
}

TensorElement TensorElement::tensor(const NCElement& a, const NCElement& b) {
    return tensor(single(a), single(b));
}

QRat TensorElement::coeff(const WordTuple& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? QRat::zero() : it->second;
}

void TensorElement::add_term(const WordTuple& t, const QRat& c) {
    if (c.is_zero()) return;
    if (t.size() != legs_.size()) throw std::invalid_argument("tensor term arity mismatch");
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(t, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void TensorElement::check_compatible_(const TensorElement& o) const {
    if (legs_ != o.legs_) throw std::invalid_argument("tensor elements over different leg profiles");
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
    check_compatible_(o);
    TensorElement e = *this;
    for (const auto& [t, c] : o.terms_) e.add_term(t, c);
    return e;
}

TensorElement TensorElement::operator-(const TensorElement& o) const {
    check_compatible_(o);
    TensorElement e = *this;
    for (const auto& [t, c] : o.terms_) e.add_term(t, -c);
    return e;
}

TensorElement TensorElement::operator-() const {
    TensorElement e(legs_);
    for (const auto& [t, c] : terms_) e.add_term(t, -c);
    return e;
}

TensorElement TensorElement::scaled(const QRat& c) const {
    TensorElement e(legs_);
    if (c.is_zero()) return e;
    for (const auto& [t, tc] : terms_) e.add_term(t, tc * c);
    return e;
}

bool TensorElement::operator==(const TensorElement& o) const {
    if (legs_ != o.legs_) return false;
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (it->first != jt->first || !(it->second == jt->second)) return false;
    return true;
}

TensorElement TensorElement::componentwise_product(const TensorElement& o) const {
    check_compatible_(o);
    TensorElement e(legs_);
    for (const auto& [ta, ca] : terms_) {
        for (const auto& [tb, cb] : o.terms_) {
            // per-leg reduced products, distributed
            std::vector<NCElement> factors;
            factors.reserve(legs_.size());
            bool dead = false;
            for (size_t i = 0; i < legs_.size() && !dead; ++i) {
                Word w = ta[i];
                w.insert(w.end(), tb[i].begin(), tb[i].end());
                NCElement f = legs_[i]->reduce_word(std::move(w), QRat::one());
                if (f.is_zero()) dead = true;
                factors.push_back(std::move(f));
            }
            if (dead) continue;
            WordTuple t(legs_.size());
            QRat base = ca * cb;
            std::function<void(size_t, const QRat&)> emit = [&](size_t i, const QRat& acc) {
                if (i == legs_.size()) {
                    e.add_term(t, acc);
                    return;
                }
                for (const auto& [w, c] : factors[i].terms()) {
                    t[i] = w;
                    emit(i + 1, acc * c);
                }
            };
            emit(0, base);
        }
    }
    return e;
}

TensorElement TensorElement::envelope_product(const TensorElement& o) const {
    if (legs_.empty() || o.legs_.empty())
        throw std::invalid_argument("envelope product needs at least one leg on each side");
    if (legs_.back() != o.legs_.front())
        throw std::invalid_argument("envelope product boundary legs disagree");
    std::vector<const Presentation*> legs(legs_.begin(), legs_.end() - 1);
    legs.insert(legs.end(), o.legs_.begin(), o.legs_.end());
    TensorElement e(std::move(legs));
    const Presentation* mid = legs_.back();
    for (const auto& [ta, ca] : terms_) {
        for (const auto& [tb, cb] : o.terms_) {
            Word w = ta.back();
            w.insert(w.end(), tb.front().begin(), tb.front().end());
            NCElement m = mid->reduce_word(std::move(w), ca * cb);
            for (const auto& [mw, mc] : m.terms()) {
                WordTuple t(ta.begin(), ta.end() - 1);
                t.push_back(mw);
                t.insert(t.end(), tb.begin() + 1, tb.end());
                e.add_term(t, mc);
            }
        }
    }
    return e;
}

NCElement TensorElement::collapse() const {
    if (legs_.empty()) throw std::invalid_argument("collapse of a legless tensor");
    const Presentation* p = legs_.front();
    for (const Presentation* l : legs_)
        if (l != p) throw std::invalid_argument("collapse needs identical legs");
    NCElement out(p);
    for (const auto& [t, c] : terms_) {
        Word w;
        for (const auto& leg : t) w.insert(w.end(), leg.begin(), leg.end());
        NCElement r = p->reduce_word(std::move(w), c);
        for (const auto& [rw, rc] : r.terms()) out.add_term(rw, rc);
    }
    return out;
}

TensorElement TensorElement::collapse_legs(size_t from, size_t count) const {
    if (count == 0 || from + count > legs_.size())
        throw std::invalid_argument("collapse_legs range out of bounds");
    const Presentation* p = legs_[from];
    for (size_t i = from; i < from + count; ++i)
        if (legs_[i] != p) throw std::invalid_argument("collapse_legs needs identical legs");
    std::vector<const Presentation*> legs(legs_.begin(), legs_.begin() + static_cast<long>(from));
    legs.push_back(p);
    legs.insert(legs.end(), legs_.begin() + static_cast<long>(from + count), legs_.end());
    TensorElement e(std::move(legs));
    for (const auto& [t, c] : terms_) {
        Word w;
        for (size_t i = from; i < from + count; ++i) w.insert(w.end(), t[i].begin(), t[i].end());
        NCElement r = p->reduce_word(std::move(w), c);
        for (const auto& [rw, rc] : r.terms()) {
            WordTuple nt(t.begin(), t.begin() + static_cast<long>(from));
            nt.push_back(rw);
            nt.insert(nt.end(), t.begin() + static_cast<long>(from + count), t.end());
            e.add_term(nt, rc);
        }
    }
    return e;
}

TensorElement TensorElement::universal_d() const {
    if (legs_.empty()) throw std::invalid_argument("differential of a legless tensor");
    std::vector<const Presentation*> legs = legs_;
    legs.push_back(legs_.front());  // all legs must agree for forms; checked below
    for (const Presentation* l : legs_)
        if (l != legs_.front()) throw std::invalid_argument("differential needs identical legs");
    TensorElement e(std::move(legs));
    for (const auto& [t, c] : terms_) {
        QRat sign = QRat::one();
        for (size_t i = 0; i <= t.size(); ++i) {
            WordTuple nt(t.begin(), t.begin() + static_cast<long>(i));
            nt.push_back(Word{});
            nt.insert(nt.end(), t.begin() + static_cast<long>(i), t.end());
            e.add_term(nt, c * sign);
            sign = -sign;
        }
    }
    return e;
}

TensorElement TensorElement::map_leg(size_t i,
                                     const std::vector<const Presentation*>& replacement_legs,
                                     const std::function<TensorElement(const Word&)>& fn) const {
    if (i >= legs_.size()) throw std::invalid_argument("map_leg index out of range");
    std::vector<const Presentation*> legs(legs_.begin(), legs_.begin() + static_cast<long>(i));
    legs.insert(legs.end(), replacement_legs.begin(), replacement_legs.end());
    legs.insert(legs.end(), legs_.begin() + static_cast<long>(i + 1), legs_.end());
    TensorElement e(std::move(legs));
    for (const auto& [t, c] : terms_) {
        TensorElement img = fn(t[i]);
        if (img.legs() != replacement_legs)
            throw std::invalid_argument("map_leg image has wrong leg profile");
        for (const auto& [it_, ic] : img.terms()) {
            WordTuple nt(t.begin(), t.begin() + static_cast<long>(i));
            nt.insert(nt.end(), it_.begin(), it_.end());
            nt.insert(nt.end(), t.begin() + static_cast<long>(i + 1), t.end());
            e.add_term(nt, c * ic);
        }
    }
    return e;
}

TensorElement TensorElement::map_leg_scalar(size_t i,
                                            const std::function<QRat(const Word&)>& fn) const {
    if (i >= legs_.size()) throw std::invalid_argument("map_leg index out of range");
    std::vector<const Presentation*> legs(legs_.begin(), legs_.begin() + static_cast<long>(i));
    legs.insert(legs.end(), legs_.begin() + static_cast<long>(i + 1), legs_.end());
    TensorElement e(std::move(legs));
    for (const auto& [t, c] : terms_) {
        QRat v = fn(t[i]);
        if (v.is_zero()) continue;
        WordTuple nt(t.begin(), t.begin() + static_cast<long>(i));
        nt.insert(nt.end(), t.begin() + static_cast<long>(i + 1), t.end());
        e.add_term(nt, c * v);
    }
    return e;
}

std::string TensorElement::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [t, c] : terms_) {
        bool neg = !c.is_zero() && c.num().leading() < 0;
        QRat a = neg ? -c : c;
        std::string body;
        for (size_t i = 0; i < t.size(); ++i) {
            if (i) body += "(x)";
            body += word_to_string(t[i], legs_[i]->gens());
        }
        if (!a.is_one()) body = a.to_string_coeff() + "*" + body;
        if (out.empty())
            out = (neg ? "-" : "") + body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    return out;
}

}  // namespace qpb
