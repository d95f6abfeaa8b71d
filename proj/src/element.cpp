#include "qpb/element.hpp"

#include "qpb/presentation.hpp"

#include <stdexcept>

namespace qpb {

NCElement NCElement::unit(const Presentation* pres) {
    NCElement e(pres);
    e.terms_.emplace(Word{}, QRat::one());
    return e;
}

NCElement NCElement::from_word(const Presentation* pres, Word w, QRat coeff) {
    NCElement e(pres);
    if (!coeff.is_zero()) e.terms_.emplace(std::move(w), std::move(coeff));
    return e;
}

bool NCElement::is_unit() const {
    return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second.is_one();
}

int NCElement::degree() const {
    int d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
    return d;
}

QRat NCElement::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? QRat::zero() : it->second;
}

void NCElement::add_term(const Word& w, const QRat& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

namespace {
void check_same_pres(const NCElement& a, const NCElement& b) {
    if (a.pres() != b.pres())
        throw std::invalid_argument("elements over different presentations");
}
}  // namespace

NCElement NCElement::operator+(const NCElement& o) const {
    check_same_pres(*this, o);
    NCElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add_term(w, c);
    return r;
}

NCElement NCElement::operator-(const NCElement& o) const {
    check_same_pres(*this, o);
    NCElement r = *this;
    for (const auto& [w, c] : o.terms_) r.add_term(w, -c);
    return r;
}

NCElement NCElement::operator-() const {
    NCElement r(pres_);
    for (const auto& [w, c] : terms_) r.terms_.emplace(w, -c);
    return r;
}

NCElement NCElement::scaled(const QRat& c) const {
    NCElement r(pres_);
    if (c.is_zero()) return r;
    for (const auto& [w, k] : terms_) r.terms_.emplace(w, k * c);
    return r;
}

NCElement NCElement::operator*(const NCElement& o) const {
    check_same_pres(*this, o);
    if (!pres_) throw std::invalid_argument("element without presentation");
    return pres_->multiply(*this, o);
}

bool NCElement::operator==(const NCElement& o) const {
    return pres_ == o.pres_ && terms_ == o.terms_;
}

std::string NCElement::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
        bool neg = !c.is_zero() && c.num().leading() < 0;
        QRat a = neg ? -c : c;
        std::string body;
        if (w.empty()) {
            body = a.to_string_coeff();
        } else {
            std::string ws = word_to_string(w, pres_->gens());
            body = a.is_one() ? ws : a.to_string_coeff() + "*" + ws;
        }
        if (out.empty())
            out = (neg ? "-" : "") + body;
        else
            out += (neg ? " - " : " + ") + body;
    }
    return out;
}

}  // namespace qpb
