#include "qpb/hopf.hpp"

#include <sstream>
#include <stdexcept>

namespace qpb {

HopfPtr HopfAlgebra::make(PresPtr pres, std::vector<TensorElement> coproduct_gen,
                          std::vector<QRat> counit_gen, std::vector<NCElement> antipode_gen,
                          std::vector<NCElement> antipode_inv_gen, bool validate) {
    auto h = std::shared_ptr<HopfAlgebra>(new HopfAlgebra());
    h->pres_ = std::move(pres);
    h->coproduct_gen_ = std::move(coproduct_gen);
    h->counit_gen_ = std::move(counit_gen);
    h->antipode_gen_ = std::move(antipode_gen);
    h->antipode_inv_gen_ = std::move(antipode_inv_gen);

    const size_t n = static_cast<size_t>(h->pres_->gens().size());
    if (h->coproduct_gen_.size() != n || h->counit_gen_.size() != n ||
        h->antipode_gen_.size() != n || h->antipode_inv_gen_.size() != n)
        throw std::invalid_argument("structure table size mismatch");
    const Presentation* p = h->pres_.get();
    for (const auto& t : h->coproduct_gen_)
        if (t.legs() != std::vector<const Presentation*>{p, p})
            throw std::invalid_argument("coproduct value must be a two-leg tensor over the algebra");
    for (const auto& e : h->antipode_gen_)
        if (e.pres() != p) throw std::invalid_argument("antipode value over wrong algebra");
    for (const auto& e : h->antipode_inv_gen_)
        if (e.pres() != p) throw std::invalid_argument("inverse antipode value over wrong algebra");

    if (validate) h->validate_();
    return h;
}

const TensorElement& HopfAlgebra::coproduct_word(const Word& w) const {
    auto it = delta_memo_.find(w);
    if (it != delta_memo_.end()) return it->second;
    TensorElement value;
    if (w.empty()) {
        value = TensorElement::unit({pres_.get(), pres_.get()});
    } else if (w.size() == 1) {
        value = coproduct_gen_[static_cast<size_t>(w[0])];
    } else {
        // split off the last letter so long words reuse memoized prefixes
        Word head(w.begin(), w.end() - 1);
        value = coproduct_word(head).componentwise_product(
            coproduct_gen_[static_cast<size_t>(w.back())]);
    }
    return delta_memo_.emplace(w, std::move(value)).first->second;
}

TensorElement HopfAlgebra::coproduct(const NCElement& x) const {
    TensorElement out({pres_.get(), pres_.get()});
    for (const auto& [w, c] : x.terms()) out = out + coproduct_word(w).scaled(c);
    return out;
}

QRat HopfAlgebra::counit_word(const Word& w) const {
    QRat acc = QRat::one();
    for (int g : w) {
        acc *= counit_gen_[static_cast<size_t>(g)];
        if (acc.is_zero()) break;
    }
    return acc;
}

QRat HopfAlgebra::counit(const NCElement& x) const {
    QRat acc = QRat::zero();
    for (const auto& [w, c] : x.terms()) acc += c * counit_word(w);
    return acc;
}

NCElement HopfAlgebra::antipode_word(const Word& w) const {
    NCElement acc = pres_->unit();
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        acc = acc * antipode_gen_[static_cast<size_t>(*it)];
    return acc;
}

NCElement HopfAlgebra::antipode(const NCElement& x) const {
    NCElement out(pres_.get());
    for (const auto& [w, c] : x.terms()) out = out + antipode_word(w).scaled(c);
    return out;
}

NCElement HopfAlgebra::antipode_inv_word(const Word& w) const {
    NCElement acc = pres_->unit();
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        acc = acc * antipode_inv_gen_[static_cast<size_t>(*it)];
    return acc;
}

NCElement HopfAlgebra::antipode_inv(const NCElement& x) const {
    NCElement out(pres_.get());
    for (const auto& [w, c] : x.terms()) out = out + antipode_inv_word(w).scaled(c);
    return out;
}

TensorElement HopfAlgebra::adjoint_coaction(const NCElement& x) const {
    const Presentation* p = pres_.get();
    TensorElement out({p, p});
    // (Delta (x) id) Delta, then h2 (x) S(h1) h3
    TensorElement two = coproduct(x);
    TensorElement three = two.map_leg(0, {p, p}, [&](const Word& w) { return coproduct_word(w); });
    for (const auto& [t, c] : three.terms()) {
        NCElement tail = antipode_word(t[0]) * NCElement::from_word(p, t[2]);
        for (const auto& [tw, tc] : tail.terms()) out.add_term({t[1], tw}, c * tc);
    }
    return out;
}

void HopfAlgebra::validate_() const {
    const Presentation* p = pres_.get();
    auto two_legs = std::vector<const Presentation*>{p, p};

    // generator-level axioms
    for (int g = 0; g < p->gens().size(); ++g) {
        const auto& name = p->gens().names[static_cast<size_t>(g)];
        const TensorElement& dg = coproduct_gen_[static_cast<size_t>(g)];
        NCElement el = NCElement::from_word(p, {g});

        TensorElement left = dg.map_leg(0, two_legs,
                                        [&](const Word& w) { return coproduct_word(w); });
        TensorElement right = dg.map_leg(1, two_legs,
                                         [&](const Word& w) { return coproduct_word(w); });
        if (left != right)
            throw std::invalid_argument("coproduct not coassociative on generator " + name);

        auto eps = [&](const Word& w) { return counit_word(w); };
        if (dg.map_leg_scalar(0, eps) != TensorElement::single(el) ||
            dg.map_leg_scalar(1, eps) != TensorElement::single(el))
            throw std::invalid_argument("counit law fails on generator " + name);

        NCElement sleft(p), sright(p);
        for (const auto& [t, c] : dg.terms()) {
            sleft = sleft + (antipode_word(t[0]) * NCElement::from_word(p, t[1])).scaled(c);
            sright = sright + (NCElement::from_word(p, t[0]) * antipode_word(t[1])).scaled(c);
        }
        NCElement target = p->unit().scaled(counit_gen_[static_cast<size_t>(g)]);
        if (sleft != target || sright != target)
            throw std::invalid_argument("antipode law fails on generator " + name);

        if (antipode_inv(antipode_gen_[static_cast<size_t>(g)]) != el ||
            antipode(antipode_inv_gen_[static_cast<size_t>(g)]) != el)
            throw std::invalid_argument("inverse antipode wrong on generator " + name);
    }

    // structure maps must factor through the defining relations
    for (const auto& r : p->rules()) {
        if (r.derived) continue;  // consequences of the defining rules
        NCElement lhs_el(p);
        lhs_el.add_term(r.lhs, QRat::one());

        TensorElement dl = TensorElement::unit(two_legs);
        for (int g : r.lhs) dl = dl.componentwise_product(coproduct_gen_[static_cast<size_t>(g)]);
        TensorElement dr({p, p});
        for (const auto& [w, c] : r.rhs.terms()) dr = dr + coproduct_word(w).scaled(c);
        if (dl != dr)
            throw std::invalid_argument("coproduct does not respect rule at " +
                                        word_to_string(r.lhs, p->gens()));

        if (counit_word(r.lhs) != counit(r.rhs))
            throw std::invalid_argument("counit does not respect rule at " +
                                        word_to_string(r.lhs, p->gens()));

        if (antipode_word(r.lhs) != antipode(r.rhs))
            throw std::invalid_argument("antipode does not respect rule at " +
                                        word_to_string(r.lhs, p->gens()));
    }
}

std::vector<std::string> HopfAlgebra::check_axioms(int maxdeg) const {
    std::vector<std::string> failures;
    const Presentation* p = pres_.get();
    auto two_legs = std::vector<const Presentation*>{p, p};
    auto eps = [&](const Word& w) { return counit_word(w); };

    for (const Word& w : p->monomial_basis(maxdeg)) {
        std::string ws = word_to_string(w, p->gens());
        const TensorElement& dw = coproduct_word(w);

        TensorElement left = dw.map_leg(0, two_legs,
                                        [&](const Word& u) { return coproduct_word(u); });
        TensorElement right = dw.map_leg(1, two_legs,
                                         [&](const Word& u) { return coproduct_word(u); });
        if (left != right) failures.push_back("coassociativity fails at " + ws);

        NCElement el = NCElement::from_word(p, w);
        if (dw.map_leg_scalar(0, eps) != TensorElement::single(el))
            failures.push_back("left counit law fails at " + ws);
        if (dw.map_leg_scalar(1, eps) != TensorElement::single(el))
            failures.push_back("right counit law fails at " + ws);

        NCElement sleft(p), sright(p);
        for (const auto& [t, c] : dw.terms()) {
            sleft = sleft + (antipode_word(t[0]) * NCElement::from_word(p, t[1])).scaled(c);
            sright = sright + (NCElement::from_word(p, t[0]) * antipode_word(t[1])).scaled(c);
        }
        NCElement target = p->unit().scaled(counit_word(w));
        if (sleft != target) failures.push_back("left antipode law fails at " + ws);
        if (sright != target) failures.push_back("right antipode law fails at " + ws);

        if (antipode_inv(antipode_word(w)) != el)
            failures.push_back("inverse antipode fails at " + ws);
    }
    return failures;
}

}  // namespace qpb
