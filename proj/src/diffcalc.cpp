#include "qpb/diffcalc.hpp"

#include "qpb/linsolve.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace qpb {

namespace {

// Defining expression of one basis form: sum of coeff * (left word) d(gen).
struct FormDefTerm {
    QRat coeff;
    int left;  // generator index of the single-letter left factor
    int gen;   // differentiated generator
};

// w0 = d db - q^-1 b dd, w1 = d da - q^-1 b dc, w2 = c da - q^-1 a dc,
// written with the generator indices a=0, b=1, c=2, d=3.
std::array<std::vector<FormDefTerm>, 3> form_definitions() {
    QRat mqi = -QRat::q_power(-1);
    return {{
        {{QRat::one(), 3, 1}, {mqi, 1, 3}},
        {{QRat::one(), 3, 0}, {mqi, 1, 2}},
        {{QRat::one(), 2, 0}, {mqi, 0, 2}},
    }};
}

}  // namespace

// ---------------------------------------------------------------- UnivOneForm

UnivOneForm::UnivOneForm(TensorElement t) : t_(std::move(t)) {
    if (t_.leg_count() != 2 || t_.legs()[0] != t_.legs()[1])
        throw std::invalid_argument("universal 1-form needs two legs over one presentation");
    if (!t_.collapse().is_zero())
        throw std::invalid_argument("universal 1-form is not annihilated by multiplication");
}

UnivOneForm UnivOneForm::d(const NCElement& u) {
    const Presentation* p = u.pres();
    TensorElement t({p, p});
    for (const auto& [w, c] : u.terms()) {
        if (w.empty()) continue;  // d(1) = 0
        t.add_term({Word{}, w}, c);
        t.add_term({w, Word{}}, -c);
    }
    return UnivOneForm(std::move(t));
}

UnivOneForm UnivOneForm::zero(const Presentation* p) {
    return UnivOneForm(TensorElement({p, p}));
}

UnivOneForm UnivOneForm::left(const NCElement& p) const {
    TensorElement factor({pres(), pres()});
    for (const auto& [w, c] : p.terms()) factor.add_term({w, Word{}}, c);
    return UnivOneForm(factor.componentwise_product(t_));
}

UnivOneForm UnivOneForm::right(const NCElement& p) const {
    TensorElement factor({pres(), pres()});
    for (const auto& [w, c] : p.terms()) factor.add_term({Word{}, w}, c);
    return UnivOneForm(t_.componentwise_product(factor));
}

UnivOneForm UnivOneForm::operator+(const UnivOneForm& o) const { return UnivOneForm(t_ + o.t_); }
UnivOneForm UnivOneForm::operator-(const UnivOneForm& o) const { return UnivOneForm(t_ - o.t_); }
UnivOneForm UnivOneForm::scaled(const QRat& c) const { return UnivOneForm(t_.scaled(c)); }

// ---------------------------------------------------------------------- kappa

TensorElement kappa(const TensorElement& x, const HopfAlgebra& h) {
    if (x.leg_count() != 2 || x.legs()[0] != h.pres() || x.legs()[1] != h.pres())
        throw std::invalid_argument("kappa input must be a tensor square over the Hopf algebra");
    TensorElement spread =
        x.map_leg(1, {h.pres(), h.pres()}, [&](const Word& w) { return h.coproduct_word(w); });
    return spread.collapse_legs(0, 2);
}

TensorElement kappa_inv(const TensorElement& x, const HopfAlgebra& h) {
    if (x.leg_count() != 2 || x.legs()[0] != h.pres() || x.legs()[1] != h.pres())
        throw std::invalid_argument("kappa input must be a tensor square over the Hopf algebra");
    TensorElement spread = x.map_leg(1, {h.pres(), h.pres()}, [&](const Word& w) {
        TensorElement out({h.pres(), h.pres()});
        for (const auto& [t, c] : h.coproduct_word(w).terms()) {
            NCElement s = h.antipode_word(t[0]);
            for (const auto& [sw, sc] : s.terms()) out.add_term({sw, t[1]}, sc * c);
        }
        return out;
    });
    return spread.collapse_legs(0, 2);
}

// -------------------------------------------------------------- CalculusIdeal

CalculusIdeal CalculusIdeal::make(std::vector<UnivOneForm> n_gens, std::vector<NCElement> q_gens,
                                  const HopfAlgebra& h) {
    for (const auto& q : q_gens) {
        if (q.pres() != h.pres())
            throw std::invalid_argument("right-ideal generator lives over the wrong algebra");
        if (!h.counit(q).is_zero())
            throw std::invalid_argument("right-ideal generator has nonzero counit: " +
                                        q.to_string());
    }
    // UnivOneForm construction already certified ker m membership.
    return CalculusIdeal{std::move(n_gens), std::move(q_gens)};
}

BicovarianceReport bicovariance_check(const std::vector<NCElement>& Q, const HopfAlgebra& h,
                                      int D) {
    BicovarianceReport rep;
    // Right-ideal closure span and the ambient degree for its H cofactor.
    std::vector<Word> basis = h.pres()->monomial_basis(D);
    std::vector<NCElement> closure;
    for (const auto& q : Q)
        for (const auto& w : basis) {
            NCElement e = q * NCElement::from_word(h.pres(), w);
            if (!e.is_zero()) closure.push_back(std::move(e));
        }

    using PairKey = std::pair<Word, Word>;
    struct PairLess {
        bool operator()(const PairKey& a, const PairKey& b) const {
            DegLexLess less;
            if (less(a.first, b.first)) return true;
            if (less(b.first, a.first)) return false;
            return less(a.second, b.second);
        }
    };
    Indexer<PairKey, PairLess> ix;
    SpanSolver span;
    for (const auto& e : closure)
        for (const auto& w : basis) {
            SparseVec v;
            for (const auto& [ew, ec] : e.terms()) v[ix.id({ew, w})] = ec;
            span.insert(std::move(v));
        }

    for (const auto& q : Q) {
        TensorElement ad = h.adjoint_coaction(q);
        SparseVec target;
        bool in_range = true;
        for (const auto& [t, c] : ad.terms()) {
            if (static_cast<int>(t[0].size()) > D || static_cast<int>(t[1].size()) > D) {
                in_range = false;
                break;
            }
            target[ix.id({t[0], t[1]})] = c;
        }
        bool ok = in_range && span.contains(target);
        rep.lines.push_back({q.to_string(), ok});
        rep.pass = rep.pass && ok;
    }
    return rep;
}

// ------------------------------------------------------------------ ThreeDForm

ThreeDForm ThreeDForm::zero(const Presentation* p) {
    return ThreeDForm{{NCElement(p), NCElement(p), NCElement(p)}};
}

ThreeDForm ThreeDForm::operator+(const ThreeDForm& o) const {
    return ThreeDForm{{comp[0] + o.comp[0], comp[1] + o.comp[1], comp[2] + o.comp[2]}};
}

ThreeDForm ThreeDForm::operator-(const ThreeDForm& o) const {
    return ThreeDForm{{comp[0] - o.comp[0], comp[1] - o.comp[1], comp[2] - o.comp[2]}};
}

ThreeDForm ThreeDForm::scaled(const QRat& c) const {
    return ThreeDForm{{comp[0].scaled(c), comp[1].scaled(c), comp[2].scaled(c)}};
}

ThreeDForm ThreeDForm::left(const NCElement& p) const {
    return ThreeDForm{{p * comp[0], p * comp[1], p * comp[2]}};
}

bool ThreeDForm::is_zero() const {
    return comp[0].is_zero() && comp[1].is_zero() && comp[2].is_zero();
}

std::string ThreeDForm::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < 3; ++i) {
        const NCElement& p = comp[static_cast<size_t>(i)];
        if (p.is_zero()) continue;
        std::string body;
        bool neg = false;
        if (p.is_unit()) {
            body = "w" + std::to_string(i);
        } else if (p.term_count() == 1) {
            body = p.to_string();
            if (body.front() == '-') {  // sign-aware join, as for elements
                neg = true;
                body.erase(0, 1);
            }
            body += "*w" + std::to_string(i);
        } else {
            body = "(" + p.to_string() + ")*w" + std::to_string(i);
        }
        if (first)
            os << (neg ? "-" : "") << body;
        else
            os << (neg ? " - " : " + ") << body;
        first = false;
    }
    if (first) return "0";
    return os.str();
}

// -------------------------------------------------------------- ThreeDCalculus

ThreeDCalculus::ThreeDCalculus(HopfPtr h) : h_(std::move(h)) {
    const Presentation* p = h_->pres();
    if (p->gens().size() != 4)
        throw std::invalid_argument("the three-dimensional calculus needs the four-generator preset");

    // Commutation factors: forms 0 and 2 scale a, c by q^-1 and b, d by q;
    // form 1 scales by the squares.
    QRat qi = QRat::q_power(-1), q1 = QRat::q_power(1);
    QRat qi2 = QRat::q_power(-2), q2 = QRat::q_power(2);
    lambda_[0] = {qi, q1, qi, q1};
    lambda_[1] = {qi2, q2, qi2, q2};
    lambda_[2] = {qi, q1, qi, q1};

    // Commutation must descend to the quotient: scaling a rule's lhs must
    // match scaling each word of its rhs (constant terms force factor 1).
    for (const auto& rule : p->rules())
        for (int i = 0; i < 3; ++i) {
            QRat lf = lambda_word(i, rule.lhs);
            for (const auto& [w, c] : rule.rhs.terms())
                if (lambda_word(i, w) != lf)
                    throw std::logic_error(
                        "commutation factors do not respect the algebra relations");
        }

    // Universal representatives of the basis forms.
    auto defs = form_definitions();
    for (int i = 0; i < 3; ++i) {
        TensorElement t({p, p});
        for (const auto& def : defs[static_cast<size_t>(i)]) {
            t.add_term({Word{def.left}, Word{def.gen}}, def.coeff);
            // Subtract the product to stay inside ker m.
            NCElement prod = p->reduce_word({def.left, def.gen}, def.coeff);
            for (const auto& [w, c] : prod.terms()) t.add_term({w, Word{}}, -c);
        }
        omega_univ_.push_back(UnivOneForm(std::move(t)));
    }

    derive_d_table_();
    certify_();
}

QRat ThreeDCalculus::lambda(int i, int g) const {
    return lambda_[static_cast<size_t>(i)][static_cast<size_t>(g)];
}

QRat ThreeDCalculus::lambda_word(int i, const Word& w) const {
    QRat f = QRat::one();
    for (int g : w) f = f * lambda(i, g);
    return f;
}

NCElement ThreeDCalculus::commute_past(const NCElement& p, int i) const {
    NCElement out(p.pres());
    for (const auto& [w, c] : p.terms()) out.add_term(w, c * lambda_word(i, w));
    return out;
}

void ThreeDCalculus::derive_d_table_() {
    const Presentation* p = h_->pres();
    // Unknowns x(g, i, u): d(g) = sum_i (sum_u x(g,i,u) . u) w_i with u
    // ranging over the degree <= 1 monomials {1, a, b, c, d}.
    auto unknown = [](int g, int i, int u) { return (g * 3 + i) * 5 + u; };
    auto ansatz_word = [](int u) { return u == 0 ? Word{} : Word{u - 1}; };

    struct CoordLess {
        bool operator()(const std::pair<int, Word>& a, const std::pair<int, Word>& b) const {
            if (a.first != b.first) return a.first < b.first;
            return DegLexLess{}(a.second, b.second);
        }
    };
    Indexer<std::pair<int, Word>, CoordLess> coords;
    std::array<SparseVec, 60> cols;
    SparseVec rhs;
    int eq = 0;

    // Contribution of unknown block (g, i): left * x(g,i,u)-ansatz * right,
    // scaled, lands in the A-valued equation eq at form index i.
    auto contribute = [&](int eqid, int g, int i, const NCElement& left, const Word& right,
                          const QRat& scale) {
        for (int u = 0; u < 5; ++u) {
            NCElement mid = NCElement::from_word(p, ansatz_word(u));
            NCElement prod = (left * mid) * NCElement::from_word(p, right);
            for (const auto& [w, c] : prod.terms())
                cols[static_cast<size_t>(unknown(g, i, u))][coords.id({eqid, w})] += c * scale;
        }
    };

    // (A) The defining expressions of the basis forms must reproduce the
    // identity matrix: sum over definition terms of left . d(gen), with
    // d(gen) expanded through the ansatz, equals delta_{ij} w_j.
    auto defs = form_definitions();
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            int eqid = eq++;
            for (const auto& term : defs[static_cast<size_t>(j)])
                contribute(eqid, term.gen, i, NCElement::from_word(p, {term.left}), Word{},
                           term.coeff);
            if (i == j) rhs[coords.id({eqid, Word{}})] = QRat::one();
        }
    }

    // (B) The differential annihilates every defining relation: the Leibniz
    // expansion of d(lhs) - d(rhs) vanishes componentwise. A suffix behind
    // d(gen) is moved left across w_i, picking up its commutation factor.
    auto leibniz = [&](int eqid, int i, const Word& w, const QRat& scale, const QRat& sign) {
        for (size_t pos = 0; pos < w.size(); ++pos) {
            Word prefix(w.begin(), w.begin() + static_cast<long>(pos));
            Word suffix(w.begin() + static_cast<long>(pos) + 1, w.end());
            contribute(eqid, w[pos], i, NCElement::from_word(p, prefix), suffix,
                       scale * sign * lambda_word(i, suffix));
        }
    };
    for (const auto& rule : p->rules()) {
        if (rule.derived) continue;
        for (int i = 0; i < 3; ++i) {
            int eqid = eq++;
            leibniz(eqid, i, rule.lhs, QRat::one(), QRat::one());
            for (const auto& [w, c] : rule.rhs.terms())
                leibniz(eqid, i, w, c, QRat(-1));
        }
    }

    SpanSolver solver;
    for (const auto& col : cols) {
        SparseVec clean;  // += above can cancel to explicit zeros; strip them
        for (const auto& [k, c] : col)
            if (!c.is_zero()) clean.emplace(k, c);
        solver.insert(std::move(clean));
    }
    if (!solver.kernel().empty())
        throw std::logic_error("differential table is not uniquely determined");
    auto x = solver.solve(rhs);
    if (!x)
        throw std::logic_error("differential table inversion has no solution");

    for (int g = 0; g < 4; ++g)
        for (int i = 0; i < 3; ++i) {
            NCElement e(p);
            for (int u = 0; u < 5; ++u) {
                const QRat& c = (*x)[static_cast<size_t>(unknown(g, i, u))];
                if (!c.is_zero()) e.add_term(ansatz_word(u), c);
            }
            d_gen_[static_cast<size_t>(g)][static_cast<size_t>(i)] = std::move(e);
        }
}

void ThreeDCalculus::certify_() {
    const Presentation* p = h_->pres();
    // Substituting the derived table back into the defining expressions must
    // reproduce exactly the three unit vectors.
    auto defs = form_definitions();
    for (int j = 0; j < 3; ++j) {
        ThreeDForm acc = ThreeDForm::zero(p);
        for (const auto& term : defs[static_cast<size_t>(j)]) {
            ThreeDForm dg{{d_gen(term.gen)[0], d_gen(term.gen)[1], d_gen(term.gen)[2]}};
            acc = acc + dg.left(NCElement::from_word(p, {term.left})).scaled(term.coeff);
        }
        for (int i = 0; i < 3; ++i) {
            const NCElement& c = acc.comp[static_cast<size_t>(i)];
            if ((i == j && !c.is_unit()) || (i != j && !c.is_zero()))
                throw std::logic_error("derived differential table fails its defining equations");
        }
    }
    // d annihilates the relations, including the derived completion family
    // up to length 4 (longer members are consequences of the same shape).
    for (const auto& rule : p->rules()) {
        if (rule.lhs.size() > 4) continue;
        ThreeDForm lhs = d_word_(rule.lhs);
        ThreeDForm rhsf = ThreeDForm::zero(p);
        for (const auto& [w, c] : rule.rhs.terms()) rhsf = rhsf + d_word_(w).scaled(c);
        if (!(lhs - rhsf).is_zero())
            throw std::logic_error("derived differential table does not annihilate a relation");
    }
}

ThreeDForm ThreeDCalculus::d_word_(const Word& w) const {
    const Presentation* p = h_->pres();
    ThreeDForm out = ThreeDForm::zero(p);
    for (size_t pos = 0; pos < w.size(); ++pos) {
        Word prefix(w.begin(), w.begin() + static_cast<long>(pos));
        Word suffix(w.begin() + static_cast<long>(pos) + 1, w.end());
        NCElement pre = NCElement::from_word(p, prefix);
        NCElement suf = NCElement::from_word(p, suffix);
        for (int i = 0; i < 3; ++i) {
            NCElement coeff =
                (pre * d_gen(w[pos])[static_cast<size_t>(i)]) * suf.scaled(lambda_word(i, suffix));
            out.comp[static_cast<size_t>(i)] = out.comp[static_cast<size_t>(i)] + coeff;
        }
    }
    return out;
}

ThreeDForm ThreeDCalculus::d(const NCElement& u) const {
    ThreeDForm out = ThreeDForm::zero(h_->pres());
    for (const auto& [w, c] : u.terms()) out = out + d_word_(w).scaled(c);
    return out;
}

ThreeDForm ThreeDCalculus::reduce(const UnivOneForm& rho) const {
    if (rho.pres() != h_->pres())
        throw std::invalid_argument("universal form lives over the wrong algebra");
    ThreeDForm out = ThreeDForm::zero(h_->pres());
    for (const auto& [t, c] : rho.tensor().terms()) {
        NCElement u = NCElement::from_word(h_->pres(), t[0]);
        out = out + d_word_(t[1]).left(u).scaled(c);
    }
    return out;
}

ThreeDForm ThreeDCalculus::reduce(const FormalDSum& expr) const {
    const Presentation* p = h_->pres();
    ThreeDForm out = ThreeDForm::zero(p);
    for (const auto& term : expr) {
        if (term.gen < 0 || term.gen >= 4)
            throw std::invalid_argument("formal differential of an unknown generator");
        for (int i = 0; i < 3; ++i) {
            NCElement coeff =
                (term.left * d_gen(term.gen)[static_cast<size_t>(i)]) * commute_past(term.right, i);
            out.comp[static_cast<size_t>(i)] = out.comp[static_cast<size_t>(i)] + coeff;
        }
    }
    return out;
}

std::vector<UnivOneForm> ThreeDCalculus::kernel_generators() const {
    const Presentation* p = h_->pres();
    std::vector<UnivOneForm> gens;
    // d(g) - sum_i d_gen(g)[i] . w_i^univ
    for (int g = 0; g < 4; ++g) {
        UnivOneForm n = UnivOneForm::d(p->gen(g));
        for (int i = 0; i < 3; ++i)
            n = n - omega_univ_[static_cast<size_t>(i)].left(d_gen(g)[static_cast<size_t>(i)]);
        gens.push_back(std::move(n));
    }
    // w_i^univ . g - lambda(i, g) g . w_i^univ
    for (int i = 0; i < 3; ++i)
        for (int g = 0; g < 4; ++g) {
            NCElement x = p->gen(g);
            UnivOneForm n = omega_univ_[static_cast<size_t>(i)].right(x) -
                            omega_univ_[static_cast<size_t>(i)].left(x).scaled(lambda(i, g));
            gens.push_back(std::move(n));
        }
    return gens;
}

}  // namespace qpb
