#include "qpb/bundle.hpp"

#include "qpb/linsolve.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qpb {

namespace {

// Registers every (P-word, V-word) pair of total degree <= D in term order;
// because ids are handed out in registration order, a later coordinate id
// >= the returned count is guaranteed to lie outside the degree window.
size_t register_pairs(Indexer<WordTuple, WordTupleLess>& ix, const std::vector<Word>& left,
                      const std::vector<Word>& right, int D,
                      std::vector<std::pair<Word, Word>>* out) {
    for (const auto& u : left)
        for (const auto& v : right) {
            if (static_cast<int>(u.size() + v.size()) > D) continue;
            ix.id({u, v});
            if (out) out->push_back({u, v});
        }
    return ix.size();
}

SparseVec tensor_to_vec(const TensorElement& t, Indexer<WordTuple, WordTupleLess>& ix) {
    SparseVec v;
    for (const auto& [wt, c] : t.terms()) v[ix.id(wt)] = c;
    return v;
}

// Right-ideal closure span of Q inside H, on basis words <= D.
SpanSolver ideal_closure_span(const std::vector<NCElement>& Q, const Presentation* hp, int D,
                              Indexer<Word, DegLexLess>& hcoords) {
    SpanSolver span;
    std::vector<Word> basis = hp->monomial_basis(D);
    for (const auto& q : Q)
        for (const auto& w : basis) {
            NCElement e = q * NCElement::from_word(hp, w);
            if (e.is_zero()) continue;
            SparseVec v;
            for (const auto& [ew, ec] : e.terms()) v[hcoords.id(ew)] = ec;
            span.insert(std::move(v));
        }
    return span;
}

}  // namespace

// ------------------------------------------------------------ ComoduleAlgebra

ComoduleAlgebra::ComoduleAlgebra(PresPtr p, HopfPtr h, std::vector<TensorElement> coact_gen)
    : p_(std::move(p)), h_(std::move(h)), coact_gen_(std::move(coact_gen)) {}

std::shared_ptr<const ComoduleAlgebra> ComoduleAlgebra::make(PresPtr p, HopfPtr h,
                                                             std::vector<TensorElement> coact_gen,
                                                             bool validate) {
    if (static_cast<int>(coact_gen.size()) != p->gens().size())
        throw std::invalid_argument("coaction needs an image for every generator");
    for (const auto& t : coact_gen)
        if (t.leg_count() != 2 || t.legs()[0] != p.get() || t.legs()[1] != h->pres())
            throw std::invalid_argument("coaction images must have legs (total, structure)");

    auto ca = std::shared_ptr<const ComoduleAlgebra>(
        new ComoduleAlgebra(std::move(p), std::move(h), std::move(coact_gen)));
    if (validate) {
        const Presentation* pp = ca->pres();
        // counit law on generators
        for (int g = 0; g < pp->gens().size(); ++g) {
            TensorElement lhs = ca->coact_gen_[static_cast<size_t>(g)].map_leg_scalar(
                1, [&](const Word& w) { return ca->hopf().counit_word(w); });
            if (lhs != TensorElement::single(pp->gen(g)))
                throw std::invalid_argument("coaction violates the counit law on generator " +
                                            pp->gens().names[static_cast<size_t>(g)]);
        }
        // multiplicative extension must be constant on every rule
        for (const auto& rule : pp->rules()) {
            TensorElement lhs = ca->coact_word(rule.lhs);
            TensorElement rhs(std::vector<const Presentation*>{pp, ca->hopf().pres()});
            for (const auto& [w, c] : rule.rhs.terms()) rhs = rhs + ca->coact_word(w).scaled(c);
            if (lhs != rhs)
                throw std::invalid_argument("coaction is inconsistent with a rewrite rule");
        }
    }
    return ca;
}

const TensorElement& ComoduleAlgebra::coact_word(const Word& w) const {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    TensorElement t = TensorElement::unit({p_.get(), h_->pres()});
    for (int g : w) t = t.componentwise_product(coact_gen_[static_cast<size_t>(g)]);
    return memo_.emplace(w, std::move(t)).first->second;
}

TensorElement ComoduleAlgebra::coaction(const NCElement& u) const {
    TensorElement out({p_.get(), h_->pres()});
    for (const auto& [w, c] : u.terms()) out = out + coact_word(w).scaled(c);
    return out;
}

bool ComoduleAlgebra::is_coinvariant(const NCElement& u) const {
    TensorElement expect({p_.get(), h_->pres()});
    for (const auto& [w, c] : u.terms()) expect.add_term({w, Word{}}, c);
    return coaction(u) == expect;
}

std::vector<std::string> ComoduleAlgebra::check_axioms(int maxdeg) const {
    std::vector<std::string> failures;
    const Presentation* hp = h_->pres();
    std::vector<Word> basis = p_->monomial_basis(maxdeg);
    for (const auto& w : basis) {
        const TensorElement& A = coact_word(w);
        TensorElement lhs =
            A.map_leg(0, {p_.get(), hp}, [&](const Word& u) { return coact_word(u); });
        TensorElement rhs =
            A.map_leg(1, {hp, hp}, [&](const Word& u) { return h_->coproduct_word(u); });
        if (lhs != rhs)
            failures.push_back("coaction coassociativity fails at " +
                               p_->element(w, QRat::one()).to_string());
        TensorElement cu =
            A.map_leg_scalar(1, [&](const Word& u) { return h_->counit_word(u); });
        if (cu != TensorElement::single(p_->element(w, QRat::one())))
            failures.push_back("coaction counit law fails at " +
                               p_->element(w, QRat::one()).to_string());
    }
    return failures;
}

TensorElement chi(const TensorElement& x, const ComoduleAlgebra& ca) {
    if (x.leg_count() != 2 || x.legs()[0] != ca.pres() || x.legs()[1] != ca.pres())
        throw std::invalid_argument("chi input must be a tensor square over the total space");
    TensorElement spread = x.map_leg(1, {ca.pres(), ca.hopf().pres()},
                                     [&](const Word& w) { return ca.coact_word(w); });
    return spread.collapse_legs(0, 2);
}

TensorElement coact_on_form(const TensorElement& x, const ComoduleAlgebra& ca) {
    if (x.leg_count() != 2 || x.legs()[0] != ca.pres() || x.legs()[1] != ca.pres())
        throw std::invalid_argument("form coaction input must be a tensor square");
    const Presentation* pp = ca.pres();
    const Presentation* hp = ca.hopf().pres();
    TensorElement out({pp, pp, hp});
    for (const auto& [wt, c] : x.terms()) {
        const TensorElement& tu = ca.coact_word(wt[0]);
        const TensorElement& tv = ca.coact_word(wt[1]);
        for (const auto& [ut, uc] : tu.terms())
            for (const auto& [vt, vc] : tv.terms()) {
                Word hw = ut[1];
                hw.insert(hw.end(), vt[1].begin(), vt[1].end());
                NCElement hprod = hp->reduce_word(hw, c * uc * vc);
                for (const auto& [hw2, hc] : hprod.terms())
                    out.add_term({ut[0], vt[0], hw2}, hc);
            }
    }
    return out;
}

std::vector<NCElement> coinvariants(const ComoduleAlgebra& ca, int D) {
    const Presentation* pp = ca.pres();
    std::vector<Word> basis = pp->monomial_basis(D);
    Indexer<WordTuple, WordTupleLess> coords;
    SpanSolver solver;
    for (const auto& w : basis) {
        // column of (coaction - . (x) 1) at w
        SparseVec col = tensor_to_vec(ca.coact_word(w), coords);
        int unit_id = coords.id({w, Word{}});
        auto it = col.find(unit_id);
        if (it == col.end()) {
            col.emplace(unit_id, -QRat::one());
        } else {
            it->second -= QRat::one();
            if (it->second.is_zero()) col.erase(it);
        }
        solver.insert(std::move(col));
    }
    std::vector<NCElement> out;
    auto kernels = solver.kernel();
    for (const auto& combo : kernels) {
        NCElement e(pp);
        for (size_t i = 0; i < combo.size(); ++i)
            if (!combo[i].is_zero()) e.add_term(basis[i], combo[i]);
        out.push_back(std::move(e));
    }
    // closure under multiplication, re-solved into the computed span
    for (const auto& a : out)
        for (const auto& b : out) {
            if (a.degree() + b.degree() > static_cast<long>(D)) continue;
            NCElement p = a * b;
            if (!Presentation::solve_membership(p, out))
                throw std::logic_error("coinvariants are not closed under multiplication");
        }
    return out;
}

// ----------------------------------------------------------------- BundleSpec

std::shared_ptr<const BundleSpec> BundleSpec::make_homogeneous(HopfPtr total, HopfPtr structure,
                                                               std::vector<NCElement> pi_gen,
                                                               bool validate) {
    const Presentation* pp = total->pres();
    const Presentation* hp = structure->pres();
    if (static_cast<int>(pi_gen.size()) != pp->gens().size())
        throw std::invalid_argument("projection needs an image for every generator");
    for (const auto& e : pi_gen)
        if (e.pres() != hp)
            throw std::invalid_argument("projection images must live in the structure algebra");

    auto spec = std::shared_ptr<BundleSpec>(new BundleSpec());
    spec->mode_ = Mode::homogeneous;
    spec->total_hopf_ = total;
    spec->pi_gen_ = std::move(pi_gen);

    auto pi_word = [&spec, hp](const Word& w) {
        NCElement e = hp->unit();
        for (int g : w) e = e * spec->pi_gen_[static_cast<size_t>(g)];
        return e;
    };
    if (validate) {
        for (const auto& rule : pp->rules()) {
            NCElement lhs = pi_word(rule.lhs);
            NCElement rhs(hp);
            for (const auto& [w, c] : rule.rhs.terms()) rhs = rhs + pi_word(w).scaled(c);
            if (lhs != rhs)
                throw std::invalid_argument(
                    "projection does not respect the total-space relations");
        }
        for (int g = 0; g < pp->gens().size(); ++g) {
            const NCElement& img = spec->pi_gen_[static_cast<size_t>(g)];
            if (structure->counit(img) != total->counit(pp->gen(g)))
                throw std::invalid_argument("projection does not preserve the counit");
            TensorElement lhs = structure->coproduct(img);
            TensorElement rhs({hp, hp});
            const TensorElement& dp = total->coproduct_word({g});
            for (const auto& [t, c] : dp.terms())
                rhs = rhs + TensorElement::tensor(pi_word(t[0]), pi_word(t[1])).scaled(c);
            if (lhs != rhs)
                throw std::invalid_argument("projection does not intertwine the coproducts");
        }
    }

    // the induced coaction (id (x) pi) after the coproduct
    std::vector<TensorElement> cg;
    for (int g = 0; g < pp->gens().size(); ++g) {
        TensorElement t({pp, hp});
        const TensorElement& dp = total->coproduct_word({g});
        for (const auto& [tt, c] : dp.terms()) {
            NCElement img = pi_word(tt[1]);
            for (const auto& [hw, hc] : img.terms()) t.add_term({tt[0], hw}, c * hc);
        }
        cg.push_back(std::move(t));
    }
    spec->ca_ = ComoduleAlgebra::make(total->pres_ptr(), structure, std::move(cg), validate);
    return spec;
}

std::shared_ptr<const BundleSpec> BundleSpec::make_trivial(ComodulePtr ca, BasisLinearMap phi,
                                                           bool validate) {
    const Presentation* hp = ca->hopf().pres();
    const Presentation* pp = ca->pres();
    if (phi.domain().get() != hp)
        throw std::invalid_argument("trivialisation domain must be the structure algebra");
    if (phi.target_legs() != std::vector<const Presentation*>{pp})
        throw std::invalid_argument("trivialisation must be valued in the total space");
    if (phi.value(Word{}) != TensorElement::unit({pp}))
        throw std::invalid_argument("trivialisation must be unital");

    if (validate) {
        std::vector<Word> basis = hp->monomial_basis(phi.max_degree());
        for (const auto& a : basis) {
            NCElement img = phi.value(a).collapse();
            TensorElement lhs = ca->coaction(img);
            TensorElement rhs({pp, hp});
            const TensorElement& da = ca->hopf().coproduct_word(a);
            for (const auto& [t, c] : da.terms()) {
                const TensorElement& v = phi.value(t[0]);
                for (const auto& [vw, vc] : v.terms()) rhs.add_term({vw[0], t[1]}, c * vc);
            }
            if (lhs != rhs)
                throw std::invalid_argument("trivialisation does not intertwine the coactions");
        }
    }

    auto spec = std::shared_ptr<BundleSpec>(new BundleSpec());
    spec->mode_ = Mode::trivial;
    spec->ca_ = std::move(ca);
    spec->phi_inv_ = convolution_inverse(spec->ca_->hopf(), phi);
    spec->phi_ = std::move(phi);
    return spec;
}

NCElement BundleSpec::pi_apply(const NCElement& u) const {
    if (mode_ != Mode::homogeneous)
        throw std::logic_error("projection is only available in homogeneous mode");
    const Presentation* hp = ca_->hopf().pres();
    NCElement out(hp);
    for (const auto& [w, c] : u.terms()) {
        NCElement e = hp->unit().scaled(c);
        for (int g : w) e = e * pi_gen_[static_cast<size_t>(g)];
        out = out + e;
    }
    return out;
}

const std::vector<NCElement>& BundleSpec::base_basis(int D) const {
    auto it = coinv_cache_.find(D);
    if (it == coinv_cache_.end())
        it = coinv_cache_.emplace(D, coinvariants(*ca_, D)).first;
    return it->second;
}

// ----------------------------------------------------------- TranslationTable

namespace {

// tau entry for one H-basis word; shared solver state in homogeneous mode.
struct PreimageFinder {
    const BundleSpec& spec;
    int budget;
    Indexer<Word, DegLexLess> hcoords;
    SpanSolver span;
    std::vector<Word> pwords;  // insertion order, degree-increasing

    PreimageFinder(const BundleSpec& s, int b) : spec(s), budget(b) {
        std::vector<Word> basis = spec.total()->monomial_basis(budget);
        for (const auto& w : basis) {
            NCElement img = spec.pi_apply(NCElement::from_word(spec.total(), w));
            if (img.is_zero()) continue;
            SparseVec v;
            for (const auto& [iw, ic] : img.terms()) v[hcoords.id(iw)] = ic;
            span.insert(std::move(v));
            pwords.push_back(w);
        }
    }

    // Minimal-degree preimage: pivots are claimed in degree order, so the
    // echelon's particular solution is the first basis solution in term
    // order.
    NCElement find(const Word& a) {
        SparseVec target;
        target[hcoords.id(a)] = QRat::one();
        auto sol = span.solve(target);
        if (!sol)
            throw std::runtime_error("pi-preimage not found <= " + std::to_string(budget));
        NCElement u(spec.total());
        for (size_t i = 0; i < sol->size(); ++i)
            if (!(*sol)[i].is_zero()) u.add_term(pwords[i], (*sol)[i]);
        return u;
    }
};

TensorElement tau_entry(const BundleSpec& spec, const Word& a, PreimageFinder* pf) {
    const Presentation* pp = spec.total();
    TensorElement out({pp, pp});
    if (spec.mode() == BundleSpec::Mode::homogeneous) {
        NCElement u = pf->find(a);
        const HopfAlgebra* th = spec.total_hopf();
        for (const auto& [w, c] : u.terms()) {
            const TensorElement& dw = th->coproduct_word(w);
            for (const auto& [t, tc] : dw.terms()) {
                NCElement s = th->antipode_word(t[0]);
                for (const auto& [sw, sc] : s.terms()) out.add_term({sw, t[1]}, c * tc * sc);
            }
        }
    } else {
        const TensorElement& da = spec.hopf().coproduct_word(a);
        for (const auto& [t, c] : da.terms()) {
            const TensorElement& vi = spec.phi_inv()->value(t[0]);
            const TensorElement& vp = spec.phi()->value(t[1]);
            for (const auto& [iw, ic] : vi.terms())
                for (const auto& [pw, pc] : vp.terms())
                    out.add_term({iw[0], pw[0]}, c * ic * pc);
        }
    }
    // certification: chi applied to the entry must be 1 (x) a
    TensorElement expect({pp, spec.hopf().pres()});
    expect.add_term({Word{}, a}, QRat::one());
    if (chi(out, spec.comodule()) != expect)
        throw std::logic_error("translation entry fails its chi certificate");
    return out;
}

}  // namespace

TranslationTable TranslationTable::build(const BundleSpec& spec, int D) {
    if (spec.mode() == BundleSpec::Mode::trivial && spec.phi()->max_degree() < D)
        throw std::invalid_argument("trivialisation degree budget is below the requested degree");
    TranslationTable t;
    t.degree_ = D;
    std::optional<PreimageFinder> pf;
    if (spec.mode() == BundleSpec::Mode::homogeneous) pf.emplace(spec, D);
    std::vector<Word> basis = spec.hopf().pres()->monomial_basis(D);
    for (const auto& a : basis) t.entries_.emplace(a, tau_entry(spec, a, pf ? &*pf : nullptr));
    return t;
}

const TensorElement& TranslationTable::value(const Word& a) const {
    auto it = entries_.find(a);
    if (it == entries_.end()) throw std::out_of_range("translation table has no such entry");
    return it->second;
}

TensorElement TranslationTable::apply(const NCElement& a) const {
    const Presentation* pp = entries_.begin()->second.legs()[0];
    TensorElement out({pp, pp});
    for (const auto& [w, c] : a.terms()) out = out + value(w).scaled(c);
    return out;
}

TensorElement translation_map(const NCElement& a, const BundleSpec& spec) {
    int D = static_cast<int>(a.degree());
    std::optional<PreimageFinder> pf;
    if (spec.mode() == BundleSpec::Mode::homogeneous) pf.emplace(spec, D);
    const Presentation* pp = spec.total();
    TensorElement out({pp, pp});
    for (const auto& [w, c] : a.terms())
        out = out + tau_entry(spec, w, pf ? &*pf : nullptr).scaled(c);
    return out;
}

// ------------------------------------------------------------ freeness report

FreenessReport freeness_check(const BundleSpec& spec, int D) {
    FreenessReport rep;
    rep.degree = D;
    rep.pass = true;
    std::optional<PreimageFinder> pf;
    if (spec.mode() == BundleSpec::Mode::homogeneous) pf.emplace(spec, D);
    std::vector<Word> basis = spec.hopf().pres()->monomial_basis(D);
    for (const auto& a : basis) {
        FreenessLine line;
        line.a = a;
        try {
            TensorElement x = tau_entry(spec, a, pf ? &*pf : nullptr);
            line.pass = true;
            line.witness = x.to_string();
        } catch (const std::exception&) {
            line.pass = false;
        }
        rep.pass = rep.pass && line.pass;
        rep.lines.push_back(std::move(line));
    }

    // left-linearity spot check: chi(w.x) = (w (x) 1) chi(x)
    const Presentation* pp = spec.total();
    rep.left_linear = true;
    std::vector<NCElement> ws = {pp->gen(0), pp->gen(pp->gens().size() - 1) * pp->gen(0)};
    std::vector<TensorElement> xs = {
        TensorElement::tensor(pp->gen(0), pp->gen(pp->gens().size() - 1)),
        TensorElement::tensor(pp->unit(), pp->gen(0)) +
            TensorElement::tensor(pp->gen(1), pp->gen(0))};
    for (const auto& w : ws)
        for (const auto& x : xs) {
            TensorElement wx({pp, pp});
            for (const auto& [wt, c] : x.terms()) {
                NCElement prod = w * pp->element(wt[0], c);
                for (const auto& [pw, pc] : prod.terms()) wx.add_term({pw, wt[1]}, pc);
            }
            TensorElement lhs = chi(wx, spec.comodule());
            TensorElement factor({pp, spec.hopf().pres()});
            for (const auto& [ww, wc] : w.terms()) factor.add_term({ww, Word{}}, wc);
            TensorElement rhs = factor.componentwise_product(chi(x, spec.comodule()));
            if (lhs != rhs) rep.left_linear = false;
        }
    rep.pass = rep.pass && rep.left_linear;
    return rep;
}

// ----------------------------------------------------------- exactness report

ExactnessReport exactness_check(const BundleSpec& spec, int D, int slack) {
    ExactnessReport rep;
    rep.degree = D;
    const Presentation* pp = spec.total();

    Indexer<WordTuple, WordTupleLess> coords;
    std::vector<Word> basis = pp->monomial_basis(D);
    std::vector<std::pair<Word, Word>> pairs;
    size_t window = register_pairs(coords, basis, basis, D, &pairs);

    // exact kernel of chi on the pair-word span
    SpanSolver chi_solver;
    Indexer<WordTuple, WordTupleLess> img_coords;
    for (const auto& [u, v] : pairs) {
        TensorElement t({pp, pp});
        t.add_term({u, v}, QRat::one());
        chi_solver.insert(tensor_to_vec(chi(t, spec.comodule()), img_coords));
    }
    std::vector<SparseVec> kvecs;
    auto chi_kernel = chi_solver.kernel();
    for (const auto& combo : chi_kernel) {
        SparseVec v;
        for (size_t i = 0; i < combo.size(); ++i)
            if (!combo[i].is_zero()) v[coords.id({pairs[i].first, pairs[i].second})] = combo[i];
        kvecs.push_back(std::move(v));
    }
    rep.dim_ker_chi = kvecs.size();

    // horizontal span: u . d(b) . v generated within D + slack, then
    // intersected back into the degree-D window
    std::vector<SparseVec> hor_gen;
    {
        SpanSolver indep;
        std::vector<Word> wide = pp->monomial_basis(D + slack);
        const std::vector<NCElement>& coinv = spec.base_basis(D + slack);
        for (const auto& b : coinv) {
            if (b.degree() == 0) continue;  // d kills constants
            UnivOneForm db = UnivOneForm::d(b);
            for (const auto& u : wide)
                for (const auto& v : wide) {
                    if (static_cast<long>(u.size() + v.size()) + b.degree() >
                        static_cast<long>(D + slack))
                        continue;
                    UnivOneForm g = db.left(NCElement::from_word(pp, u))
                                        .right(NCElement::from_word(pp, v));
                    if (g.is_zero()) continue;
                    SparseVec vec = tensor_to_vec(g.tensor(), coords);
                    size_t r0 = indep.rank();
                    indep.insert(vec);
                    if (indep.rank() > r0) hor_gen.push_back(std::move(vec));
                }
        }
    }
    // kernel of the outside-window restriction = combinations that live
    // entirely inside the window
    SpanSolver outside;
    for (const auto& g : hor_gen) {
        SparseVec r;
        for (const auto& [k, c] : g)
            if (static_cast<size_t>(k) >= window) r.emplace(k, c);
        outside.insert(std::move(r));
    }
    SpanSolver hspan;
    std::vector<SparseVec> hbasis;
    auto out_kernel = outside.kernel();
    for (const auto& combo : out_kernel) {
        SparseVec w;
        for (size_t i = 0; i < combo.size(); ++i) sparse_axpy(w, combo[i], hor_gen[i]);
        if (w.empty()) continue;
        size_t r0 = hspan.rank();
        hspan.insert(w);
        if (hspan.rank() > r0) hbasis.push_back(std::move(w));
    }
    rep.dim_horizontal = hspan.rank();

    SpanSolver kspan;
    for (const auto& v : kvecs) kspan.insert(v);
    rep.horizontal_in_kernel = true;
    for (const auto& w : hbasis)
        if (!kspan.contains(w)) rep.horizontal_in_kernel = false;
    rep.kernel_in_horizontal = true;
    for (const auto& v : kvecs)
        if (!hspan.contains(v)) rep.kernel_in_horizontal = false;
    rep.pass = rep.dim_ker_chi == rep.dim_horizontal && rep.horizontal_in_kernel &&
               rep.kernel_in_horizontal;
    return rep;
}

// --------------------------------------------------- trivial-bundle structure

TensorElement trivial_iso_theta(const NCElement& u, const BundleSpec& spec) {
    if (spec.mode() != BundleSpec::Mode::trivial)
        throw std::logic_error("theta needs a trivialisation");
    const Presentation* pp = spec.total();
    const Presentation* hp = spec.hopf().pres();
    TensorElement iterated = spec.comodule().coaction(u).map_leg(
        1, {hp, hp}, [&](const Word& w) { return spec.hopf().coproduct_word(w); });
    TensorElement out({pp, hp});
    for (const auto& [t, c] : iterated.terms()) {
        const TensorElement& inv = spec.phi_inv()->value(t[1]);
        for (const auto& [iw, ic] : inv.terms()) {
            NCElement prod = pp->element(t[0], c * ic) * pp->element(iw[0], QRat::one());
            for (const auto& [w, wc] : prod.terms()) out.add_term({w, t[2]}, wc);
        }
    }
    // the first leg must be coinvariant, H-word by H-word
    std::map<Word, NCElement, DegLexLess> grouped;
    for (const auto& [t, c] : out.terms()) {
        auto it = grouped.find(t[1]);
        if (it == grouped.end()) it = grouped.emplace(t[1], NCElement(pp)).first;
        it->second.add_term(t[0], c);
    }
    for (const auto& [a, part] : grouped)
        if (!spec.comodule().is_coinvariant(part))
            throw std::runtime_error("Phi is not an intertwiner");
    return out;
}

NCElement trivial_iso_theta_inv(const TensorElement& x, const BundleSpec& spec) {
    if (spec.mode() != BundleSpec::Mode::trivial)
        throw std::logic_error("theta needs a trivialisation");
    const Presentation* pp = spec.total();
    NCElement out(pp);
    for (const auto& [t, c] : x.terms()) {
        const TensorElement& v = spec.phi()->value(t[1]);
        for (const auto& [vw, vc] : v.terms())
            out = out + pp->element(t[0], c * vc) * pp->element(vw[0], QRat::one());
    }
    return out;
}

TensorElement crossed_product_multiply(const TensorElement& x, const TensorElement& y,
                                       const BundleSpec& spec) {
    if (spec.mode() != BundleSpec::Mode::trivial)
        throw std::logic_error("crossed product needs a trivialisation");
    const Presentation* pp = spec.total();
    const Presentation* hp = spec.hopf().pres();
    const HopfAlgebra& h = spec.hopf();
    auto triple = [&](const Word& a) {
        return h.coproduct_word(a).map_leg(1, {hp, hp},
                                           [&](const Word& w) { return h.coproduct_word(w); });
    };
    try {
        TensorElement out({pp, hp});
        for (const auto& [xt, xc] : x.terms())
            for (const auto& [yt, yc] : y.terms()) {
                TensorElement t1 = triple(xt[1]);
                TensorElement t2 = triple(yt[1]);
                for (const auto& [a, ac] : t1.terms())
                    for (const auto& [b, bc] : t2.terms()) {
                        Word mid = a[1];
                        mid.insert(mid.end(), b[1].begin(), b[1].end());
                        NCElement mid_red = hp->reduce_word(mid, QRat::one());
                        NCElement inv_part = spec.phi_inv()->apply(mid_red).collapse();
                        NCElement p = pp->element(xt[0], xc * yc * ac * bc) *
                                      spec.phi()->value(a[0]).collapse() *
                                      pp->element(yt[0], QRat::one()) *
                                      spec.phi()->value(b[0]).collapse() * inv_part;
                        Word tail = a[2];
                        tail.insert(tail.end(), b[2].begin(), b[2].end());
                        NCElement hred = hp->reduce_word(tail, QRat::one());
                        for (const auto& [pw, pc] : p.terms())
                            for (const auto& [hw, hc] : hred.terms())
                                out.add_term({pw, hw}, pc * hc);
                    }
            }
        return out;
    } catch (const std::out_of_range&) {
        throw std::domain_error("crossed-product truncation overflow");
    }
}

// ------------------------------------------------------------ AssociatedBundle

AssociatedBundle::AssociatedBundle(BundlePtr spec, PresPtr fibre,
                                   std::vector<TensorElement> rho_gen)
    : spec_(std::move(spec)), fibre_(std::move(fibre)), rho_gen_(std::move(rho_gen)) {}

std::shared_ptr<const AssociatedBundle> AssociatedBundle::make(BundlePtr spec, PresPtr fibre,
                                                               std::vector<TensorElement> rho_gen,
                                                               bool validate) {
    const Presentation* hp = spec->hopf().pres();
    if (static_cast<int>(rho_gen.size()) != fibre->gens().size())
        throw std::invalid_argument("fibre coaction needs an image for every generator");
    for (const auto& t : rho_gen)
        if (t.leg_count() != 2 || t.legs()[0] != fibre.get() || t.legs()[1] != hp)
            throw std::invalid_argument("fibre coaction images must have legs (fibre, structure)");

    auto ab = std::shared_ptr<const AssociatedBundle>(
        new AssociatedBundle(std::move(spec), std::move(fibre), std::move(rho_gen)));
    if (validate) {
        const Presentation* vp = ab->fibre();
        for (int g = 0; g < vp->gens().size(); ++g) {
            TensorElement cu = ab->rho_gen_[static_cast<size_t>(g)].map_leg_scalar(
                1, [&](const Word& w) { return ab->bundle().hopf().counit_word(w); });
            if (cu != TensorElement::single(vp->gen(g)))
                throw std::invalid_argument("fibre coaction violates the counit law");
        }
        for (const auto& rule : vp->rules()) {
            TensorElement lhs = ab->rho_word(rule.lhs);
            TensorElement rhs(std::vector<const Presentation*>{vp, hp});
            for (const auto& [w, c] : rule.rhs.terms()) rhs = rhs + ab->rho_word(w).scaled(c);
            if (lhs != rhs)
                throw std::invalid_argument(
                    "fibre coaction is inconsistent with a rewrite rule");
        }
    }
    return ab;
}

const TensorElement& AssociatedBundle::rho_word(const Word& w) const {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    const Presentation* hp = spec_->hopf().pres();
    TensorElement acc = TensorElement::unit({fibre_.get(), hp});
    for (int g : w) {
        // opposite-product convention: structure legs multiply in reverse
        const TensorElement& gi = rho_gen_[static_cast<size_t>(g)];
        TensorElement next({fibre_.get(), hp});
        for (const auto& [at, ac] : acc.terms())
            for (const auto& [gt, gc] : gi.terms()) {
                Word vw = at[0];
                vw.insert(vw.end(), gt[0].begin(), gt[0].end());
                NCElement vred = fibre_->reduce_word(vw, ac * gc);
                Word hw = gt[1];
                hw.insert(hw.end(), at[1].begin(), at[1].end());
                NCElement hred = hp->reduce_word(hw, QRat::one());
                for (const auto& [vw2, vc] : vred.terms())
                    for (const auto& [hw2, hc] : hred.terms()) next.add_term({vw2, hw2}, vc * hc);
            }
        acc = std::move(next);
    }
    return memo_.emplace(w, std::move(acc)).first->second;
}

TensorElement AssociatedBundle::rho(const NCElement& v) const {
    TensorElement out({fibre_.get(), spec_->hopf().pres()});
    for (const auto& [w, c] : v.terms()) out = out + rho_word(w).scaled(c);
    return out;
}

std::vector<std::string> AssociatedBundle::check_axioms(int maxdeg) const {
    std::vector<std::string> failures;
    const Presentation* hp = spec_->hopf().pres();
    std::vector<Word> basis = fibre_->monomial_basis(maxdeg);
    for (const auto& w : basis) {
        const TensorElement& A = rho_word(w);
        TensorElement lhs =
            A.map_leg(0, {fibre_.get(), hp}, [&](const Word& u) { return rho_word(u); });
        TensorElement rhs = A.map_leg(
            1, {hp, hp}, [&](const Word& u) { return spec_->hopf().coproduct_word(u); });
        if (lhs != rhs)
            failures.push_back("fibre coaction coassociativity fails at " +
                               fibre_->element(w, QRat::one()).to_string());
        TensorElement cu = A.map_leg_scalar(
            1, [&](const Word& u) { return spec_->hopf().counit_word(u); });
        if (cu != TensorElement::single(fibre_->element(w, QRat::one())))
            failures.push_back("fibre coaction counit law fails at " +
                               fibre_->element(w, QRat::one()).to_string());
    }
    return failures;
}

TensorElement AssociatedBundle::delta_E(const TensorElement& x) const {
    const Presentation* pp = spec_->total();
    const Presentation* hp = spec_->hopf().pres();
    if (x.leg_count() != 2 || x.legs()[0] != pp || x.legs()[1] != fibre_.get())
        throw std::invalid_argument("total-space coaction input must have legs (total, fibre)");
    TensorElement out({pp, fibre_.get(), hp});
    for (const auto& [t, c] : x.terms()) {
        const TensorElement& tp = spec_->comodule().coact_word(t[0]);
        const TensorElement& tv = rho_word(t[1]);
        for (const auto& [pt, pc] : tp.terms())
            for (const auto& [vt, vc] : tv.terms()) {
                Word hw = pt[1];
                hw.insert(hw.end(), vt[1].begin(), vt[1].end());
                NCElement hred = hp->reduce_word(hw, c * pc * vc);
                for (const auto& [hw2, hc] : hred.terms())
                    out.add_term({pt[0], vt[0], hw2}, hc);
            }
    }
    return out;
}

AssociatedPtr associated_self_fibre(BundlePtr spec) {
    const HopfAlgebra& h = spec->hopf();
    const Presentation* hp = h.pres();
    std::vector<TensorElement> rho_gen;
    for (int g = 0; g < hp->gens().size(); ++g) {
        TensorElement t({hp, hp});
        const TensorElement& dg = h.coproduct_word({g});
        for (const auto& [tt, c] : dg.terms()) {
            NCElement s = h.antipode_word(tt[0]);
            for (const auto& [sw, sc] : s.terms()) t.add_term({tt[1], sw}, c * sc);
        }
        rho_gen.push_back(std::move(t));
    }
    return AssociatedBundle::make(std::move(spec), h.pres_ptr(), std::move(rho_gen));
}

std::vector<TensorElement> associated_coinvariants(const AssociatedBundle& ab, int D) {
    const Presentation* pp = ab.bundle().total();
    const Presentation* vp = ab.fibre();
    std::vector<Word> pbasis = pp->monomial_basis(D);
    std::vector<Word> vbasis = vp->monomial_basis(D);
    std::vector<std::pair<Word, Word>> pairs;
    for (const auto& u : pbasis)
        for (const auto& v : vbasis)
            if (static_cast<int>(u.size() + v.size()) <= D) pairs.push_back({u, v});

    Indexer<WordTuple, WordTupleLess> coords;
    SpanSolver solver;
    for (const auto& [u, v] : pairs) {
        TensorElement t({pp, vp});
        t.add_term({u, v}, QRat::one());
        SparseVec col = tensor_to_vec(ab.delta_E(t), coords);
        int unit_id = coords.id({u, v, Word{}});
        auto it = col.find(unit_id);
        if (it == col.end()) {
            col.emplace(unit_id, -QRat::one());
        } else {
            it->second -= QRat::one();
            if (it->second.is_zero()) col.erase(it);
        }
        solver.insert(std::move(col));
    }
    std::vector<TensorElement> out;
    auto kernels = solver.kernel();
    for (const auto& combo : kernels) {
        TensorElement e({pp, vp});
        for (size_t i = 0; i < combo.size(); ++i)
            if (!combo[i].is_zero()) e.add_term({pairs[i].first, pairs[i].second}, combo[i]);
        out.push_back(std::move(e));
    }
    // the base embeds: b (x) 1 is a fixed point for every coinvariant b
    const std::vector<NCElement>& base = ab.bundle().base_basis(D);
    for (const auto& b : base) {
        if (b.degree() > static_cast<long>(D)) continue;
        TensorElement jb({pp, vp});
        for (const auto& [w, c] : b.terms()) jb.add_term({w, Word{}}, c);
        TensorElement expect({pp, vp, ab.bundle().hopf().pres()});
        for (const auto& [w, c] : b.terms()) expect.add_term({w, Word{}, Word{}}, c);
        if (ab.delta_E(jb) != expect)
            throw std::logic_error("base element fails to embed into the associated bundle");
    }
    return out;
}

// -------------------------------------------------------- calculus agreement

AgreementReport calculus_agreement_check(const BundleSpec& spec, const CalculusIdeal& ideal,
                                         int D) {
    AgreementReport rep;
    rep.degree = D;
    rep.pass = true;
    const Presentation* pp = spec.total();
    const Presentation* hp = spec.hopf().pres();

    // bimodule closure of N on pair-word coordinates
    Indexer<WordTuple, WordTupleLess> pcoords;
    SpanSolver nclosure;
    std::vector<Word> basis = pp->monomial_basis(D);
    for (const auto& n : ideal.N) {
        for (const auto& u : basis)
            for (const auto& v : basis) {
                if (static_cast<int>(u.size() + v.size()) > D) continue;
                UnivOneForm g =
                    n.left(NCElement::from_word(pp, u)).right(NCElement::from_word(pp, v));
                if (g.is_zero()) continue;
                nclosure.insert(tensor_to_vec(g.tensor(), pcoords));
            }
    }
    // right-ideal closure of Q on structure-algebra coordinates
    Indexer<Word, DegLexLess> hcoords;
    SpanSolver qclosure = ideal_closure_span(ideal.Q, hp, D, hcoords);

    for (const auto& n : ideal.N) {
        AgreementLine line;
        line.generator = n.to_string();

        // coaction lands in closure(N) (x) H: block-decompose by the
        // structure leg (span vectors are pure tensors against it)
        TensorElement ad = coact_on_form(n.tensor(), spec.comodule());
        std::map<Word, SparseVec, DegLexLess> blocks;
        bool ok = true;
        for (const auto& [t, c] : ad.terms()) blocks[t[2]][pcoords.id({t[0], t[1]})] = c;
        for (const auto& [hw, vec] : blocks)
            if (!nclosure.contains(vec)) ok = false;
        line.coaction_stable = ok;

        // chi lands in P (x) closure(Q): block-decompose by the total leg
        TensorElement cx = chi(n.tensor(), spec.comodule());
        std::map<Word, SparseVec, DegLexLess> pblocks;
        ok = true;
        for (const auto& [t, c] : cx.terms()) pblocks[t[0]][hcoords.id(t[1])] = c;
        for (const auto& [pw, vec] : pblocks)
            if (!qclosure.contains(vec)) ok = false;
        line.chi_in_ideal = ok;

        rep.pass = rep.pass && line.coaction_stable && line.chi_in_ideal;
        rep.lines.push_back(std::move(line));
    }
    return rep;
}

TensorElement chi_N(const UnivOneForm& rho, const BundleSpec& spec, const CalculusIdeal& ideal,
                    int D) {
    const Presentation* pp = spec.total();
    const Presentation* hp = spec.hopf().pres();
    Indexer<Word, DegLexLess> hcoords;
    std::vector<Word> hwords;  // id -> word, for reassembly
    SpanSolver qclosure;
    {
        std::vector<Word> basis = hp->monomial_basis(D);
        for (const auto& q : ideal.Q)
            for (const auto& w : basis) {
                NCElement e = q * NCElement::from_word(hp, w);
                if (e.is_zero()) continue;
                SparseVec v;
                for (const auto& [ew, ec] : e.terms()) {
                    size_t before = hcoords.size();
                    int id = hcoords.id(ew);
                    if (hcoords.size() > before) hwords.push_back(ew);
                    v[id] = ec;
                }
                qclosure.insert(std::move(v));
            }
    }

    TensorElement cx = chi(rho.tensor(), spec.comodule());
    std::map<Word, SparseVec, DegLexLess> pblocks;
    for (const auto& [t, c] : cx.terms()) {
        size_t before = hcoords.size();
        int id = hcoords.id(t[1]);
        if (hcoords.size() > before) hwords.push_back(t[1]);
        pblocks[t[0]][id] = c;
    }
    TensorElement out({pp, hp});
    for (const auto& [pw, vec] : pblocks) {
        SparseVec red = qclosure.residual(vec);
        for (const auto& [id, c] : red)
            out.add_term({pw, hwords[static_cast<size_t>(id)]}, c);
    }
    return out;
}

}  // namespace qpb
