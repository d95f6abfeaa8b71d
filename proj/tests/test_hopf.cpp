#include "doctest.h"

#include "qpb/hopf.hpp"
#include "qpb/presets.hpp"

#include <random>

using namespace qpb;

TEST_CASE("q-unitary Hopf structure passes the axiom sweep") {
    auto h = presets::suq2_hopf();
    CHECK(h->check_axioms(3).empty());
}

TEST_CASE("coproduct and counit basics") {
    auto h = presets::suq2_hopf();
    const Presentation* p = h->pres();
    auto a = p->gen("a"), b = p->gen("b"), c = p->gen("c"), d = p->gen("d");

    CHECK(h->coproduct(a) == TensorElement::tensor(a, a) + TensorElement::tensor(b, c));
    CHECK(h->coproduct(p->unit()) == TensorElement::unit({p, p}));
    // determinant is group-like-ish: Delta(ad - q bc) = (ad - q bc) (x) (ad - q bc) = 1 (x) 1
    NCElement det = a * d - (b * c).scaled(QRat::q_power(1));
    CHECK(det == p->unit());
    CHECK(h->coproduct(det) == TensorElement::unit({p, p}));

    CHECK(h->counit(a) == QRat::one());
    CHECK(h->counit(b) == QRat::zero());
    CHECK(h->counit(a * d) == QRat::one());
    CHECK(h->counit(a * b * d) == QRat::zero());
}

TEST_CASE("antipode is an anti-homomorphism with the right values") {
    auto h = presets::suq2_hopf();
    const Presentation* p = h->pres();
    auto a = p->gen("a"), b = p->gen("b"), c = p->gen("c"), d = p->gen("d");

    CHECK(h->antipode(a) == d);
    CHECK(h->antipode(b) == b.scaled(-QRat::q_power(-1)));
    CHECK(h->antipode(c) == c.scaled(-QRat::q_power(1)));
    CHECK(h->antipode(d) == a);
    // S^2 is the modular squaring on off-diagonal generators
    CHECK(h->antipode(h->antipode(b)) == b.scaled(QRat::q_power(-2)));
    CHECK(h->antipode(h->antipode(c)) == c.scaled(QRat::q_power(2)));

    std::mt19937 rng(4242);
    auto basis = p->monomial_basis(3);
    std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
    for (int trial = 0; trial < 12; ++trial) {
        NCElement u = NCElement::from_word(p, basis[pick(rng)]);
        NCElement v = NCElement::from_word(p, basis[pick(rng)]);
        CHECK(h->antipode(u * v) == h->antipode(v) * h->antipode(u));
        CHECK(h->antipode_inv(h->antipode(u)) == u);
        CHECK(h->antipode(h->antipode_inv(u)) == u);
    }
}

TEST_CASE("adjoint coaction: frozen value on the corner generator") {
    auto h = presets::suq2_hopf();
    const Presentation* p = h->pres();
    auto a = p->gen("a");

    TensorElement expect({p, p});
    expect.add_term({{0}, {}}, QRat::one());                       // a (x) 1
    expect.add_term({{0}, {1, 2}}, QRat::q_power(-1));             // q^-1 a (x) bc
    expect.add_term({{1}, {2, 3}}, QRat::q_power(-1));             // q^-1 b (x) cd
    expect.add_term({{2}, {0, 1}}, -QRat::q_power(-2));            // -q^-2 c (x) ab
    expect.add_term({{3}, {1, 2}}, -QRat::q_power(-1));            // -q^-1 d (x) bc
    CHECK(h->adjoint_coaction(a) == expect);
    CHECK(h->adjoint_coaction(p->unit()) == TensorElement::unit({p, p}));
}

TEST_CASE("adjoint coaction is a counital coaction") {
    auto h = presets::suq2_hopf();
    const Presentation* p = h->pres();
    auto two = std::vector<const Presentation*>{p, p};
    for (int g = 0; g < p->gens().size(); ++g) {
        NCElement el = NCElement::from_word(p, {g});
        TensorElement ad = h->adjoint_coaction(el);
        // (Ad (x) id) Ad == (id (x) Delta) Ad
        TensorElement lhs = ad.map_leg(0, two, [&](const Word& w) {
            return h->adjoint_coaction(NCElement::from_word(p, w));
        });
        TensorElement rhs = ad.map_leg(1, two,
                                       [&](const Word& w) { return h->coproduct_word(w); });
        CHECK(lhs == rhs);
        // (id (x) eps) Ad == id
        TensorElement back = ad.map_leg_scalar(1, [&](const Word& w) { return h->counit_word(w); });
        CHECK(back == TensorElement::single(el));
    }
}

TEST_CASE("Laurent Hopf algebra is group-like") {
    auto h = presets::laurent_hopf();
    const Presentation* p = h->pres();
    auto Z = p->gen("Z"), Zi = p->gen("Zi");
    CHECK(h->check_axioms(4).empty());

    NCElement z3 = Z * Z * Z;
    CHECK(h->coproduct(z3) == TensorElement::tensor(z3, z3));
    CHECK(h->counit(z3) == QRat::one());
    CHECK(h->antipode(z3) == Zi * Zi * Zi);
    CHECK(h->adjoint_coaction(z3) == TensorElement::tensor(z3, p->unit()));
}

TEST_CASE("broken structure tables are rejected") {
    auto pres = presets::suq2_algebra();
    const Presentation* p = pres.get();
    const int A = 0, B = 1, C = 2, D = 3;
    auto two = [&](std::initializer_list<std::pair<WordTuple, QRat>> terms) {
        TensorElement t({p, p});
        for (const auto& [wt, c] : terms) t.add_term(wt, c);
        return t;
    };
    std::vector<TensorElement> cop = {
        two({{{{A}, {A}}, QRat::one()}, {{{B}, {C}}, QRat::one()}}),
        two({{{{A}, {B}}, QRat::one()}, {{{B}, {D}}, QRat::one()}}),
        two({{{{C}, {A}}, QRat::one()}, {{{D}, {C}}, QRat::one()}}),
        two({{{{C}, {B}}, QRat::one()}, {{{D}, {D}}, QRat::one()}}),
    };
    std::vector<QRat> eps = {QRat::one(), QRat::zero(), QRat::zero(), QRat::one()};
    std::vector<NCElement> anti = {
        NCElement::from_word(p, {D}),
        NCElement::from_word(p, {B}, -QRat::q_power(-1)),
        NCElement::from_word(p, {C}, -QRat::q_power(1)),
        NCElement::from_word(p, {A}),
    };

    // wrong counit (eps(b) = 1) breaks the counit law on generators
    std::vector<QRat> bad_eps = {QRat::one(), QRat::one(), QRat::zero(), QRat::one()};
    CHECK_THROWS_AS(HopfAlgebra::make(pres, cop, bad_eps, anti, anti),
                    std::invalid_argument);

    // wrong antipode sign breaks the antipode law
    std::vector<NCElement> bad_anti = anti;
    bad_anti[1] = NCElement::from_word(p, {B}, QRat::q_power(-1));
    CHECK_THROWS_AS(HopfAlgebra::make(pres, cop, eps, bad_anti, bad_anti),
                    std::invalid_argument);

    // coproduct that ignores the commutation rule is refused
    std::vector<TensorElement> bad_cop = cop;
    bad_cop[1] = two({{{{A}, {B}}, QRat::one()}, {{{B}, {D}}, QRat(2)}});
    CHECK_THROWS_AS(HopfAlgebra::make(pres, bad_cop, eps, anti, anti),
                    std::invalid_argument);

    // declared inverse antipode that is not inverse
    std::vector<NCElement> bad_inv = anti;
    CHECK_THROWS_AS(HopfAlgebra::make(pres, cop, eps, anti, bad_inv),
                    std::invalid_argument);
}
