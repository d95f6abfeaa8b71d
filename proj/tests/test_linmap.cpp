#include "doctest.h"

#include "qpb/linmap.hpp"
#include "qpb/presets.hpp"

using namespace qpb;

TEST_CASE("identity convolved with antipode is the unit map") {
    auto h = presets::suq2_hopf();
    const int D = 3;
    auto id = BasisLinearMap::identity_map(h->pres_ptr(), D);
    auto s = BasisLinearMap::antipode_map(*h, D);
    auto unit = BasisLinearMap::unit_map(*h, {h->pres()}, D);
    CHECK(convolve(*h, id, s) == unit);
    CHECK(convolve(*h, s, id) == unit);
    CHECK(convolve(*h, id, unit) == id);
    CHECK(convolve(*h, unit, id) == id);
}

TEST_CASE("convolution is associative") {
    auto h = presets::suq2_hopf();
    const int D = 2;
    auto id = BasisLinearMap::identity_map(h->pres_ptr(), D);
    auto s = BasisLinearMap::antipode_map(*h, D);
    auto u = BasisLinearMap::unit_map(*h, {h->pres()}, D);
    auto fg_h = convolve(*h, convolve(*h, id, s), id);
    auto f_gh = convolve(*h, id, convolve(*h, s, id));
    CHECK(fg_h == f_gh);
    CHECK(convolve(*h, convolve(*h, s, id), s) == convolve(*h, s, convolve(*h, id, s)));
    (void)u;
}

TEST_CASE("apply is linear and degree-guarded") {
    auto h = presets::suq2_hopf();
    const Presentation* p = h->pres();
    auto id = BasisLinearMap::identity_map(h->pres_ptr(), 2);
    auto a = p->gen("a"), b = p->gen("b");
    CHECK(id.apply(a + b.scaled(QRat::q_power(2))) ==
          TensorElement::single(a + b.scaled(QRat::q_power(2))));
    NCElement deep = a * a * a;
    CHECK(!id.defined_for(deep));
    CHECK_THROWS_AS(id.apply(deep), std::out_of_range);
    CHECK_THROWS_WITH_AS(id.value({0, 0, 0}), doctest::Contains("beyond truncation degree"),
                         std::out_of_range);
}

TEST_CASE("pointwise inverse on group-like domain") {
    auto h = presets::laurent_hopf();
    auto cyl = presets::cylinder_algebra();
    const Presentation* c = cyl.get();
    const int D = 4;
    // Phi(Z^n) = q^(n) Z^n inside the cylinder (Z there is generator 1, Zi 2)
    auto phi = BasisLinearMap::from_function(
        h->pres_ptr(), {c}, D, [&](const Word& w) {
            Word img;
            int n = 0;
            for (int g : w) {
                img.push_back(g == 0 ? 1 : 2);
                n += (g == 0 ? 1 : -1);
            }
            TensorElement t({c});
            t.add_term({img}, QRat::q_power(n));
            return t;
        });
    std::string strategy;
    auto inv = convolution_inverse(*h, phi, &strategy);
    CHECK(strategy == "pointwise");
    // inverse of q^n Z^n is q^-n Zi^n
    TensorElement expect({c});
    expect.add_term({{2, 2}}, QRat::q_power(-2));
    CHECK(inv.value({0, 0}) == expect);
    CHECK(convolve(*h, phi, inv) == BasisLinearMap::unit_map(*h, {c}, D));
}

TEST_CASE("antipode inverse strategy for verified algebra maps") {
    auto h = presets::suq2_hopf();
    const int D = 3;
    auto id = BasisLinearMap::identity_map(h->pres_ptr(), D);
    CHECK(is_unital_algebra_map(id));
    std::string strategy;
    auto inv = convolution_inverse(*h, id, &strategy);
    CHECK(strategy == "antipode");
    CHECK(inv == BasisLinearMap::antipode_map(*h, D));
}

TEST_CASE("triangular recursion inverse on the polynomial line") {
    auto h = presets::polyline_hopf();
    const Presentation* p = h->pres();
    const int D = 5;
    // unital, not an algebra map: f(x^2) = x^2 + x
    auto f = BasisLinearMap::from_function(
        h->pres_ptr(), {p}, D, [&](const Word& w) {
            NCElement e = NCElement::from_word(p, w);
            if (w.size() == 2) e = e + p->gen("x");
            return TensorElement::single(e);
        });
    CHECK(!is_unital_algebra_map(f));
    std::string strategy;
    auto inv = convolution_inverse(*h, f, &strategy);
    CHECK(strategy == "recursion");
    auto unit = BasisLinearMap::unit_map(*h, {p}, D);
    CHECK(convolve(*h, f, inv) == unit);
    CHECK(convolve(*h, inv, f) == unit);
    // frozen low-degree values, from the recursion by hand:
    // f^-1(x) = -x;  f^-1(x^2) = -(2(-x)x + (x^2+x)) = x^2 - x
    CHECK(inv.value({0}) == TensorElement::single(p->gen("x").scaled(QRat(-1))));
    NCElement x = p->gen("x");
    CHECK(inv.value({0, 0}) == TensorElement::single(x * x - x));
}

TEST_CASE("no strategy for form-valued maps") {
    auto h = presets::laurent_hopf();
    const Presentation* p = h->pres();
    auto omega = BasisLinearMap::from_function(
        h->pres_ptr(), {p, p}, 2, [&](const Word& w) {
            TensorElement t({p, p});
            if (!w.empty()) t.add_term({{0}, {1}}, QRat::one());
            return t;
        });
    CHECK_THROWS_WITH_AS(convolution_inverse(*h, omega),
                         "no convolution inverse strategy applies to this map",
                         std::domain_error);
}

TEST_CASE("tabulation rejects malformed values") {
    auto pres = presets::laurent_algebra();
    const Presentation* p = pres.get();
    BasisLinearMap m(pres, {p}, 2);
    CHECK_THROWS_AS(m.set_value({0, 0, 0}, TensorElement({p})), std::invalid_argument);
    CHECK_THROWS_AS(m.set_value({0}, TensorElement({p, p})), std::invalid_argument);
    CHECK_THROWS_AS(BasisLinearMap::from_function(pres, {p}, 1,
                                                  [&](const Word&) {
                                                      return TensorElement({p, p});
                                                  }),
                    std::invalid_argument);
}
