#include "qpb/presets.hpp"

namespace qpb::presets {

namespace {
// Convenience: build an unreduced element from explicit (word, coeff) pairs.
NCElement raw(const Presentation* p, std::initializer_list<std::pair<Word, QRat>> terms) {
    NCElement e(p);
    for (const auto& [w, c] : terms) e.add_term(w, c);
    return e;
}

}  // namespace

PresPtr suq2_algebra(int max_rule_len) {
    GeneratorTable gens;
    gens.names = {"a", "b", "c", "d"};
    gens.weights = {2, 1, 1, 2};
    const int A = 0, B = 1, C = 2, D = 3;

    auto shell = Presentation::make("shell", gens, {}, {}, {}, false);
    const Presentation* s = shell.get();
    const QRat q = QRat::q_power(1);
    const QRat qi = QRat::q_power(-1);

    std::vector<RewriteRule> rules;
    rules.push_back({{B, A}, raw(s, {{{A, B}, qi}}), false, false});
    rules.push_back({{C, A}, raw(s, {{{A, C}, qi}}), false, false});
    rules.push_back({{C, B}, raw(s, {{{B, C}, QRat::one()}}), false, false});
    rules.push_back({{D, B}, raw(s, {{{B, D}, qi}}), false, false});
    rules.push_back({{D, C}, raw(s, {{{C, D}, qi}}), false, false});
    rules.push_back({{A, D}, raw(s, {{{}, QRat::one()}, {{B, C}, q}}), true, false});
    rules.push_back({{D, A}, raw(s, {{{}, QRat::one()}, {{B, C}, qi}}), true, false});

    // Derived closure: a b^i c^j d = q^{i+j} b^i c^j + q^{i+j+1} b^{i+1} c^{j+1}.
    // Without these, the overlap of (ba -> ...) with (ad -> ...) on "bad" etc.
    // leaves distinct normal forms.
    for (int len = 3; len <= max_rule_len; ++len) {
        int s2 = len - 2;  // i + j
        for (int i = 0; i <= s2; ++i) {
            int j = s2 - i;
            Word lhs;
            lhs.push_back(A);
            lhs.insert(lhs.end(), static_cast<size_t>(i), B);
            lhs.insert(lhs.end(), static_cast<size_t>(j), C);
            lhs.push_back(D);
            Word w1;
            w1.insert(w1.end(), static_cast<size_t>(i), B);
            w1.insert(w1.end(), static_cast<size_t>(j), C);
            Word w2;
            w2.insert(w2.end(), static_cast<size_t>(i) + 1, B);
            w2.insert(w2.end(), static_cast<size_t>(j) + 1, C);
            rules.push_back({lhs,
                             raw(s, {{w1, QRat::q_power(s2)}, {w2, QRat::q_power(s2 + 1)}}),
                             true, true});
        }
    }

    return Presentation::make("suq2", gens, rules, {1, -1, 1, -1});
}

PresPtr laurent_algebra() {
    GeneratorTable gens;
    gens.names = {"Z", "Zi"};
    auto shell = Presentation::make("shell", gens, {}, {}, {}, false);
    const Presentation* s = shell.get();
    std::vector<RewriteRule> rules;
    rules.push_back({{0, 1}, raw(s, {{{}, QRat::one()}}), false, false});
    rules.push_back({{1, 0}, raw(s, {{{}, QRat::one()}}), false, false});
    return Presentation::make("laurent", gens, rules, {1, -1}, {1, 0});
}

HopfPtr suq2_hopf(int max_rule_len) {
    PresPtr pres = suq2_algebra(max_rule_len);
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
    std::vector<NCElement> anti_inv = {
        NCElement::from_word(p, {D}),
        NCElement::from_word(p, {B}, -QRat::q_power(1)),
        NCElement::from_word(p, {C}, -QRat::q_power(-1)),
        NCElement::from_word(p, {A}),
    };
    return HopfAlgebra::make(pres, cop, eps, anti, anti_inv);
}

HopfPtr laurent_hopf() {
    PresPtr pres = laurent_algebra();
    const Presentation* p = pres.get();
    auto grouplike = [&](int g) {
        TensorElement t({p, p});
        t.add_term({{g}, {g}}, QRat::one());
        return t;
    };
    std::vector<TensorElement> cop = {grouplike(0), grouplike(1)};
    std::vector<QRat> eps = {QRat::one(), QRat::one()};
    std::vector<NCElement> anti = {NCElement::from_word(p, {1}), NCElement::from_word(p, {0})};
    return HopfAlgebra::make(pres, cop, eps, anti, anti);
}

PresPtr polyline_algebra() {
    GeneratorTable gens;
    gens.names = {"x"};
    return Presentation::make("polyline", gens, {});
}

HopfPtr polyline_hopf() {
    PresPtr pres = polyline_algebra();
    const Presentation* p = pres.get();
    TensorElement dx({p, p});
    dx.add_term({{0}, {}}, QRat::one());
    dx.add_term({{}, {0}}, QRat::one());
    std::vector<NCElement> anti = {NCElement::from_word(p, {0}, QRat(-1))};
    return HopfAlgebra::make(pres, {dx}, {QRat::zero()}, anti, anti);
}

BundlePtr hopf_fibration_bundle(int max_rule_len) {
    HopfPtr total = suq2_hopf(max_rule_len);
    HopfPtr structure = laurent_hopf();
    const Presentation* hp = structure->pres();
    std::vector<NCElement> pi = {
        NCElement::from_word(hp, {0}),  // a -> Z
        NCElement(hp),                  // b -> 0
        NCElement(hp),                  // c -> 0
        NCElement::from_word(hp, {1}),  // d -> Z^-1
    };
    return BundleSpec::make_homogeneous(std::move(total), std::move(structure), std::move(pi));
}

std::vector<NamedElement> sphere_base_aliases(const BundleSpec& spec) {
    const Presentation* p = spec.total();
    return {
        {"b-", p->element({0, 1})},
        {"b+", p->element({2, 3})},
        {"b3", p->element({0, 3})},
    };
}

BundlePtr cylinder_bundle(int phi_degree) {
    PresPtr cyl = cylinder_algebra();
    HopfPtr structure = laurent_hopf();
    const Presentation* cp = cyl.get();
    const Presentation* hp = structure->pres();
    auto pure = [&](Word pw, Word hw) {
        TensorElement t({cp, hp});
        t.add_term({std::move(pw), std::move(hw)}, QRat::one());
        return t;
    };
    std::vector<TensorElement> coact = {
        pure({0}, {}),   // x -> x (x) 1
        pure({1}, {0}),  // Z -> Z (x) Z
        pure({2}, {1}),  // Zi -> Zi (x) Z^-1
    };
    auto ca = ComoduleAlgebra::make(cyl, structure, std::move(coact));
    BasisLinearMap phi = BasisLinearMap::from_function(
        structure->pres_ptr(), {cp}, phi_degree, [&](const Word& w) {
            Word img;
            for (int g : w) img.push_back(g == 0 ? 1 : 2);
            TensorElement t({cp});
            t.add_term({img}, QRat::one());
            return t;
        });
    return BundleSpec::make_trivial(std::move(ca), std::move(phi));
}

namespace {

// The q-unitary algebra with one central generator x adjoined (index 0;
// the matrix generators shift up by one). Same rule family as
// suq2_algebra, plus centrality moves that push x to the front.
PresPtr line_suq2_algebra(int max_rule_len) {
    GeneratorTable gens;
    gens.names = {"x", "a", "b", "c", "d"};
    gens.weights = {1, 2, 1, 1, 2};
    const int X = 0, A = 1, B = 2, C = 3, D = 4;

    auto shell = Presentation::make("shell", gens, {}, {}, {}, false);
    const Presentation* s = shell.get();
    const QRat q = QRat::q_power(1);
    const QRat qi = QRat::q_power(-1);

    std::vector<RewriteRule> rules;
    for (int g : {A, B, C, D})
        rules.push_back({{g, X}, raw(s, {{{X, g}, QRat::one()}}), false, false});
    rules.push_back({{B, A}, raw(s, {{{A, B}, qi}}), false, false});
    rules.push_back({{C, A}, raw(s, {{{A, C}, qi}}), false, false});
    rules.push_back({{C, B}, raw(s, {{{B, C}, QRat::one()}}), false, false});
    rules.push_back({{D, B}, raw(s, {{{B, D}, qi}}), false, false});
    rules.push_back({{D, C}, raw(s, {{{C, D}, qi}}), false, false});
    rules.push_back({{A, D}, raw(s, {{{}, QRat::one()}, {{B, C}, q}}), true, false});
    rules.push_back({{D, A}, raw(s, {{{}, QRat::one()}, {{B, C}, qi}}), true, false});
    for (int len = 3; len <= max_rule_len; ++len) {
        int s2 = len - 2;
        for (int i = 0; i <= s2; ++i) {
            int j = s2 - i;
            Word lhs;
            lhs.push_back(A);
            lhs.insert(lhs.end(), static_cast<size_t>(i), B);
            lhs.insert(lhs.end(), static_cast<size_t>(j), C);
            lhs.push_back(D);
            Word w1;
            w1.insert(w1.end(), static_cast<size_t>(i), B);
            w1.insert(w1.end(), static_cast<size_t>(j), C);
            Word w2;
            w2.insert(w2.end(), static_cast<size_t>(i) + 1, B);
            w2.insert(w2.end(), static_cast<size_t>(j) + 1, C);
            rules.push_back({lhs,
                             raw(s, {{w1, QRat::q_power(s2)}, {w2, QRat::q_power(s2 + 1)}}),
                             true, true});
        }
    }
    return Presentation::make("line-suq2", gens, rules, {0, 1, -1, 1, -1});
}

}  // namespace

BundlePtr line_suq2_bundle(int phi_degree, int max_rule_len) {
    PresPtr total = line_suq2_algebra(max_rule_len);
    HopfPtr structure = suq2_hopf(max_rule_len);
    const Presentation* tp = total.get();
    const Presentation* hp = structure->pres();
    auto two = [&](std::initializer_list<std::pair<WordTuple, QRat>> terms) {
        TensorElement t({tp, hp});
        for (const auto& [wt, c] : terms) t.add_term(wt, c);
        return t;
    };
    std::vector<TensorElement> coact = {
        two({{{{0}, {}}, QRat::one()}}),                              // x -> x (x) 1
        two({{{{1}, {0}}, QRat::one()}, {{{2}, {2}}, QRat::one()}}),  // a -> a(x)a + b(x)c
        two({{{{1}, {1}}, QRat::one()}, {{{2}, {3}}, QRat::one()}}),  // b -> a(x)b + b(x)d
        two({{{{3}, {0}}, QRat::one()}, {{{4}, {2}}, QRat::one()}}),  // c -> c(x)a + d(x)c
        two({{{{3}, {1}}, QRat::one()}, {{{4}, {3}}, QRat::one()}}),  // d -> c(x)b + d(x)d
    };
    auto ca = ComoduleAlgebra::make(total, structure, std::move(coact));
    BasisLinearMap phi = BasisLinearMap::from_function(
        structure->pres_ptr(), {tp}, phi_degree, [&](const Word& w) {
            Word img;
            for (int g : w) img.push_back(g + 1);
            TensorElement t({tp});
            t.add_term({img}, QRat::one());
            return t;
        });
    return BundleSpec::make_trivial(std::move(ca), std::move(phi));
}

PresPtr cylinder_algebra() {
    GeneratorTable gens;
    gens.names = {"x", "Z", "Zi"};
    auto shell = Presentation::make("shell", gens, {}, {}, {}, false);
    const Presentation* s = shell.get();
    std::vector<RewriteRule> rules;
    rules.push_back({{1, 2}, raw(s, {{{}, QRat::one()}}), false, false});
    rules.push_back({{2, 1}, raw(s, {{{}, QRat::one()}}), false, false});
    rules.push_back({{1, 0}, raw(s, {{{0, 1}, QRat::one()}}), false, false});
    rules.push_back({{2, 0}, raw(s, {{{0, 2}, QRat::one()}}), false, false});
    return Presentation::make("cylinder", gens, rules, {0, 1, -1}, {-1, 2, 1});
}

}  // namespace qpb::presets
