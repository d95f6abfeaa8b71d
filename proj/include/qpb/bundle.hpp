#pragma once

// Comodule algebras and principal-bundle machinery at truncated degree.
//
// A ComoduleAlgebra carries a right coaction P -> P (x) H given on
// generators and extended multiplicatively (componentwise product on the
// two legs). On top of it sit: the canonical map chi(u (x) v) =
// u v_(0) (x) v_(1); coinvariant bases by exact kernel computation;
// bundle constructions in two modes (a structure projection pi from a Hopf
// total space, or a trivialisation Phi with its convolution inverse);
// translation tables with every entry certified by chi; freeness and
// exactness reports; the crossed-product picture of a trivial bundle; and
// associated bundles with a fibre coacted through the opposite-product
// convention.
//
// Degrees are always truncation budgets: reports state the degree they
// certify and never claim more.

#include "qpb/diffcalc.hpp"
#include "qpb/hopf.hpp"
#include "qpb/linmap.hpp"
#include "qpb/presentation.hpp"
#include "qpb/tensor.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qpb {

class ComoduleAlgebra {
public:
    // coact_gen[i] is the coaction image of generator i: legs (P, H).
    // Validation checks leg profiles, the counit law on generators, and
    // consistency of the multiplicative extension with every rule of P.
    static std::shared_ptr<const ComoduleAlgebra> make(PresPtr p, HopfPtr h,
                                                       std::vector<TensorElement> coact_gen,
                                                       bool validate = true);

    const Presentation* pres() const { return p_.get(); }
    const PresPtr& pres_ptr() const { return p_; }
    const HopfAlgebra& hopf() const { return *h_; }
    const HopfPtr& hopf_ptr() const { return h_; }

    // Multiplicative extension, memoized per reduced word; legs (P, H).
    const TensorElement& coact_word(const Word& w) const;
    TensorElement coaction(const NCElement& u) const;
    bool is_coinvariant(const NCElement& u) const;

    // Coassociativity and the counit law on all basis words <= maxdeg;
    // returns human-readable failure descriptions (empty = pass).
    std::vector<std::string> check_axioms(int maxdeg) const;

private:
    ComoduleAlgebra(PresPtr p, HopfPtr h, std::vector<TensorElement> coact_gen);

    PresPtr p_;
    HopfPtr h_;
    std::vector<TensorElement> coact_gen_;
    mutable std::map<Word, TensorElement, DegLexLess> memo_;
};

using ComodulePtr = std::shared_ptr<const ComoduleAlgebra>;

// chi(u (x) v) = u v_(0) (x) v_(1), extended bilinearly; legs (P, H).
TensorElement chi(const TensorElement& x, const ComoduleAlgebra& ca);

// Coaction on a tensor square: u (x) v -> u_(0) (x) v_(0) (x) u_(1) v_(1),
// legs (P, P, H).
TensorElement coact_on_form(const TensorElement& x, const ComoduleAlgebra& ca);

// Exact kernel of (coaction - . (x) 1) on the span of basis words <= D,
// in normal-form coordinates; verified closed under multiplication within
// the degree budget (products re-solved into the computed span).
std::vector<NCElement> coinvariants(const ComoduleAlgebra& ca, int D);

// Principal-bundle data. Two construction modes:
//  * homogeneous — the total space is itself a Hopf algebra and the
//    structure algebra is its quotient through a projection pi given on
//    generators; the coaction is (id (x) pi) after the coproduct.
//  * trivial — the coaction is given directly and a trivialisation
//    Phi: H -> P (unital, intertwining the coactions, convolution
//    invertible) is tabulated on the H-basis within its degree budget.
class BundleSpec {
public:
    enum class Mode { homogeneous, trivial };

    // Validates: pi respects every rule of P, preserves counits, and
    // intertwines the coproducts on generators.
    static std::shared_ptr<const BundleSpec> make_homogeneous(HopfPtr total, HopfPtr structure,
                                                              std::vector<NCElement> pi_gen,
                                                              bool validate = true);
    // Validates: Phi(1) = 1 and the intertwiner law on basis words within
    // Phi's degree budget; the convolution inverse is always computed (its
    // existence is part of the contract and failure throws).
    static std::shared_ptr<const BundleSpec> make_trivial(ComodulePtr ca, BasisLinearMap phi,
                                                          bool validate = true);

    Mode mode() const { return mode_; }
    const ComoduleAlgebra& comodule() const { return *ca_; }
    const ComodulePtr& comodule_ptr() const { return ca_; }
    const Presentation* total() const { return ca_->pres(); }
    const HopfAlgebra& hopf() const { return ca_->hopf(); }

    // Homogeneous mode (null/empty otherwise).
    const HopfAlgebra* total_hopf() const { return total_hopf_.get(); }
    const HopfPtr& total_hopf_ptr() const { return total_hopf_; }
    // Multiplicative extension of pi to any element, exact at every degree.
    NCElement pi_apply(const NCElement& u) const;

    // Trivial mode (null otherwise).
    const BasisLinearMap* phi() const { return phi_ ? &*phi_ : nullptr; }
    const BasisLinearMap* phi_inv() const { return phi_inv_ ? &*phi_inv_ : nullptr; }

    // Coinvariant basis, cached per degree.
    const std::vector<NCElement>& base_basis(int D) const;

private:
    BundleSpec() = default;

    Mode mode_ = Mode::homogeneous;
    ComodulePtr ca_;
    HopfPtr total_hopf_;                  // homogeneous mode
    std::vector<NCElement> pi_gen_;       // homogeneous mode
    std::optional<BasisLinearMap> phi_;   // trivial mode
    std::optional<BasisLinearMap> phi_inv_;
    mutable std::map<int, std::vector<NCElement>> coinv_cache_;
};

using BundlePtr = std::shared_ptr<const BundleSpec>;

// Translation entries tau(a) in P (x) P for H-basis words a <= D; every
// entry is certified by chi(tau(a)) = 1 (x) a at construction.
//  * homogeneous mode: tau(a) = S(u_(1)) (x) u_(2) for the minimal-degree
//    preimage u of a under pi (first basis solution in term order);
//    missing preimage throws "pi-preimage not found <= D".
//  * trivial mode: tau = (Phi^-1 (x) Phi) after the coproduct.
class TranslationTable {
public:
    static TranslationTable build(const BundleSpec& spec, int D);

    int max_degree() const { return degree_; }
    const TensorElement& value(const Word& a) const;  // throws std::out_of_range
    TensorElement apply(const NCElement& a) const;    // linear extension

private:
    TranslationTable() = default;
    std::map<Word, TensorElement, DegLexLess> entries_;
    int degree_ = 0;
};

// Single-element convenience over TranslationTable.
TensorElement translation_map(const NCElement& a, const BundleSpec& spec);

struct FreenessLine {
    Word a;               // H-basis word
    bool pass = false;
    std::string witness;  // rendering of the exhibited x with chi(x) = 1 (x) a
};
struct FreenessReport {
    int degree = 0;
    std::vector<FreenessLine> lines;
    bool left_linear = false;  // spot check chi(w.x) = (w (x) 1).chi(x)
    bool pass = false;
};
// For every H-basis word a <= D exhibits x with chi(x) = 1 (x) a.
FreenessReport freeness_check(const BundleSpec& spec, int D);

struct ExactnessReport {
    int degree = 0;
    size_t dim_ker_chi = 0;
    size_t dim_horizontal = 0;
    bool horizontal_in_kernel = false;  // structural inclusion, re-verified
    bool kernel_in_horizontal = false;  // the bundle-defining inclusion
    bool pass = false;
};
// Compares ker chi with the span of u.d(b).v (b coinvariant) inside the
// pair-word span of total degree <= D; horizontal generators are produced
// up to degree D + slack and intersected back into the window.
ExactnessReport exactness_check(const BundleSpec& spec, int D, int slack = 2);

// Theta(u) = u_(0) Phi^-1(u_(1)) (x) u_(2) for a trivial bundle; legs
// (P, H) with the first leg certified coinvariant, else throws
// "Phi is not an intertwiner". Inverse: b (x) a -> b Phi(a).
TensorElement trivial_iso_theta(const NCElement& u, const BundleSpec& spec);
NCElement trivial_iso_theta_inv(const TensorElement& x, const BundleSpec& spec);

// Crossed-product multiplication on B (x) H:
// (b1 (x) a1)(b2 (x) a2) =
//   b1 Phi(a1_(1)) b2 Phi(a2_(1)) Phi^-1(a1_(2) a2_(2)) (x) a1_(3) a2_(3).
// Throws on truncation overflow (arguments outside Phi's degree budget).
TensorElement crossed_product_multiply(const TensorElement& x, const TensorElement& y,
                                       const BundleSpec& spec);

// Associated bundle: fibre presentation V with a right coaction given on
// generators, extended with the opposite-product convention (the structure
// legs of a product multiply in reverse order).
class AssociatedBundle {
public:
    static std::shared_ptr<const AssociatedBundle> make(BundlePtr spec, PresPtr fibre,
                                                        std::vector<TensorElement> rho_gen,
                                                        bool validate = true);

    const BundleSpec& bundle() const { return *spec_; }
    const BundlePtr& bundle_ptr() const { return spec_; }
    const Presentation* fibre() const { return fibre_.get(); }
    const PresPtr& fibre_ptr() const { return fibre_; }

    // Reverse-order multiplicative extension, memoized; legs (V, H).
    const TensorElement& rho_word(const Word& w) const;
    TensorElement rho(const NCElement& v) const;

    // Coassociativity + counit law for rho on basis words <= maxdeg.
    std::vector<std::string> check_axioms(int maxdeg) const;

    // Total-space coaction on P (x) V:
    // u (x) v -> u_(0) (x) v_(0) (x) u_(1) v_(1), legs (P, V, H).
    TensorElement delta_E(const TensorElement& x) const;

private:
    AssociatedBundle(BundlePtr spec, PresPtr fibre, std::vector<TensorElement> rho_gen);

    BundlePtr spec_;
    PresPtr fibre_;
    std::vector<TensorElement> rho_gen_;
    mutable std::map<Word, TensorElement, DegLexLess> memo_;
};

using AssociatedPtr = std::shared_ptr<const AssociatedBundle>;

// The fibre V = H coacting on itself by a -> a_(2) (x) S(a_(1)).
AssociatedPtr associated_self_fibre(BundlePtr spec);

// Exact kernel of (delta_E - . (x) 1) on pair words of total degree <= D;
// elements have legs (P, V). The base embeds via b (x) 1 (verified).
std::vector<TensorElement> associated_coinvariants(const AssociatedBundle& ab, int D);

struct AgreementLine {
    std::string generator;        // rendering of the N generator
    bool coaction_stable = false; // coaction lands in closure(N) (x) H
    bool chi_in_ideal = false;    // chi lands in P (x) closure(Q)
};
struct AgreementReport {
    int degree = 0;
    std::vector<AgreementLine> lines;
    bool pass = false;
};
// Checks, generator by generator, that the quotient-calculus data (N, Q)
// restricts the bundle structure: the coaction maps N into its bimodule
// closure tensored with H, and chi maps N into P tensored with the
// right-ideal closure of Q. Memberships at truncation degree D.
AgreementReport calculus_agreement_check(const BundleSpec& spec, const CalculusIdeal& ideal,
                                         int D);

// chi followed by reduction of the structure leg modulo the right-ideal
// closure of Q at degree D (deterministic coset representatives).
TensorElement chi_N(const UnivOneForm& rho, const BundleSpec& spec, const CalculusIdeal& ideal,
                    int D);

}  // namespace qpb
