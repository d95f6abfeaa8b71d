#pragma once

// Connections on quantum principal bundles and everything downstream of
// them: the three defining property checks, the vertical projector,
// strongness, curvature, local gauge potentials on trivial bundles, the
// canonical connection on homogeneous bundles, the Dirac q-monopole
// potential in the three-dimensional calculus, cross sections of
// associated bundles, vertical automorphisms, and the gauge-group actions.
//
// Conventions.
//  * A connection assigns to every structure-algebra basis word a universal
//    1-form on the total space (arity-2 tensor killed by multiplication).
//    Three-dimensional mode stores left-coefficient triples on the free
//    basis of the 3D calculus and lifts them through the universal
//    representatives of the basis forms, so the generic machinery always
//    sees universal values.
//  * Curvature values are arity-3 tensors: the degree-2 part of the
//    universal envelope, reached by the alternating unit-insertion
//    differential and leg-merging convolution (the wedge).
//  * Every gauge formula below is a convolution chain; leg-merging
//    convolution multiplies universal forms correctly, so no separate
//    form-valued convolution is needed.
//  * Checks that would be superpolynomial sample pairs: all pairs of basis
//    words of degree <= 2 plus 20 seeded pseudo-random higher pairs.
//    The seed is fixed and recorded in every sampled report.

#include "qpb/bundle.hpp"
#include "qpb/diffcalc.hpp"
#include "qpb/linmap.hpp"
#include "qpb/linsolve.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qpb {

inline constexpr unsigned kSamplingSeed = 20260819u;

using ThreeDPtr = std::shared_ptr<const ThreeDCalculus>;

// ---------------------------------------------------------------------------
// Connection forms

class ConnectionForm {
public:
    enum class Mode { universal, threed };

    // Universal mode from a value function on structure basis words.
    static ConnectionForm make(BundlePtr bundle, int max_degree,
                               const std::function<UnivOneForm(const Word&)>& values);

    // Universal mode from a tabulated map. The map must have the structure
    // algebra as domain and legs {total, total}; every value must lie in
    // the kernel of multiplication and the empty word must map to zero.
    static ConnectionForm from_map(BundlePtr bundle, BasisLinearMap form_map);

    // Three-dimensional mode: values are left-coefficient triples on the
    // free basis of calc; calc must live on the bundle's total space.
    static ConnectionForm threed(BundlePtr bundle, ThreeDPtr calc, int max_degree,
                                 const std::function<ThreeDForm(const Word&)>& values);

    Mode mode() const { return mode_; }
    const BundlePtr& bundle_ptr() const { return bundle_; }
    const BundleSpec& bundle() const { return *bundle_; }
    int max_degree() const { return map_.max_degree(); }

    // Universal representatives (in 3D mode: the lifts).
    const BasisLinearMap& as_map() const { return map_; }
    UnivOneForm value(const Word& a) const;
    UnivOneForm apply(const NCElement& a) const;

    // 3D mode accessors; threed_value throws std::logic_error otherwise.
    const ThreeDPtr& calculus3d() const { return calc3d_; }
    const ThreeDForm& threed_value(const Word& a) const;

    // Attach quotient data (N presents the total-space calculus as a
    // quotient of the universal one, Q the structure-side right ideal);
    // connection_check then runs the vertical normalisation property in
    // quotient form instead of the strict universal comparison.
    ConnectionForm with_calculus(CalculusIdeal ideal) const;
    const CalculusIdeal* calculus() const { return ideal_.get(); }

    bool operator==(const ConnectionForm& o) const { return map_ == o.map_; }
    bool operator!=(const ConnectionForm& o) const { return !(*this == o); }

private:
    ConnectionForm(BundlePtr bundle, BasisLinearMap map);

    Mode mode_ = Mode::universal;
    BundlePtr bundle_;
    BasisLinearMap map_;  // universal representatives, legs {total, total}
    ThreeDPtr calc3d_;
    std::map<Word, ThreeDForm, DegLexLess> threed_values_;
    std::shared_ptr<const CalculusIdeal> ideal_;
};

struct ConnectionReport {
    int degree = 0;
    bool unit_vanishes = false;       // property 1: the unit maps to zero
    bool vertical_normalised = false; // property 2: canonical map recovers a - eps(a)
    bool equivariant = false;         // property 3: intertwines the adjoint coaction
    bool vertical_checked = true;     // false: 3D mode without quotient data
    std::string vertical_mode;        // "universal", "quotient", or
                                      // "universal mode only" (not run here)
    std::vector<std::string> failures;

    bool pass() const {
        return unit_vanishes && equivariant && (!vertical_checked || vertical_normalised);
    }
};

// Verifies the three defining properties on structure basis words <= D.
// Property 2 runs strictly against the canonical map, or in quotient form
// when the connection carries calculus data with a nonempty structure-side
// ideal: both sides are reduced by the same deterministic coset pass, the
// left side from omega(a), the right from the translation lift
// tau(a) - eps(a) 1(x)1. A 3D-mode connection without quotient data skips
// the property and records that the certification lives in universal mode.
ConnectionReport connection_check(const ConnectionForm& omega, int D);

// ---------------------------------------------------------------------------
// Vertical projection

// The projector carved out of a connection: multiply the incoming legs
// into the canonical map, feed the structure leg through the connection.
class VerticalProjection {
public:
    explicit VerticalProjection(ConnectionForm omega);

    const ConnectionForm& connection() const { return omega_; }

    // sum over terms: (u v_(0)) . omega(v_(1)) for a tensor sum u (x) v.
    TensorElement apply_tensor(const TensorElement& x) const;
    UnivOneForm apply(const UnivOneForm& rho) const;

private:
    ConnectionForm omega_;
};

struct ProjectionReport {
    int degree = 0;
    bool idempotent = false;             // Pi Pi = Pi on the spanning set
    bool equivariant = false;            // intertwines the form coaction
    bool chi_preserved = false;          // chi(Pi rho) = chi(rho)
    bool vertical_fixed = false;         // Pi(omega(a)) = omega(a)
    bool horizontal_annihilated = false; // Pi(d b) = 0 for coinvariant b
    bool horizontal_split = false;       // (id - Pi)rho in span{u d(b) w}
    bool omega_recovered = false;        // Pi(tau(a) - eps(a) 1(x)1) = omega(a)
    std::vector<std::string> failures;

    bool pass() const {
        return idempotent && equivariant && chi_preserved && vertical_fixed &&
               horizontal_annihilated && horizontal_split && omega_recovered;
    }
};

// Exercises the projector on the spanning forms u d(v) with
// deg(u) + deg(v) <= D, plus the connection values and the coinvariant
// differentials, verifying the projection laws listed in ProjectionReport.
ProjectionReport projection_check(const VerticalProjection& pi, int D);

struct StrongnessReport {
    int degree = 0;
    bool strong = false;
    std::vector<std::string> failures;  // one line per escaping basis word
};

// A connection is strong when (id - Pi) d(u) lies in the one-sided span
// (base forms) . P = span{b d(b') w} for every total-space basis word u <= D.
StrongnessReport strongness_check(const ConnectionForm& omega, int D);

// ---------------------------------------------------------------------------
// Constructions

// Trivial-bundle connection from a local potential beta (structure algebra
// to base-valued universal forms, beta(unit) = 0):
//   omega = Phi^-1 * beta * Phi + Phi^-1 * d Phi.
// Throws std::invalid_argument if the bundle is not trivialised, if
// beta(unit) != 0, or if some beta value is not a coinvariant form.
ConnectionForm trivial_connection(const BundlePtr& bundle, const BasisLinearMap& beta);

// The curvature such a connection must have: Phi^-1 * (d beta + beta*beta) * Phi,
// as an arity-3 tabulated map. Compared against curvature(...) in tests.
BasisLinearMap curvature_from_local_potential(const BundlePtr& bundle,
                                              const BasisLinearMap& beta);

// Canonical connection on a homogeneous bundle from a splitting i of the
// projection (structure algebra to total space):
//   omega(a) = S(i(a)_(1)) d(i(a)_(2)).
// The splitting must invert the projection, preserve the counit, and
// intertwine the adjoint coactions on basis words up to its own degree;
// each failed hypothesis throws std::invalid_argument naming it.
ConnectionForm canonical_connection(const BundlePtr& bundle, const BasisLinearMap& splitting);

// ---------------------------------------------------------------------------
// The q-monopole

// c(n) = (q^-2n - 1) / (q^-2 - 1); c(0) = 0, c(1) = 1.
QRat monopole_coefficient(long n);

struct MonopoleData {
    QRat coefficient;      // c(n)
    ThreeDForm form;       // c(n) . w1
    UnivOneForm universal; // the lift through the universal representative
};

// The monopole potential of charge n in the three-dimensional calculus.
MonopoleData monopole_potential(const ThreeDCalculus& calc, long n);

// The monopole as a 3D-mode connection on the homogeneous fibration:
// every Laurent basis word Z^n maps to c(n) . w1.
ConnectionForm monopole_connection(const BundlePtr& bundle, ThreeDPtr calc, int max_degree);

// ---------------------------------------------------------------------------
// Curvature

class CurvatureForm {
public:
    // legs {total, total, total}; the empty word must map to zero.
    static CurvatureForm from_map(BundlePtr bundle, BasisLinearMap two_form_map,
                                  std::vector<std::string> warnings = {});

    const BundlePtr& bundle_ptr() const { return bundle_; }
    const BasisLinearMap& as_map() const { return map_; }
    TensorElement value(const Word& a) const { return map_.value(a); }
    TensorElement apply(const NCElement& a) const { return map_.apply(a); }
    int max_degree() const { return map_.max_degree(); }

    const std::vector<std::string>& warnings() const { return warnings_; }

    bool operator==(const CurvatureForm& o) const { return map_ == o.map_; }
    bool operator!=(const CurvatureForm& o) const { return !(*this == o); }

private:
    CurvatureForm(BundlePtr bundle, BasisLinearMap map, std::vector<std::string> warnings);

    BundlePtr bundle_;
    BasisLinearMap map_;
    std::vector<std::string> warnings_;
};

// F = d omega + omega * omega in the universal envelope. Strongness is
// checked at degree D first; a non-strong connection does not abort the
// computation but attaches a warning to the result.
CurvatureForm curvature(const ConnectionForm& omega, int D);

// ---------------------------------------------------------------------------
// Gauge maps

class GaugeMap {
public:
    // f must send structure basis words into the total space with
    // f(empty) = unit; the convolution inverse is found by strategy search
    // and certified two-sided.
    static GaugeMap make(BundlePtr bundle, BasisLinearMap f);
    // Same, with the inverse supplied; the convolution law is certified.
    static GaugeMap make_with_inverse(BundlePtr bundle, BasisLinearMap f,
                                      BasisLinearMap f_inv);
    // The unit of the gauge group: a -> eps(a) 1.
    static GaugeMap identity(BundlePtr bundle, int max_degree);

    const BundlePtr& bundle_ptr() const { return bundle_; }
    const BasisLinearMap& map() const { return f_; }
    const BasisLinearMap& inverse() const { return f_inv_; }
    int max_degree() const { return f_.max_degree(); }
    const std::string& strategy() const { return strategy_; }

    NCElement apply(const NCElement& a) const;  // collapsed value

    // Delta_R(f(a)) == (f (x) id)(Ad_R(a)) on basis words <= D.
    bool ad_equivariant(int D) const;

    bool operator==(const GaugeMap& o) const { return f_ == o.f_; }
    bool operator!=(const GaugeMap& o) const { return !(*this == o); }

private:
    GaugeMap(BundlePtr bundle, BasisLinearMap f, BasisLinearMap f_inv, std::string strategy);

    BundlePtr bundle_;
    BasisLinearMap f_;
    BasisLinearMap f_inv_;
    std::string strategy_;
};

// Convolution product f * g with inverse g^-1 * f^-1, certified.
GaugeMap gauge_compose(const GaugeMap& f, const GaugeMap& g);

// omega^f = f^-1 * omega * f + f^-1 * d f. Universal mode; quotient data
// carries over from omega.
ConnectionForm gauge_transform_connection(const ConnectionForm& omega, const GaugeMap& f);

// F^f = f^-1 * F * f; warnings carry over.
CurvatureForm gauge_transform_curvature(const CurvatureForm& F, const GaugeMap& f);

// ---------------------------------------------------------------------------
// Vertical automorphisms

// F = id * f with respect to the coaction: F(u) = u_(0) f(u_(1)),
// tabulated on total-space basis words <= D. Requires an adjoint-
// equivariant gauge map; throws std::invalid_argument naming the failed
// hypothesis otherwise.
BasisLinearMap vertical_automorphism(const GaugeMap& f, int D);

struct VerticalAutoReport {
    int degree = 0;
    unsigned seed = 0;
    bool unital = false;             // F(1) = 1
    bool base_linear = false;        // F(b u) = b F(u) on sampled pairs
    bool equivariant = false;        // intertwines the coaction
    bool roundtrip_recovers = false; // f(a) = tau1(a) . F(tau2(a)) returns f
    std::vector<std::string> failures;

    bool pass() const { return unital && base_linear && equivariant && roundtrip_recovers; }
};

VerticalAutoReport vertical_automorphism_check(const GaugeMap& f, const BasisLinearMap& F,
                                               unsigned seed = kSamplingSeed);

// The inverse direction: recover the gauge map from a vertical
// automorphism via the translation table, f(a) = tau1(a) . F(tau2(a)).
GaugeMap gauge_from_vertical(const BundlePtr& bundle, const BasisLinearMap& F, int D);

// Conjugation by the trivialisation: gamma (base-valued, unit-preserving,
// convolution-invertible) -> Phi^-1 * gamma * Phi, with the inverse
// conjugated explicitly, so no strategy search can fail halfway.
GaugeMap base_gauge_to_total(const BundlePtr& bundle, const BasisLinearMap& gamma);

// The other direction: Phi * f * Phi^-1, with every value certified
// coinvariant; throws std::runtime_error if the gauge map does not descend.
BasisLinearMap total_gauge_to_base(const GaugeMap& f);

// ---------------------------------------------------------------------------
// Cross sections of associated bundles

// A cross section: a left base-module map from the fixed-point subalgebra
// of (total (x) fibre) to the base, tabulated on the cached fixed-point
// basis, optionally together with the equivariant fibre map it comes from.
class SectionData {
public:
    // s = multiply after feeding the fibre leg through phi.
    static SectionData from_fibre_map(AssociatedPtr ab, BasisLinearMap phi, int D);
    // Raw tabulation aligned with the fixed-point basis at degree D.
    static SectionData from_values(AssociatedPtr ab, std::vector<NCElement> values, int D);

    const AssociatedBundle& assoc() const { return *ab_; }
    const AssociatedPtr& assoc_ptr() const { return ab_; }
    int max_degree() const { return degree_; }
    const std::vector<TensorElement>& basis() const { return basis_; }
    const std::vector<NCElement>& values() const { return values_; }

    bool has_fibre_map() const { return phi_.has_value(); }
    const BasisLinearMap& fibre_map() const;  // throws std::logic_error if absent

    // Directly via the fibre map when present, else by exact decomposition
    // over the tabulated basis (std::domain_error if e escapes the span).
    NCElement apply(const TensorElement& e) const;

private:
    friend SectionData phi_from_section(const SectionData& s);

    SectionData() = default;
    void build_span_();

    AssociatedPtr ab_;
    int degree_ = 0;
    std::vector<TensorElement> basis_;
    std::vector<NCElement> values_;
    std::optional<BasisLinearMap> phi_;
    SpanSolver span_;
    std::map<WordTuple, int, WordTupleLess> coords_;
};

struct SectionReport {
    int degree = 0;
    unsigned seed = 0;
    bool unit_preserved = false;     // s(1 (x) 1) = 1
    bool values_coinvariant = false; // s lands in the base
    bool base_linear = false;        // s(b e) = b s(e) on sampled pairs
    bool base_recovered = false;     // s(b (x) 1) = b
    std::vector<std::string> failures;

    bool pass() const {
        return unit_preserved && values_coinvariant && base_linear && base_recovered;
    }
};

SectionReport section_check(const SectionData& s, unsigned seed = kSamplingSeed);

// Builds the section s = multiply . (id (x) phi) from an equivariant
// unit-preserving fibre map; a failed hypothesis throws
// std::invalid_argument naming it.
SectionData section_from_phi(AssociatedPtr ab, const BasisLinearMap& phi, int D);

// Recovers the fibre map from a section through the translation table:
//   phi(v) = tau1(S^-1 v_(1)) . s(tau2(S^-1 v_(1)) (x) v_(0)).
// Recovering phi at fibre degree k applies s to arguments of pair degree up
// to 2k, so a tabulation at degree D cannot determine phi beyond the covered
// degree: the result is the section re-tabulated at the largest fully
// covered fibre degree (s.max_degree() when s carries a fibre map already)
// with the recovered and certified fibre map attached. If not even the
// degree-one fibre words are covered, throws std::runtime_error; a
// tabulation inconsistent with every equivariant fibre map throws
// std::domain_error.
SectionData phi_from_section(const SectionData& s);

// Trivialised associated bundles embed the fibre into the fixed points:
//   v -> Phi(S^-1 v_(1)) (x) v_(0), legs (total, fibre).
BasisLinearMap phi_E(const AssociatedBundle& ab, int D);

struct PhiEReport {
    int degree = 0;
    bool coinvariant = false; // values fixed by the total coaction
    bool injective = false;   // b (x) v -> b . Phi_E(v) has full rank
    std::vector<std::string> failures;

    bool pass() const { return coinvariant && injective; }
};

PhiEReport phi_E_check(const AssociatedBundle& ab, int D);

// Principal cross sections: s = id * psi with respect to the coaction,
// s(u) = u_(0) psi(u_(1)), for a unit-preserving psi from the structure
// algebra to the total space.
BasisLinearMap principal_section(const BundlePtr& bundle, const BasisLinearMap& psi, int D);

struct PrincipalSectionReport {
    int degree = 0;
    unsigned seed = 0;
    bool unit_preserved = false;
    bool values_coinvariant = false;
    bool base_linear = false;  // s(b u) = b s(u) on sampled pairs
    bool base_fixed = false;   // s(b) = b for coinvariant b
    bool algebra_map = false;  // informational: multiplicativity on samples
    std::vector<std::string> failures;

    // algebra_map is deliberately excluded: sections need not multiply.
    bool pass() const {
        return unit_preserved && values_coinvariant && base_linear && base_fixed;
    }
};

PrincipalSectionReport principal_section_check(const BundlePtr& bundle,
                                               const BasisLinearMap& s, int D,
                                               unsigned seed = kSamplingSeed);

// An algebra-map section trivialises the bundle: Phi(a) = s(tau1(a)) . tau2(a),
// re-certified by rebuilding the bundle in trivial mode. A section that is
// not multiplicative on the truncated basis throws std::invalid_argument
// ("section is not an algebra map").
BundlePtr trivialisation_from_section(const BundlePtr& bundle, const BasisLinearMap& s, int D);

// The gauge action on sections: phi^f = phi * f with respect to the fibre
// coaction, phi^f(v) = phi(v_(0)) f(v_(1)); the result is re-validated.
SectionData gauge_act_on_section(const SectionData& s, const GaugeMap& f);

}  // namespace qpb
