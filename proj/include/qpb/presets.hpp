#pragma once

// Built-in presentations and structures used by the test suite and CLI.
//
//  * suq2_algebra    — the q-deformed 2x2 special unitary coordinate algebra,
//                      generators a,b,c,d with the standard commutation rules,
//                      both determinant relations, and the derived rewrite
//                      family a b^i c^j d -> ... that closes the system under
//                      overlaps (certified by confluence_check in the tests).
//  * laurent_algebra — Laurent polynomials k[Z, Z^-1] as a free algebra on
//                      Z, Zi with the two cancellation rules.
//  * cylinder_algebra— commutative cylinder k[x] (x) k[Z, Z^-1]; the base for
//                      the trivial-bundle preset.
//
// Generator weights on the q-unitary algebra put a,d above b,c so the
// inhomogeneous determinant rules orient; the derived family keeps rewriting
// confluent where plain two-letter rules alone are not.

#include "qpb/bundle.hpp"
#include "qpb/hopf.hpp"
#include "qpb/presentation.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qpb::presets {

using qpb::BundlePtr;
using qpb::HopfPtr;
using qpb::PresPtr;

// Rules with lhs length up to max_rule_len are generated for the derived
// closure family; degree-D computations need max_rule_len >= D.
PresPtr suq2_algebra(int max_rule_len = 12);
PresPtr laurent_algebra();
PresPtr cylinder_algebra();

// Hopf structure on the q-unitary algebra: matrix coproduct, counit the
// identity pattern, antipode the q-adjugate.
HopfPtr suq2_hopf(int max_rule_len = 12);
// Hopf structure on Laurent polynomials: Z group-like.
HopfPtr laurent_hopf();
// Polynomials in one variable; x primitive. The smallest connected graded
// Hopf algebra, used to exercise the triangular inverse recursion.
PresPtr polyline_algebra();
HopfPtr polyline_hopf();

// Homogeneous bundle: the q-unitary total space projected onto Laurent
// polynomials along the diagonal (a -> Z, d -> Z^-1, b, c -> 0). The
// coinvariant base is the standard q-sphere.
BundlePtr hopf_fibration_bundle(int max_rule_len = 12);

// Named degree-two elements of that base: b- = a b, b+ = c d, b3 = a d.
struct NamedElement {
    std::string name;
    NCElement value;
};
std::vector<NamedElement> sphere_base_aliases(const BundleSpec& spec);

// Trivial bundle: the commutative cylinder coacted by Laurent polynomials
// (x coinvariant, Z and Zi rotating), trivialised by the evident inclusion
// tabulated up to phi_degree.
BundlePtr cylinder_bundle(int phi_degree = 8);

// Trivial bundle with a noncommutative structure group: total space the
// q-unitary algebra with one central coinvariant generator x adjoined,
// coacted by the q-unitary Hopf algebra through its own coproduct pattern,
// trivialised by the index-shift inclusion tabulated up to phi_degree. The
// base is k[x], so gauge transformations valued in the base are genuinely
// non-scalar here (unlike the cylinder, whose group-like fibre forces them
// to be units).
BundlePtr line_suq2_bundle(int phi_degree = 5, int max_rule_len = 12);

}  // namespace qpb::presets
