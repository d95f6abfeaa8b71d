#pragma once

// Linear maps tabulated on the monomial basis of a domain presentation up to
// a truncation degree, valued in tensor elements with a fixed leg profile.
// Connections, trivialisations, gauge transformations, and translation maps
// are all stored this way, and convolution (via the coproduct, with the
// envelope product on values) is the single composition they share.
//
// Convolution inverses are found by the first applicable strategy:
//   1. pointwise   — every basis word is group-like and its value is a single
//                    invertible term; invert term by term.
//   2. antipode    — the map is a verified unital algebra map; inverse is
//                    f after the antipode.
//   3. recursion   — the coproduct is triangular (w (x) 1 plus strictly
//                    shorter first legs); solve degree by degree.
// Every strategy's result is certified by convolving back to the unit map
// before it is returned.

#include "qpb/hopf.hpp"
#include "qpb/presentation.hpp"
#include "qpb/tensor.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qpb {

class BasisLinearMap {
public:
    // All basis words of degree <= max_degree start mapped to zero.
    BasisLinearMap(PresPtr domain, std::vector<const Presentation*> target_legs, int max_degree);

    static BasisLinearMap from_function(PresPtr domain,
                                        std::vector<const Presentation*> target_legs,
                                        int max_degree,
                                        const std::function<TensorElement(const Word&)>& fn);
    // eta . eps: the convolution unit for maps out of a Hopf algebra.
    static BasisLinearMap unit_map(const HopfAlgebra& h,
                                   std::vector<const Presentation*> target_legs, int max_degree);
    static BasisLinearMap identity_map(PresPtr pres, int max_degree);
    static BasisLinearMap antipode_map(const HopfAlgebra& h, int max_degree);

    const PresPtr& domain() const { return domain_; }
    const std::vector<const Presentation*>& target_legs() const { return legs_; }
    int max_degree() const { return max_degree_; }

    void set_value(const Word& w, TensorElement v);  // w a basis word within degree
    const TensorElement& value(const Word& w) const;
    bool defined_for(const NCElement& x) const;  // every term within degree
    TensorElement apply(const NCElement& x) const;

    bool operator==(const BasisLinearMap& o) const;
    bool operator!=(const BasisLinearMap& o) const { return !(*this == o); }

private:
    PresPtr domain_;
    std::vector<const Presentation*> legs_;
    int max_degree_ = 0;
    std::map<Word, TensorElement, DegLexLess> values_;
};

// f * g with (f*g)(x) = f(x_(1)) . g(x_(2)), envelope product on values.
BasisLinearMap convolve(const HopfAlgebra& h, const BasisLinearMap& f, const BasisLinearMap& g);

// Unital algebra map check on all basis pairs within the degree budget.
bool is_unital_algebra_map(const BasisLinearMap& f);

// Convolution inverse by the first applicable strategy; the name of the
// strategy used is reported through strategy_used when non-null. Throws
// std::domain_error when no strategy applies or certification fails.
BasisLinearMap convolution_inverse(const HopfAlgebra& h, const BasisLinearMap& f,
                                   std::string* strategy_used = nullptr);

}  // namespace qpb
