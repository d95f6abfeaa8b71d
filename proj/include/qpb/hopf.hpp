#pragma once

// Hopf algebra structure over a presented algebra: coproduct, counit,
// antipode, and inverse antipode, all given on generators and extended as
// (anti)algebra maps.  Construction validates the structure maps against the
// defining relations and the generator-level axioms; check_axioms sweeps the
// full axiom set over every basis word up to a degree.

#include "qpb/element.hpp"
#include "qpb/presentation.hpp"
#include "qpb/qrat.hpp"
#include "qpb/tensor.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qpb {

class HopfAlgebra;
using HopfPtr = std::shared_ptr<const HopfAlgebra>;

class HopfAlgebra {
public:
    // Tables indexed by generator. Each coproduct value is a two-leg tensor
    // over pres; antipode tables are single elements. validate=true checks
    // compatibility with every non-derived rule (a derived rule is a
    // consequence of the defining ones, so its check is redundant and can be
    // exponentially larger) plus the axioms on generators.
    static HopfPtr make(PresPtr pres, std::vector<TensorElement> coproduct_gen,
                        std::vector<QRat> counit_gen, std::vector<NCElement> antipode_gen,
                        std::vector<NCElement> antipode_inv_gen, bool validate = true);

    const Presentation* pres() const { return pres_.get(); }
    const PresPtr& pres_ptr() const { return pres_; }

    const TensorElement& coproduct_word(const Word& w) const;  // memoized
    TensorElement coproduct(const NCElement& x) const;
    QRat counit_word(const Word& w) const;
    QRat counit(const NCElement& x) const;
    NCElement antipode_word(const Word& w) const;       // anti-algebra extension
    NCElement antipode(const NCElement& x) const;
    NCElement antipode_inv_word(const Word& w) const;
    NCElement antipode_inv(const NCElement& x) const;

    // Right adjoint coaction h -> h_(2) (x) S(h_(1)) h_(3).
    TensorElement adjoint_coaction(const NCElement& x) const;

    // Exact axiom sweep over basis words of degree <= maxdeg: coassociativity,
    // both counit laws, both antipode laws, and the two-sided inverse law for
    // the declared inverse antipode. Returns failure descriptions (empty = ok).
    std::vector<std::string> check_axioms(int maxdeg) const;

private:
    HopfAlgebra() = default;
    void validate_() const;

    PresPtr pres_;
    std::vector<TensorElement> coproduct_gen_;
    std::vector<QRat> counit_gen_;
    std::vector<NCElement> antipode_gen_;
    std::vector<NCElement> antipode_inv_gen_;
    mutable std::map<Word, TensorElement, DegLexLess> delta_memo_;
};

}  // namespace qpb
