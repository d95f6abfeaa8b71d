#pragma once

// Tensor products of presented algebras, with the two products both sides
// of the theory need:
//
//  * componentwise_product — (a (x) b)(c (x) d) = ac (x) bd; the algebra
//    structure used by coproducts and coactions.
//  * envelope_product — (... (x) a_n)(b_0 (x) ...) merges the boundary legs
//    into a_n b_0; the product of universal differential forms, where an
//    n-form lives in the (n+1)-fold tensor power.
//
// universal_d is the alternating unit-insertion differential; it squares to
// zero on the whole complex and satisfies the graded Leibniz rule for the
// envelope product (degree = legs - 1).

#include "qpb/element.hpp"
#include "qpb/presentation.hpp"
#include "qpb/qrat.hpp"
#include "qpb/word.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qpb {

using WordTuple = std::vector<Word>;

struct WordTupleLess {
    bool operator()(const WordTuple& a, const WordTuple& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        DegLexLess less;
        for (size_t i = 0; i < a.size(); ++i) {
            if (less(a[i], b[i])) return true;
            if (less(b[i], a[i])) return false;
        }
        return false;
    }
};

class TensorElement {
public:
    TensorElement() = default;
    explicit TensorElement(std::vector<const Presentation*> legs) : legs_(std::move(legs)) {}

    static TensorElement unit(std::vector<const Presentation*> legs);
    static TensorElement single(const NCElement& x);
    static TensorElement tensor(const TensorElement& a, const TensorElement& b);
    static TensorElement tensor(const NCElement& a, const NCElement& b);

    const std::vector<const Presentation*>& legs() const { return legs_; }
    size_t leg_count() const { return legs_.size(); }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<WordTuple, QRat, WordTupleLess>& terms() const { return terms_; }
    QRat coeff(const WordTuple& t) const;

    // Adds without reducing; words are expected to be in normal form.
    void add_term(const WordTuple& t, const QRat& c);

    TensorElement operator+(const TensorElement& o) const;
    TensorElement operator-(const TensorElement& o) const;
    TensorElement operator-() const;
    TensorElement scaled(const QRat& c) const;
    bool operator==(const TensorElement& o) const;
    bool operator!=(const TensorElement& o) const { return !(*this == o); }

    TensorElement componentwise_product(const TensorElement& o) const;
    TensorElement envelope_product(const TensorElement& o) const;

    // Multiplies all legs left to right (iterated multiplication map).
    NCElement collapse() const;
    // Multiplies legs [from, from+count) into one, keeping the others.
    TensorElement collapse_legs(size_t from, size_t count) const;

    TensorElement universal_d() const;

    // Extracts leg i of each term as an element factor when the remaining
    // legs match; general splicing for structure maps. fn maps a word of leg
    // i to an element over any fixed presentation set (result legs replace
    // leg i).
    TensorElement map_leg(size_t i,
                          const std::vector<const Presentation*>& replacement_legs,
                          const std::function<TensorElement(const Word&)>& fn) const;
    // Same, scalar-valued: leg i is removed.
    TensorElement map_leg_scalar(size_t i, const std::function<QRat(const Word&)>& fn) const;

    std::string to_string() const;  // legs joined with "(x)"

private:
    void check_compatible_(const TensorElement& o) const;
    std::vector<const Presentation*> legs_;
    std::map<WordTuple, QRat, WordTupleLess> terms_;
};

}  // namespace qpb
