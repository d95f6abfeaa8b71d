#pragma once

// NCElement: a finite QRat-weighted sum of words over one presentation.
// Terms are kept in a map ordered by the term order, so iteration,
// rendering, and equality are deterministic. Elements produced by the
// presentation operations are always fully reduced.

#include "qpb/qrat.hpp"
#include "qpb/word.hpp"

#include <map>
#include <string>

namespace qpb {

class Presentation;

class NCElement {
public:
    NCElement() : pres_(nullptr) {}
    explicit NCElement(const Presentation* pres) : pres_(pres) {}

    static NCElement unit(const Presentation* pres);
    static NCElement from_word(const Presentation* pres, Word w, QRat coeff = QRat::one());

    const Presentation* pres() const { return pres_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_unit() const;
    size_t term_count() const { return terms_.size(); }
    int degree() const;  // max word length over terms; 0 for zero element
    const std::map<Word, QRat, DegLexLess>& terms() const { return terms_; }
    QRat coeff(const Word& w) const;

    // Adds without reducing; drops the term if the sum cancels.
    void add_term(const Word& w, const QRat& c);

    NCElement operator+(const NCElement& o) const;
    NCElement operator-(const NCElement& o) const;
    NCElement operator-() const;
    NCElement operator*(const NCElement& o) const;  // multiplies and reduces
    NCElement scaled(const QRat& c) const;
    bool operator==(const NCElement& o) const;
    bool operator!=(const NCElement& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    const Presentation* pres_;
    std::map<Word, QRat, DegLexLess> terms_;
};

}  // namespace qpb
