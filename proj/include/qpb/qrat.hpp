#pragma once

// Exact scalar arithmetic for the deformation parameter q.
//
// QRat is a rational function num/den with integer-coefficient polynomials
// in q, kept in a canonical form so that operator== is structural equality:
//   * den is nonzero and has a positive leading coefficient,
//   * gcd(num, den) = 1 (content included),
//   * negative powers of q are cleared into the denominator,
//   * zero is 0/1.
// Coefficients are arbitrary-precision (boost cpp_int); truncated symbolic
// computations routinely overflow machine words.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace qpb {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense integer polynomial in q, coefficients ascending, no trailing zeros.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(Int constant);
    explicit IntPoly(std::vector<Int> coeffs);

    static IntPoly zero() { return IntPoly(); }
    static IntPoly one() { return IntPoly(Int(1)); }
    static IntPoly monomial(Int coeff, int degree);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    const Int& coeff(int k) const;             // 0 outside range
    const Int& leading() const;                // pre: nonzero
    const std::vector<Int>& coeffs() const { return c_; }

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator-() const;
    IntPoly operator*(const IntPoly& o) const;
    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return c_ != o.c_; }

    IntPoly shifted(int k) const;              // multiply by q^k, k >= 0

    Int content() const;                       // gcd of coefficients, >= 0
    IntPoly primitive_part() const;            // this / content, sign kept

    // Exact division; throws std::logic_error if the remainder is nonzero.
    static IntPoly div_exact(const IntPoly& a, const IntPoly& b);
    // Long division over Q is not available; divmod works when it stays
    // integral step by step (enough for the test oracles).
    static void divmod(const IntPoly& a, const IntPoly& b, IntPoly& quo, IntPoly& rem);
    static IntPoly gcd(IntPoly a, IntPoly b);  // positive leading coefficient

    Rational evaluate(const Rational& q0) const;

    std::string to_string() const;             // descending powers, e.g. "q^4+q^2+1"
    size_t term_count() const;

private:
    void trim_();
    std::vector<Int> c_;
};

class QRat {
public:
    QRat() : num_(), den_(IntPoly::one()) {}
    QRat(long v) : QRat(Int(v)) {}
    explicit QRat(Int v) : num_(IntPoly(std::move(v))), den_(IntPoly::one()) {}
    QRat(IntPoly num, IntPoly den);

    static QRat zero() { return QRat(); }
    static QRat one() { return QRat(1); }
    // q^k for any integer k; negative k lands in the denominator.
    static QRat q_power(int k);
    // q^qshift * num / den, normalised.
    static QRat from_laurent(IntPoly num, IntPoly den, int qshift);

    const IntPoly& num() const { return num_; }
    const IntPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_integer() const;

    QRat operator+(const QRat& o) const;
    QRat operator-(const QRat& o) const;
    QRat operator-() const;
    QRat operator*(const QRat& o) const;
    QRat operator/(const QRat& o) const;       // throws on zero divisor
    QRat& operator+=(const QRat& o) { *this = *this + o; return *this; }
    QRat& operator-=(const QRat& o) { *this = *this - o; return *this; }
    QRat& operator*=(const QRat& o) { *this = *this * o; return *this; }
    bool operator==(const QRat& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const QRat& o) const { return !(*this == o); }

    QRat inverse() const;                      // throws "division by zero in q-scalar"

    // Exact evaluation at q = q0; throws std::domain_error("pole at q = ...")
    // when the denominator vanishes there.
    Rational evaluate(const Rational& q0) const;

    std::string to_string() const;
    // Coefficient position in element rendering: integers and monic positive
    // q-powers bare, anything else wrapped in parentheses, e.g. "(q^-1)".
    std::string to_string_coeff() const;

private:
    void normalize_();
    IntPoly num_, den_;
};

}  // namespace qpb
