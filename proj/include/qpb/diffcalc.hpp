#pragma once

// First-order differential calculus machinery.
//
// The universal calculus lives inside the tensor square: a 1-form is an
// arity-2 tensor annihilated by multiplication, and the differential is
// d(u) = 1(x)u - u(x)1. Quotient calculi are described by generating sets
// (a sub-bimodule N of universal forms, a right ideal Q inside the counit
// kernel) whose closures are only ever materialised as truncated spans.
//
// ThreeDCalculus is the concrete three-dimensional left-covariant calculus
// on the q-unitary preset: a free left-module basis w0, w1, w2 with scalar
// commutation factors for moving generators across each basis form. The
// differential table for the generators is not stored as input; it is
// derived once at construction by an exact linear solve from the defining
// expressions of w0, w1, w2 together with the requirement that the
// differential annihilates the defining relations, and the result is
// certified by substituting back.

#include "qpb/hopf.hpp"
#include "qpb/tensor.hpp"

#include <array>
#include <string>
#include <vector>

namespace qpb {

// A universal 1-form: arity-2 tensor in the kernel of multiplication.
class UnivOneForm {
public:
    explicit UnivOneForm(TensorElement t);  // throws if not arity 2 over one
                                            // presentation or not in ker m
    static UnivOneForm d(const NCElement& u);
    static UnivOneForm zero(const Presentation* p);

    const TensorElement& tensor() const { return t_; }
    const Presentation* pres() const { return t_.legs().front(); }

    UnivOneForm left(const NCElement& p) const;
    UnivOneForm right(const NCElement& p) const;
    UnivOneForm operator+(const UnivOneForm& o) const;
    UnivOneForm operator-(const UnivOneForm& o) const;
    UnivOneForm scaled(const QRat& c) const;
    bool operator==(const UnivOneForm& o) const { return t_ == o.t_; }
    bool is_zero() const { return t_.is_zero(); }
    std::string to_string() const { return t_.to_string(); }

private:
    TensorElement t_;
};

// kappa : a(x)b -> a b_(1) (x) b_(2); a linear bijection of the tensor
// square with inverse a(x)b -> a S(b_(1)) (x) b_(2).
TensorElement kappa(const TensorElement& x, const HopfAlgebra& h);
TensorElement kappa_inv(const TensorElement& x, const HopfAlgebra& h);

// Generating data for a quotient calculus: N generates a sub-bimodule of
// universal 1-forms over P, Q generates a right ideal inside ker(counit)
// of the structure Hopf algebra. Construction validates both membership
// conditions on the generators.
struct CalculusIdeal {
    std::vector<UnivOneForm> N;
    std::vector<NCElement> Q;

    static CalculusIdeal make(std::vector<UnivOneForm> n_gens, std::vector<NCElement> q_gens,
                              const HopfAlgebra& h);
};

struct BicovarianceLine {
    std::string generator;  // rendering of the Q generator
    bool pass = false;
};
struct BicovarianceReport {
    std::vector<BicovarianceLine> lines;
    bool pass = true;
};

// Checks Ad_R(q) membership in (right-ideal closure of Q) (x) H at
// truncation degree D, generator by generator.
BicovarianceReport bicovariance_check(const std::vector<NCElement>& Q, const HopfAlgebra& h,
                                      int D);

// Element of the three-dimensional calculus: left coefficients on the free
// module basis w0, w1, w2.
struct ThreeDForm {
    std::array<NCElement, 3> comp;

    static ThreeDForm zero(const Presentation* p);
    ThreeDForm operator+(const ThreeDForm& o) const;
    ThreeDForm operator-(const ThreeDForm& o) const;
    ThreeDForm scaled(const QRat& c) const;
    ThreeDForm left(const NCElement& p) const;  // p . form
    bool operator==(const ThreeDForm& o) const { return comp == o.comp; }
    bool operator!=(const ThreeDForm& o) const { return !(*this == o); }
    bool is_zero() const;
    std::string to_string() const;  // "p0*w0 + p1*w1 + p2*w2", zeros omitted
};

// One summand p . d(gen) . r of a formal differential expression.
struct FormalDTerm {
    NCElement left;
    int gen = 0;
    NCElement right;
};
using FormalDSum = std::vector<FormalDTerm>;

class ThreeDCalculus {
public:
    // h must be the q-unitary Hopf preset (four generators with the
    // quantum-plane style rules); the differential table is derived and
    // certified during construction.
    explicit ThreeDCalculus(HopfPtr h);

    const Presentation* pres() const { return h_->pres(); }
    const HopfAlgebra& hopf() const { return *h_; }

    // Scalar factor moving basis form i across a generator / word:
    // w_i . g = lambda(i, g) g . w_i.
    QRat lambda(int i, int g) const;
    QRat lambda_word(int i, const Word& w) const;

    // p' with w_i . p = p' . w_i.
    NCElement commute_past(const NCElement& p, int i) const;

    // Derived differential of a generator: d(g) = sum_i d_gen(g)[i] . w_i.
    const std::array<NCElement, 3>& d_gen(int g) const { return d_gen_[static_cast<size_t>(g)]; }

    // Differential of a 0-form via the graded Leibniz expansion.
    ThreeDForm d(const NCElement& u) const;

    // Projection of a universal form sum u (x) v  ->  sum u . d(v).
    ThreeDForm reduce(const UnivOneForm& rho) const;
    // Formal expression sum p . d(gen) . r.
    ThreeDForm reduce(const FormalDSum& expr) const;

    // Universal representatives of the basis forms (elements of ker m).
    const UnivOneForm& basis_universal(int i) const { return omega_univ_[static_cast<size_t>(i)]; }

    // The sub-bimodule generators N presenting this calculus as a quotient
    // of the universal one: d(g) - sum_i d_gen(g)[i] . w_i^univ for each
    // generator, plus the commutation elements
    // w_i^univ . g - lambda(i, g) g . w_i^univ.
    std::vector<UnivOneForm> kernel_generators() const;

private:
    ThreeDForm d_word_(const Word& w) const;
    void derive_d_table_();
    void certify_();

    HopfPtr h_;
    std::array<std::array<QRat, 4>, 3> lambda_;         // [form][generator]
    std::array<std::array<NCElement, 3>, 4> d_gen_;     // [generator][form]
    std::vector<UnivOneForm> omega_univ_;               // filled at construction
};

}  // namespace qpb
