#include "qpb/qrat.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>

namespace qpb {

namespace {
const Int kZero = 0;

Int int_gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}
}  // namespace

IntPoly::IntPoly(Int constant) {
    if (constant != 0) c_.push_back(std::move(constant));
}

IntPoly::IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim_(); }

IntPoly IntPoly::monomial(Int coeff, int degree) {
    if (coeff == 0) return IntPoly();
    std::vector<Int> c(static_cast<size_t>(degree) + 1, Int(0));
    c.back() = std::move(coeff);
    return IntPoly(std::move(c));
}

void IntPoly::trim_() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Int& IntPoly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<size_t>(k)];
}

const Int& IntPoly::leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-() const {
    std::vector<Int> r(c_);
    for (auto& v : r) v = -v;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (is_zero() || o.is_zero()) return IntPoly();
    std::vector<Int> r(c_.size() + o.c_.size() - 1, Int(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    std::vector<Int> r(c_.size() + static_cast<size_t>(k), Int(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i + static_cast<size_t>(k)] = c_[i];
    return IntPoly(std::move(r));
}

Int IntPoly::content() const {
    Int g = 0;
    for (const auto& v : c_) g = int_gcd(g, v);
    return g;
}

IntPoly IntPoly::primitive_part() const {
    if (is_zero()) return *this;
    Int g = content();
    std::vector<Int> r(c_);
    for (auto& v : r) v /= g;
    return IntPoly(std::move(r));
}

void IntPoly::divmod(const IntPoly& a, const IntPoly& b, IntPoly& quo, IntPoly& rem) {
    if (b.is_zero()) throw std::logic_error("polynomial division by zero");
    std::vector<Int> q(a.c_.size() > b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 1, Int(0));
    IntPoly r = a;
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Int lead = r.leading();
        if (lead % b.leading() != 0)
            throw std::logic_error("non-integral polynomial division step");
        Int factor = lead / b.leading();
        int shift = r.degree() - b.degree();
        q[static_cast<size_t>(shift)] = factor;
        r = r - b.shifted(shift) * IntPoly(factor);
    }
    quo = IntPoly(std::move(q));
    rem = r;
}

IntPoly IntPoly::div_exact(const IntPoly& a, const IntPoly& b) {
    IntPoly q, r;
    divmod(a, b, q, r);
    if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
    return q;
}

namespace {
// Pseudo-remainder with per-step content stripping; used only inside gcd.
IntPoly prem_primitive(IntPoly a, const IntPoly& b) {
    while (!a.is_zero() && a.degree() >= b.degree()) {
        int shift = a.degree() - b.degree();
        a = a * IntPoly(b.leading()) - b.shifted(shift) * IntPoly(a.leading());
        if (!a.is_zero()) a = a.primitive_part();
    }
    return a;
}
}  // namespace

IntPoly IntPoly::gcd(IntPoly a, IntPoly b) {
    auto positive = [](IntPoly p) {
        if (!p.is_zero() && p.leading() < 0) p = -p;
        return p;
    };
    if (a.is_zero()) return positive(b);
    if (b.is_zero()) return positive(a);
    Int cont = int_gcd(a.content(), b.content());
    a = a.primitive_part();
    b = b.primitive_part();
    while (!b.is_zero()) {
        IntPoly r = prem_primitive(a, b);
        a = b;
        b = r;
    }
    return positive(a * IntPoly(cont));
}

Rational IntPoly::evaluate(const Rational& q0) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q0 + Rational(*it);
    return acc;
}

size_t IntPoly::term_count() const {
    size_t n = 0;
    for (const auto& v : c_)
        if (v != 0) ++n;
    return n;
}

std::string IntPoly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int d = degree(); d >= 0; --d) {
        const Int& cd = coeff(d);
        if (cd == 0) continue;
        std::string term;
        Int a = cd < 0 ? Int(-cd) : cd;
        bool neg = cd < 0;
        if (d == 0) {
            term = a.str();
        } else {
            std::string qs = d == 1 ? "q" : "q^" + std::to_string(d);
            term = (a == 1) ? qs : a.str() + "*" + qs;
        }
        if (out.empty())
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? "-" : "+") + term;
    }
    return out;
}

QRat::QRat(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("division by zero in q-scalar");
    normalize_();
}

void QRat::normalize_() {
    if (num_.is_zero()) {
        den_ = IntPoly::one();
        return;
    }
    IntPoly g = IntPoly::gcd(num_, den_);
    if (!(g == IntPoly::one())) {
        num_ = IntPoly::div_exact(num_, g);
        den_ = IntPoly::div_exact(den_, g);
    }
    if (den_.leading() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

QRat QRat::q_power(int k) {
    if (k >= 0) return QRat(IntPoly::monomial(1, k), IntPoly::one());
    return QRat(IntPoly::one(), IntPoly::monomial(1, -k));
}

QRat QRat::from_laurent(IntPoly num, IntPoly den, int qshift) {
    if (qshift >= 0)
        return QRat(num.shifted(qshift), std::move(den));
    return QRat(std::move(num), den.shifted(-qshift));
}

bool QRat::is_one() const { return num_ == IntPoly::one() && den_ == IntPoly::one(); }

bool QRat::is_integer() const { return den_ == IntPoly::one() && num_.degree() <= 0; }

QRat QRat::operator+(const QRat& o) const {
    return QRat(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

QRat QRat::operator-(const QRat& o) const {
    return QRat(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

QRat QRat::operator-() const {
    QRat r = *this;
    r.num_ = -r.num_;
    return r;
}

QRat QRat::operator*(const QRat& o) const { return QRat(num_ * o.num_, den_ * o.den_); }

QRat QRat::operator/(const QRat& o) const { return *this * o.inverse(); }

QRat QRat::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in q-scalar");
    return QRat(den_, num_);
}

Rational QRat::evaluate(const Rational& q0) const {
    Rational d = den_.evaluate(q0);
    if (d == 0) {
        std::ostringstream os;
        os << "pole at q = " << q0;
        throw std::domain_error(os.str());
    }
    return num_.evaluate(q0) / d;
}

std::string QRat::to_string() const {
    if (den_ == IntPoly::one()) return num_.to_string();
    // Laurent monomial: num constant, den a plain power of q.
    if (den_.term_count() == 1 && den_.leading() == 1 && num_.term_count() == 1 &&
        num_.degree() == 0) {
        int e = -den_.degree();
        const Int& c = num_.coeff(0);
        Int a = c < 0 ? Int(-c) : c;
        std::string qs = "q^" + std::to_string(e);
        std::string term = (a == 1) ? qs : a.str() + "*" + qs;
        return (c < 0 ? "-" : "") + term;
    }
    std::string ns = num_.to_string();
    if (num_.term_count() > 1 || (!num_.is_zero() && num_.leading() < 0)) ns = "(" + ns + ")";
    std::string ds = den_.to_string();
    if (den_.term_count() > 1 || (den_.degree() > 0 && den_.leading() != 1)) ds = "(" + ds + ")";
    return ns + "/" + ds;
}

std::string QRat::to_string_coeff() const {
    if (is_integer()) return num_.to_string();
    // monic positive powers of q read unambiguously without parentheses
    if (den_ == IntPoly::one() && num_.term_count() == 1 && num_.leading() == 1)
        return num_.to_string();
    return "(" + to_string() + ")";
}

}  // namespace qpb
