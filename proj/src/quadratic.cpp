#include "smale/quadratic.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace smale {

double rational_to_double(const Rational& q) { return q.get_d(); }

long merge_field(const QuadNum& x, const QuadNum& y) {
    if (x.d_ == 0) return y.d_;
    if (y.d_ == 0) return x.d_;
    if (x.d_ != y.d_) throw std::logic_error("QuadNum: mixed quadratic fields");
    return x.d_;
}

QuadNum QuadNum::operator+(const QuadNum& o) const {
    return QuadNum(a_ + o.a_, b_ + o.b_, merge_field(*this, o));
}

QuadNum QuadNum::operator-(const QuadNum& o) const {
    return QuadNum(a_ - o.a_, b_ - o.b_, merge_field(*this, o));
}

QuadNum QuadNum::operator*(const QuadNum& o) const {
    const long d = merge_field(*this, o);
    return QuadNum(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, d);
}

QuadNum QuadNum::operator/(const QuadNum& o) const {
    const long d = merge_field(*this, o);
    Rational nrm = o.a_ * o.a_ - o.b_ * o.b_ * d;
    if (nrm == 0) throw std::domain_error("QuadNum: division by zero");
    // multiply by conjugate / field norm
    Rational ra = (a_ * o.a_ - b_ * o.b_ * d) / nrm;
    Rational rb = (b_ * o.a_ - a_ * o.b_) / nrm;
    return QuadNum(ra, rb, d);
}

int QuadNum::sign() const {
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with b^2 * D
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * d_;
    const int c = cmp(lhs, rhs);
    if (c == 0) return 0;  // only possible if D were a square; kept for safety
    return (c > 0) ? sa : sb;
}

mpz_class QuadNum::floor() const {
    // start from a double estimate, then correct exactly
    double est = to_double();
    mpz_class n(std::floor(est));
    auto lt = [&](const mpz_class& m) {  // value < m ?
        return (*this - QuadNum(Rational(m))).sign() < 0;
    };
    while (lt(n)) n -= 1;
    while (!lt(n + 1)) n += 1;
    return n;
}

QuadNum QuadNum::mod_one() const {
    mpz_class f = floor();
    return *this - QuadNum(Rational(f));
}

double QuadNum::to_double() const {
    double v = a_.get_d();
    if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v;
}

std::string QuadNum::str() const {
    if (b_ == 0) return a_.get_str();
    return a_.get_str() + "+" + b_.get_str() + "r" + std::to_string(d_);
}

QuadVec2 operator+(const QuadVec2& u, const QuadVec2& v) { return {u.x + v.x, u.y + v.y}; }
QuadVec2 operator-(const QuadVec2& u, const QuadVec2& v) { return {u.x - v.x, u.y - v.y}; }
QuadVec2 operator*(const QuadNum& c, const QuadVec2& v) { return {c * v.x, c * v.y}; }

QuadVec2 QuadMat2::solve(const QuadVec2& w) const {
    QuadNum dt = det();
    if (dt.sign() == 0) throw std::domain_error("QuadMat2::solve: singular matrix");
    QuadNum s = (w.x * d - w.y * b) / dt;
    QuadNum t = (w.y * a - w.x * c) / dt;
    return {s, t};
}

}  // namespace smale
