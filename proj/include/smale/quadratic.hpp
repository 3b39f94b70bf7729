#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace smale {

using Rational = mpq_class;

double rational_to_double(const Rational& q);

// Element a + b*sqrt(D) of the real quadratic field Q(sqrt(D)), D a fixed
// square-free positive integer. All arithmetic and comparisons are exact;
// doubles appear only through to_double() for reports and bump profiles.
class QuadNum {
public:
    QuadNum() : a_(0), b_(0), d_(0) {}
    QuadNum(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) { normalize(); }
    explicit QuadNum(Rational a) : a_(std::move(a)), b_(0), d_(0) {}
    QuadNum(long a) : a_(a), b_(0), d_(0) {}  // NOLINT: implicit for literals

    const Rational& rat_part() const { return a_; }
    const Rational& irr_part() const { return b_; }
    long field_d() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    QuadNum operator-() const { return QuadNum(-a_, -b_, d_); }
    QuadNum operator+(const QuadNum& o) const;
    QuadNum operator-(const QuadNum& o) const;
    QuadNum operator*(const QuadNum& o) const;
    QuadNum operator/(const QuadNum& o) const;
    QuadNum& operator+=(const QuadNum& o) { return *this = *this + o; }
    QuadNum& operator-=(const QuadNum& o) { return *this = *this - o; }
    QuadNum& operator*=(const QuadNum& o) { return *this = *this * o; }
    QuadNum& operator/=(const QuadNum& o) { return *this = *this / o; }

    // -1, 0, +1
    int sign() const;

    bool operator==(const QuadNum& o) const { return (*this - o).sign() == 0; }
    bool operator!=(const QuadNum& o) const { return !(*this == o); }
    bool operator<(const QuadNum& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QuadNum& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const QuadNum& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const QuadNum& o) const { return (*this - o).sign() >= 0; }

    QuadNum abs() const { return sign() < 0 ? -*this : *this; }

    // largest integer n with n <= value
    mpz_class floor() const;

    // exact fractional part, in [0,1)
    QuadNum mod_one() const;

    double to_double() const;

    // canonical text form "a+b√D" with reduced rationals; doubles as hash key
    std::string str() const;

private:
    void normalize() {
        if (b_ == 0) d_ = 0;
    }
    Rational a_, b_;
    long d_;

    friend long merge_field(const QuadNum& x, const QuadNum& y);
};

// 2x2 matrix over Q(sqrt(D)); enough linear algebra for eigenline geometry
struct QuadVec2 {
    QuadNum x, y;
};

QuadVec2 operator+(const QuadVec2& u, const QuadVec2& v);
QuadVec2 operator-(const QuadVec2& u, const QuadVec2& v);
QuadVec2 operator*(const QuadNum& c, const QuadVec2& v);

struct QuadMat2 {
    QuadNum a, b, c, d;  // [[a,b],[c,d]]
    QuadNum det() const { return a * d - b * c; }
    QuadVec2 apply(const QuadVec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    // solve M*(s,t)^T = w; requires det != 0
    QuadVec2 solve(const QuadVec2& w) const;
};

}  // namespace smale
