#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "smale/quadratic.hpp"
#include "smale/rng.hpp"

namespace smale {

// Point of T^2 = R^2/Z^2 with coordinates in Q(sqrt(D)), reduced into [0,1).
struct TorusPoint {
    QuadNum x, y;

    bool operator==(const TorusPoint& o) const { return x == o.x && y == o.y; }
    bool operator!=(const TorusPoint& o) const { return !(*this == o); }
    bool operator<(const TorusPoint& o) const { return x < o.x || (x == o.x && y < o.y); }
    std::size_t hash() const;
    std::string str() const { return x.str() + "," + y.str(); }
};

struct TorusPointHash {
    std::size_t operator()(const TorusPoint& p) const { return p.hash(); }
};

// Hyperbolic toral automorphism on T^2 given by an integer matrix with
// |det| = 1 and real irrational eigenvalues. Metric is the quotient max-norm;
// stable/unstable directions are exact eigenvectors over Q(sqrt(D)). eps_X is
// a quarter of the smallest max-norm separation between an eigenline and its
// translates by nonzero lattice vectors in {-1,0,1}^2.
class TorusModel {
public:
    using Point = TorusPoint;
    using Scalar = QuadNum;

    explicit TorusModel(std::array<std::array<long, 2>, 2> m);

    const std::array<std::array<long, 2>, 2>& matrix() const { return m_; }
    long field_d() const { return d_; }

    Scalar eps_X() const { return eps_x_; }
    Scalar eps_X_prime() const { return eps_x_prime_; }
    double lambda() const { return lambda_u_abs_.to_double(); }
    const QuadNum& lambda_exact() const { return lambda_u_abs_; }
    Scalar half(Scalar s) const { return s / QuadNum(2); }
    Scalar contract(Scalar s, int n) const;  // s * lambda^-n, exact
    static double to_double(const Scalar& s) { return s.to_double(); }
    Scalar phi_expansion() const { return QuadNum(Rational(mat_inf_norm_)); }

    const QuadVec2& stable_dir() const { return e_s_; }
    const QuadVec2& unstable_dir() const { return e_u_; }

    Point phi(const Point& p) const;
    Point phi_inv(const Point& p) const;
    Point iterate(Point p, long n) const;

    Scalar dist(const Point& a, const Point& b) const;
    double dist_double(const Point& a, const Point& b) const { return dist(a, b).to_double(); }

    // local [x,y]: intersection of the stable line through x with the
    // unstable line through y, via the minimal lattice representative
    std::optional<Point> bracket(const Point& x, const Point& y) const;

    bool stably_equivalent(const Point& a, const Point& b) const;
    bool unstably_equivalent(const Point& a, const Point& b) const;

    // all solutions of phi^n(x) = x, |det(M^n - I)| of them
    std::vector<Point> points_of_period(int period, int max_period = 8) const;

    Point random_point(Rng& rng, int denom_bits = 6) const;
    Point random_point_near(const Point& p, Rng& rng) const;

    // intersections (stable line through p) x (unstable line through q+v),
    // for v in Z^2 with |v|_inf <= bound
    std::vector<Point> homoclinic_points(const std::vector<Point>& ps,
                                         const std::vector<Point>& qs, int bound) const;

    // same enumeration, but stores only points accepted by keep(); used to
    // assemble covers far beyond the sizes enumerate-all could hold
    template <class Keep>
    std::vector<Point> homoclinic_filtered(const std::vector<Point>& ps,
                                           const std::vector<Point>& qs, int bound,
                                           Keep keep) const {
        std::vector<Point> out;
        for (const Point& p : ps)
            for (const Point& q : qs)
                for (long v1 = -bound; v1 <= bound; ++v1)
                    for (long v2 = -bound; v2 <= bound; ++v2) {
                        Point z = line_intersection(p, q, v1, v2);
                        if (keep(z)) out.push_back(z);
                    }
        return out;
    }

    Point line_intersection(const Point& p, const Point& q, long v1, long v2) const;

    Point make_point(Rational a, Rational b) const;
    Point make_point_quad(QuadNum a, QuadNum b) const;

private:
    QuadVec2 min_rep(const Point& from, const Point& to) const;  // to - from, components in [-1/2,1/2]
    std::array<std::array<long, 2>, 2> m_;
    std::array<std::array<long, 2>, 2> m_inv_;
    long d_ = 0;            // square-free part of tr^2 - 4 det
    long mat_inf_norm_ = 0;
    QuadNum lambda_u_, lambda_s_, lambda_u_abs_, lambda_s_abs_;
    QuadVec2 e_s_, e_u_;
    QuadMat2 solve_mat_;  // columns (e_s, -e_u)
    QuadNum eps_x_, eps_x_prime_;
};

}  // namespace smale
