#include "smale/torus.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace smale {

namespace {

long squarefree_part(long n, long& scale) {
    scale = 1;
    for (long p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
            n /= p * p;
            scale *= p;
        }
    }
    return n;
}

// max-norm distance from lattice vector v to the line R*e (e has nonzero
// components): min_t max(|v1 - t e1|, |v2 - t e2|). The optimum is attained
// where the two coordinates balance, t = (v1 e2 +/- v2 e1)/(e2 +/- e1)-style;
// checking both balance points and the per-coordinate zeros is exhaustive.
QuadNum line_distance(const QuadVec2& e, const QuadNum& v1, const QuadNum& v2) {
    auto value = [&](const QuadNum& t) {
        QuadNum a = (v1 - t * e.x).abs();
        QuadNum b = (v2 - t * e.y).abs();
        return a > b ? a : b;
    };
    std::vector<QuadNum> cands;
    QuadNum den1 = e.x - e.y, den2 = e.x + e.y;
    if (den1.sign() != 0) cands.push_back((v1 - v2) / den1);
    if (den2.sign() != 0) cands.push_back((v1 + v2) / den2);
    if (e.x.sign() != 0) cands.push_back(v1 / e.x);
    if (e.y.sign() != 0) cands.push_back(v2 / e.y);
    QuadNum best = value(cands.front());
    for (const QuadNum& t : cands) {
        QuadNum val = value(t);
        if (val < best) best = val;
    }
    return best;
}

}  // namespace

std::size_t TorusPoint::hash() const {
    std::hash<std::string> h;
    return h(x.str()) * 1315423911u ^ h(y.str());
}

TorusModel::TorusModel(std::array<std::array<long, 2>, 2> m) : m_(m) {
    const long a = m[0][0], b = m[0][1], c = m[1][0], dd = m[1][1];
    const long det = a * dd - b * c;
    if (det != 1 && det != -1)
        throw std::invalid_argument("TorusModel: determinant must be +-1");
    const long tr = a + dd;
    const long disc = tr * tr - 4 * det;
    if (disc <= 0) throw std::invalid_argument("TorusModel: not hyperbolic");
    long scale = 0;
    d_ = squarefree_part(disc, scale);
    if (d_ == 1) throw std::invalid_argument("TorusModel: eigenvalues rational, not hyperbolic");
    if (b == 0 && c == 0) throw std::invalid_argument("TorusModel: diagonal matrix");

    // eigenvalues (tr +- scale*sqrt(d))/2
    QuadNum lam_plus(Rational(tr, 2), Rational(scale, 2), d_);
    QuadNum lam_minus(Rational(tr, 2), Rational(-scale, 2), d_);
    QuadNum one(1);
    if (lam_plus.abs() > one) {
        lambda_u_ = lam_plus;
        lambda_s_ = lam_minus;
    } else {
        lambda_u_ = lam_minus;
        lambda_s_ = lam_plus;
    }
    if (!(lambda_u_.abs() > one) || !(lambda_s_.abs() < one))
        throw std::invalid_argument("TorusModel: eigenvalue on the unit circle");
    lambda_u_abs_ = lambda_u_.abs();
    lambda_s_abs_ = lambda_s_.abs();

    auto eigvec = [&](const QuadNum& lam) -> QuadVec2 {
        if (b != 0) return {QuadNum(Rational(b)), lam - QuadNum(Rational(a))};
        return {lam - QuadNum(Rational(dd)), QuadNum(Rational(c))};
    };
    e_u_ = eigvec(lambda_u_);
    e_s_ = eigvec(lambda_s_);

    // inverse matrix: adj(M)/det with det = +-1
    m_inv_ = {{{det * dd, -det * b}, {-det * c, det * a}}};
    mat_inf_norm_ = std::max(std::labs(a) + std::labs(b), std::labs(c) + std::labs(dd));

    // eps_X = (min separation of eigenlines from neighbouring translates)/4
    QuadNum sep;
    bool first = true;
    for (long v1 = -1; v1 <= 1; ++v1)
        for (long v2 = -1; v2 <= 1; ++v2) {
            if (v1 == 0 && v2 == 0) continue;
            for (const QuadVec2* e : {&e_s_, &e_u_}) {
                QuadNum dist = line_distance(*e, QuadNum(Rational(v1)), QuadNum(Rational(v2)));
                if (first || dist < sep) {
                    sep = dist;
                    first = false;
                }
            }
        }
    eps_x_ = sep / QuadNum(4);

    // Lemma-2.2 constant: d(x,y) < eps' forces both bracket displacements
    // below eps_X/2. Displacement factors: |s| <= ||row1(T^-1)||_1 * d and
    // d(x,[x,y]) = |s| * ||e_s||_inf, dually for the unstable side.
    QuadMat2 T{e_s_.x, -e_u_.x, e_s_.y, -e_u_.y};
    solve_mat_ = T;
    QuadNum dt = T.det();
    QuadNum r1 = ((e_u_.x / dt).abs() + (e_u_.y / dt).abs());  // |s| coefficient row
    QuadNum r2 = ((e_s_.x / dt).abs() + (e_s_.y / dt).abs());
    QuadNum ns = e_s_.x.abs() > e_s_.y.abs() ? e_s_.x.abs() : e_s_.y.abs();
    QuadNum nu = e_u_.x.abs() > e_u_.y.abs() ? e_u_.x.abs() : e_u_.y.abs();
    QuadNum cs = r1 * ns, cu = r2 * nu;
    QuadNum cmax = cs > cu ? cs : cu;
    QuadNum target = eps_x_ / QuadNum(2);
    eps_x_prime_ = target / cmax;
    if (eps_x_prime_ > target) eps_x_prime_ = target;
}

QuadNum TorusModel::contract(Scalar s, int n) const {
    for (int i = 0; i < n; ++i) s = s * lambda_s_abs_;
    for (int i = 0; i > n; --i) s = s * lambda_u_abs_;
    return s;
}

TorusPoint TorusModel::phi(const Point& p) const {
    QuadNum nx = QuadNum(Rational(m_[0][0])) * p.x + QuadNum(Rational(m_[0][1])) * p.y;
    QuadNum ny = QuadNum(Rational(m_[1][0])) * p.x + QuadNum(Rational(m_[1][1])) * p.y;
    return {nx.mod_one(), ny.mod_one()};
}

TorusPoint TorusModel::phi_inv(const Point& p) const {
    QuadNum nx = QuadNum(Rational(m_inv_[0][0])) * p.x + QuadNum(Rational(m_inv_[0][1])) * p.y;
    QuadNum ny = QuadNum(Rational(m_inv_[1][0])) * p.x + QuadNum(Rational(m_inv_[1][1])) * p.y;
    return {nx.mod_one(), ny.mod_one()};
}

TorusPoint TorusModel::iterate(Point p, long n) const {
    for (long i = 0; i < n; ++i) p = phi(p);
    for (long i = 0; i > n; --i) p = phi_inv(p);
    return p;
}

QuadVec2 TorusModel::min_rep(const Point& from, const Point& to) const {
    QuadNum dx = (to.x - from.x).mod_one();
    QuadNum dy = (to.y - from.y).mod_one();
    QuadNum hf(Rational(1, 2));
    if (dx > hf) dx -= QuadNum(1);
    if (dy > hf) dy -= QuadNum(1);
    return {dx, dy};
}

QuadNum TorusModel::dist(const Point& a, const Point& b) const {
    QuadVec2 w = min_rep(a, b);
    QuadNum ax = w.x.abs(), ay = w.y.abs();
    return ax > ay ? ax : ay;
}

std::optional<TorusPoint> TorusModel::bracket(const Point& x, const Point& y) const {
    if (dist(x, y) > eps_x_) return std::nullopt;
    QuadVec2 w = min_rep(x, y);
    QuadVec2 st = solve_mat_.solve(w);  // s e_s - t e_u = y - x
    QuadNum zx = (x.x + st.x * e_s_.x).mod_one();
    QuadNum zy = (x.y + st.x * e_s_.y).mod_one();
    return TorusPoint{zx, zy};
}

bool TorusModel::stably_equivalent(const Point& a, const Point& b) const {
    // b - a + v parallel to e_s for some integer v: cross product zero gives
    // two rational equations in (v1, v2)
    const QuadVec2& e = e_s_;
    QuadNum d1 = b.x - a.x, d2 = b.y - a.y;
    Rational e1r = e.x.rat_part(), e1q = e.x.irr_part();
    Rational e2r = e.y.rat_part(), e2q = e.y.irr_part();
    Rational D(d_);
    // (d1 + v1) e2 = (d2 + v2) e1, split into rational and sqrt(D) parts
    Rational a11 = e2r, a12 = -e1r;
    Rational a21 = e2q, a22 = -e1q;
    Rational r1 = d2.rat_part() * e1r + d2.irr_part() * e1q * D - d1.rat_part() * e2r -
                  d1.irr_part() * e2q * D;
    Rational r2 = d2.rat_part() * e1q + d2.irr_part() * e1r - d1.rat_part() * e2q -
                  d1.irr_part() * e2r;
    Rational det = a11 * a22 - a12 * a21;
    if (det == 0) return false;
    Rational v1 = (r1 * a22 - r2 * a12) / det;
    Rational v2 = (a11 * r2 - a21 * r1) / det;
    return v1.get_den() == 1 && v2.get_den() == 1;
}

bool TorusModel::unstably_equivalent(const Point& a, const Point& b) const {
    const QuadVec2& e = e_u_;
    QuadNum d1 = b.x - a.x, d2 = b.y - a.y;
    Rational e1r = e.x.rat_part(), e1q = e.x.irr_part();
    Rational e2r = e.y.rat_part(), e2q = e.y.irr_part();
    Rational D(d_);
    Rational a11 = e2r, a12 = -e1r;
    Rational a21 = e2q, a22 = -e1q;
    Rational r1 = d2.rat_part() * e1r + d2.irr_part() * e1q * D - d1.rat_part() * e2r -
                  d1.irr_part() * e2q * D;
    Rational r2 = d2.rat_part() * e1q + d2.irr_part() * e1r - d1.rat_part() * e2q -
                  d1.irr_part() * e2r;
    Rational det = a11 * a22 - a12 * a21;
    if (det == 0) return false;
    Rational v1 = (r1 * a22 - r2 * a12) / det;
    Rational v2 = (a11 * r2 - a21 * r1) / det;
    return v1.get_den() == 1 && v2.get_den() == 1;
}

std::vector<TorusPoint> TorusModel::points_of_period(int period, int max_period) const {
    if (period < 1 || period > max_period)
        throw std::length_error("points_of_period: period outside configured bound");
    // K = M^period - I over Z; solutions are adj(K) v / det(K) mod 1
    long k[2][2] = {{1, 0}, {0, 1}};
    for (int i = 0; i < period; ++i) {
        long n00 = m_[0][0] * k[0][0] + m_[0][1] * k[1][0];
        long n01 = m_[0][0] * k[0][1] + m_[0][1] * k[1][1];
        long n10 = m_[1][0] * k[0][0] + m_[1][1] * k[1][0];
        long n11 = m_[1][0] * k[0][1] + m_[1][1] * k[1][1];
        k[0][0] = n00;
        k[0][1] = n01;
        k[1][0] = n10;
        k[1][1] = n11;
    }
    k[0][0] -= 1;
    k[1][1] -= 1;
    const long det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
    if (det == 0) throw std::logic_error("points_of_period: singular M^n - I");
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<TorusPoint> out;
    const long bound = std::labs(k[0][0]) + std::labs(k[0][1]) + std::labs(k[1][0]) +
                       std::labs(k[1][1]);
    for (long v1 = -bound; v1 <= bound; ++v1) {
        for (long v2 = -bound; v2 <= bound; ++v2) {
            // x = adj(K) v / det
            Rational x1 = Rational(k[1][1] * v1 - k[0][1] * v2, det);
            Rational x2 = Rational(-k[1][0] * v1 + k[0][0] * v2, det);
            x1.canonicalize();
            x2.canonicalize();
            TorusPoint p{QuadNum(x1).mod_one(), QuadNum(x2).mod_one()};
            if (seen.insert({p.x.str(), p.y.str()}).second) out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    if (static_cast<long>(out.size()) != std::labs(det))
        throw std::logic_error("points_of_period: count mismatch with |det(M^n - I)|");
    return out;
}

TorusPoint TorusModel::random_point(Rng& rng, int denom_bits) const {
    const long den = 1L << denom_bits;
    Rational ax(static_cast<long>(rng.below(den)), den);
    Rational ay(static_cast<long>(rng.below(den)), den);
    ax.canonicalize();
    ay.canonicalize();
    // half the samples get a small irrational component
    if (rng.coin()) {
        Rational bx(static_cast<long>(rng.below(16)), 64);
        Rational by(static_cast<long>(rng.below(16)), 64);
        bx.canonicalize();
        by.canonicalize();
        return {QuadNum(ax, bx, d_).mod_one(), QuadNum(ay, by, d_).mod_one()};
    }
    return {QuadNum(ax).mod_one(), QuadNum(ay).mod_one()};
}

TorusPoint TorusModel::random_point_near(const Point& p, Rng& rng) const {
    // offset within eps_X/2 in each coordinate
    QuadNum scale = eps_x_ / QuadNum(2);
    Rational r1(static_cast<long>(rng.below(129)) - 64, 64);
    Rational r2(static_cast<long>(rng.below(129)) - 64, 64);
    r1.canonicalize();
    r2.canonicalize();
    QuadNum dx = scale * QuadNum(r1);
    QuadNum dy = scale * QuadNum(r2);
    return {(p.x + dx).mod_one(), (p.y + dy).mod_one()};
}

TorusPoint TorusModel::line_intersection(const Point& p, const Point& q, long v1, long v2) const {
    QuadVec2 w{q.x + QuadNum(Rational(v1)) - p.x, q.y + QuadNum(Rational(v2)) - p.y};
    QuadVec2 st = solve_mat_.solve(w);
    QuadNum zx = (p.x + st.x * e_s_.x).mod_one();
    QuadNum zy = (p.y + st.x * e_s_.y).mod_one();
    return {zx, zy};
}

std::vector<TorusPoint> TorusModel::homoclinic_points(const std::vector<Point>& ps,
                                                      const std::vector<Point>& qs,
                                                      int bound) const {
    std::vector<Point> out =
        homoclinic_filtered(ps, qs, bound, [](const Point&) { return true; });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TorusPoint TorusModel::make_point(Rational a, Rational b) const {
    a.canonicalize();
    b.canonicalize();
    return {QuadNum(a).mod_one(), QuadNum(b).mod_one()};
}

TorusPoint TorusModel::make_point_quad(QuadNum a, QuadNum b) const {
    return {a.mod_one(), b.mod_one()};
}

}  // namespace smale
