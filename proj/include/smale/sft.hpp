#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smale/rng.hpp"

namespace smale {

using Word = std::vector<int>;

// Nonnegative integer square matrix driving a shift of finite type.
class TransitionMatrix {
public:
    TransitionMatrix() = default;
    explicit TransitionMatrix(std::vector<std::vector<long>> entries);

    int size() const { return n_; }
    long at(int i, int j) const { return entries_[i][j]; }
    bool allows(int i, int j) const { return entries_[i][j] > 0; }

    // every (i,j) reachable through some power
    bool irreducible() const;

    const std::vector<std::vector<long>>& rows() const { return entries_; }

private:
    int n_ = 0;
    std::vector<std::vector<long>> entries_;
};

// Eventually periodic bi-infinite sequence (left)^inf . core . (right)^inf,
// admissible for a fixed transition matrix. Always held in canonical form:
// primitive cycles, minimal core, and for globally periodic points the cycle
// anchored at index 0. Canonical form makes equality, hashing and ordering
// exact and cheap.
//
// Index semantics: core occupies [offset, offset+|core|); for i < offset the
// symbol is left[(i-offset) mod |left|]; for i >= offset+|core| it is
// right[(i-offset-|core|) mod |right|].
class SftPoint {
public:
    SftPoint() = default;
    // canonicalizes; throws std::invalid_argument on inadmissible seams
    SftPoint(Word left, Word core, Word right, long offset, const TransitionMatrix& mat);

    int at(long i) const;
    long core_begin() const { return offset_; }
    long core_end() const { return offset_ + static_cast<long>(core_.size()); }
    const Word& left_cycle() const { return left_; }
    const Word& core() const { return core_; }
    const Word& right_cycle() const { return right_; }

    bool operator==(const SftPoint& o) const {
        return offset_ == o.offset_ && left_ == o.left_ && core_ == o.core_ && right_ == o.right_;
    }
    bool operator!=(const SftPoint& o) const { return !(*this == o); }
    bool operator<(const SftPoint& o) const;

    std::size_t hash() const;
    std::string str() const;

private:
    void canonicalize();
    Word left_, core_, right_;
    long offset_ = 0;
};

struct SftPointHash {
    std::size_t operator()(const SftPoint& p) const { return p.hash(); }
};

// Shift of finite type as a Smale space. Metric d(x,y) = 2^-k with k the
// first mismatch radius; eps_X = 1/2 so the bracket domain is "symbols agree
// at index 0"; lambda = 2. All distances are dyadic, hence exact doubles.
class SftModel {
public:
    using Point = SftPoint;
    using Scalar = double;

    explicit SftModel(TransitionMatrix mat);

    const TransitionMatrix& matrix() const { return mat_; }
    int alphabet_size() const { return mat_.size(); }

    Scalar eps_X() const { return 0.5; }
    Scalar eps_X_prime() const { return 0.25; }
    double lambda() const { return 2.0; }
    Scalar half(Scalar s) const { return s / 2; }
    // s * lambda^-n
    Scalar contract(Scalar s, int n) const { return std::ldexp(s, -n); }
    static double to_double(Scalar s) { return s; }
    // factor by which phi can expand a ball: phi(B(x,r)) subset B(phi x, 2r)
    Scalar phi_expansion() const { return 2.0; }

    Point phi(const Point& x) const;
    Point phi_inv(const Point& x) const;
    Point iterate(const Point& x, long n) const;

    Scalar dist(const Point& x, const Point& y) const;
    double dist_double(const Point& x, const Point& y) const { return dist(x, y); }

    // splice: past of y with future of x; defined iff x_0 == y_0
    std::optional<Point> bracket(const Point& x, const Point& y) const;

    bool stably_equivalent(const Point& x, const Point& y) const;
    bool unstably_equivalent(const Point& x, const Point& y) const;

    // exact agreement tests on half-lines
    bool agree_forward(const Point& x, const Point& y, long from) const;
    bool agree_backward(const Point& x, const Point& y, long upto) const;

    std::vector<Point> points_of_period(int period, int max_period = 16) const;

    Point random_point(Rng& rng, int complexity = 4) const;
    // random point agreeing with x on |i| <= radius
    Point random_point_near(const Point& x, int radius, Rng& rng) const;
    Point random_point_near(const Point& x, Rng& rng) const { return random_point_near(x, 1, rng); }

    Word random_cycle(Rng& rng, int max_len) const;

    // all homoclinic points with past tail a rotation of one of q_cycles,
    // future tail a rotation of one of p_cycles, canonical core of length
    // <= bound placed inside [-bound, bound]
    std::vector<Point> homoclinic_points(const std::vector<Word>& p_cycles,
                                         const std::vector<Word>& q_cycles, int bound) const;

    // same, with tails read off periodic points of P and Q
    std::vector<Point> homoclinic_points(const std::vector<Point>& ps,
                                         const std::vector<Point>& qs, int bound) const;

    Point make_point(Word left, Word core, Word right, long offset) const {
        return SftPoint(std::move(left), std::move(core), std::move(right), offset, mat_);
    }

private:
    // first mismatch radius, or -1 if equal
    long mismatch_radius(const Point& x, const Point& y) const;
    std::vector<Word> admissible_words(int len) const;
    TransitionMatrix mat_;
};

}  // namespace smale
