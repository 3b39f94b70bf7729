#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smale/orbit.hpp"
#include "smale/sparse_op.hpp"

namespace smale {

// Index space: basis points first, then on-demand extension slots for image
// points outside the truncation. Keeping images addressable means a product
// of operators never silently loses mass; strict materialization treats any
// extension as a closure violation instead.
template <class M>
class PointSpace {
public:
    using Point = typename M::Point;

    explicit PointSpace(const Basis<M>& basis) : basis_size_(basis.size()) {
        points_ = basis.points();
        for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i].str(), i);
    }

    std::size_t basis_size() const { return basis_size_; }
    std::size_t size() const { return points_.size(); }
    const Point& at(std::size_t i) const { return points_[i]; }
    bool in_basis(std::size_t i) const { return i < basis_size_; }

    std::optional<std::size_t> find(const Point& p) const {
        auto it = index_.find(p.str());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t intern(const Point& p) {
        auto it = index_.find(p.str());
        if (it != index_.end()) return it->second;
        points_.push_back(p);
        index_.emplace(p.str(), points_.size() - 1);
        return points_.size() - 1;
    }

private:
    std::size_t basis_size_;
    std::vector<Point> points_;
    std::unordered_map<std::string, std::size_t> index_;
};

// A weighted partial point map: the symbolic form of every operator in play.
// Composition happens on exact points; matrices appear only at materialization.
template <class M>
using PointMap = std::function<std::optional<std::pair<typename M::Point, double>>(
    const typename M::Point&)>;

template <class M>
PointMap<M> compose_maps(PointMap<M> outer, PointMap<M> inner) {
    return [outer = std::move(outer), inner = std::move(inner)](const typename M::Point& x)
               -> std::optional<std::pair<typename M::Point, double>> {
        auto first = inner(x);
        if (!first) return std::nullopt;
        auto second = outer(first->first);
        if (!second) return std::nullopt;
        const double c = first->second * second->second;
        if (c == 0.0) return std::nullopt;
        return std::make_pair(second->first, c);
    };
}

// matrix of a point map over the basis columns of a space
template <class M>
SparseOperator materialize(const M& /*m*/, PointSpace<M>& space, const PointMap<M>& f,
                           bool strict = false) {
    SparseOperator op;
    const std::size_t n = space.basis_size();
    for (std::size_t i = 0; i < n; ++i) {
        auto img = f(space.at(i));
        if (!img || img->second == 0.0) continue;
        auto found = space.find(img->first);
        std::size_t target;
        if (found && space.in_basis(*found)) {
            target = *found;
        } else if (strict) {
            throw ResourceError("materialize: image of basis point escapes the truncation: " +
                                space.at(i).str());
        } else {
            target = space.intern(img->first);
        }
        op.add(i, target, img->second);
    }
    return op;
}

// y in X^u(w, delta): close and with the same past
template <class M>
bool in_local_unstable(const M& m, const typename M::Point& w, const typename M::Point& x,
                       const typename M::Scalar& delta) {
    if (!(m.dist(w, x) <= delta)) return false;
    auto b = m.bracket(w, x);
    return b && *b == w;
}

// y in X^s(w, delta): close and with the same future
template <class M>
bool in_local_stable(const M& m, const typename M::Point& w, const typename M::Point& x,
                     const typename M::Scalar& delta) {
    if (!(m.dist(w, x) <= delta)) return false;
    auto b = m.bracket(x, w);
    return b && *b == w;
}

// Basic element of the stable algebra: a function supported on the graph of
// h^s(x) = phi^-N [phi^N(x), phi^N(v)], x in X^u(w, delta), with a tent
// profile in the distance from w. Requires v ~s w; delta is small enough
// that phi^N carries X^u(w, delta) into the zone where the bracket exists.
template <class M>
struct BasicStableElement {
    using Point = typename M::Point;
    using Scalar = typename M::Scalar;

    const M* model = nullptr;
    Point v, w;
    int big_n = 0;
    Scalar delta{};
    double amplitude = 1.0;

    bool in_source(const Point& x) const { return in_local_unstable(*model, w, x, delta); }

    double coeff(const Point& x) const {
        if (!in_source(x)) return 0.0;
        const double d = M::to_double(model->dist(x, w));
        const double r = M::to_double(delta);
        const double t = 1.0 - d / r;
        return t > 0.0 ? amplitude * t : 0.0;
    }

    std::optional<Point> h(const Point& x) const {
        const M& m = *model;
        auto b = m.bracket(m.iterate(x, big_n), m.iterate(v, big_n));
        if (!b) return std::nullopt;
        return m.iterate(*b, -big_n);
    }

    // alpha_s^n(a) delta_x = a(h o phi^-n x, phi^-n x) delta_{phi^n o h o phi^-n x}
    PointMap<M> as_alpha_power(int n) const {
        return [self = *this, n](const Point& x)
                   -> std::optional<std::pair<Point, double>> {
            const M& m = *self.model;
            const Point xi = m.iterate(x, -n);
            const double c = self.coeff(xi);
            if (c == 0.0) return std::nullopt;
            auto hx = self.h(xi);
            if (!hx) return std::nullopt;
            return std::make_pair(m.iterate(*hx, n), c);
        };
    }

    PointMap<M> as_map() const { return as_alpha_power(0); }
};

// mirror element of the unstable algebra: h^u(x) = phi^N [phi^-N(v), phi^-N(x)]
// on X^s(w, delta)
template <class M>
struct BasicUnstableElement {
    using Point = typename M::Point;
    using Scalar = typename M::Scalar;

    const M* model = nullptr;
    Point v, w;
    int big_n = 0;
    Scalar delta{};
    double amplitude = 1.0;

    bool in_source(const Point& x) const { return in_local_stable(*model, w, x, delta); }

    double coeff(const Point& x) const {
        if (!in_source(x)) return 0.0;
        const double d = M::to_double(model->dist(x, w));
        const double r = M::to_double(delta);
        const double t = 1.0 - d / r;
        return t > 0.0 ? amplitude * t : 0.0;
    }

    std::optional<Point> h(const Point& x) const {
        const M& m = *model;
        auto b = m.bracket(m.iterate(v, -big_n), m.iterate(x, -big_n));
        if (!b) return std::nullopt;
        return m.iterate(*b, big_n);
    }

    PointMap<M> as_alpha_power(int n) const {
        return [self = *this, n](const Point& x)
                   -> std::optional<std::pair<Point, double>> {
            const M& m = *self.model;
            const Point xi = m.iterate(x, -n);
            const double c = self.coeff(xi);
            if (c == 0.0) return std::nullopt;
            auto hx = self.h(xi);
            if (!hx) return std::nullopt;
            return std::make_pair(m.iterate(*hx, n), c);
        };
    }

    PointMap<M> as_map() const { return as_alpha_power(0); }
};

// factories validating the side conditions; N grows until phi^N(w) enters the
// local stable set of phi^N(v), then delta = lambda^-N eps'_X
template <class M>
std::optional<BasicStableElement<M>> make_stable_element(const M& m, const typename M::Point& v,
                                                         const typename M::Point& w,
                                                         double amplitude = 1.0,
                                                         int max_n = 64) {
    if (!m.stably_equivalent(v, w)) return std::nullopt;
    for (int n = 0; n <= max_n; ++n) {
        const auto vn = m.iterate(v, n), wn = m.iterate(w, n);
        if (in_local_stable(m, vn, wn, m.eps_X_prime())) {
            BasicStableElement<M> e;
            e.model = &m;
            e.v = v;
            e.w = w;
            e.big_n = n;
            e.delta = m.contract(m.eps_X_prime(), n);
            e.amplitude = amplitude;
            return e;
        }
    }
    return std::nullopt;
}

template <class M>
std::optional<BasicUnstableElement<M>> make_unstable_element(const M& m,
                                                             const typename M::Point& v,
                                                             const typename M::Point& w,
                                                             double amplitude = 1.0,
                                                             int max_n = 64) {
    if (!m.unstably_equivalent(v, w)) return std::nullopt;
    for (int n = 0; n <= max_n; ++n) {
        const auto vn = m.iterate(v, -n), wn = m.iterate(w, -n);
        if (in_local_unstable(m, vn, wn, m.eps_X_prime())) {
            BasicUnstableElement<M> e;
            e.model = &m;
            e.v = v;
            e.w = w;
            e.big_n = n;
            e.delta = m.contract(m.eps_X_prime(), n);
            e.amplitude = amplitude;
            return e;
        }
    }
    return std::nullopt;
}

template <class M>
PointMap<M> shift_map(const M& m) {
    return [&m](const typename M::Point& x) {
        return std::optional<std::pair<typename M::Point, double>>(
            std::make_pair(m.phi(x), 1.0));
    };
}

template <class M>
PointMap<M> shift_inv_map(const M& m) {
    return [&m](const typename M::Point& x) {
        return std::optional<std::pair<typename M::Point, double>>(
            std::make_pair(m.phi_inv(x), 1.0));
    };
}

template <class M>
PointMap<M> identity_map() {
    return [](const typename M::Point& x) {
        return std::optional<std::pair<typename M::Point, double>>(std::make_pair(x, 1.0));
    };
}

// rank of the product of two basic-element operators on the truncation;
// the compactness lemma says it is 0 or 1
template <class M>
std::size_t product_rank(const M& m, PointSpace<M>& space, const PointMap<M>& a,
                         const PointMap<M>& b) {
    SparseOperator prod = materialize(m, space, compose_maps<M>(a, b));
    return prod.weighted_map_rank();
}

struct DecayReport {
    std::vector<double> norms_ab;  // ||alpha_s^-n(a) b||
    std::vector<double> norms_ba;  // ||b alpha_s^-n(a)||
    int first_zero_ab = -1;        // first n from which the sequence stays 0
    int first_zero_ba = -1;
    double max_dual_norm_gap = 0.0;  // exact vs power-iteration disagreement
};

template <class M>
DecayReport decay_sequence(const M& m, PointSpace<M>& space, const BasicStableElement<M>& a,
                           const BasicUnstableElement<M>& b, int n_max) {
    DecayReport rep;
    const PointMap<M> bmap = b.as_map();
    for (int n = 0; n <= n_max; ++n) {
        const PointMap<M> an = a.as_alpha_power(-n);
        SparseOperator ab = materialize(m, space, compose_maps<M>(an, bmap));
        SparseOperator ba = materialize(m, space, compose_maps<M>(bmap, an));
        const NormEstimate eab = ab.exact_norm();
        const NormEstimate eba = ba.exact_norm();
        rep.norms_ab.push_back(eab.value);
        rep.norms_ba.push_back(eba.value);
        if (!ab.empty()) {
            const NormEstimate p = ab.power_norm();
            rep.max_dual_norm_gap =
                std::max(rep.max_dual_norm_gap, std::fabs(p.value - eab.value));
        }
    }
    auto first_stable_zero = [n_max](const std::vector<double>& seq) {
        int first = -1;
        for (int n = 0; n <= n_max; ++n) {
            if (seq[n] == 0.0) {
                if (first < 0) first = n;
            } else {
                first = -1;
            }
        }
        return first;
    };
    rep.first_zero_ab = first_stable_zero(rep.norms_ab);
    rep.first_zero_ba = first_stable_zero(rep.norms_ba);
    return rep;
}

struct CommutatorReport {
    std::vector<double> with_b;        // ||alpha_s^n(a) b - b alpha_s^n(a)||
    std::vector<double> with_alpha_b;  // ||[alpha_s^n(a), alpha_u^-n(b)]||
    std::vector<std::string> witness;  // column point of the largest entry, per n
    double max_dual_norm_gap = 0.0;
};

template <class M>
CommutatorReport asymptotic_commutator(const M& m, PointSpace<M>& space,
                                       const BasicStableElement<M>& a,
                                       const BasicUnstableElement<M>& b, int n_max) {
    CommutatorReport rep;
    for (int n = 0; n <= n_max; ++n) {
        const PointMap<M> an = a.as_alpha_power(n);
        const PointMap<M> b0 = b.as_map();
        const PointMap<M> bn = b.as_alpha_power(-n);

        SparseOperator anb = materialize(m, space, compose_maps<M>(an, b0));
        SparseOperator ban = materialize(m, space, compose_maps<M>(b0, an));
        SparseOperator diff1 = anb.minus(ban);
        rep.with_b.push_back(diff1.norm().value);

        SparseOperator anbn = materialize(m, space, compose_maps<M>(an, bn));
        SparseOperator bnan = materialize(m, space, compose_maps<M>(bn, an));
        SparseOperator diff2 = anbn.minus(bnan);
        rep.with_alpha_b.push_back(diff2.norm().value);

        const NormEstimate ex = anb.exact_norm();
        if (!anb.empty()) {
            const NormEstimate pw = anb.power_norm();
            rep.max_dual_norm_gap =
                std::max(rep.max_dual_norm_gap, std::fabs(pw.value - ex.value));
        }
        std::string wit;
        double best = -1.0;
        for (const auto& [c, col] : diff1.columns())
            for (const auto& [r, vv] : col)
                if (std::fabs(vv) > best) {
                    best = std::fabs(vv);
                    wit = space.at(c).str();
                }
        rep.witness.push_back(wit);
    }
    return rep;
}

// Operator on H (x) l^2(Z) truncated to blocks [-window, window]. Every
// generator image is block-homogeneous: source block n maps to block
// n + shift through an H-operator depending on n.
template <class M>
struct TwoSidedOp {
    int shift = 0;
    int window = 0;
    std::map<int, SparseOperator> blocks;  // source block -> H-operator

    static TwoSidedOp compose(const TwoSidedOp& f, const TwoSidedOp& g) {
        TwoSidedOp out;
        out.shift = f.shift + g.shift;
        out.window = std::min(f.window, g.window);
        for (const auto& [n, gb] : g.blocks) {
            auto it = f.blocks.find(n + g.shift);
            if (it == f.blocks.end()) continue;
            out.blocks[n] = it->second.compose(gb);
        }
        return out;
    }
};

// pi_s of a stable basic element: diag over n of alpha_s^n(a)
template <class M>
TwoSidedOp<M> pi_s_element(const M& m, PointSpace<M>& space, const BasicStableElement<M>& a,
                           int window) {
    TwoSidedOp<M> op;
    op.shift = 0;
    op.window = window;
    for (int n = -window; n <= window; ++n)
        op.blocks[n] = materialize(m, space, a.as_alpha_power(n));
    return op;
}

// pi_s(u) = 1 (x) B: block n -> n-1 through the identity
template <class M>
TwoSidedOp<M> pi_s_shift(const M& m, PointSpace<M>& space, int window) {
    TwoSidedOp<M> op;
    op.shift = -1;
    op.window = window;
    SparseOperator id = materialize(m, space, identity_map<M>());
    for (int n = -window; n <= window; ++n) op.blocks[n] = id;
    return op;
}

// pi_u(b) = b (x) 1
template <class M>
TwoSidedOp<M> pi_u_element(const M& m, PointSpace<M>& space, const BasicUnstableElement<M>& b,
                           int window) {
    TwoSidedOp<M> op;
    op.shift = 0;
    op.window = window;
    SparseOperator bm = materialize(m, space, b.as_map());
    for (int n = -window; n <= window; ++n) op.blocks[n] = bm;
    return op;
}

// pi_u(u) = u (x) B*: block n -> n+1 through u
template <class M>
TwoSidedOp<M> pi_u_shift(const M& m, PointSpace<M>& space, int window) {
    TwoSidedOp<M> op;
    op.shift = 1;
    op.window = window;
    SparseOperator u = materialize(m, space, shift_map(m));
    for (int n = -window; n <= window; ++n) op.blocks[n] = u;
    return op;
}

struct TwoSidedReport {
    std::vector<int> block_index;
    std::vector<double> block_norms;
    bool exact_zero = true;
    int window = 0;
};

// per-block norms of the commutator [f, g] on the common interior blocks
template <class M>
TwoSidedReport two_sided_commutator(const TwoSidedOp<M>& f, const TwoSidedOp<M>& g) {
    TwoSidedReport rep;
    rep.window = std::min(f.window, g.window);
    TwoSidedOp<M> fg = TwoSidedOp<M>::compose(f, g);
    TwoSidedOp<M> gf = TwoSidedOp<M>::compose(g, f);
    for (const auto& [n, fgb] : fg.blocks) {
        auto it = gf.blocks.find(n);
        if (it == gf.blocks.end()) continue;
        SparseOperator d = fgb.minus(it->second);
        rep.block_index.push_back(n);
        rep.block_norms.push_back(d.norm().value);
        rep.exact_zero = rep.exact_zero && d.empty();
    }
    return rep;
}

}  // namespace smale
