#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "smale/partition.hpp"

namespace smale {

template <class M>
struct PairPt {
    using Point = typename M::Point;
    Point a, b;
    bool operator==(const PairPt& o) const { return a == o.a && b == o.b; }
    bool operator!=(const PairPt& o) const { return !(*this == o); }
    std::string str() const { return a.str() + "(x)" + b.str(); }
};

// index space over basis pairs of the two-fold tensor truncation
template <class M>
class TensorSpace {
public:
    using Pair = PairPt<M>;

    explicit TensorSpace(std::vector<Pair> pairs) {
        for (auto& p : pairs) intern(p);
        basis_size_ = pairs_.size();
    }

    std::size_t basis_size() const { return basis_size_; }
    std::size_t size() const { return pairs_.size(); }
    const Pair& at(std::size_t i) const { return pairs_[i]; }
    bool in_basis(std::size_t i) const { return i < basis_size_; }

    std::optional<std::size_t> find(const Pair& p) const {
        auto it = index_.find(p.str());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t intern(const Pair& p) {
        auto it = index_.find(p.str());
        if (it != index_.end()) return it->second;
        pairs_.push_back(p);
        index_.emplace(p.str(), pairs_.size() - 1);
        return pairs_.size() - 1;
    }

private:
    std::vector<Pair> pairs_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t basis_size_ = 0;
};

// One column of p_G in symbolic form. Follows the displayed action: find the
// unique k with w in X^u(g_k, eps), z in X^s(g_k, eps) (its center is [z,w]),
// then emit f_k([w,z]) f_i([w,z]) at ([w,g_i], [g_i,z]); undefined brackets
// drop their term.
template <class M, class P>
std::vector<std::pair<PairPt<M>, double>> pg_column(const P& part, const typename M::Point& w,
                                                    const typename M::Point& z) {
    const M& m = part.model();
    std::vector<std::pair<PairPt<M>, double>> out;
    auto c = m.bracket(z, w);
    if (!c) return out;
    auto k = part.find_center(*c);
    if (!k) return out;
    const auto& g = part.center(*k);
    if (!in_local_unstable(m, g, w, part.epsilon())) return out;
    if (!in_local_stable(m, g, z, part.epsilon())) return out;
    auto x = m.bracket(w, z);
    if (!x) return out;
    const auto vals = part.eval(*x);
    double fk = 0.0;
    for (const auto& [i, f] : vals)
        if (i == *k) fk = f;
    if (fk == 0.0) return out;
    for (const auto& [i, fi] : vals) {
        auto left = m.bracket(w, part.center(i));
        auto right = m.bracket(part.center(i), z);
        if (!left || !right) continue;
        out.push_back({PairPt<M>{*left, *right}, fk * fi});
    }
    return out;
}

// seed pairs closed under the p_G image map; the image family is self-closed
// so the loop reaches a fixpoint in a couple of rounds
template <class M, class P>
std::vector<PairPt<M>> close_pairs_under_pg(const P& part, std::vector<PairPt<M>> seeds,
                                            int max_rounds = 8) {
    std::unordered_map<std::string, bool> have;
    std::vector<PairPt<M>> out;
    for (const auto& p : seeds)
        if (!have.count(p.str())) {
            have[p.str()] = true;
            out.push_back(p);
        }
    std::size_t head = 0;
    int rounds = 0;
    while (head < out.size()) {
        if (++rounds > max_rounds * 1000000) throw ResourceError("close_pairs_under_pg: runaway");
        const PairPt<M> cur = out[head++];
        for (const auto& [img, coef] : pg_column<M>(part, cur.a, cur.b)) {
            (void)coef;
            if (!have.count(img.str())) {
                have[img.str()] = true;
                out.push_back(img);
            }
        }
    }
    return out;
}

template <class M, class P>
SparseOperator pg_matrix(const P& part, TensorSpace<M>& space) {
    SparseOperator op;
    const std::size_t n = space.basis_size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pr = space.at(i);
        for (const auto& [img, coef] : pg_column<M>(part, pr.a, pr.b))
            op.add(i, space.intern(img), coef);
    }
    return op;
}

// column indices whose image pairs (and the images of those) stay inside the
// tensor basis; idempotency is only meaningful there
template <class M>
std::vector<std::size_t> interior_columns(const SparseOperator& op, const TensorSpace<M>& space) {
    std::vector<std::size_t> out;
    const std::size_t n = space.basis_size();
    for (std::size_t i = 0; i < n; ++i) {
        bool inside = true;
        for (const auto& [r, v] : op.column(i)) {
            if (!space.in_basis(r)) {
                inside = false;
                break;
            }
            for (const auto& [r2, v2] : op.column(r)) {
                (void)v2;
                if (!space.in_basis(r2)) {
                    inside = false;
                    break;
                }
            }
            if (!inside) break;
        }
        if (inside) out.push_back(i);
    }
    return out;
}

struct ProjectionCheck {
    double idem_frobenius = 0.0;   // ||p^2 - p||_F over interior columns
    double selfadj_max = 0.0;      // max |p - p*| entry over the basis block
    std::size_t columns = 0;
    std::size_t interior = 0;
    std::size_t rank_trace = 0;      // distinct bracket classes (theoretical rank)
    std::size_t rank_eigen = 0;      // eigenvalues > 1/2 on the class block
    double trace = 0.0;
};

std::size_t eigen_rank_on_block(const SparseOperator& op, const std::vector<std::size_t>& block);

template <class M, class P>
ProjectionCheck check_projection(const P& part, TensorSpace<M>& space, const SparseOperator& pg,
                                 std::size_t eigen_block_limit = 400) {
    const M& m = part.model();
    ProjectionCheck chk;
    chk.columns = space.basis_size();
    auto interior = interior_columns<M>(pg, space);
    chk.interior = interior.size();
    std::set<std::size_t> interior_set(interior.begin(), interior.end());

    // residual columns of p^2 - p
    double fro2 = 0.0;
    for (std::size_t c : interior) {
        std::map<std::size_t, double> acc;
        for (const auto& [mid, a] : pg.column(c))
            for (const auto& [r, b] : pg.column(mid)) acc[r] += a * b;
        for (const auto& [r, v] : pg.column(c)) acc[r] -= v;
        for (const auto& [r, v] : acc) fro2 += v * v;
    }
    chk.idem_frobenius = std::sqrt(fro2);

    // self-adjointness over the basis-portion block
    double mx = 0.0;
    for (const auto& [c, col] : pg.columns()) {
        if (!space.in_basis(c)) continue;
        for (const auto& [r, v] : col)
            if (space.in_basis(r)) mx = std::max(mx, std::fabs(v - pg.entry(r, c)));
    }
    chk.selfadj_max = mx;

    for (std::size_t c = 0; c < space.basis_size(); ++c) chk.trace += pg.entry(c, c);

    // rank oracle: group interior active columns by their bracket class
    std::map<std::string, std::vector<std::size_t>> classes;
    for (std::size_t c : interior) {
        if (pg.column(c).empty()) continue;
        auto x = m.bracket(space.at(c).a, space.at(c).b);
        if (!x) continue;
        classes[x->str()].push_back(c);
    }
    // keep only classes whose member pairs are all interior
    std::vector<std::vector<std::size_t>> complete;
    for (const auto& [key, cols] : classes) {
        bool all_in = true;
        for (std::size_t c : cols)
            if (!interior_set.count(c)) all_in = false;
        if (all_in) complete.push_back(cols);
    }
    chk.rank_trace = complete.size();

    // dense eigensolve on a block of whole classes
    std::vector<std::size_t> block;
    std::size_t used_classes = 0;
    for (const auto& cols : complete) {
        if (block.size() + cols.size() > eigen_block_limit) break;
        block.insert(block.end(), cols.begin(), cols.end());
        ++used_classes;
    }
    chk.rank_eigen = eigen_rank_on_block(pg, block);
    chk.rank_trace = used_classes;
    return chk;
}

// homotopy family (F_s, G_s): centers G then phi(G); bumps sqrt(1-s) f_k and
// sqrt(s) f_k o phi^-1
template <class M>
class HomotopyPartition {
public:
    using Point = typename M::Point;
    using Scalar = typename M::Scalar;

    HomotopyPartition(const EpsilonPartition<M>& base, double s) : base_(&base), s_(s) {
        const M& m = base.model();
        for (std::size_t k = 0; k < base.size(); ++k) centers_.push_back(base.center(k));
        for (std::size_t k = 0; k < base.size(); ++k) centers_.push_back(m.phi(base.center(k)));
        for (std::size_t k = 0; k < centers_.size(); ++k)
            center_index_.emplace(centers_[k].str(), k);
        if (center_index_.size() != centers_.size())
            throw ValidationError("HomotopyPartition: G meets phi(G)");
    }

    const M& model() const { return base_->model(); }
    std::size_t size() const { return centers_.size(); }
    const Point& center(std::size_t k) const { return centers_[k]; }
    const Scalar& epsilon() const { return base_->epsilon(); }

    std::optional<std::size_t> find_center(const Point& p) const {
        auto it = center_index_.find(p.str());
        if (it == center_index_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::pair<std::size_t, double>> eval(const Point& x) const {
        const M& m = base_->model();
        const std::size_t K = base_->size();
        std::vector<std::pair<std::size_t, double>> out;
        const double c0 = std::sqrt(1.0 - s_), c1 = std::sqrt(s_);
        if (c0 != 0.0)
            for (const auto& [k, f] : base_->eval(x)) out.emplace_back(k, c0 * f);
        if (c1 != 0.0)
            for (const auto& [k, f] : base_->eval(m.phi_inv(x))) out.emplace_back(K + k, c1 * f);
        return out;
    }

private:
    const EpsilonPartition<M>* base_;
    double s_;
    std::vector<Point> centers_;
    std::unordered_map<std::string, std::size_t> center_index_;
};

// the transported partition (F o phi^-1, phi(G))
template <class M>
class ShiftedPartition {
public:
    using Point = typename M::Point;
    using Scalar = typename M::Scalar;

    explicit ShiftedPartition(const EpsilonPartition<M>& base) : base_(&base) {
        const M& m = base.model();
        for (std::size_t k = 0; k < base.size(); ++k) centers_.push_back(m.phi(base.center(k)));
        for (std::size_t k = 0; k < centers_.size(); ++k)
            center_index_.emplace(centers_[k].str(), k);
    }

    const M& model() const { return base_->model(); }
    std::size_t size() const { return centers_.size(); }
    const Point& center(std::size_t k) const { return centers_[k]; }
    const Scalar& epsilon() const { return base_->epsilon(); }

    std::optional<std::size_t> find_center(const Point& p) const {
        auto it = center_index_.find(p.str());
        if (it == center_index_.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::pair<std::size_t, double>> eval(const Point& x) const {
        return base_->eval(base_->model().phi_inv(x));
    }

private:
    const EpsilonPartition<M>* base_;
    std::vector<Point> centers_;
    std::unordered_map<std::string, std::size_t> center_index_;
};

struct HomotopyCheck {
    std::vector<double> idem_residuals;  // per grid point
    double endpoint0_max = 0.0;          // |p_{G_0} - p_G| entrywise
    double endpoint1_max = 0.0;          // |p_{G_1} - (u(x)u) p_G (u*(x)u*)| entrywise
    double max_adjacent_gap = 0.0;       // operator-norm gap between steps
    std::size_t tensor_pairs = 0;
};

// compare two symbolic columns as term lists
template <class M>
double column_difference(std::vector<std::pair<PairPt<M>, double>> lhs,
                         std::vector<std::pair<PairPt<M>, double>> rhs) {
    std::map<std::string, double> acc;
    for (const auto& [p, v] : lhs) acc[p.str()] += v;
    for (const auto& [p, v] : rhs) acc[p.str()] -= v;
    double mx = 0.0;
    for (const auto& [k, v] : acc) mx = std::max(mx, std::fabs(v));
    return mx;
}

template <class M>
HomotopyCheck homotopy_path(const M& m, const EpsilonPartition<M>& base,
                            const std::vector<PairPt<M>>& seed_pairs, int steps) {
    HomotopyCheck chk;
    // tensor basis closed under the whole family (s = 1/2 activates every term)
    HomotopyPartition<M> mid(base, 0.5);
    std::vector<PairPt<M>> closed = close_pairs_under_pg<M>(mid, seed_pairs);
    TensorSpace<M> space(closed);
    chk.tensor_pairs = space.basis_size();

    SparseOperator prev;
    for (int step = 0; step <= steps; ++step) {
        const double s = static_cast<double>(step) / steps;
        HomotopyPartition<M> ps(base, s);
        SparseOperator mat = pg_matrix<M>(ps, space);
        ProjectionCheck pc = check_projection<M>(ps, space, mat, 0);
        chk.idem_residuals.push_back(pc.idem_frobenius);
        if (step > 0) {
            SparseOperator diff = mat.minus(prev);
            chk.max_adjacent_gap = std::max(chk.max_adjacent_gap, diff.norm().value);
        }
        if (step == 0) {
            // entrywise p_{G_0} = p_G
            double mx = 0.0;
            for (std::size_t i = 0; i < space.basis_size(); ++i) {
                const auto& pr = space.at(i);
                mx = std::max(mx, column_difference<M>(pg_column<M>(ps, pr.a, pr.b),
                                                       pg_column<M>(base, pr.a, pr.b)));
            }
            chk.endpoint0_max = mx;
        }
        if (step == steps) {
            // entrywise p_{G_1} = (u (x) u) p_G (u* (x) u*)
            double mx = 0.0;
            for (std::size_t i = 0; i < space.basis_size(); ++i) {
                const auto& pr = space.at(i);
                auto conj = pg_column<M>(base, m.phi_inv(pr.a), m.phi_inv(pr.b));
                for (auto& [p, v] : conj) p = PairPt<M>{m.phi(p.a), m.phi(p.b)};
                mx = std::max(mx, column_difference<M>(pg_column<M>(ps, pr.a, pr.b), conj));
            }
            chk.endpoint1_max = mx;
        }
        prev = std::move(mat);
    }
    return chk;
}

struct WgCheck {
    double wstar_formula_max = 0.0;  // matrix adjoint vs displayed W* formula
    double wsw_residual = 0.0;       // ||W*W - 1(x)q_G||_F on interior columns
    double wws_residual = 0.0;       // ||WW* - p_G||_F on interior columns
    double conj_max = 0.0;           // |(u(x)u) W (u(x)u)* - W_{phi(G)}| entrywise
    std::size_t tensor_pairs = 0;
    std::size_t interior = 0;
};

// W_G column in symbolic form: nonzero only against the second-slot vector
// chi_G; columns are pairs (y, g), g in G, carrying (#G)^{-1/2}
template <class M, class P>
std::vector<std::pair<PairPt<M>, double>> wg_column(const P& part, const typename M::Point& y,
                                                    const typename M::Point& z) {
    const M& m = part.model();
    std::vector<std::pair<PairPt<M>, double>> out;
    if (!part.find_center(z)) return out;  // chi_G lives on the centers
    const double amp = 1.0 / std::sqrt(static_cast<double>(part.size()));
    for (const auto& [k, f] : part.eval(y)) {
        auto left = m.bracket(y, part.center(k));
        auto right = m.bracket(part.center(k), y);
        if (!left || !right) continue;
        out.push_back({PairPt<M>{*left, *right}, amp * f});
    }
    return out;
}

// displayed adjoint formula: W*(delta_y (x) delta_z) = f_k([y,z]) delta_[y,z] (x) chi_G
template <class M, class P>
std::vector<std::pair<PairPt<M>, double>> wg_adjoint_column(const P& part,
                                                            const typename M::Point& y,
                                                            const typename M::Point& z) {
    const M& m = part.model();
    std::vector<std::pair<PairPt<M>, double>> out;
    auto c = m.bracket(z, y);
    if (!c) return out;
    auto k = part.find_center(*c);
    if (!k) return out;
    if (!in_local_unstable(m, part.center(*k), y, part.epsilon())) return out;
    if (!in_local_stable(m, part.center(*k), z, part.epsilon())) return out;
    auto x = m.bracket(y, z);
    if (!x) return out;
    double fk = 0.0;
    for (const auto& [i, f] : part.eval(*x))
        if (i == *k) fk = f;
    if (fk == 0.0) return out;
    const double amp = 1.0 / std::sqrt(static_cast<double>(part.size()));
    for (std::size_t g = 0; g < part.size(); ++g)
        out.push_back({PairPt<M>{*x, part.center(g)}, fk * amp});
    return out;
}

// Tensor truncation for the W_G checks: pairs (y, g) for every support point
// y and center g, together with the image pairs ([y,g_k],[g_k,y]). A column
// is interior for the identity checks when the bracket class of its pair has
// its full (class x G) fan inside the basis.
template <class M>
WgCheck check_wg(const M& m, const EpsilonPartition<M>& part,
                 const std::vector<typename M::Point>& support_pts) {
    using Point = typename M::Point;
    WgCheck chk;
    std::vector<Point> ys = support_pts;
    for (std::size_t k = 0; k < part.size(); ++k) ys.push_back(part.center(k));
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    std::unordered_map<std::string, bool> yset;
    for (const auto& y : ys) yset[y.str()] = true;

    std::vector<PairPt<M>> pairs;
    for (const auto& y : ys)
        for (std::size_t g = 0; g < part.size(); ++g)
            pairs.push_back(PairPt<M>{y, part.center(g)});
    for (const auto& y : ys)
        for (const auto& [k, f] : part.eval(y)) {
            (void)f;
            auto left = m.bracket(y, part.center(k));
            auto right = m.bracket(part.center(k), y);
            if (left && right) pairs.push_back(PairPt<M>{*left, *right});
        }
    TensorSpace<M> space(pairs);
    chk.tensor_pairs = space.basis_size();

    SparseOperator W;
    for (std::size_t i = 0; i < space.basis_size(); ++i) {
        const auto& pr = space.at(i);
        for (const auto& [img, v] : wg_column<M>(part, pr.a, pr.b)) W.add(i, space.intern(img), v);
    }
    SparseOperator Wt = W.adjoint();

    // adjoint formula check on basis columns
    for (std::size_t i = 0; i < space.basis_size(); ++i) {
        const auto& pr = space.at(i);
        auto formula = wg_adjoint_column<M>(part, pr.a, pr.b);
        std::map<std::size_t, double> acc;
        for (auto& [p, v] : formula) acc[space.intern(p)] += v;
        for (const auto& [r, v] : Wt.column(i)) acc[r] -= v;
        for (const auto& [r, v] : acc)
            chk.wstar_formula_max = std::max(chk.wstar_formula_max, std::fabs(v));
    }

    // interior columns: the bracket class of the pair has its full fan present
    auto column_interior = [&](std::size_t i) {
        const auto& pr = space.at(i);
        auto x = m.bracket(pr.a, pr.b);
        if (!x) return true;  // both sides vanish
        if (!yset.count(x->str())) {
            // fan not seeded: only interior if the column is inactive
            return wg_adjoint_column<M>(part, pr.a, pr.b).empty() &&
                   wg_column<M>(part, pr.a, pr.b).empty();
        }
        return true;
    };
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < space.basis_size(); ++i)
        if (column_interior(i)) interior.push_back(i);
    chk.interior = interior.size();

    // W*W = 1 (x) q_G
    SparseOperator WtW = Wt.compose(W);
    const double inv_g = 1.0 / static_cast<double>(part.size());
    double fro2 = 0.0;
    for (std::size_t i : interior) {
        std::map<std::size_t, double> acc;
        for (const auto& [r, v] : WtW.column(i)) acc[r] += v;
        const auto& pr = space.at(i);
        if (part.find_center(pr.b)) {
            for (std::size_t g = 0; g < part.size(); ++g) {
                PairPt<M> t{pr.a, part.center(g)};
                auto idx = space.find(t);
                if (idx)
                    acc[*idx] -= inv_g;
                else
                    fro2 += inv_g * inv_g;  // missing fan member counts fully
            }
        }
        for (const auto& [r, v] : acc) fro2 += v * v;
    }
    chk.wsw_residual = std::sqrt(fro2);

    // WW* = p_G
    SparseOperator WWt = W.compose(Wt);
    SparseOperator P = pg_matrix<M>(part, space);
    fro2 = 0.0;
    for (std::size_t i : interior) {
        std::map<std::size_t, double> acc;
        for (const auto& [r, v] : WWt.column(i)) acc[r] += v;
        for (const auto& [r, v] : P.column(i)) acc[r] -= v;
        for (const auto& [r, v] : acc) fro2 += v * v;
    }
    chk.wws_residual = std::sqrt(fro2);

    // conjugation: (u (x) u) W_G (u (x) u)* = W_{phi(G)} entrywise
    ShiftedPartition<M> shifted(part);
    for (std::size_t i = 0; i < space.basis_size(); ++i) {
        const auto& pr = space.at(i);
        auto lhs = wg_column<M>(part, m.phi_inv(pr.a), m.phi_inv(pr.b));
        for (auto& [p, v] : lhs) p = PairPt<M>{m.phi(p.a), m.phi(p.b)};
        auto rhs = wg_column<M>(shifted, pr.a, pr.b);
        chk.conj_max = std::max(chk.conj_max, column_difference<M>(lhs, rhs));
    }
    return chk;
}

struct IntertwineReport {
    std::vector<double> norms;          // ||(1 (x) a_n) W - W (a_n (x) 1)|| per n
    std::vector<std::string> witness;   // support point of the largest merged term
};

// Lemma-key sweep: both sides act on delta_y (x) chi_G; columns are indexed
// by the support point y and rows by image pairs, which is exactly the
// subspace where either operator is nonzero.
template <class M>
IntertwineReport wg_intertwine(const M& m, const EpsilonPartition<M>& part,
                               const Basis<M>& basis, const BasicStableElement<M>& a,
                               int n_max) {
    using Point = typename M::Point;
    IntertwineReport rep;
    for (int n = 0; n <= n_max; ++n) {
        const PointMap<M> an = a.as_alpha_power(n);
        SparseOperator diff;
        TensorSpace<M> rows(std::vector<PairPt<M>>{});
        std::string wit;
        double best = -1.0;
        for (std::size_t yi = 0; yi < basis.size(); ++yi) {
            const Point& y = basis.at(yi);
            std::map<std::string, std::pair<PairPt<M>, double>> acc;
            // lhs: (1 (x) alpha^n(a)) W (delta_y (x) chi_G)
            for (const auto& [k, f] : part.eval(y)) {
                auto left = m.bracket(y, part.center(k));
                auto right = m.bracket(part.center(k), y);
                if (!left || !right) continue;
                auto img = an(*right);
                if (!img) continue;
                PairPt<M> t{*left, img->first};
                auto& slot = acc.emplace(t.str(), std::make_pair(t, 0.0)).first->second;
                slot.second += f * img->second;
            }
            // rhs: W (alpha^n(a) (x) 1)(delta_y (x) chi_G)
            auto ay = an(y);
            if (ay) {
                for (const auto& [k, f] : part.eval(ay->first)) {
                    auto left = m.bracket(ay->first, part.center(k));
                    auto right = m.bracket(part.center(k), ay->first);
                    if (!left || !right) continue;
                    PairPt<M> t{*left, *right};
                    auto& slot = acc.emplace(t.str(), std::make_pair(t, 0.0)).first->second;
                    slot.second -= f * ay->second;
                }
            }
            for (const auto& [key, tv] : acc) {
                if (tv.second == 0.0) continue;
                diff.add(yi, rows.intern(tv.first), tv.second);
                if (std::fabs(tv.second) > best) {
                    best = std::fabs(tv.second);
                    wit = y.str();
                }
            }
        }
        rep.norms.push_back(diff.norm().value);
        rep.witness.push_back(wit);
    }
    return rep;
}

}  // namespace smale
