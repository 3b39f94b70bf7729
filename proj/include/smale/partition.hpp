#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "smale/basic_elements.hpp"
#include "smale/orbit.hpp"
#include "smale/rng.hpp"
#include "smale/sft.hpp"
#include "smale/torus.hpp"

namespace smale {

// (F, G): homoclinic centers g_k with bump functions whose squares sum to 1.
// Bumps are tents in the metric distance, cut off at support_radius
// (<= epsilon/2) and normalized pointwise, so the support condition is exact
// and the partition-of-unity identity holds up to floating-point rounding of
// a handful of terms.
template <class M>
class EpsilonPartition {
public:
    using Point = typename M::Point;
    using Scalar = typename M::Scalar;
    using Locator = std::function<std::vector<std::size_t>(const Point&)>;

    EpsilonPartition() = default;
    EpsilonPartition(const M* model, Scalar epsilon, Scalar support_radius,
                     std::vector<Point> centers, Locator locator)
        : model_(model),
          epsilon_(std::move(epsilon)),
          support_radius_(std::move(support_radius)),
          centers_(std::move(centers)),
          locator_(std::move(locator)) {
        for (std::size_t k = 0; k < centers_.size(); ++k)
            center_index_.emplace(centers_[k].str(), k);
        if (center_index_.size() != centers_.size())
            throw ValidationError("EpsilonPartition: duplicate centers");
    }

    const M& model() const { return *model_; }
    std::size_t size() const { return centers_.size(); }
    const Point& center(std::size_t k) const { return centers_[k]; }
    const std::vector<Point>& centers() const { return centers_; }
    const Scalar& epsilon() const { return epsilon_; }
    const Scalar& support_radius() const { return support_radius_; }

    std::optional<std::size_t> find_center(const Point& p) const {
        auto it = center_index_.find(p.str());
        if (it == center_index_.end()) return std::nullopt;
        return it->second;
    }

    // raw tent value; nonzero only strictly inside the support ball
    double tent(std::size_t k, const Point& x) const {
        const Scalar d = model_->dist(x, centers_[k]);
        if (!(d < support_radius_)) return 0.0;
        const double t = 1.0 - M::to_double(d) / M::to_double(support_radius_);
        return t > 0.0 ? t : 0.0;
    }

    // normalized bump values f_k(x), nonzero entries only, ascending k
    std::vector<std::pair<std::size_t, double>> eval(const Point& x) const {
        std::vector<std::size_t> cand = locator_(x);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<std::pair<std::size_t, double>> vals;
        double total = 0.0;
        for (std::size_t k : cand) {
            const double t = tent(k, x);
            if (t > 0.0) {
                vals.emplace_back(k, t);
                total += t;
            }
        }
        for (auto& [k, t] : vals) t = std::sqrt(t / total);
        return vals;
    }

    double f_value(std::size_t k, const Point& x) const {
        for (const auto& [i, f] : eval(x))
            if (i == k) return f;
        return 0.0;
    }

    double sum_sq(const Point& x) const {
        double s = 0.0;
        for (const auto& [k, f] : eval(x)) s += f * f;
        return s;
    }

    // G cap phi(G) = empty set, needed by the homotopy construction
    bool phi_disjoint() const {
        for (const auto& g : centers_)
            if (center_index_.count(model_->phi(g).str())) return false;
        return true;
    }

private:
    const M* model_ = nullptr;
    Scalar epsilon_{};
    Scalar support_radius_{};
    std::vector<Point> centers_;
    std::unordered_map<std::string, std::size_t> center_index_;
    Locator locator_;
};

struct PartitionCheck {
    long samples = 0;
    double max_residue = 0.0;   // max |sum f_k^2 - 1|
    long support_violations = 0;
    long uncovered = 0;         // sampled points missed by every bump
    bool ok(double tol) const {
        return max_residue <= tol && support_violations == 0 && uncovered == 0;
    }
};

// partition-of-unity residue and exact support containment over sampled X
template <class M>
PartitionCheck check_partition(const EpsilonPartition<M>& part, long samples,
                               std::uint64_t seed) {
    PartitionCheck chk;
    chk.samples = samples;
    Rng rng(seed);
    const M& m = part.model();
    for (long i = 0; i < samples; ++i) {
        auto x = m.random_point(rng);
        auto vals = part.eval(x);
        if (vals.empty()) {
            ++chk.uncovered;
            continue;
        }
        double s = 0.0;
        for (const auto& [k, f] : vals) {
            s += f * f;
            if (!(m.dist(x, part.center(k)) < part.support_radius())) ++chk.support_violations;
        }
        chk.max_residue = std::max(chk.max_residue, std::fabs(s - 1.0));
    }
    return chk;
}

// SFT cover: supports are cylinders over the window |i| <= win_radius; one
// partition center is chosen per admissible window pattern (multiplicity
// many when available), so the bumps cover the whole shift space.
inline EpsilonPartition<SftModel> build_sft_partition(const SftModel& m,
                                                      const Basis<SftModel>& basis,
                                                      int win_radius, int multiplicity = 1,
                                                      bool require_phi_disjoint = false) {
    using Point = SftPoint;
    const double support_radius = std::ldexp(1.0, -win_radius);  // d < 2^-w iff agree |i| <= w
    auto window_key = [win_radius](const Point& p) {
        std::string s;
        for (long i = -win_radius; i <= win_radius; ++i) s += static_cast<char>('0' + p.at(i));
        return s;
    };
    // candidates per admissible window, in basis order
    std::map<std::string, std::vector<Point>> by_window;
    for (const auto& p : basis.points()) by_window[window_key(p)].push_back(p);

    // every admissible window must be realized
    std::vector<std::string> patterns;
    {
        std::function<void(std::string, int)> rec = [&](std::string cur, int pos) {
            if (pos > win_radius) {
                patterns.push_back(cur);
                return;
            }
            for (int s = 0; s < m.alphabet_size(); ++s) {
                if (!cur.empty() && !m.matrix().allows(cur.back() - '0', s)) continue;
                rec(cur + static_cast<char>('0' + s), pos + 1);
            }
        };
        rec("", -win_radius);
    }
    std::vector<Point> centers;
    std::unordered_map<std::string, bool> used;
    for (const auto& pat : patterns) {
        auto it = by_window.find(pat);
        if (it == by_window.end())
            throw ResourceError("build_sft_partition: no basis point realizes window " + pat +
                                "; enlarge the basis");
        int taken = 0;
        for (const auto& cand : it->second) {
            if (taken >= multiplicity) break;
            if (require_phi_disjoint) {
                // avoid g = phi(g') or phi(g) = g' against already chosen centers
                bool clash = false;
                const Point fwd = m.phi(cand), bwd = m.phi_inv(cand);
                for (const auto& g : centers)
                    if (g == fwd || g == bwd || g == cand) {
                        clash = true;
                        break;
                    }
                if (clash) continue;
            }
            if (used.count(cand.str())) continue;
            used[cand.str()] = true;
            centers.push_back(cand);
            ++taken;
        }
        if (taken == 0)
            throw ResourceError("build_sft_partition: could not pick a center for window " +
                                pat);
    }
    // locator: centers grouped by their own window pattern
    auto index_by_window = std::make_shared<std::map<std::string, std::vector<std::size_t>>>();
    for (std::size_t k = 0; k < centers.size(); ++k)
        (*index_by_window)[window_key(centers[k])].push_back(k);
    auto locator = [index_by_window, window_key](const Point& x) -> std::vector<std::size_t> {
        auto it = index_by_window->find(window_key(x));
        if (it == index_by_window->end()) return {};
        return it->second;
    };
    return EpsilonPartition<SftModel>(&m, m.eps_X_prime(), support_radius, std::move(centers),
                                      locator);
}

// Torus cover: a grid of cells, one center per cell chosen as the basis point
// nearest the cell midpoint; the cover condition c/2 + d(center, midpoint) <
// support_radius is certified exactly cell by cell.
inline EpsilonPartition<TorusModel> build_torus_partition(const TorusModel& m,
                                                          const Basis<TorusModel>& basis,
                                                          const QuadNum& support_radius,
                                                          double grid_factor = 1.4,
                                                          bool require_phi_disjoint = false) {
    using Point = TorusPoint;
    const double r = support_radius.to_double();
    const int grid_n = static_cast<int>(std::ceil(1.0 / (grid_factor * r)));
    const QuadNum cell(Rational(1, grid_n));
    auto cell_of = [grid_n](const Point& p) {
        int cx = static_cast<int>(std::floor(p.x.to_double() * grid_n));
        int cy = static_cast<int>(std::floor(p.y.to_double() * grid_n));
        cx = std::clamp(cx, 0, grid_n - 1);
        cy = std::clamp(cy, 0, grid_n - 1);
        return std::pair<int, int>(cx, cy);
    };
    std::map<std::pair<int, int>, std::vector<std::size_t>> cell_points;
    for (std::size_t i = 0; i < basis.size(); ++i) cell_points[cell_of(basis.at(i))].push_back(i);

    std::vector<Point> centers;
    std::unordered_map<std::string, bool> used;
    for (int cx = 0; cx < grid_n; ++cx) {
        for (int cy = 0; cy < grid_n; ++cy) {
            Point mid = m.make_point(Rational(2 * cx + 1, 2 * grid_n),
                                     Rational(2 * cy + 1, 2 * grid_n));
            auto it = cell_points.find({cx, cy});
            if (it == cell_points.end())
                throw ResourceError("build_torus_partition: empty cover cell; enlarge the basis");
            std::optional<std::size_t> best;
            QuadNum best_d;
            for (std::size_t i : it->second) {
                if (used.count(basis.at(i).str())) continue;
                if (require_phi_disjoint) {
                    const Point fwd = m.phi(basis.at(i)), bwd = m.phi_inv(basis.at(i));
                    if (used.count(fwd.str()) || used.count(bwd.str())) continue;
                }
                QuadNum d = m.dist(basis.at(i), mid);
                if (!best || d < best_d) {
                    best = i;
                    best_d = d;
                }
            }
            if (!best)
                throw ResourceError("build_torus_partition: no usable center in cell");
            // exact cover certificate for this cell
            QuadNum worst = best_d + m.half(cell);
            if (!(worst < support_radius))
                throw ResourceError(
                    "build_torus_partition: cover margin violated; enlarge the basis");
            used[basis.at(*best).str()] = true;
            centers.push_back(basis.at(*best));
        }
    }
    if (require_phi_disjoint) {
        // the greedy guard above excludes collisions with earlier picks; a
        // final exact pass catches the rest
        std::unordered_map<std::string, bool> gset;
        for (const auto& g : centers) gset[g.str()] = true;
        for (const auto& g : centers)
            if (gset.count(m.phi(g).str()))
                throw ResourceError("build_torus_partition: G meets phi(G)");
    }
    auto centers_by_cell =
        std::make_shared<std::map<std::pair<int, int>, std::vector<std::size_t>>>();
    for (std::size_t k = 0; k < centers.size(); ++k)
        (*centers_by_cell)[cell_of(centers[k])].push_back(k);
    auto locator = [centers_by_cell, cell_of, grid_n](const Point& x) {
        std::vector<std::size_t> out;
        auto [cx, cy] = cell_of(x);
        for (int dx = -2; dx <= 2; ++dx)
            for (int dy = -2; dy <= 2; ++dy) {
                int nx = ((cx + dx) % grid_n + grid_n) % grid_n;
                int ny = ((cy + dy) % grid_n + grid_n) % grid_n;
                auto it = centers_by_cell->find({nx, ny});
                if (it == centers_by_cell->end()) continue;
                out.insert(out.end(), it->second.begin(), it->second.end());
            }
        return out;
    };
    return EpsilonPartition<TorusModel>(&m, m.eps_X_prime(), support_radius, std::move(centers),
                                        locator);
}

}  // namespace smale
