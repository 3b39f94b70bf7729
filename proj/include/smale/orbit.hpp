#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace smale {

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

template <class M>
struct PeriodicOrbit {
    using Point = typename M::Point;
    std::vector<Point> points;  // cyclic order: phi(points[i]) == points[i+1 mod n]
    int period() const { return static_cast<int>(points.size()); }
};

// All orbits whose least period divides `period`, each listed once, points in
// phi-cyclic order starting from the smallest, orbits sorted by (period,
// first point).
template <class M>
std::vector<PeriodicOrbit<M>> periodic_orbits(const M& m, int period, int max_period = 16) {
    using Point = typename M::Point;
    std::vector<Point> pts = m.points_of_period(period, max_period);
    std::vector<PeriodicOrbit<M>> orbits;
    std::vector<Point> seen;
    auto contains = [&](const Point& p) {
        return std::find(seen.begin(), seen.end(), p) != seen.end();
    };
    for (const Point& p : pts) {
        if (contains(p)) continue;
        PeriodicOrbit<M> orb;
        Point cur = p;
        do {
            orb.points.push_back(cur);
            seen.push_back(cur);
            cur = m.phi(cur);
        } while (cur != p);
        // rotate so the smallest point leads
        auto mn = std::min_element(orb.points.begin(), orb.points.end());
        std::rotate(orb.points.begin(), mn, orb.points.end());
        orbits.push_back(std::move(orb));
    }
    std::sort(orbits.begin(), orbits.end(), [](const auto& a, const auto& b) {
        if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
        return a.points.front() < b.points.front();
    });
    return orbits;
}

// Ordered, deduplicated, index-addressable set of points; the common carrier
// for truncated bases. Interior flags are maintained by closure/marking
// helpers and start out all-true.
template <class M>
class Basis {
public:
    using Point = typename M::Point;
    using Hash = std::function<std::size_t(const Point&)>;

    Basis() = default;
    explicit Basis(std::vector<Point> pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        points_ = std::move(pts);
        for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i].str(), i);
        interior_.assign(points_.size(), true);
    }

    std::size_t size() const { return points_.size(); }
    const Point& at(std::size_t i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }

    bool contains(const Point& p) const { return index_.count(p.str()) > 0; }
    std::optional<std::size_t> find(const Point& p) const {
        auto it = index_.find(p.str());
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool interior(std::size_t i) const { return interior_[i]; }
    void set_interior(std::size_t i, bool v) { interior_[i] = v; }
    std::size_t interior_count() const {
        std::size_t c = 0;
        for (bool b : interior_) c += b ? 1 : 0;
        return c;
    }

    std::vector<std::string> dump() const {
        std::vector<std::string> out;
        out.reserve(points_.size());
        for (const auto& p : points_) out.push_back(p.str());
        return out;
    }

private:
    std::vector<Point> points_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<bool> interior_;
};

// Validates P, Q (phi-invariant, disjoint) and enumerates the homoclinic
// points of X^s(P) cap X^u(Q) up to the model's size bound.
template <class M>
Basis<M> enumerate_homoclinic(const M& m, const std::vector<PeriodicOrbit<M>>& ps,
                              const std::vector<PeriodicOrbit<M>>& qs, int bound) {
    using Point = typename M::Point;
    std::vector<Point> pflat, qflat;
    for (const auto& o : ps) pflat.insert(pflat.end(), o.points.begin(), o.points.end());
    for (const auto& o : qs) qflat.insert(qflat.end(), o.points.begin(), o.points.end());
    for (const Point& p : pflat)
        for (const Point& q : qflat)
            if (p == q)
                throw ValidationError("enumerate_homoclinic: P and Q must be disjoint");
    auto check_invariant = [&](const std::vector<Point>& set) {
        for (const Point& p : set) {
            const Point img = m.phi(p);
            if (std::find(set.begin(), set.end(), img) == set.end()) return false;
        }
        return true;
    };
    if (!check_invariant(pflat) || !check_invariant(qflat))
        throw ValidationError("enumerate_homoclinic: P and Q must be phi-invariant");
    return Basis<M>(m.homoclinic_points(pflat, qflat, bound));
}

enum class ClosureMode { strict, mark_boundary };

// Closes a basis under finitely many point maps. In strict mode exceeding the
// cap raises ResourceError naming the offending map; in mark mode expansion
// stops at the cap and source points whose images were not added lose their
// interior flag.
template <class M>
Basis<M> basis_closure(const M& /*m*/, const Basis<M>& basis,
                       const std::vector<std::pair<std::string,
                                                   std::function<typename M::Point(
                                                       const typename M::Point&)>>>& maps,
                       std::size_t cap, ClosureMode mode = ClosureMode::strict) {
    using Point = typename M::Point;
    std::vector<Point> pts = basis.points();
    std::unordered_map<std::string, std::size_t> have;
    for (std::size_t i = 0; i < pts.size(); ++i) have.emplace(pts[i].str(), i);
    std::size_t head = 0;
    while (head < pts.size()) {
        const Point x = pts[head++];
        for (const auto& [name, f] : maps) {
            Point y = f(x);
            if (have.count(y.str())) continue;
            if (pts.size() >= cap) {
                if (mode == ClosureMode::strict)
                    throw ResourceError("basis_closure: growth cap exceeded by map '" + name +
                                        "'");
                continue;  // y dropped; x will be marked boundary below
            }
            have.emplace(y.str(), pts.size());
            pts.push_back(y);
        }
    }
    Basis<M> out(pts);
    // interior = all images present
    for (std::size_t i = 0; i < out.size(); ++i) {
        bool inside = true;
        for (const auto& [name, f] : maps) {
            (void)name;
            if (!out.contains(f(out.at(i)))) {
                inside = false;
                break;
            }
        }
        out.set_interior(i, inside);
    }
    return out;
}

// interior = points whose images under every map stay in the basis
template <class M>
void mark_interior(Basis<M>& basis,
                   const std::vector<std::function<typename M::Point(const typename M::Point&)>>&
                       maps) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool inside = true;
        for (const auto& f : maps)
            if (!basis.contains(f(basis.at(i)))) {
                inside = false;
                break;
            }
        basis.set_interior(i, inside);
    }
}

}  // namespace smale
