#include "smale/sft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace smale {

namespace {

long floor_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

Word rotate_left(Word w) {
    if (w.size() > 1) std::rotate(w.begin(), w.begin() + 1, w.end());
    return w;
}

Word rotate_right(Word w) {
    if (w.size() > 1) std::rotate(w.begin(), w.end() - 1, w.end());
    return w;
}

// minimal cyclic period of w (divides |w|)
std::size_t primitive_period(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i + p < n && ok; ++i) ok = (w[i] == w[i + p]);
        if (ok) return p;
    }
    return n;
}

}  // namespace

TransitionMatrix::TransitionMatrix(std::vector<std::vector<long>> entries)
    : n_(static_cast<int>(entries.size())), entries_(std::move(entries)) {
    if (n_ == 0) throw std::invalid_argument("TransitionMatrix: empty");
    bool has_positive = false;
    for (const auto& row : entries_) {
        if (static_cast<int>(row.size()) != n_)
            throw std::invalid_argument("TransitionMatrix: not square");
        for (long v : row) {
            if (v < 0) throw std::invalid_argument("TransitionMatrix: negative entry");
            if (v > 0) has_positive = true;
        }
    }
    if (!has_positive) throw std::invalid_argument("TransitionMatrix: zero matrix");
}

bool TransitionMatrix::irreducible() const {
    // reach[i][j] via boolean powers of (I + A)
    std::vector<std::vector<bool>> reach(n_, std::vector<bool>(n_, false));
    for (int i = 0; i < n_; ++i) {
        reach[i][i] = true;
        for (int j = 0; j < n_; ++j)
            if (entries_[i][j] > 0) reach[i][j] = true;
    }
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            if (reach[i][k])
                for (int j = 0; j < n_; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (!reach[i][j]) return false;
    // rule out the trivial single-vertex graph with no edge
    for (int i = 0; i < n_; ++i) {
        bool out = false;
        for (int j = 0; j < n_; ++j) out = out || entries_[i][j] > 0;
        if (!out) return false;
    }
    return true;
}

SftPoint::SftPoint(Word left, Word core, Word right, long offset, const TransitionMatrix& mat)
    : left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), offset_(offset) {
    if (left_.empty() || right_.empty()) throw std::invalid_argument("SftPoint: empty cycle");
    auto check = [&](int a, int b) {
        if (a < 0 || b < 0 || a >= mat.size() || b >= mat.size() || !mat.allows(a, b))
            throw std::invalid_argument("SftPoint: inadmissible transition");
    };
    for (std::size_t i = 0; i + 1 < left_.size(); ++i) check(left_[i], left_[i + 1]);
    check(left_.back(), left_.front());
    for (std::size_t i = 0; i + 1 < right_.size(); ++i) check(right_[i], right_[i + 1]);
    check(right_.back(), right_.front());
    for (std::size_t i = 0; i + 1 < core_.size(); ++i) check(core_[i], core_[i + 1]);
    // seams
    if (!core_.empty()) {
        check(left_.back(), core_.front());
        check(core_.back(), right_.front());
    } else {
        check(left_.back(), right_.front());
    }
    canonicalize();
}

int SftPoint::at(long i) const {
    const long begin = offset_;
    const long end = offset_ + static_cast<long>(core_.size());
    if (i < begin) return left_[floor_mod(i - begin, static_cast<long>(left_.size()))];
    if (i < end) return core_[i - begin];
    return right_[floor_mod(i - end, static_cast<long>(right_.size()))];
}

void SftPoint::canonicalize() {
    // reduce cycles to primitive roots, keeping the anchor semantics:
    // left is the word at [offset-L, offset), right at [core_end, core_end+R)
    {
        std::size_t p = primitive_period(left_);
        if (p < left_.size()) left_ = Word(left_.end() - p, left_.end());
        p = primitive_period(right_);
        if (p < right_.size()) right_.resize(p);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        while (!core_.empty() && core_.front() == left_.front()) {
            core_.erase(core_.begin());
            left_ = rotate_left(left_);
            ++offset_;
            changed = true;
        }
        while (!core_.empty() && core_.back() == right_.back()) {
            core_.pop_back();
            right_ = rotate_right(right_);
            changed = true;
        }
    }
    if (core_.empty()) {
        const long L = static_cast<long>(left_.size());
        const long R = static_cast<long>(right_.size());
        const long M = std::lcm(L, R);
        bool periodic = true;
        for (long i = 0; i < M && periodic; ++i)
            periodic = (left_[floor_mod(i, L)] == right_[floor_mod(i, R)]);
        if (periodic) {
            // anchor the primitive cycle at absolute index 0
            Word window(static_cast<std::size_t>(M));
            for (long i = 0; i < M; ++i) window[i] = right_[floor_mod(i - offset_, R)];
            std::size_t p = primitive_period(window);
            Word cyc(window.begin(), window.begin() + p);
            // window starts at index offset_; shift the phase to index 0
            Word anchored(p);
            for (std::size_t i = 0; i < p; ++i)
                anchored[i] = cyc[floor_mod(static_cast<long>(i) - offset_, static_cast<long>(p))];
            left_ = anchored;
            right_ = anchored;
            offset_ = 0;
        } else {
            // push the seam right while the left tail extends over it
            while (right_.front() == left_.front()) {
                left_ = rotate_left(left_);
                right_ = rotate_left(right_);
                ++offset_;
            }
        }
    }
}

bool SftPoint::operator<(const SftPoint& o) const {
    if (offset_ != o.offset_) return offset_ < o.offset_;
    if (core_ != o.core_) return core_ < o.core_;
    if (left_ != o.left_) return left_ < o.left_;
    return right_ < o.right_;
}

std::size_t SftPoint::hash() const {
    std::size_t h = static_cast<std::size_t>(offset_ * 0x9e3779b97f4a7c15ULL);
    auto mix = [&h](const Word& w) {
        h ^= w.size() + 0x9e3779b9 + (h << 6) + (h >> 2);
        for (int s : w) h ^= static_cast<std::size_t>(s + 3) + 0x9e3779b9 + (h << 6) + (h >> 2);
    };
    mix(left_);
    mix(core_);
    mix(right_);
    return h;
}

std::string SftPoint::str() const {
    std::string s = "(";
    auto app = [&s](const Word& w) {
        for (int v : w) s += std::to_string(v) + ".";
    };
    app(left_);
    s += "|";
    app(core_);
    s += "|";
    app(right_);
    s += "|" + std::to_string(offset_) + ")";
    return s;
}

SftModel::SftModel(TransitionMatrix mat) : mat_(std::move(mat)) {
    if (!mat_.irreducible()) throw std::invalid_argument("SftModel: matrix not irreducible");
}

SftPoint SftModel::phi(const Point& x) const {
    return SftPoint(x.left_cycle(), x.core(), x.right_cycle(), x.core_begin() - 1, mat_);
}

SftPoint SftModel::phi_inv(const Point& x) const {
    return SftPoint(x.left_cycle(), x.core(), x.right_cycle(), x.core_begin() + 1, mat_);
}

SftPoint SftModel::iterate(const Point& x, long n) const {
    return SftPoint(x.left_cycle(), x.core(), x.right_cycle(), x.core_begin() - n, mat_);
}

long SftModel::mismatch_radius(const Point& x, const Point& y) const {
    const long ext = std::max({std::labs(x.core_begin()), std::labs(x.core_end()),
                               std::labs(y.core_begin()), std::labs(y.core_end())});
    const long ll = std::lcm(static_cast<long>(x.left_cycle().size()),
                             static_cast<long>(y.left_cycle().size()));
    const long rl = std::lcm(static_cast<long>(x.right_cycle().size()),
                             static_cast<long>(y.right_cycle().size()));
    const long bound = ext + std::max(ll, rl) + 1;
    for (long k = 0; k <= bound; ++k)
        if (x.at(k) != y.at(k) || x.at(-k) != y.at(-k)) return k;
    return -1;
}

double SftModel::dist(const Point& x, const Point& y) const {
    const long k = mismatch_radius(x, y);
    if (k < 0) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(k));
}

std::optional<SftPoint> SftModel::bracket(const Point& x, const Point& y) const {
    if (x.at(0) != y.at(0)) return std::nullopt;
    // splice: values of y strictly below index 1, values of x from index 1 on
    const long s = std::min(y.core_begin(), 0L);
    const long e = std::max(x.core_end(), 1L);
    const long L = static_cast<long>(y.left_cycle().size());
    const long R = static_cast<long>(x.right_cycle().size());
    Word left(L), right(R), core;
    for (long i = 0; i < L; ++i) left[i] = y.at(s - L + i);
    for (long i = 0; i < R; ++i) right[i] = x.at(e + i);
    core.reserve(static_cast<std::size_t>(e - s));
    for (long i = s; i <= 0; ++i) core.push_back(y.at(i));
    for (long i = 1; i < e; ++i) core.push_back(x.at(i));
    return SftPoint(std::move(left), std::move(core), std::move(right), s, mat_);
}

bool SftModel::agree_forward(const Point& x, const Point& y, long from) const {
    const long e = std::max({x.core_end(), y.core_end(), from});
    const long R = std::lcm(static_cast<long>(x.right_cycle().size()),
                            static_cast<long>(y.right_cycle().size()));
    for (long i = from; i < e + R; ++i)
        if (x.at(i) != y.at(i)) return false;
    return true;
}

bool SftModel::agree_backward(const Point& x, const Point& y, long upto) const {
    const long s = std::min({x.core_begin(), y.core_begin(), upto});
    const long L = std::lcm(static_cast<long>(x.left_cycle().size()),
                            static_cast<long>(y.left_cycle().size()));
    for (long i = upto; i > s - L; --i)
        if (x.at(i) != y.at(i)) return false;
    return true;
}

bool SftModel::stably_equivalent(const Point& x, const Point& y) const {
    const long e = std::max(x.core_end(), y.core_end());
    const long R = std::lcm(static_cast<long>(x.right_cycle().size()),
                            static_cast<long>(y.right_cycle().size()));
    for (long i = e; i < e + R; ++i)
        if (x.at(i) != y.at(i)) return false;
    return true;
}

bool SftModel::unstably_equivalent(const Point& x, const Point& y) const {
    const long s = std::min(x.core_begin(), y.core_begin());
    const long L = std::lcm(static_cast<long>(x.left_cycle().size()),
                            static_cast<long>(y.left_cycle().size()));
    for (long i = s - 1; i >= s - L; --i)
        if (x.at(i) != y.at(i)) return false;
    return true;
}

std::vector<Word> SftModel::admissible_words(int len) const {
    std::vector<Word> out;
    if (len == 0) {
        out.push_back({});
        return out;
    }
    Word cur;
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == len) {
            out.push_back(cur);
            return;
        }
        for (int s = 0; s < mat_.size(); ++s) {
            if (!cur.empty() && !mat_.allows(cur.back(), s)) continue;
            cur.push_back(s);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

std::vector<SftPoint> SftModel::points_of_period(int period, int max_period) const {
    if (period < 1 || period > max_period)
        throw std::length_error("points_of_period: period outside configured bound");
    std::vector<SftPoint> out;
    std::unordered_set<SftPoint, SftPointHash> seen;
    for (const Word& w : admissible_words(period)) {
        if (!mat_.allows(w.back(), w.front())) continue;
        SftPoint p(w, {}, w, 0, mat_);
        if (seen.insert(p).second) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Word SftModel::random_cycle(Rng& rng, int max_len) const {
    for (int attempt = 0; attempt < 256; ++attempt) {
        const int len = rng.range(1, max_len);
        Word w;
        w.push_back(rng.range(0, mat_.size() - 1));
        bool dead = false;
        while (static_cast<int>(w.size()) < len && !dead) {
            std::vector<int> nxt;
            for (int s = 0; s < mat_.size(); ++s)
                if (mat_.allows(w.back(), s)) nxt.push_back(s);
            if (nxt.empty()) {
                dead = true;
                break;
            }
            w.push_back(nxt[rng.below(nxt.size())]);
        }
        if (!dead && mat_.allows(w.back(), w.front())) return w;
    }
    throw std::runtime_error("random_cycle: no admissible cycle found");
}

SftPoint SftModel::random_point(Rng& rng, int complexity) const {
    for (int attempt = 0; attempt < 256; ++attempt) {
        Word left = random_cycle(rng, complexity);
        Word right = random_cycle(rng, complexity);
        const int core_len = rng.range(0, complexity);
        // grow the core forward from the left seam
        Word core;
        bool ok = true;
        int prev = left.back();
        for (int i = 0; i < core_len && ok; ++i) {
            std::vector<int> nxt;
            for (int s = 0; s < mat_.size(); ++s)
                if (mat_.allows(prev, s)) nxt.push_back(s);
            if (nxt.empty()) {
                ok = false;
                break;
            }
            core.push_back(nxt[rng.below(nxt.size())]);
            prev = core.back();
        }
        if (!ok || !mat_.allows(prev, right.front())) continue;
        const long offset = rng.range(-complexity, complexity);
        try {
            return SftPoint(std::move(left), std::move(core), std::move(right), offset, mat_);
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    throw std::runtime_error("random_point: sampling failed");
}

SftPoint SftModel::random_point_near(const Point& x, int radius, Rng& rng) const {
    for (int attempt = 0; attempt < 256; ++attempt) {
        // copy the window [-radius-1, radius+1] of x, then random admissible tails
        const long lo = -radius - 1, hi = radius + 1;
        Word core;
        for (long i = lo; i <= hi; ++i) core.push_back(x.at(i));
        // random forward continuation then a cycle, built so seams are admissible
        Word right;
        int prev = core.back();
        bool ok = true;
        const int ext = rng.range(1, 3);
        Word fwd;
        for (int i = 0; i < ext && ok; ++i) {
            std::vector<int> nxt;
            for (int s = 0; s < mat_.size(); ++s)
                if (mat_.allows(prev, s)) nxt.push_back(s);
            if (nxt.empty()) ok = false;
            else {
                fwd.push_back(nxt[rng.below(nxt.size())]);
                prev = fwd.back();
            }
        }
        if (!ok) continue;
        right = random_cycle(rng, 3);
        if (!mat_.allows(prev, right.front())) continue;
        core.insert(core.end(), fwd.begin(), fwd.end());
        // random backward continuation
        Word bwd;
        int succ = core.front();
        const int extb = rng.range(1, 3);
        for (int i = 0; i < extb && ok; ++i) {
            std::vector<int> prv;
            for (int s = 0; s < mat_.size(); ++s)
                if (mat_.allows(s, succ)) prv.push_back(s);
            if (prv.empty()) ok = false;
            else {
                bwd.insert(bwd.begin(), prv[rng.below(prv.size())]);
                succ = bwd.front();
            }
        }
        if (!ok) continue;
        Word left = random_cycle(rng, 3);
        if (!mat_.allows(left.back(), succ)) continue;
        core.insert(core.begin(), bwd.begin(), bwd.end());
        try {
            return SftPoint(std::move(left), std::move(core), std::move(right),
                            lo - static_cast<long>(bwd.size()), mat_);
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    throw std::runtime_error("random_point_near: sampling failed");
}

std::vector<SftPoint> SftModel::homoclinic_points(const std::vector<Point>& ps,
                                                  const std::vector<Point>& qs, int bound) const {
    std::vector<Word> pc, qc;
    for (const auto& p : ps) pc.push_back(p.right_cycle());
    for (const auto& q : qs) qc.push_back(q.left_cycle());
    std::sort(pc.begin(), pc.end());
    pc.erase(std::unique(pc.begin(), pc.end()), pc.end());
    std::sort(qc.begin(), qc.end());
    qc.erase(std::unique(qc.begin(), qc.end()), qc.end());
    return homoclinic_points(pc, qc, bound);
}

std::vector<SftPoint> SftModel::homoclinic_points(const std::vector<Word>& p_cycles,
                                                  const std::vector<Word>& q_cycles,
                                                  int bound) const {
    std::unordered_set<SftPoint, SftPointHash> seen;
    std::vector<SftPoint> out;
    std::vector<Word> lefts, rights;
    for (const Word& q : q_cycles)
        for (std::size_t r = 0; r < q.size(); ++r) {
            Word w = q;
            std::rotate(w.begin(), w.begin() + r, w.end());
            lefts.push_back(w);
        }
    for (const Word& p : p_cycles)
        for (std::size_t r = 0; r < p.size(); ++r) {
            Word w = p;
            std::rotate(w.begin(), w.begin() + r, w.end());
            rights.push_back(w);
        }
    std::vector<Word> cores;
    for (int len = 0; len <= bound; ++len) {
        auto ws = admissible_words(len);
        cores.insert(cores.end(), ws.begin(), ws.end());
    }
    for (const Word& left : lefts) {
        for (const Word& right : rights) {
            for (const Word& core : cores) {
                // seam admissibility is offset-independent
                if (!core.empty()) {
                    if (!mat_.allows(left.back(), core.front())) continue;
                    if (!mat_.allows(core.back(), right.front())) continue;
                } else if (!mat_.allows(left.back(), right.front())) {
                    continue;
                }
                const long lo = -bound;
                const long hi = bound + 1 - static_cast<long>(core.size());
                for (long o = lo; o <= hi; ++o) {
                    SftPoint cand(left, core, right, o, mat_);
                    if (static_cast<int>(cand.core().size()) > bound) continue;
                    if (cand.core_begin() < -bound || cand.core_end() > bound + 1) continue;
                    if (seen.insert(cand).second) out.push_back(cand);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace smale
