#include "smale/sparse_op.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

namespace smale {

// dense symmetric eigensolve on the submatrix over `block`; counts
// eigenvalues above 1/2 (projection rank oracle)
std::size_t eigen_rank_on_block(const SparseOperator& op, const std::vector<std::size_t>& block) {
    if (block.empty()) return 0;
    const std::size_t n = block.size();
    std::unordered_map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[block[i]] = i;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [r, v] : op.column(block[i])) {
            auto it = pos.find(r);
            if (it != pos.end()) dense(static_cast<long>(it->second), static_cast<long>(i)) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    std::size_t count = 0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) ++count;
    return count;
}

void SparseOperator::add(std::size_t col, std::size_t row, double value) {
    if (value == 0.0) return;
    Column& c = cols_[col];
    for (auto& e : c) {
        if (e.first == row) {
            e.second += value;
            if (e.second == 0.0) {
                c.erase(std::remove_if(c.begin(), c.end(),
                                       [row](const Entry& x) { return x.first == row; }),
                        c.end());
                if (c.empty()) cols_.erase(col);
            }
            return;
        }
    }
    c.emplace_back(row, value);
    std::sort(c.begin(), c.end());
}

void SparseOperator::add_column(std::size_t col, const Column& entries) {
    for (const auto& [row, v] : entries) add(col, row, v);
}

SparseOperator::Column SparseOperator::column(std::size_t col) const {
    auto it = cols_.find(col);
    if (it == cols_.end()) return {};
    return it->second;
}

double SparseOperator::entry(std::size_t col, std::size_t row) const {
    auto it = cols_.find(col);
    if (it == cols_.end()) return 0.0;
    for (const auto& [r, v] : it->second)
        if (r == row) return v;
    return 0.0;
}

std::size_t SparseOperator::nnz() const {
    std::size_t n = 0;
    for (const auto& [c, col] : cols_) n += col.size();
    return n;
}

SparseOperator SparseOperator::adjoint() const {
    SparseOperator out;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col) out.add(r, c, v);
    return out;
}

SparseOperator SparseOperator::compose(const SparseOperator& rhs) const {
    SparseOperator out;
    for (const auto& [c, col] : rhs.cols_) {
        std::unordered_map<std::size_t, double> acc;
        for (const auto& [mid, a] : col) {
            auto it = cols_.find(mid);
            if (it == cols_.end()) continue;
            for (const auto& [r, b] : it->second) acc[r] += a * b;
        }
        Column result;
        for (const auto& [r, v] : acc)
            if (v != 0.0) result.emplace_back(r, v);
        std::sort(result.begin(), result.end());
        if (!result.empty()) out.cols_[c] = std::move(result);
    }
    return out;
}

SparseOperator SparseOperator::plus(const SparseOperator& o, double scale) const {
    SparseOperator out = *this;
    for (const auto& [c, col] : o.cols_)
        for (const auto& [r, v] : col) out.add(c, r, scale * v);
    return out;
}

SparseOperator SparseOperator::scaled(double s) const {
    SparseOperator out;
    if (s == 0.0) return out;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col) out.add(c, r, s * v);
    return out;
}

bool SparseOperator::is_weighted_map() const {
    for (const auto& [c, col] : cols_)
        if (col.size() > 1) return false;
    return true;
}

bool SparseOperator::is_partial_permutation() const {
    if (!is_weighted_map()) return false;
    std::set<std::size_t> rows;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col)
            if (!rows.insert(r).second) return false;
    return true;
}

std::size_t SparseOperator::weighted_map_rank() const {
    std::set<std::size_t> rows;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col)
            if (v != 0.0) rows.insert(r);
    return rows.size();
}

double SparseOperator::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col) m = std::max(m, std::fabs(v));
    return m;
}

double SparseOperator::frobenius() const {
    double s = 0.0;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col) s += v * v;
    return std::sqrt(s);
}

NormEstimate SparseOperator::exact_norm() const {
    // ||A||^2 = max over rows of sum of squared weights landing there
    std::map<std::size_t, double> row_sq;
    for (const auto& [c, col] : cols_)
        for (const auto& [r, v] : col) row_sq[r] += v * v;
    double m = 0.0;
    for (const auto& [r, s] : row_sq) m = std::max(m, s);
    return {std::sqrt(m), 0.0, 0, true};
}

NormEstimate SparseOperator::power_norm(int max_iters, double tol) const {
    if (cols_.empty()) return {0.0, 0.0, 0, false};
    SparseOperator gram = adjoint().compose(*this);
    // index set of the quadratic form
    std::set<std::size_t> idx;
    for (const auto& [c, col] : gram.columns()) {
        idx.insert(c);
        for (const auto& [r, v] : col) idx.insert(r);
    }
    if (idx.empty()) return {0.0, 0.0, 0, false};
    std::unordered_map<std::size_t, double> v;
    const double init = 1.0 / std::sqrt(static_cast<double>(idx.size()));
    for (std::size_t i : idx) v[i] = init;
    auto apply = [&gram](const std::unordered_map<std::size_t, double>& in) {
        std::unordered_map<std::size_t, double> out;
        for (const auto& [c, col] : gram.columns()) {
            auto it = in.find(c);
            if (it == in.end() || it->second == 0.0) continue;
            for (const auto& [r, w] : col) out[r] += w * it->second;
        }
        return out;
    };
    double lambda = 0.0, residual = 0.0;
    int iters = 0;
    for (; iters < max_iters; ++iters) {
        auto gv = apply(v);
        // reductions run over the sorted index set so results are reproducible
        double n2 = 0.0;
        lambda = 0.0;
        for (std::size_t i : idx) {
            auto g = gv.find(i);
            if (g == gv.end()) continue;
            n2 += g->second * g->second;
            auto x = v.find(i);
            if (x != v.end()) lambda += g->second * x->second;
        }
        if (n2 == 0.0) return {0.0, 0.0, iters, false};
        double res2 = 0.0;
        for (std::size_t i : idx) {
            double gvi = 0.0, vi = 0.0;
            auto g = gv.find(i);
            if (g != gv.end()) gvi = g->second;
            auto x = v.find(i);
            if (x != v.end()) vi = x->second;
            const double d = gvi - lambda * vi;
            res2 += d * d;
        }
        residual = std::sqrt(res2);
        const double inv = 1.0 / std::sqrt(n2);
        v.clear();
        for (const auto& [i, w] : gv)
            if (w != 0.0) v[i] = w * inv;
        if (residual < tol && iters >= 3) break;
    }
    return {std::sqrt(std::max(lambda, 0.0)), residual, iters, false};
}

NormEstimate SparseOperator::norm() const {
    if (is_weighted_map()) return exact_norm();
    return power_norm();
}

bool SparseOperator::equal_entries(const SparseOperator& o, double tol) const {
    return max_entry_difference(o) <= tol;
}

double SparseOperator::max_entry_difference(const SparseOperator& o) const {
    double m = 0.0;
    auto scan = [&m](const SparseOperator& a, const SparseOperator& b) {
        for (const auto& [c, col] : a.columns())
            for (const auto& [r, v] : col) m = std::max(m, std::fabs(v - b.entry(c, r)));
    };
    scan(*this, o);
    scan(o, *this);
    return m;
}

}  // namespace smale
