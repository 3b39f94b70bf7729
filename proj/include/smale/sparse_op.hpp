#pragma once

#include <cstddef>
#include <map>
#include <vector>

namespace smale {

struct NormEstimate {
    double value = 0.0;
    double residual = 0.0;  // Rayleigh residual of the certifying iteration
    int iterations = 0;
    bool exact = false;
};

// Real sparse operator between finite-dimensional coordinate spaces, stored
// column-wise. The operators arising here are weighted partial maps (each
// basis vector goes to a scalar multiple of one basis vector) and finite
// sums/compositions of those. Columns are kept sorted; exact zeros dropped.
class SparseOperator {
public:
    using Entry = std::pair<std::size_t, double>;
    using Column = std::vector<Entry>;

    SparseOperator() = default;

    void add(std::size_t col, std::size_t row, double value);
    void add_column(std::size_t col, const Column& entries);

    const std::map<std::size_t, Column>& columns() const { return cols_; }
    Column column(std::size_t col) const;
    double entry(std::size_t col, std::size_t row) const;
    std::size_t nnz() const;
    bool empty() const { return cols_.empty(); }

    SparseOperator adjoint() const;
    SparseOperator compose(const SparseOperator& rhs) const;  // this after rhs
    SparseOperator plus(const SparseOperator& o, double scale = 1.0) const;
    SparseOperator minus(const SparseOperator& o) const { return plus(o, -1.0); }
    SparseOperator scaled(double s) const;

    bool is_weighted_map() const;
    bool is_partial_permutation() const;
    // number of distinct image directions; rank when the op is a weighted map
    std::size_t weighted_map_rank() const;

    double max_abs_coeff() const;
    double frobenius() const;

    // exact operator norm for weighted maps: sqrt(max over rows of the sum
    // of squared coefficients mapping there); for partial permutations this
    // is max |coefficient|
    NormEstimate exact_norm() const;

    // certified power iteration on A^T A
    NormEstimate power_norm(int max_iters = 200, double tol = 1e-12) const;

    // exact when available, otherwise power iteration
    NormEstimate norm() const;

    bool equal_entries(const SparseOperator& o, double tol) const;
    double max_entry_difference(const SparseOperator& o) const;

private:
    void normalize_column(Column& c) const;
    std::map<std::size_t, Column> cols_;
};

}  // namespace smale
