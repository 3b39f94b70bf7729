#include "smale/ktheory.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace smale {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows_in) {
    IntMatrix m(rows_in.size(), rows_in.empty() ? 0 : rows_in[0].size());
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (rows_in[i].size() != m.cols) throw std::invalid_argument("IntMatrix: ragged rows");
        for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows_in[i][j];
    }
    return m;
}

IntMatrix IntMatrix::mul(const IntMatrix& o) const {
    if (cols != o.rows) throw std::invalid_argument("IntMatrix::mul: shape mismatch");
    IntMatrix r(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) {
            if (at(i, k) == 0) continue;
            for (std::size_t j = 0; j < o.cols; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

IntMatrix IntMatrix::pow(unsigned e) const {
    if (rows != cols) throw std::invalid_argument("IntMatrix::pow: not square");
    IntMatrix r = identity(rows), b = *this;
    while (e > 0) {
        if (e & 1u) r = r.mul(b);
        b = b.mul(b);
        e >>= 1u;
    }
    return r;
}

Int IntMatrix::determinant() const {
    if (rows != cols) throw std::invalid_argument("IntMatrix::determinant: not square");
    const std::size_t n = rows;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination
    std::vector<Int> a = data;
    auto e = [&](std::size_t i, std::size_t j) -> Int& { return a[i * n + j]; };
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (e(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && e(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(e(k, j), e(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = e(i, j) * e(k, k) - e(i, k) * e(k, j);
                e(i, j) = num / prev;  // exact division
            }
        prev = e(k, k);
    }
    return sign > 0 ? e(n - 1, n - 1) : -e(n - 1, n - 1);
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows; ++i) {
        os << "[";
        for (std::size_t j = 0; j < cols; ++j) os << at(i, j) << (j + 1 < cols ? "," : "");
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string AbelianGroup::str() const {
    if (trivial()) return "0";
    std::string s;
    if (free_rank == 1) s = "Z";
    if (free_rank > 1) s = "Z^" + std::to_string(free_rank);
    for (const Int& d : invariant_factors) {
        if (!s.empty()) s += "+";
        s += "Z/" + d.get_str();
    }
    return s;
}

AbelianGroup AbelianGroup::make(long rank, std::vector<Int> factors) {
    for (Int& f : factors) f = abs(f);
    factors.erase(std::remove_if(factors.begin(), factors.end(),
                                 [](const Int& f) { return f <= 1; }),
                  factors.end());
    // restore the divisibility chain: repeatedly replace (a, b) by
    // (gcd(a,b), lcm(a,b)); terminates since the multiset of prime powers
    // only gets more sorted
    bool changed = true;
    while (changed) {
        changed = false;
        std::sort(factors.begin(), factors.end());
        for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
            if (factors[i + 1] % factors[i] != 0) {
                Int g = gcd(factors[i], factors[i + 1]);
                Int l = factors[i] / g * factors[i + 1];
                factors[i] = g;
                factors[i + 1] = l;
                changed = true;
            }
        }
        factors.erase(std::remove_if(factors.begin(), factors.end(),
                                     [](const Int& f) { return f <= 1; }),
                      factors.end());
    }
    return {rank, std::move(factors)};
}

bool group_isomorphic(const AbelianGroup& g, const AbelianGroup& h) {
    return AbelianGroup::make(g.free_rank, g.invariant_factors) ==
           AbelianGroup::make(h.free_rank, h.invariant_factors);
}

bool SmithDecomposition::verify() const {
    if (!(u.mul(m).mul(v) == d)) return false;
    Int du = u.determinant(), dv = v.determinant();
    if (du != 1 && du != -1) return false;
    if (dv != 1 && dv != -1) return false;
    // diagonal with divisibility chain
    const std::size_t n = std::min(d.rows, d.cols);
    for (std::size_t i = 0; i < d.rows; ++i)
        for (std::size_t j = 0; j < d.cols; ++j)
            if (i != j && d.at(i, j) != 0) return false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d.at(i, i) < 0 || d.at(i + 1, i + 1) < 0) return false;
        if (d.at(i + 1, i + 1) != 0 && d.at(i, i) == 0) return false;
        if (d.at(i, i) != 0 && d.at(i + 1, i + 1) % d.at(i, i) != 0) return false;
    }
    return true;
}

std::vector<Int> SmithDecomposition::diagonal() const {
    std::vector<Int> out;
    for (std::size_t i = 0; i < std::min(d.rows, d.cols); ++i) out.push_back(d.at(i, i));
    return out;
}

SmithDecomposition smith_normal_form(const IntMatrix& mat) {
    SmithDecomposition s;
    s.m = mat;
    s.d = mat;
    s.u = IntMatrix::identity(mat.rows);
    s.v = IntMatrix::identity(mat.cols);
    IntMatrix& d = s.d;
    IntMatrix& u = s.u;
    IntMatrix& v = s.v;
    const std::size_t n = std::min(mat.rows, mat.cols);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (std::size_t c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (std::size_t r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t c = 0; c < d.cols; ++c) d.at(dst, c) += f * d.at(src, c);
        for (std::size_t c = 0; c < u.cols; ++c) u.at(dst, c) += f * u.at(src, c);
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t r = 0; r < d.rows; ++r) d.at(r, dst) += f * d.at(r, src);
        for (std::size_t r = 0; r < v.rows; ++r) v.at(r, dst) += f * v.at(r, src);
    };
    auto negate_row = [&](std::size_t i) {
        for (std::size_t c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
        for (std::size_t c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    };

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing block to (t, t)
            bool found = false;
            std::size_t pi = t, pj = t;
            Int best;
            for (std::size_t i = t; i < d.rows; ++i)
                for (std::size_t j = t; j < d.cols; ++j) {
                    if (d.at(i, j) == 0) continue;
                    Int a = abs(d.at(i, j));
                    if (!found || a < best) {
                        best = a;
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
            if (!found) break;  // trailing block zero; done with this and later pivots
            swap_rows(t, pi);
            swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < d.rows; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = d.at(i, t) / d.at(t, t);
                add_row(i, t, -q);
                if (d.at(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < d.cols; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = d.at(t, j) / d.at(t, t);
                add_col(j, t, -q);
                if (d.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;  // remainders became new, smaller entries
            // pivot divides everything below-right? if not, fold that row in
            bool divides = true;
            for (std::size_t i = t + 1; i < d.rows && divides; ++i)
                for (std::size_t j = t + 1; j < d.cols && divides; ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        add_row(t, i, 1);
                        divides = false;
                    }
            if (divides) break;
        }
        if (d.at(t, t) < 0) negate_row(t);
    }
    return s;
}

std::pair<AbelianGroup, AbelianGroup> coker_ker(const IntMatrix& m) {
    SmithDecomposition s = smith_normal_form(m);
    std::vector<Int> diag = s.diagonal();
    long rank = 0;
    std::vector<Int> torsion;
    for (const Int& d : diag) {
        if (d != 0) {
            ++rank;
            if (d > 1) torsion.push_back(d);
        }
    }
    AbelianGroup coker = AbelianGroup::make(static_cast<long>(m.rows) - rank, torsion);
    AbelianGroup ker = AbelianGroup::make(static_cast<long>(m.cols) - rank, {});
    return {coker, ker};
}

namespace {

IntMatrix i_minus(const IntMatrix& a) {
    IntMatrix r = a;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) r.at(i, j) = (i == j ? 1 : 0) - a.at(i, j);
    return r;
}

IntMatrix to_int_matrix(const TransitionMatrix& a) {
    return IntMatrix::from_rows(a.rows());
}

}  // namespace

RuelleKGroups ruelle_k_groups(const TransitionMatrix& a) {
    if (!a.irreducible())
        throw std::invalid_argument("ruelle_k_groups: matrix must be irreducible");
    IntMatrix ia = to_int_matrix(a);
    auto [cu, ku] = coker_ker(i_minus(ia.transpose()));
    auto [cs, ks] = coker_ker(i_minus(ia));
    RuelleKGroups g;
    g.k0_ru = cu;
    g.k1_ru = ku;
    g.k0_rs = cs;
    g.k1_rs = ks;
    return g;
}

std::pair<AbelianGroup, AbelianGroup> uct_dual(const AbelianGroup& g0, const AbelianGroup& g1) {
    // Hom(Z^r + T, Z) = Z^r and Ext(Z^r + T, Z) = T
    AbelianGroup kh0 = AbelianGroup::make(g0.free_rank, g1.invariant_factors);
    AbelianGroup kh1 = AbelianGroup::make(g1.free_rank, g0.invariant_factors);
    return {kh0, kh1};
}

DualityVerdict duality_verdict(const TransitionMatrix& a) {
    DualityVerdict v;
    v.k = ruelle_k_groups(a);
    auto [kh0_ru, kh1_ru] = uct_dual(v.k.k0_ru, v.k.k1_ru);
    auto [kh0_rs, kh1_rs] = uct_dual(v.k.k0_rs, v.k.k1_rs);
    v.kh0_ru = kh0_ru;
    v.kh1_ru = kh1_ru;
    v.kh0_rs = kh0_rs;
    v.kh1_rs = kh1_rs;

    const bool sw1 = group_isomorphic(v.k.k0_rs, v.kh1_ru) &&
                     group_isomorphic(v.k.k1_rs, v.kh0_ru);
    const bool sw2 = group_isomorphic(v.k.k0_ru, v.kh1_rs) &&
                     group_isomorphic(v.k.k1_ru, v.kh0_rs);
    v.spanier_whitehead = sw1 && sw2;

    v.torsion_chain = group_isomorphic(v.k.k0_rs.torsion(), v.kh1_rs.torsion()) &&
                      group_isomorphic(v.kh1_rs.torsion(), v.k.k0_ru.torsion());
    v.rank_chain = v.k.k0_rs.free_rank == v.kh1_ru.free_rank &&
                   v.kh1_ru.free_rank == v.k.k0_ru.free_rank &&
                   v.k.k1_rs.free_rank == v.k.k1_ru.free_rank;
    // rank K_0 = rank K_1 holds for SFTs, so the classification hypothesis is
    // live and the two Ruelle algebras carry isomorphic K-theory
    v.self_duality = group_isomorphic(v.k.k0_rs, v.k.k0_ru) &&
                     group_isomorphic(v.k.k1_rs, v.k.k1_ru) &&
                     v.k.k0_rs.free_rank == v.k.k1_rs.free_rank;
    v.pass = v.spanier_whitehead && v.torsion_chain && v.rank_chain && v.self_duality;
    if (!v.pass) {
        v.detail = "K0(Rs)=" + v.k.k0_rs.str() + " K1(Rs)=" + v.k.k1_rs.str() +
                   " K0(Ru)=" + v.k.k0_ru.str() + " K1(Ru)=" + v.k.k1_ru.str();
    }
    return v;
}

namespace {

using RatMatrix = std::vector<std::vector<Rat>>;

std::size_t rat_rank(RatMatrix m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[rank], m[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][c] == 0) continue;
            Rat f = m[i][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

// basis of the column space, as column vectors
RatMatrix column_space(const IntMatrix& a) {
    RatMatrix m(a.rows, std::vector<Rat>(a.cols));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) m[i][j] = Rat(a.at(i, j));
    // column echelon via row elimination on the transpose
    RatMatrix t(a.cols, std::vector<Rat>(a.rows));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t[j][i] = m[i][j];
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.rows && rank < t.size(); ++c) {
        std::size_t piv = rank;
        while (piv < t.size() && t[piv][c] == 0) ++piv;
        if (piv == t.size()) continue;
        std::swap(t[rank], t[piv]);
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == rank || t[i][c] == 0) continue;
            Rat f = t[i][c] / t[rank][c];
            for (std::size_t j = 0; j < a.rows; ++j) t[i][j] -= f * t[rank][j];
        }
        ++rank;
    }
    RatMatrix basis;
    for (std::size_t i = 0; i < rank; ++i) basis.push_back(t[i]);  // rows of t = columns of a
    return basis;
}

// solve for the matrix of x -> A x on span(basis) in the given basis
RatMatrix restricted_action(const IntMatrix& a, const RatMatrix& basis) {
    const std::size_t dim = basis.size(), n = a.rows;
    RatMatrix phi(dim, std::vector<Rat>(dim, Rat(0)));
    for (std::size_t b = 0; b < dim; ++b) {
        // image vector of basis[b]
        std::vector<Rat> img(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) img[i] += Rat(a.at(i, j)) * basis[b][j];
        // solve sum_c phi[c][b] * basis[c] = img by augmented elimination
        RatMatrix sys(n, std::vector<Rat>(dim + 1, Rat(0)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < dim; ++c) sys[i][c] = basis[c][i];
            sys[i][dim] = img[i];
        }
        std::size_t rank = 0;
        std::vector<long> pivot_col(dim, -1);
        for (std::size_t c = 0; c < dim && rank < n; ++c) {
            std::size_t piv = rank;
            while (piv < n && sys[piv][c] == 0) ++piv;
            if (piv == n) continue;
            std::swap(sys[rank], sys[piv]);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == rank || sys[i][c] == 0) continue;
                Rat f = sys[i][c] / sys[rank][c];
                for (std::size_t j = c; j <= dim; ++j) sys[i][j] -= f * sys[rank][j];
            }
            pivot_col[c] = static_cast<long>(rank);
            ++rank;
        }
        for (std::size_t c = 0; c < dim; ++c) {
            if (pivot_col[c] < 0) throw std::logic_error("restricted_action: basis not free");
            const std::size_t r = static_cast<std::size_t>(pivot_col[c]);
            phi[c][b] = sys[r][dim] / sys[r][c];
        }
    }
    return phi;
}

RatMatrix one_minus(const RatMatrix& m) {
    RatMatrix r = m;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            r[i][j] = (i == j ? Rat(1) : Rat(0)) - m[i][j];
    return r;
}

}  // namespace

PvRanks pv_ranks(const TransitionMatrix& a) {
    if (!a.irreducible()) throw std::invalid_argument("pv_ranks: matrix must be irreducible");
    PvRanks out;
    IntMatrix ia = to_int_matrix(a);
    const unsigned n = static_cast<unsigned>(a.size());
    // eventual range: column space of A^n stabilizes by Cayley-Hamilton
    RatMatrix vbasis = column_space(ia.pow(n));
    out.eventual_dim = static_cast<long>(vbasis.size());
    RatMatrix phi0 = restricted_action(ia, vbasis);
    RatMatrix one_minus_phi0 = one_minus(phi0);
    const long dim = static_cast<long>(vbasis.size());
    const long rk = static_cast<long>(rat_rank(one_minus_phi0));
    const long coker0 = dim - rk;
    const long ker0 = dim - rk;
    // K_1 of the SFT building block vanishes, so phi_1 acts on 0
    out.rank_k0_ru = coker0 + 0;
    out.rank_k1_ru = 0 + ker0;
    out.ranks_equal = out.rank_k0_ru == out.rank_k1_ru;

    // stable side: same computation with A^t
    RatMatrix vbasis_t = column_space(ia.transpose().pow(n));
    RatMatrix phi0t = restricted_action(ia.transpose(), vbasis_t);
    const long dimt = static_cast<long>(vbasis_t.size());
    const long rkt = static_cast<long>(rat_rank(one_minus(phi0t)));
    out.rank_k0_rs = dimt - rkt;
    out.rank_k1_rs = dimt - rkt;
    out.ranks_equal = out.ranks_equal && out.rank_k0_rs == out.rank_k1_rs;

    RuelleKGroups kg = ruelle_k_groups(a);
    out.cross_method_match = kg.k0_ru.free_rank == out.rank_k0_ru &&
                             kg.k1_ru.free_rank == out.rank_k1_ru &&
                             kg.k0_rs.free_rank == out.rank_k0_rs &&
                             kg.k1_rs.free_rank == out.rank_k1_rs;
    return out;
}

std::vector<TransitionMatrix> irreducible_corpus(int count, int max_size, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TransitionMatrix> out;
    while (static_cast<int>(out.size()) < count) {
        const int n = rng.range(1, max_size);
        std::vector<std::vector<long>> rows(n, std::vector<long>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int r = rng.range(0, 9);
                rows[i][j] = r < 5 ? 0 : (r < 8 ? 1 : r - 6);  // sparse, entries 0..3
            }
        try {
            TransitionMatrix m(rows);
            if (m.irreducible()) out.push_back(std::move(m));
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    return out;
}

}  // namespace smale
