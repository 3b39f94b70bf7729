#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "smale/rng.hpp"
#include "smale/sft.hpp"

namespace smale {

using Int = mpz_class;
using Rat = mpq_class;

struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> data;  // row-major

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& m);

    Int& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    IntMatrix mul(const IntMatrix& o) const;
    IntMatrix transpose() const;
    IntMatrix pow(unsigned e) const;
    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
    Int determinant() const;  // exact, fraction-free
    std::string str() const;
};

// free rank plus invariant factors d_1 | d_2 | ..., all >= 2
struct AbelianGroup {
    long free_rank = 0;
    std::vector<Int> invariant_factors;

    bool operator==(const AbelianGroup& o) const {
        return free_rank == o.free_rank && invariant_factors == o.invariant_factors;
    }
    bool trivial() const { return free_rank == 0 && invariant_factors.empty(); }
    AbelianGroup torsion() const { return {0, invariant_factors}; }
    AbelianGroup free_part() const { return {free_rank, {}}; }
    std::string str() const;

    // canonical form from an arbitrary factor list (gcd/lcm chaining drops
    // units and restores divisibility)
    static AbelianGroup make(long rank, std::vector<Int> factors);
};

bool group_isomorphic(const AbelianGroup& g, const AbelianGroup& h);

struct SmithDecomposition {
    IntMatrix u, v, d, m;  // u*m*v = d
    bool verify() const;
    std::vector<Int> diagonal() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& m);

// cokernel and kernel of the map Z^cols -> Z^rows given by M
std::pair<AbelianGroup, AbelianGroup> coker_ker(const IntMatrix& m);

struct RuelleKGroups {
    AbelianGroup k0_rs, k1_rs;  // stable Ruelle algebra
    AbelianGroup k0_ru, k1_ru;  // unstable Ruelle algebra
};

// K-groups of the Ruelle algebras of the SFT of A via the stabilized
// Cuntz-Krieger identification: K_0(R^u) = coker(I - A^t), K_1(R^u) =
// ker(I - A^t), and with A in place of A^t on the stable side.
RuelleKGroups ruelle_k_groups(const TransitionMatrix& a);

// K-homology via the universal coefficient sequence for finitely generated
// K-theory: K^i = Hom(K_i, Z) + Ext(K_{i+1}, Z)
std::pair<AbelianGroup, AbelianGroup> uct_dual(const AbelianGroup& g0, const AbelianGroup& g1);

struct DualityVerdict {
    bool pass = false;
    RuelleKGroups k;
    AbelianGroup kh0_rs, kh1_rs, kh0_ru, kh1_ru;  // K-homology groups
    bool spanier_whitehead = false;  // K_i(R^s) ~ K^{i+1}(R^u) and K_i(R^u) ~ K^{i+1}(R^s)
    bool torsion_chain = false;      // tK_0(R^s) ~ Ext(K^1(R^s)) ~ tK_0(R^u)
    bool rank_chain = false;         // rank K_0(R^s) = rank K^1(R^u) = rank K_0(R^u)
    bool self_duality = false;       // K_i(R^s) ~ K_i(R^u), both i
    std::string detail;
};

DualityVerdict duality_verdict(const TransitionMatrix& a);

struct PvRanks {
    long rank_k0_ru = 0, rank_k1_ru = 0;
    long rank_k0_rs = 0, rank_k1_rs = 0;
    long eventual_dim = 0;
    bool ranks_equal = false;        // within each algebra, as the proposition states
    bool cross_method_match = false; // against the Smith-normal-form route
};

// Pimsner-Voiculescu rank bookkeeping over Q: restrict A to its eventual
// range V, then rank K_0(R^U) tensor Q = rank coker(1-phi_0) + rank ker(1-phi_1)
// and rank K_1(R^U) tensor Q = rank coker(1-phi_1) + rank ker(1-phi_0), with
// phi_1 acting on the zero space for an SFT.
PvRanks pv_ranks(const TransitionMatrix& a);

// seeded rejection sampling of irreducible nonnegative matrices
std::vector<TransitionMatrix> irreducible_corpus(int count, int max_size, std::uint64_t seed);

}  // namespace smale
