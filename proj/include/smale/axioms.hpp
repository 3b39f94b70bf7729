#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smale/rng.hpp"

namespace smale {

struct AxiomCounter {
    std::string name;
    long checked = 0;
    long violations = 0;
};

struct AxiomReport {
    long samples = 0;
    long skipped_undefined = 0;
    std::vector<AxiomCounter> axioms;

    long total_violations() const {
        long v = 0;
        for (const auto& a : axioms) v += a.violations;
        return v;
    }
    bool clean() const { return total_violations() == 0; }
};

// Samples random triples near a common point and checks every bracket axiom
// that is decidable in exact arithmetic: idempotence, the two compatibility
// identities, phi-equivariance, and the stable/unstable contraction bounds.
// Identities are only scored when both sides are defined; undefined cases are
// counted as skips, never as failures.
template <class M>
AxiomReport check_axioms(const M& m, long samples, std::uint64_t seed) {
    AxiomReport rep;
    rep.samples = samples;
    rep.axioms = {
        {"bracket_idempotent"}, {"bracket_left_compat"},   {"bracket_right_compat"},
        {"phi_equivariance"},   {"stable_contraction"},    {"unstable_contraction"},
    };
    AxiomCounter& ax_idem = rep.axioms[0];
    AxiomCounter& ax_left = rep.axioms[1];
    AxiomCounter& ax_right = rep.axioms[2];
    AxiomCounter& ax_phi = rep.axioms[3];
    AxiomCounter& ax_cs = rep.axioms[4];
    AxiomCounter& ax_cu = rep.axioms[5];

    Rng rng(seed);
    for (long it = 0; it < samples; ++it) {
        auto x = m.random_point(rng);
        auto y = m.random_point_near(x, rng);
        auto z = m.random_point_near(x, rng);

        {
            auto b = m.bracket(x, x);
            ++ax_idem.checked;
            if (!b || *b != x) ++ax_idem.violations;
        }
        {
            // [x,[y,z]] = [x,z]
            auto byz = m.bracket(y, z);
            auto rhs = m.bracket(x, z);
            if (byz && rhs) {
                auto lhs = m.bracket(x, *byz);
                if (lhs) {
                    ++ax_left.checked;
                    if (*lhs != *rhs) ++ax_left.violations;
                } else {
                    ++rep.skipped_undefined;
                }
            } else {
                ++rep.skipped_undefined;
            }
        }
        {
            // [[x,y],z] = [x,z]
            auto bxy = m.bracket(x, y);
            auto rhs = m.bracket(x, z);
            if (bxy && rhs) {
                auto lhs = m.bracket(*bxy, z);
                if (lhs) {
                    ++ax_right.checked;
                    if (*lhs != *rhs) ++ax_right.violations;
                } else {
                    ++rep.skipped_undefined;
                }
            } else {
                ++rep.skipped_undefined;
            }
        }
        {
            // phi[x,y] = [phi x, phi y]
            auto bxy = m.bracket(x, y);
            if (bxy) {
                auto rhs = m.bracket(m.phi(x), m.phi(y));
                if (rhs) {
                    ++ax_phi.checked;
                    if (m.phi(*bxy) != *rhs) ++ax_phi.violations;
                } else {
                    ++rep.skipped_undefined;
                }
            } else {
                ++rep.skipped_undefined;
            }
        }
        {
            // contraction on local stable sets: ys = [x,y], zs = [x,z] share
            // the future of x, so both lie in X^s(x, eps) when close enough
            auto ys = m.bracket(x, y);
            auto zs = m.bracket(x, z);
            if (ys && zs && m.dist(*ys, x) <= m.eps_X() && m.dist(*zs, x) <= m.eps_X()) {
                ++ax_cs.checked;
                auto d0 = m.dist(*ys, *zs);
                auto d1 = m.dist(m.phi(*ys), m.phi(*zs));
                if (!(d1 <= m.contract(d0, 1))) ++ax_cs.violations;
            } else {
                ++rep.skipped_undefined;
            }
        }
        {
            auto yu = m.bracket(y, x);
            auto zu = m.bracket(z, x);
            if (yu && zu && m.dist(*yu, x) <= m.eps_X() && m.dist(*zu, x) <= m.eps_X()) {
                ++ax_cu.checked;
                auto d0 = m.dist(*yu, *zu);
                auto d1 = m.dist(m.phi_inv(*yu), m.phi_inv(*zu));
                if (!(d1 <= m.contract(d0, 1))) ++ax_cu.violations;
            } else {
                ++rep.skipped_undefined;
            }
        }
    }
    return rep;
}

struct EpsPrimeReport {
    double value = 0;
    long checked = 0;
    long failures = 0;
};

// Certifies the Lemma-2.2 constant by sampling pairs with d(x,y) < eps' and
// checking both bracket displacements stay below eps_X/2, together with the
// local stable/unstable memberships of [x,y].
template <class M>
EpsPrimeReport certify_eps_prime(const M& m, long samples, std::uint64_t seed) {
    EpsPrimeReport rep;
    rep.value = M::to_double(m.eps_X_prime());
    Rng rng(seed);
    const auto epsp = m.eps_X_prime();
    const auto half_eps = m.half(m.eps_X());
    for (long it = 0; it < samples; ++it) {
        auto x = m.random_point(rng);
        auto y = m.random_point_near(x, rng);
        if (!(m.dist(x, y) < epsp)) continue;
        auto b = m.bracket(x, y);
        ++rep.checked;
        if (!b) {
            ++rep.failures;
            continue;
        }
        const bool disp = m.dist(x, *b) < half_eps && m.dist(y, *b) < half_eps;
        // [x,y] in X^s(x, eps_X/2): same future as x; dually for y
        auto sx = m.bracket(*b, x);
        auto uy = m.bracket(y, *b);
        const bool memb = sx && *sx == x && uy && *uy == y;
        if (!disp || !memb) ++rep.failures;
    }
    return rep;
}

}  // namespace smale
