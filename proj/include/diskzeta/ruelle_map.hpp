#pragma once

#include <vector>

#include "diskzeta/orbit.hpp"
#include "diskzeta/zeta.hpp"

namespace diskzeta {

/// Gaussian observable phi_{q0,p0;sigma} on the Birkhoff section, normalized
/// by (2 pi sigma^2)^{-1} so that smoothed values weak-* approach the
/// invariant distribution as sigma -> 0.
struct GaussianProbe {
    double q0 = 0.0;     ///< center, q in [-pi, pi]
    double p0 = 0.0;     ///< center, p in [-1, 1]
    double sigma = 0.1;  ///< width, > 0
};

/// Orbit integral of the probe restricted to the bounce section:
///   A_p = sum over bounces of
///         (2 pi sigma^2)^{-1} exp(-[wrap(q_i-q0)^2 + (p_i-p0)^2] / (2 sigma^2)).
/// The q-difference is wrapped into [-pi, pi); p is not wrapped. The bounce
/// contributions are accumulated in sorted order, so the value is exactly
/// invariant under any permutation of the bounce points -- in particular
/// under composition of the probe with the billiard return map.
double probe_weight(const OrbitRecord& orbit, const GaussianProbe& probe);

/// Width rule sigma = 1 / Re k. NonPositiveFrequency if Re k <= 0.
double default_sigma(const Resonance& resonance);

/// Gaussian-smoothed invariant Ruelle distribution sampled on a uniform
/// cell-centered n_q x n_p grid over the Birkhoff section [-pi,pi] x [-1,1].
struct ResidueMap {
    Resonance resonance;       ///< the simple zero the residues belong to
    double sigma = 0.0;        ///< probe width used at every node
    int n_q = 0, n_p = 0;      ///< grid dimensions
    std::vector<Complex> values;  ///< row-major: values[ip * n_q + iq]

    // Provenance metadata.
    double d_over_r = 0.0;
    Representation rep = Representation::A2;
    bool maslov = true;
    int order = 0;  ///< truncation order of the expansion

    double q_at(int iq) const;  ///< cell-center abscissa of column iq
    double p_at(int ip) const;  ///< cell-center ordinate of row ip
    const Complex& at(int iq, int ip) const { return values[static_cast<std::size_t>(ip) * n_q + iq]; }
};

/// Sample t_{lambda0,sigma}(q,p) = sum_p c_p A_p(q,p) on the grid, with the
/// residue coefficients c_p computed once from the expansion at the
/// resonance. The resonance must be a verified simple zero of the expansion;
/// NonSimpleZero propagates from the coefficient computation.
ResidueMap residue_map(const CycleExpansion& expansion, const Resonance& resonance, int n_q,
                       int n_p, double sigma, double d_over_r);

} // namespace diskzeta
