#pragma once

#include <complex>
#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "diskzeta/orbit.hpp"

namespace diskzeta {

using Complex = std::complex<double>;

/// Irreducible representation of C3v selecting the boundary condition of the
/// reduced problem. A2 is the representation whose quantum counterpart obeys
/// Dirichlet conditions on the symmetry axes.
enum class Representation { A1, A2 };

/// Sign and band content of the cycle weight
///   t_p(lambda) = s_p exp(-lambda L_p) |Lambda_p|^{-1/2} Lambda_p^{-band}
/// with s_p = (maslov ? (-1)^{n_p} : 1) * (rep == A2 ? (-1)^{n0(p)} : 1).
struct CycleWeightSpec {
    Representation rep = Representation::A2;
    bool maslov = true;
    int band = 0;
};

/// Rectangle in the complex wavenumber plane, re_min <= Re k <= re_max etc.
struct KRegion {
    double re_min, re_max, im_min, im_max;
};

/// Exact component swap k = i*lambda (and back): no rounding involved.
Complex lambda_to_k(Complex lambda);
Complex k_to_lambda(Complex k);

/// A located zero of a truncated band-k zeta inverse.
struct Resonance {
    Complex lambda;   ///< zero of the expansion, decay-rate convention
    Complex k;        ///< wavenumber, k = i lambda (stored as the exact swap)
    Complex E;        ///< energy, E = k^2 (stored as the product of k with itself)
    double residual;  ///< |zeta_inv(lambda)| after polishing
    int order;        ///< truncation order N of the expansion that produced it
    int band;         ///< band index of the weight
};

Resonance make_resonance(Complex lambda, double residual, int order, int band);

/// Truncated pseudo-cycle expansion of a band-k zeta inverse:
///   zeta_inv(lambda) = 1 + sum over nonempty subsets S of distinct primes
///                      with total symbol count <= N of
///                      (-1)^{|S|} prod_{p in S} t_p(lambda).
/// Built once from an orbit set, evaluated many times.
class CycleExpansion {
public:
    /// Requires every prime canonical word of length <= order to be present in
    /// records exactly once (MissingOrbits otherwise); longer records are
    /// ignored. order >= 1; the resonance-search entry points require >= 4.
    CycleExpansion(const std::vector<OrbitRecord>& records, CycleWeightSpec spec, int order);

    int order() const { return order_; }
    const CycleWeightSpec& weight_spec() const { return spec_; }
    /// The primes entering the expansion, sorted by (length, lex).
    const std::vector<OrbitRecord>& primes() const { return primes_; }
    std::size_t term_count() const { return lengths_.size(); }
    /// Prime indices (into primes()) of each pseudo-cycle term.
    const std::vector<std::vector<int>>& members() const { return members_; }

    /// Sum of the pseudo-cycle terms of total symbol count exactly n at
    /// lambda. n = 1 gives the fundamental contribution, n >= 2 the order-n
    /// curvature contribution whose shadowing decay controls convergence.
    Complex order_contribution(int n, Complex lambda) const;

    /// Value and lambda-derivative of the truncated zeta inverse.
    std::pair<Complex, Complex> eval(Complex lambda) const;

    /// Value, lambda-derivative, and the magnitude sum of the evaluated terms
    /// (1 + sum |term|), the natural scale for a backward-error residual.
    std::tuple<Complex, Complex, double> eval_scaled(Complex lambda) const;

    /// Absolute residual |zeta_inv(lambda)|: the quantity all
    /// "residual < 1e-10" guarantees refer to. Roundoff floors it at about
    /// eps * (term magnitude sum), so the threshold also rejects zeros in
    /// regions where the truncation has not converged.
    double residual_at(Complex lambda) const;

    /// Derivative of the truncated zeta inverse in the weight direction:
    /// d/d eps at eps = 0 of the expansion with t_p -> t_p exp(eps A_p).
    /// A is indexed like primes(); MissingWeight on size mismatch or NaN.
    Complex weight_derivative(Complex lambda, const std::vector<double>& A) const;

    /// Per-prime contribution of the weight direction at a zero lambda0:
    /// residue(lambda0, A) = sum_p c_p A_p for every A. NonSimpleZero if the
    /// lambda-derivative vanishes there.
    std::vector<Complex> residue_coefficients(Complex lambda0) const;

    /// Newton-polish a zero from the starting guess; returns the refined
    /// lambda and |zeta_inv| there. Throws NoConvergence if the iteration
    /// does not reach |zeta_inv| < 1e-10.
    std::pair<Complex, double> polish_zero(Complex lambda0, int max_iter = 50) const;

private:
    CycleWeightSpec spec_;
    int order_;
    std::vector<OrbitRecord> primes_;
    // One pseudo-cycle term per entry: value(lambda) = coeff * exp(-lambda*length - decay).
    std::vector<double> lengths_;        ///< sum of L_p over the subset
    std::vector<double> decays_;         ///< (band + 1/2) * sum of log|Lambda_p|
    std::vector<double> coeffs_;         ///< +-1 including subset parity and weight signs
    std::vector<int> orders_;            ///< total symbol count of each subset
    std::vector<std::vector<int>> members_;  ///< prime indices of each subset
};

/// Zeros of the expansion inside a wavenumber rectangle. Newton iterations are
/// started on a deterministic seed grid with spacing (2 pi / mean length per
/// symbol) / seed_density; converged zeros are deduplicated and sorted by
/// (Re k, Im k). Seeds are placed only in the physical half-plane Re k > 0, so
/// a region entirely at Re k <= 0 yields an empty list.
/// Pre: expansion order >= 4, region bounds finite and ordered.
std::vector<Resonance> find_resonances(const CycleExpansion& expansion, const KRegion& region,
                                       double seed_density = 4.0);

/// Invariant Ruelle distribution evaluated on a weight direction A at a simple
/// zero lambda0: -d_eps zeta_inv / d_lambda zeta_inv. NonSimpleZero if the
/// zero is not simple.
Complex residue(const CycleExpansion& expansion, Complex lambda0, const std::vector<double>& A);

/// Lower edge of the band-0 validity strip: h_top - (3/2) beta_min. Band-0
/// zeros with Re lambda above this value are flagged reliable.
double band0_validity(const HyperbolicityStats& stats);

/// Direct evaluation of the weighted trace sum
///   sum over primes p and repetitions r with r L_p <= L_max of
///   A_p s_p^r exp(-lambda r L_p) |Lambda_p^r|^{1/2} / |det(1 - P_p^r)|
/// with |det(1 - P^r)| = |Lambda|^r (1 - Lambda^{-r})^2 (signed Lambda).
/// Diagnostic oracle for the determinant identity -d_eps log D.
Complex partial_sum_zeta(const std::vector<OrbitRecord>& records, Representation rep, bool maslov,
                         Complex lambda, const std::vector<double>& A, double length_max);

} // namespace diskzeta
