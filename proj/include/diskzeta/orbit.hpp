#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "diskzeta/geometry.hpp"
#include "diskzeta/words.hpp"

namespace diskzeta {

/// Birkhoff coordinates of a bounce on the reference disk of the reduced
/// dynamics: q = arclength angle from the base point (counterclockwise
/// positive, wrapped into [-pi, pi)), p = tangential component of the
/// outgoing unit velocity (|p| < 1).
struct SectionPoint {
    double q;
    double p;
};

/// A solved prime periodic orbit of the reduced three-disk dynamics.
struct PeriodicOrbit {
    Word word;                          ///< prime canonical symbol word
    std::vector<int> disks;             ///< full-domain disk label per bounce (size n)
    std::vector<double> angles;         ///< bounce position angle on its disk, global frame
    std::vector<double> flight_lengths; ///< chord k -> k+1 (last closes via the symmetry image)
    double length = 0.0;                ///< L = sum of flight lengths
    Eigen::Matrix2d monodromy;          ///< reduced transverse monodromy M
    double stability = 0.0;             ///< expanding eigenvalue of M (signed, |.| > 1)
    int reflections = 0;                ///< n = word length
    std::vector<SectionPoint> section;  ///< Birkhoff coordinates of each bounce
    double residual = 0.0;              ///< final gradient norm of the length functional
};

/// The slice of orbit data that downstream consumers (zeta weights, residue
/// maps) and the orbit database use. Everything here is derivable from a
/// PeriodicOrbit; the record exists so databases can round-trip without
/// storing solver internals.
struct OrbitRecord {
    std::string word;
    double length = 0.0;
    double stability = 0.0;  ///< signed expanding eigenvalue
    int reflections = 0;
    int n0 = 0;  ///< count of '0' symbols
    int n1 = 0;  ///< count of '1' symbols
    double residual = 0.0;
    std::vector<SectionPoint> section;
};

OrbitRecord to_record(const PeriodicOrbit& orbit);

/// Solve the prime periodic orbit of a canonical prime word by Newton
/// iteration on the length functional in the unfolded domain.
/// Pre: word prime and canonical. Throws NoConvergence if the gradient norm
/// cannot be brought below 1e-12, InadmissibleOrbit if a flight chord clips a
/// disk interior or a bounce fails the outward-reflection condition.
PeriodicOrbit find_orbit(const DiskSystem& system, const Word& word);

/// Transverse monodromy of a solved orbit: the product of curvature kicks
/// -[[1,0],[2/(r cos phi),1]] and free flights [[1,l],[0,1]] around the loop,
/// twisted by the orientation (+-1) of the closing symmetry element.
/// Pre: orbit solved to residual < 1e-10. det M = 1 up to roundoff.
Eigen::Matrix2d monodromy(const DiskSystem& system, const PeriodicOrbit& orbit);

/// Signed expanding eigenvalue of a monodromy matrix.
/// Throws DegenerateMonodromy when |tr M| <= 2.
double expanding_eigenvalue(const Eigen::Matrix2d& m);

/// det M evaluated through the factored product: the determinant of each
/// free-flight and reflection factor is computed from its entries and the
/// results are multiplied. Mathematically det M = prod of factor dets = 1;
/// evaluating det on the assembled matrix instead cancels catastrophically
/// once |Lambda|^2 approaches 1/eps, so symplecticity must be checked here.
double monodromy_determinant(const DiskSystem& system, const PeriodicOrbit& orbit);

/// Birkhoff coordinates of every bounce: each bounce is carried to the
/// reference disk by the inverse of the unique symmetry element mapping the
/// seed pair to the local (previous, current) disk pair.
std::vector<SectionPoint> birkhoff_coords(const DiskSystem& system, const PeriodicOrbit& orbit);

/// One step of the reduced bounce map in Birkhoff coordinates: launch from the
/// reference disk, reflect off the first disk hit, then renormalize so the
/// new bounce lies on the reference disk again. Returns std::nullopt when the
/// trajectory escapes (no disk is hit) or |p| >= 1 (tangent launch).
std::optional<SectionPoint> section_map(const DiskSystem& system, SectionPoint x);

/// Summary statistics of a set of prime orbits.
struct HyperbolicityStats {
    int n_primes = 0;
    double max_length = 0.0;  ///< covering length L_cov = max prime length
    double h_top = 0.0;       ///< log #{closed orbits, repetitions included, with L < L_cov} / L_cov
    double beta_min = 0.0;    ///< min over primes of log|Lambda| / L
    double mean_ratio = 0.0;  ///< mean of log|Lambda| / L
    double spread = 0.0;      ///< (max - min) / mean of log|Lambda| / L
};

/// Throws EmptyOrbitSet on an empty input.
HyperbolicityStats hyperbolicity_stats(const std::vector<OrbitRecord>& records);

} // namespace diskzeta
