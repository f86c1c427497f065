#pragma once

#include <array>

#include <Eigen/Dense>

#include "diskzeta/errors.hpp"

namespace diskzeta {

/// One element of the C3v point group of the three-disk layout: an orthogonal
/// action on the plane together with the induced permutation of disk labels.
struct GroupElement {
    Eigen::Matrix2d matrix;   ///< orthogonal 2x2 matrix (det = +1 or -1)
    std::array<int, 3> perm;  ///< disk label i is mapped to perm[i]
    bool reflection;          ///< true iff det(matrix) = -1
};

/// The six elements of C3v for the standard layout (identity, two rotations,
/// three mirrors through the disk centers). Order is fixed and deterministic.
const std::array<GroupElement, 6>& c3v_elements();

/// The unique C3v element g with g(a0) = b0 and g(a1) = b1, for ordered pairs
/// of distinct disk labels. The action on such pairs is simply transitive.
const GroupElement& map_pair(int a0, int a1, int b0, int b1);

/// The disk label distinct from both a and b (a != b required).
int third_disk(int a, int b);

/// Three unit disks centered on the vertices of an equilateral triangle with
/// side d = (d/r) * r, r fixed to 1. The centroid sits at the origin and disk 0
/// points straight up, so the C3v elements of c3v_elements() are exact
/// symmetries of the configuration.
class DiskSystem {
public:
    /// Throws NonPhysicalGeometry unless d_over_r is finite and > 2.
    explicit DiskSystem(double d_over_r);

    double radius() const { return 1.0; }
    double d_over_r() const { return d_over_r_; }
    double separation() const { return d_over_r_; }  // r = 1
    const Eigen::Vector2d& center(int i) const { return centers_[static_cast<std::size_t>(i)]; }

private:
    double d_over_r_;
    std::array<Eigen::Vector2d, 3> centers_;
};

/// Disk label of the reference (seed-current) disk of the reduced dynamics.
inline constexpr int kSeedCurrent = 0;
/// Disk label of the seed-previous disk; the base point of the Birkhoff
/// coordinate q is the boundary point of disk kSeedCurrent facing this disk.
inline constexpr int kSeedPrevious = 1;

/// Angle (global frame) of the base point on the reference disk: the direction
/// from the center of disk kSeedCurrent toward the center of disk kSeedPrevious.
double base_point_angle();

/// Wrap an angle into [-pi, pi).
double wrap_angle(double a);

} // namespace diskzeta
