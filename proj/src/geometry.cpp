#include "diskzeta/geometry.hpp"

#include <cmath>
#include <numbers>

namespace diskzeta {

namespace {

constexpr double kPi = std::numbers::pi;

/// Angle of the center of disk i in the global frame: disk 0 up, then CCW.
double center_angle(int i) {
    return kPi / 2.0 + 2.0 * kPi / 3.0 * static_cast<double>(i);
}

Eigen::Matrix2d rotation(double t) {
    Eigen::Matrix2d m;
    m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return m;
}

/// Reflection across the line through the origin at angle t.
Eigen::Matrix2d mirror(double t) {
    Eigen::Matrix2d m;
    m << std::cos(2.0 * t), std::sin(2.0 * t), std::sin(2.0 * t), -std::cos(2.0 * t);
    return m;
}

std::array<GroupElement, 6> make_elements() {
    std::array<GroupElement, 6> g;
    // Rotations by 0, +120, +240 degrees; disk i -> i + j (mod 3).
    for (int j = 0; j < 3; ++j) {
        g[static_cast<std::size_t>(j)].matrix = rotation(2.0 * kPi / 3.0 * j);
        g[static_cast<std::size_t>(j)].reflection = false;
        for (int i = 0; i < 3; ++i)
            g[static_cast<std::size_t>(j)].perm[static_cast<std::size_t>(i)] = (i + j) % 3;
    }
    // Mirrors across the axes through the disk centers; disk i is fixed.
    for (int i = 0; i < 3; ++i) {
        GroupElement& e = g[static_cast<std::size_t>(3 + i)];
        e.matrix = mirror(center_angle(i));
        e.reflection = true;
        e.perm[static_cast<std::size_t>(i)] = i;
        const int a = (i + 1) % 3;
        const int b = (i + 2) % 3;
        e.perm[static_cast<std::size_t>(a)] = b;
        e.perm[static_cast<std::size_t>(b)] = a;
    }
    return g;
}

} // namespace

const std::array<GroupElement, 6>& c3v_elements() {
    static const std::array<GroupElement, 6> elements = make_elements();
    return elements;
}

const GroupElement& map_pair(int a0, int a1, int b0, int b1) {
    if (a0 < 0 || a0 > 2 || a1 < 0 || a1 > 2 || b0 < 0 || b0 > 2 || b1 < 0 || b1 > 2 ||
        a0 == a1 || b0 == b1)
        throw std::invalid_argument("map_pair: labels must be distinct disk indices in {0,1,2}");
    for (const GroupElement& e : c3v_elements())
        if (e.perm[static_cast<std::size_t>(a0)] == b0 && e.perm[static_cast<std::size_t>(a1)] == b1)
            return e;
    throw std::logic_error("map_pair: no element found (unreachable)");
}

int third_disk(int a, int b) {
    if (a < 0 || a > 2 || b < 0 || b > 2 || a == b)
        throw std::invalid_argument("third_disk: labels must be distinct disk indices in {0,1,2}");
    return 3 - a - b;
}

DiskSystem::DiskSystem(double d_over_r) : d_over_r_(d_over_r) {
    if (!std::isfinite(d_over_r) || d_over_r <= 2.0)
        throw NonPhysicalGeometry(
            "disk separation must satisfy d/r > 2 (disks must not touch); got d/r = " +
            std::to_string(d_over_r));
    // Circumradius of an equilateral triangle with side d (r = 1).
    const double rc = d_over_r / std::sqrt(3.0);
    for (int i = 0; i < 3; ++i) {
        const double t = center_angle(i);
        centers_[static_cast<std::size_t>(i)] = rc * Eigen::Vector2d(std::cos(t), std::sin(t));
    }
}

double base_point_angle() {
    // Direction from the center of disk 0 toward the center of disk 1. With
    // centers at 90/210/330 degrees this is -120 degrees, independent of d.
    return -2.0 * kPi / 3.0;
}

double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);  // (-pi, pi]
    if (w == kPi) w = -kPi;                   // half-open [-pi, pi)
    return w;
}

} // namespace diskzeta
