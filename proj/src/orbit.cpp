#include "diskzeta/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace diskzeta {

namespace {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

Vector2d unit(double t) { return {std::cos(t), std::sin(t)}; }
Vector2d unit_prime(double t) { return {-std::sin(t), std::cos(t)}; }

/// Full-domain disk labels d_0..d_{n+1} visited by the unfolded orbit.
/// d_0, d_1 are the fixed seed pair; symbol k decides d_{k+1} from the two
/// preceding labels: '0' returns to d_{k-1}, '1' goes to the third disk.
std::vector<int> unfold_labels(const Word& word) {
    const int n = word.length();
    std::vector<int> d(static_cast<std::size_t>(n) + 2);
    d[0] = kSeedPrevious;
    d[1] = kSeedCurrent;
    for (int k = 1; k <= n; ++k)
        d[static_cast<std::size_t>(k) + 1] =
            word.symbol(k - 1) == '0'
                ? d[static_cast<std::size_t>(k) - 1]
                : third_disk(d[static_cast<std::size_t>(k) - 1], d[static_cast<std::size_t>(k)]);
    return d;
}

const GroupElement& closure_element(const std::vector<int>& labels) {
    const std::size_t n2 = labels.size();
    return map_pair(labels[0], labels[1], labels[n2 - 2], labels[n2 - 1]);
}

struct LengthEval {
    double length = 0.0;
    VectorXd grad;
    MatrixXd hess;
};

/// Length of the unfolded orbit polygon together with its gradient and
/// (optionally) Hessian with respect to the bounce angles.
LengthEval eval_length(const DiskSystem& sys, const std::vector<int>& labels,
                       const Matrix2d& closure, const VectorXd& theta, bool with_hess) {
    const int n = static_cast<int>(theta.size());
    LengthEval ev;
    ev.grad = VectorXd::Zero(n);
    if (with_hess) ev.hess = MatrixXd::Zero(n, n);

    std::vector<Vector2d> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        pos[static_cast<std::size_t>(k)] =
            sys.center(labels[static_cast<std::size_t>(k) + 1]) + unit(theta[k]);

    for (int j = 0; j < n; ++j) {
        const int t = j;                  // tail bounce of chord j
        const int h = (j + 1) % n;        // head bounce (bounce 1's image if j = n-1)
        const bool twisted = (j == n - 1);
        const Vector2d tail = pos[static_cast<std::size_t>(t)];
        const Vector2d head = twisted ? Vector2d(closure * pos[0]) : pos[static_cast<std::size_t>(h)];
        const Vector2d w = head - tail;
        const double len = w.norm();
        const Vector2d u_hat = w / len;
        ev.length += len;

        const Vector2d tp = unit_prime(theta[t]);                                  // dTail/dtheta_t
        const Vector2d hp = twisted ? Vector2d(closure * unit_prime(theta[h]))     // dHead/dtheta_h
                                    : unit_prime(theta[h]);
        ev.grad[t] -= u_hat.dot(tp);
        ev.grad[h] += u_hat.dot(hp);

        if (with_hess) {
            const Matrix2d proj = (Matrix2d::Identity() - u_hat * u_hat.transpose()) / len;
            const Vector2d tpp = -unit(theta[t]);                                  // d2Tail
            const Vector2d hpp = twisted ? Vector2d(closure * (-unit(theta[h]))) : Vector2d(-unit(theta[h]));
            ev.hess(t, t) += tp.dot(proj * tp) - u_hat.dot(tpp);
            ev.hess(h, h) += hp.dot(proj * hp) + u_hat.dot(hpp);
            const double cross = -tp.dot(proj * hp);
            ev.hess(t, h) += cross;
            ev.hess(h, t) += cross;
        }
    }
    return ev;
}

/// A sweep of per-coordinate damped Newton steps; robust far from the
/// solution, used to enter the basin of the full Newton iteration.
void coordinate_descent(const DiskSystem& sys, const std::vector<int>& labels,
                        const Matrix2d& closure, VectorXd& theta, int sweeps) {
    const int n = static_cast<int>(theta.size());
    for (int s = 0; s < sweeps; ++s) {
        for (int k = 0; k < n; ++k) {
            const LengthEval ev = eval_length(sys, labels, closure, theta, true);
            const double g = ev.grad[k];
            const double h = ev.hess(k, k);
            double step = -g / std::max(h, 0.1);
            step = std::clamp(step, -0.3, 0.3);
            theta[k] += step;
        }
    }
}

void check_admissible(const DiskSystem& sys, const std::vector<int>& labels,
                      const Matrix2d& closure, const VectorXd& theta, const std::string& word) {
    const int n = static_cast<int>(theta.size());
    std::vector<Vector2d> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        pos[static_cast<std::size_t>(k)] =
            sys.center(labels[static_cast<std::size_t>(k) + 1]) + unit(theta[k]);

    const double r = sys.radius();
    for (int j = 0; j < n; ++j) {
        const int h = (j + 1) % n;
        const bool twisted = (j == n - 1);
        const Vector2d a = pos[static_cast<std::size_t>(j)];
        const Vector2d b = twisted ? Vector2d(closure * pos[0]) : pos[static_cast<std::size_t>(h)];
        const Vector2d w = b - a;
        const double len2 = w.squaredNorm();

        // Outward reflection at both chord endpoints.
        const Vector2d n_tail = unit(theta[j]);
        const Vector2d n_head = twisted ? Vector2d(closure * unit(theta[h])) : unit(theta[h]);
        if (n_tail.dot(w) <= 0.0 || n_head.dot(w) >= 0.0)
            throw InadmissibleOrbit("orbit \"" + word +
                                    "\" fails the outward-reflection condition at a bounce");

        // No other disk may intersect the open chord.
        const int tail_disk = labels[static_cast<std::size_t>(j) + 1];
        const int head_disk = labels[static_cast<std::size_t>(j) + 2];
        for (int m = 0; m < 3; ++m) {
            if (m == tail_disk || m == head_disk) continue;
            const Vector2d c = sys.center(m);
            const double t = std::clamp((c - a).dot(w) / len2, 0.0, 1.0);
            const double dist = (a + t * w - c).norm();
            if (dist < r * (1.0 - 1e-9))
                throw InadmissibleOrbit("orbit \"" + word + "\" has a flight chord through disk " +
                                        std::to_string(m) + " (shadowed word at this separation)");
        }
    }
}

} // namespace

OrbitRecord to_record(const PeriodicOrbit& orbit) {
    OrbitRecord rec;
    rec.word = orbit.word.str();
    rec.length = orbit.length;
    rec.stability = orbit.stability;
    rec.reflections = orbit.reflections;
    rec.n0 = orbit.word.count0();
    rec.n1 = orbit.word.count1();
    rec.residual = orbit.residual;
    rec.section = orbit.section;
    return rec;
}

PeriodicOrbit find_orbit(const DiskSystem& system, const Word& word) {
    if (!word.prime())
        throw std::invalid_argument("word \"" + word.str() + "\" is not prime");
    if (!word.canonical())
        throw std::invalid_argument("word \"" + word.str() +
                                    "\" is not canonical (use the minimal rotation)");

    const int n = word.length();
    const std::vector<int> labels = unfold_labels(word);
    const GroupElement& g = closure_element(labels);
    const Matrix2d closure = g.matrix;

    // Initial guess: aim each bounce at the mean direction of its neighbors.
    VectorXd theta(n);
    for (int k = 0; k < n; ++k) {
        const Vector2d c = system.center(labels[static_cast<std::size_t>(k) + 1]);
        const Vector2d to_prev = (system.center(labels[static_cast<std::size_t>(k)]) - c).normalized();
        const Vector2d to_next = (system.center(labels[static_cast<std::size_t>(k) + 2]) - c).normalized();
        const Vector2d dir = to_prev + to_next;
        theta[k] = std::atan2(dir.y(), dir.x());
    }

    coordinate_descent(system, labels, closure, theta, 5);

    // Full Newton on the gradient of the length functional, with backtracking.
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 100; ++iter) {
        const LengthEval ev = eval_length(system, labels, closure, theta, true);
        residual = ev.grad.norm();
        if (residual < 1e-13) break;
        VectorXd step = ev.hess.ldlt().solve(-ev.grad);
        if (!step.allFinite()) step = -ev.grad;
        double scale = 1.0;
        VectorXd candidate = theta + step;
        for (int back = 0; back < 25; ++back) {
            const LengthEval trial = eval_length(system, labels, closure, candidate, false);
            if (trial.grad.norm() < residual) break;
            scale *= 0.5;
            candidate = theta + scale * step;
        }
        theta = candidate;
    }
    {
        const LengthEval ev = eval_length(system, labels, closure, theta, false);
        residual = ev.grad.norm();
        if (!(residual < 1e-12))
            throw NoConvergence("orbit solve for word \"" + word.str() +
                                "\" stalled at gradient norm " + std::to_string(residual));
    }

    check_admissible(system, labels, closure, theta, word.str());

    PeriodicOrbit orbit{word, {}, {}, {}, 0.0, Matrix2d::Identity(), 0.0, n, {}, residual};
    orbit.disks.resize(static_cast<std::size_t>(n));
    orbit.angles.resize(static_cast<std::size_t>(n));
    orbit.flight_lengths.resize(static_cast<std::size_t>(n));
    std::vector<Vector2d> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        orbit.disks[static_cast<std::size_t>(k)] = labels[static_cast<std::size_t>(k) + 1];
        orbit.angles[static_cast<std::size_t>(k)] = theta[k];
        pos[static_cast<std::size_t>(k)] =
            system.center(labels[static_cast<std::size_t>(k) + 1]) + unit(theta[k]);
    }
    for (int j = 0; j < n; ++j) {
        const Vector2d head = (j == n - 1) ? Vector2d(closure * pos[0])
                                           : pos[static_cast<std::size_t>(j) + 1];
        orbit.flight_lengths[static_cast<std::size_t>(j)] =
            (head - pos[static_cast<std::size_t>(j)]).norm();
        orbit.length += orbit.flight_lengths[static_cast<std::size_t>(j)];
    }

    orbit.monodromy = monodromy(system, orbit);
    orbit.stability = expanding_eigenvalue(orbit.monodromy);
    orbit.section = birkhoff_coords(system, orbit);
    return orbit;
}

Eigen::Matrix2d monodromy(const DiskSystem& system, const PeriodicOrbit& orbit) {
    if (!(orbit.residual < 1e-10))
        throw std::invalid_argument("monodromy requires an orbit solved to residual < 1e-10");
    const int n = orbit.reflections;
    const std::vector<int> labels = unfold_labels(orbit.word);
    const GroupElement& g = closure_element(labels);

    std::vector<Vector2d> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        pos[static_cast<std::size_t>(k)] = system.center(orbit.disks[static_cast<std::size_t>(k)]) +
                                           unit(orbit.angles[static_cast<std::size_t>(k)]);

    // cos of the incidence angle at each bounce, from the outgoing chord.
    std::vector<double> cos_phi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Vector2d head = (k == n - 1) ? Vector2d(g.matrix * pos[0])
                                           : pos[static_cast<std::size_t>(k) + 1];
        const Vector2d u_hat = (head - pos[static_cast<std::size_t>(k)]).normalized();
        cos_phi[static_cast<std::size_t>(k)] = unit(orbit.angles[static_cast<std::size_t>(k)]).dot(u_hat);
    }

    const double kappa = 1.0 / system.radius();
    auto flight = [](double l) {
        Matrix2d f;
        f << 1.0, l, 0.0, 1.0;
        return f;
    };
    auto bounce = [kappa](double cphi) {
        Matrix2d b;
        b << 1.0, 0.0, 2.0 * kappa / cphi, 1.0;
        return Matrix2d(-b);
    };

    // Time-ordered product around the loop starting just after bounce 1;
    // the closing symmetry element contributes its orientation as a sign.
    Matrix2d m = Matrix2d::Identity();
    for (int k = 0; k < n; ++k) {
        m = flight(orbit.flight_lengths[static_cast<std::size_t>(k)]) * m;
        m = bounce(cos_phi[static_cast<std::size_t>((k + 1) % n)]) * m;
    }
    if (g.reflection) m = -m;
    return m;
}

double expanding_eigenvalue(const Eigen::Matrix2d& m) {
    const double tr = m.trace();
    if (std::abs(tr) <= 2.0)
        throw DegenerateMonodromy("monodromy trace " + std::to_string(tr) +
                                  " has no expanding eigenvalue (|tr| <= 2)");
    const double disc = std::sqrt(tr * tr - 4.0);
    return 0.5 * (tr + std::copysign(disc, tr));
}

double monodromy_determinant(const DiskSystem& system, const PeriodicOrbit& orbit) {
    const int n = orbit.reflections;
    const std::vector<int> labels = unfold_labels(orbit.word);
    const GroupElement& g = closure_element(labels);

    std::vector<Vector2d> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        pos[static_cast<std::size_t>(k)] = system.center(orbit.disks[static_cast<std::size_t>(k)]) +
                                           unit(orbit.angles[static_cast<std::size_t>(k)]);

    const double kappa = 1.0 / system.radius();
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        const Vector2d head = (k == n - 1) ? Vector2d(g.matrix * pos[0])
                                           : pos[static_cast<std::size_t>(k) + 1];
        const Vector2d u_hat = (head - pos[static_cast<std::size_t>(k)]).normalized();
        const double cphi = unit(orbit.angles[static_cast<std::size_t>(k)]).dot(u_hat);
        const double l = orbit.flight_lengths[static_cast<std::size_t>(k)];
        Matrix2d f;
        f << 1.0, l, 0.0, 1.0;
        Matrix2d b;
        b << -1.0, 0.0, -2.0 * kappa / cphi, -1.0;
        det *= f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
        det *= b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    }
    // The closing symmetry element contributes a scalar +-1, so its square.
    const double sigma = g.reflection ? -1.0 : 1.0;
    return det * sigma * sigma;
}

std::vector<SectionPoint> birkhoff_coords(const DiskSystem& system, const PeriodicOrbit& orbit) {
    const int n = orbit.reflections;
    const std::vector<int> labels = unfold_labels(orbit.word);
    const GroupElement& g = closure_element(labels);
    const double base = base_point_angle();

    std::vector<Vector2d> pos(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        pos[static_cast<std::size_t>(k)] = system.center(orbit.disks[static_cast<std::size_t>(k)]) +
                                           unit(orbit.angles[static_cast<std::size_t>(k)]);

    std::vector<SectionPoint> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Vector2d head = (k == n - 1) ? Vector2d(g.matrix * pos[0])
                                           : pos[static_cast<std::size_t>(k) + 1];
        const Vector2d u_hat = (head - pos[static_cast<std::size_t>(k)]).normalized();
        // Normalize: carry the local (previous, current) disk pair back to the
        // seed pair; the inverse of an orthogonal matrix is its transpose.
        const GroupElement& h = map_pair(kSeedPrevious, kSeedCurrent,
                                         labels[static_cast<std::size_t>(k)],
                                         labels[static_cast<std::size_t>(k) + 1]);
        const Vector2d p_ref = h.matrix.transpose() * pos[static_cast<std::size_t>(k)];
        const Vector2d v_ref = h.matrix.transpose() * u_hat;
        const Vector2d rel = p_ref - system.center(kSeedCurrent);
        const double theta_ref = std::atan2(rel.y(), rel.x());
        out[static_cast<std::size_t>(k)].q = wrap_angle(theta_ref - base);
        out[static_cast<std::size_t>(k)].p = unit_prime(theta_ref).dot(v_ref);
    }
    return out;
}

std::optional<SectionPoint> section_map(const DiskSystem& system, SectionPoint x) {
    if (!(std::abs(x.p) < 1.0)) return std::nullopt;
    const double base = base_point_angle();
    const double theta = base + x.q;
    const Vector2d pos = system.center(kSeedCurrent) + unit(theta);
    const Vector2d v = x.p * unit_prime(theta) + std::sqrt(1.0 - x.p * x.p) * unit(theta);

    // First disk hit by the ray pos + t v, t > 0.
    int hit = -1;
    double t_hit = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
        const Vector2d w = pos - system.center(j);
        const double b = w.dot(v);
        const double c = w.squaredNorm() - system.radius() * system.radius();
        const double disc = b * b - c;
        if (disc <= 0.0) continue;
        const double root = -b - std::sqrt(disc);  // first intersection
        if (root > 1e-9 && root < t_hit) {
            t_hit = root;
            hit = j;
        }
    }
    if (hit < 0) return std::nullopt;  // escaped

    const Vector2d q_pos = pos + t_hit * v;
    const Vector2d normal = (q_pos - system.center(hit)) / system.radius();
    const Vector2d v_out = v - 2.0 * v.dot(normal) * normal;

    // Renormalize: the disk just left becomes the seed-previous disk, the disk
    // just hit becomes the reference disk.
    const GroupElement& g = map_pair(kSeedCurrent, hit, kSeedPrevious, kSeedCurrent);
    const Vector2d p_ref = g.matrix * q_pos;
    const Vector2d v_ref = g.matrix * v_out;
    const Vector2d rel = p_ref - system.center(kSeedCurrent);
    const double theta_ref = std::atan2(rel.y(), rel.x());
    return SectionPoint{wrap_angle(theta_ref - base), unit_prime(theta_ref).dot(v_ref)};
}

HyperbolicityStats hyperbolicity_stats(const std::vector<OrbitRecord>& records) {
    if (records.empty())
        throw EmptyOrbitSet("hyperbolicity_stats requires at least one orbit");
    HyperbolicityStats st;
    st.n_primes = static_cast<int>(records.size());
    double ratio_min = std::numeric_limits<double>::infinity();
    double ratio_max = -std::numeric_limits<double>::infinity();
    double ratio_sum = 0.0;
    for (const OrbitRecord& rec : records) {
        st.max_length = std::max(st.max_length, rec.length);
        const double ratio = std::log(std::abs(rec.stability)) / rec.length;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
        ratio_sum += ratio;
    }
    st.beta_min = ratio_min;
    st.mean_ratio = ratio_sum / st.n_primes;
    st.spread = (ratio_max - ratio_min) / st.mean_ratio;

    // Count closed orbits (repetitions of primes included) shorter than the
    // covering length, i.e. the largest primitive length in the set.
    long count = 0;
    for (const OrbitRecord& rec : records) {
        long m = static_cast<long>(std::floor(st.max_length / rec.length));
        while (m > 0 && static_cast<double>(m) * rec.length >= st.max_length) --m;
        count += m;
    }
    st.h_top = count > 0 ? std::log(static_cast<double>(count)) / st.max_length : 0.0;
    return st;
}

} // namespace diskzeta
