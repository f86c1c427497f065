#include "diskzeta/ruelle_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "diskzeta/errors.hpp"
#include "diskzeta/geometry.hpp"

namespace diskzeta {

namespace {

constexpr double kPi = std::numbers::pi;

// Sum of the normalized Gaussian over the bounce points, accumulated in
// sorted order so the result does not depend on the order of the points.
// Exponents below -746 underflow to zero and are skipped.
double gaussian_sum(const std::vector<SectionPoint>& points, double q0, double p0, double sigma) {
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> contrib;
    contrib.reserve(points.size());
    for (const SectionPoint& pt : points) {
        const double dq = wrap_angle(pt.q - q0);
        const double dp = pt.p - p0;
        const double arg = -(dq * dq + dp * dp) * inv2s2;
        if (arg > -746.0) contrib.push_back(std::exp(arg));
    }
    std::sort(contrib.begin(), contrib.end());
    double sum = 0.0;
    for (double c : contrib) sum += c;
    return sum / (2.0 * kPi * sigma * sigma);
}

} // namespace

double probe_weight(const OrbitRecord& orbit, const GaussianProbe& probe) {
    if (!(std::isfinite(probe.sigma) && probe.sigma > 0.0))
        throw std::invalid_argument("probe width sigma must be positive");
    if (!(probe.q0 >= -kPi && probe.q0 <= kPi))
        throw std::invalid_argument("probe center q0 must lie in [-pi, pi]");
    if (!(probe.p0 >= -1.0 && probe.p0 <= 1.0))
        throw std::invalid_argument("probe center p0 must lie in [-1, 1]");
    if (orbit.section.empty())
        throw std::invalid_argument("orbit record \"" + orbit.word + "\" has no section points");
    return gaussian_sum(orbit.section, probe.q0, probe.p0, probe.sigma);
}

double default_sigma(const Resonance& resonance) {
    if (!(resonance.k.real() > 0.0))
        throw NonPositiveFrequency("sigma rule 1/Re k requires Re k > 0, got Re k = " +
                                   std::to_string(resonance.k.real()));
    return 1.0 / resonance.k.real();
}

double ResidueMap::q_at(int iq) const {
    return -kPi + (iq + 0.5) * (2.0 * kPi / n_q);
}

double ResidueMap::p_at(int ip) const {
    return -1.0 + (ip + 0.5) * (2.0 / n_p);
}

ResidueMap residue_map(const CycleExpansion& expansion, const Resonance& resonance, int n_q,
                       int n_p, double sigma, double d_over_r) {
    if (n_q < 1 || n_p < 1)
        throw std::invalid_argument("map grid dimensions must be >= 1");
    if (!(std::isfinite(sigma) && sigma > 0.0))
        throw std::invalid_argument("map width sigma must be positive");

    const std::vector<Complex> coeff = expansion.residue_coefficients(resonance.lambda);
    const std::vector<OrbitRecord>& primes = expansion.primes();

    ResidueMap map;
    map.resonance = resonance;
    map.sigma = sigma;
    map.n_q = n_q;
    map.n_p = n_p;
    map.d_over_r = d_over_r;
    map.rep = expansion.weight_spec().rep;
    map.maslov = expansion.weight_spec().maslov;
    map.order = expansion.order();
    map.values.assign(static_cast<std::size_t>(n_q) * n_p, Complex(0.0, 0.0));

    for (int ip = 0; ip < n_p; ++ip) {
        const double p0 = map.p_at(ip);
        for (int iq = 0; iq < n_q; ++iq) {
            const double q0 = map.q_at(iq);
            Complex value(0.0, 0.0);
            for (std::size_t i = 0; i < primes.size(); ++i) {
                const double a = gaussian_sum(primes[i].section, q0, p0, sigma);
                if (a != 0.0) value += coeff[i] * a;
            }
            map.values[static_cast<std::size_t>(ip) * n_q + iq] = value;
        }
    }
    return map;
}

} // namespace diskzeta
