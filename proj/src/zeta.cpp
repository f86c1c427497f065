#include "diskzeta/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

namespace diskzeta {

namespace {

constexpr double kPi = std::numbers::pi;

double weight_sign(const OrbitRecord& rec, const CycleWeightSpec& spec) {
    double s = 1.0;
    if (spec.maslov && rec.reflections % 2 != 0) s = -s;
    if (spec.rep == Representation::A2 && rec.n0 % 2 != 0) s = -s;
    return s;
}

} // namespace

Complex lambda_to_k(Complex lambda) { return {-lambda.imag(), lambda.real()}; }
Complex k_to_lambda(Complex k) { return {k.imag(), -k.real()}; }

Resonance make_resonance(Complex lambda, double residual, int order, int band) {
    Resonance r;
    r.lambda = lambda;
    r.k = lambda_to_k(lambda);
    r.E = r.k * r.k;
    r.residual = residual;
    r.order = order;
    r.band = band;
    return r;
}

CycleExpansion::CycleExpansion(const std::vector<OrbitRecord>& records, CycleWeightSpec spec,
                               int order)
    : spec_(spec), order_(order) {
    if (order < 1)
        throw std::invalid_argument("expansion order must be >= 1");
    if (spec.band < 0)
        throw std::invalid_argument("band index must be >= 0");

    // Collect the records of symbol length <= order, checking for duplicates
    // and that each word is one of the expected prime canonical words.
    const std::vector<Word> expected = enumerate_words(order);
    std::set<std::string> expected_set;
    for (const Word& w : expected) expected_set.insert(w.str());
    std::set<std::string> seen;
    for (const OrbitRecord& rec : records) {
        if (static_cast<int>(rec.word.size()) > order) continue;
        if (expected_set.find(rec.word) == expected_set.end())
            throw std::invalid_argument("orbit record word \"" + rec.word +
                                        "\" is not a prime canonical word");
        if (!seen.insert(rec.word).second)
            throw std::invalid_argument("duplicate orbit record for word \"" + rec.word + "\"");
        primes_.push_back(rec);
    }
    // Every prime canonical word up to the truncation order must be present.
    for (const Word& w : expected)
        if (seen.find(w.str()) == seen.end())
            throw MissingOrbits("orbit set lacks prime word \"" + w.str() +
                                "\" required at truncation order " + std::to_string(order));
    std::sort(primes_.begin(), primes_.end(), [](const OrbitRecord& a, const OrbitRecord& b) {
        if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
        return a.word < b.word;
    });

    // Depth-first enumeration of subsets of distinct primes with total symbol
    // count <= order. Deterministic: primes in (length, lex) order, the branch
    // including the current prime explored first.
    const int n_primes = static_cast<int>(primes_.size());
    std::vector<int> chosen;
    double len_sum = 0.0, log_stab_sum = 0.0;
    double sign_prod = 1.0;      // product of s_p over the subset
    int stab_sign_prod = 1;      // product of sign(Lambda_p) over the subset
    int symbol_sum = 0;          // total symbol count of the subset
    auto rec_enumerate = [&](auto&& self, int start, int budget) -> void {
        for (int i = start; i < n_primes; ++i) {
            const OrbitRecord& p = primes_[static_cast<std::size_t>(i)];
            const int np = p.reflections;
            if (np > budget) break;  // primes are length-sorted
            chosen.push_back(i);
            len_sum += p.length;
            log_stab_sum += std::log(std::abs(p.stability));
            sign_prod *= weight_sign(p, spec_);
            const int ssign = p.stability < 0 ? -1 : 1;
            stab_sign_prod *= ssign;
            symbol_sum += np;

            const double subset_parity = chosen.size() % 2 == 0 ? 1.0 : -1.0;
            double band_sign = 1.0;
            if (spec_.band % 2 != 0 && stab_sign_prod < 0) band_sign = -1.0;
            lengths_.push_back(len_sum);
            decays_.push_back((spec_.band + 0.5) * log_stab_sum);
            coeffs_.push_back(subset_parity * sign_prod * band_sign);
            orders_.push_back(symbol_sum);
            members_.push_back(chosen);

            self(self, i + 1, budget - np);

            chosen.pop_back();
            len_sum -= p.length;
            log_stab_sum -= std::log(std::abs(p.stability));
            sign_prod *= weight_sign(p, spec_);
            stab_sign_prod *= ssign;
            symbol_sum -= np;
        }
    };
    rec_enumerate(rec_enumerate, 0, order_);
}

Complex CycleExpansion::order_contribution(int n, Complex lambda) const {
    Complex sum(0.0, 0.0);
    const std::size_t m = lengths_.size();
    for (std::size_t j = 0; j < m; ++j)
        if (orders_[j] == n)
            sum += coeffs_[j] * std::exp(-lambda * lengths_[j] - decays_[j]);
    return sum;
}

std::pair<Complex, Complex> CycleExpansion::eval(Complex lambda) const {
    const auto [value, deriv, scale] = eval_scaled(lambda);
    (void)scale;
    return {value, deriv};
}

std::tuple<Complex, Complex, double> CycleExpansion::eval_scaled(Complex lambda) const {
    Complex value(1.0, 0.0);
    Complex deriv(0.0, 0.0);
    double scale = 1.0;
    const std::size_t m = lengths_.size();
    for (std::size_t j = 0; j < m; ++j) {
        const Complex term = coeffs_[j] * std::exp(-lambda * lengths_[j] - decays_[j]);
        value += term;
        deriv -= lengths_[j] * term;
        scale += std::abs(term);
    }
    return {value, deriv, scale};
}

Complex CycleExpansion::weight_derivative(Complex lambda, const std::vector<double>& A) const {
    if (A.size() != primes_.size())
        throw MissingWeight("weight vector has " + std::to_string(A.size()) +
                            " entries but the expansion has " + std::to_string(primes_.size()) +
                            " primes");
    for (double a : A)
        if (!std::isfinite(a))
            throw MissingWeight("weight vector contains a non-finite entry");

    Complex deriv(0.0, 0.0);
    const std::size_t m = lengths_.size();
    for (std::size_t j = 0; j < m; ++j) {
        double a_sum = 0.0;
        for (int idx : members_[j]) a_sum += A[static_cast<std::size_t>(idx)];
        deriv += a_sum * coeffs_[j] * std::exp(-lambda * lengths_[j] - decays_[j]);
    }
    return deriv;
}

std::vector<Complex> CycleExpansion::residue_coefficients(Complex lambda0) const {
    const Complex dz = eval(lambda0).second;
    if (std::abs(dz) <= 1e-12)
        throw NonSimpleZero("d zeta_inv / d lambda vanishes at the requested zero");
    std::vector<Complex> c(primes_.size(), Complex(0.0, 0.0));
    const std::size_t m = lengths_.size();
    for (std::size_t j = 0; j < m; ++j) {
        const Complex term = coeffs_[j] * std::exp(-lambda0 * lengths_[j] - decays_[j]);
        for (int idx : members_[j]) c[static_cast<std::size_t>(idx)] += term;
    }
    for (Complex& v : c) v = -v / dz;
    return c;
}

std::pair<Complex, double> CycleExpansion::polish_zero(Complex lambda0, int max_iter) const {
    // Near the roundoff floor Newton rattles rather than contracts, so keep
    // the best iterate seen (the starting point included): polishing a point
    // that is already below the residual threshold can then never fail.
    Complex lambda = lambda0;
    Complex best_lambda = lambda0;
    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        const auto [z, dz] = eval(lambda);
        if (std::abs(z) < best_res) {
            best_res = std::abs(z);
            best_lambda = lambda;
        }
        if (std::abs(dz) == 0.0) break;
        Complex step = z / dz;
        if (!std::isfinite(std::abs(step))) break;
        // Newton basins here are far smaller than the zero spacing; a huge
        // step means the iterate left the basin, so rein it in.
        if (std::abs(step) > 2.0) step *= 2.0 / std::abs(step);
        lambda -= step;
        if (std::abs(step) < 1e-13 * (1.0 + std::abs(lambda))) break;
    }
    const double res = residual_at(lambda);
    if (res < best_res) {
        best_res = res;
        best_lambda = lambda;
    }
    if (!(best_res < 1e-10)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3g", best_res);
        throw NoConvergence(std::string("zero polish stalled at residual ") + buf);
    }
    return {best_lambda, best_res};
}

double CycleExpansion::residual_at(Complex lambda) const {
    // Absolute residual |zeta_inv(lambda)|. Roundoff floors it at roughly
    // eps * (term magnitude sum), so the fixed 1e-10 acceptance threshold
    // doubles as a trust filter: deep in the strip, where the truncated
    // expansion has not converged, the floor exceeds 1e-10 and the spurious
    // zeros of the truncation are rejected rather than reported.
    return std::abs(eval(lambda).first);
}

std::vector<Resonance> find_resonances(const CycleExpansion& expansion, const KRegion& region,
                                       double seed_density) {
    if (expansion.order() < 4)
        throw std::invalid_argument("resonance search requires expansion order >= 4");
    if (!(std::isfinite(region.re_min) && std::isfinite(region.re_max) &&
          std::isfinite(region.im_min) && std::isfinite(region.im_max)) ||
        region.re_min > region.re_max || region.im_min > region.im_max)
        throw std::invalid_argument("search region must be a finite ordered rectangle");
    if (!(seed_density > 0.0))
        throw std::invalid_argument("seed density must be positive");

    // Expected spacing of zeros along Re k is 2 pi over the mean prime length
    // entering the expansion; seed several Newton starts per spacing.
    double mean_len = 0.0;
    for (const OrbitRecord& p : expansion.primes()) mean_len += p.length;
    mean_len /= static_cast<double>(expansion.primes().size());
    const double step = (2.0 * kPi / mean_len) / seed_density;

    // Seeds stay in the physical half-plane Re k > 0.
    const double re_lo = std::max(region.re_min, 0.5 * step);
    std::vector<Resonance> found;
    if (re_lo <= region.re_max) {
        const int n_re = std::max(2, static_cast<int>(std::ceil((region.re_max - re_lo) / step)) + 1);
        const int n_im = std::max(2, static_cast<int>(std::ceil((region.im_max - region.im_min) / step)) + 1);
        for (int i = 0; i < n_re; ++i) {
            const double re = n_re == 1 ? re_lo
                                        : re_lo + (region.re_max - re_lo) * i / (n_re - 1);
            for (int j = 0; j < n_im; ++j) {
                const double im = n_im == 1 ? region.im_min
                                            : region.im_min + (region.im_max - region.im_min) * j / (n_im - 1);
                Complex lambda = k_to_lambda(Complex(re, im));
                bool converged = false;
                for (int it = 0; it < 50; ++it) {
                    const auto [z, dz] = expansion.eval(lambda);
                    if (std::abs(dz) == 0.0) break;
                    Complex stepc = z / dz;
                    if (!std::isfinite(std::abs(stepc))) break;
                    if (std::abs(stepc) > 2.0) stepc *= 2.0 / std::abs(stepc);
                    lambda -= stepc;
                    if (std::abs(stepc) < 1e-13 * (1.0 + std::abs(lambda))) {
                        converged = true;
                        break;
                    }
                }
                // Seeds that only rattle around the roundoff ball without the
                // step contracting are not converged zeros, even if the final
                // residual happens to dip under the threshold.
                if (!converged) continue;
                const double res = expansion.residual_at(lambda);
                if (!(res < 1e-10)) continue;
                const Complex k = lambda_to_k(lambda);
                const double tol = 1e-9 * (1.0 + std::abs(k));
                if (k.real() <= 0.0) continue;
                if (k.real() < region.re_min - tol || k.real() > region.re_max + tol ||
                    k.imag() < region.im_min - tol || k.imag() > region.im_max + tol)
                    continue;
                found.push_back(make_resonance(lambda, res, expansion.order(),
                                               expansion.weight_spec().band));
            }
        }
    }

    // Deduplicate: sort by (Re k, Im k), then greedily keep zeros further than
    // the dedup radius from every kept one.
    std::sort(found.begin(), found.end(), [](const Resonance& a, const Resonance& b) {
        if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
        return a.k.imag() < b.k.imag();
    });
    std::vector<Resonance> kept;
    for (const Resonance& r : found) {
        const double radius = 1e-8;
        bool duplicate = false;
        for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
            if (r.k.real() - it->k.real() > radius) break;  // sorted by Re k
            if (std::abs(r.k - it->k) <= radius) { duplicate = true; break; }
        }
        if (!duplicate) kept.push_back(r);
    }
    return kept;
}

Complex residue(const CycleExpansion& expansion, Complex lambda0, const std::vector<double>& A) {
    const Complex dz = expansion.eval(lambda0).second;
    if (std::abs(dz) <= 1e-12)
        throw NonSimpleZero("d zeta_inv / d lambda vanishes at the requested zero");
    return -expansion.weight_derivative(lambda0, A) / dz;
}

double band0_validity(const HyperbolicityStats& stats) {
    return stats.h_top - 1.5 * stats.beta_min;
}

Complex partial_sum_zeta(const std::vector<OrbitRecord>& records, Representation rep, bool maslov,
                         Complex lambda, const std::vector<double>& A, double length_max) {
    if (records.empty())
        throw EmptyOrbitSet("partial_sum_zeta requires at least one orbit");
    if (A.size() != records.size())
        throw MissingWeight("weight vector has " + std::to_string(A.size()) +
                            " entries but there are " + std::to_string(records.size()) +
                            " orbit records");
    CycleWeightSpec spec{rep, maslov, 0};
    Complex sum(0.0, 0.0);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const OrbitRecord& p = records[i];
        const double s = weight_sign(p, spec);
        const double w = std::log(std::abs(p.stability));
        const int stab_sign = p.stability < 0 ? -1 : 1;
        for (int r = 1; r * p.length <= length_max; ++r) {
            // |det(1 - P^r)| = |Lambda|^r (1 - Lambda^{-r})^2 with signed Lambda.
            const double lam_inv_r = (stab_sign < 0 && r % 2 != 0 ? -1.0 : 1.0) * std::exp(-r * w);
            const double det_rec = std::exp(-0.5 * r * w) / ((1.0 - lam_inv_r) * (1.0 - lam_inv_r));
            const double sr = r % 2 != 0 ? s : 1.0;
            sum += A[i] * sr * std::exp(-lambda * (r * p.length)) * det_rec;
        }
    }
    return sum;
}

} // namespace diskzeta
