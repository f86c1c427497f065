#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diskzeta/errors.hpp"
#include "diskzeta/geometry.hpp"
#include "diskzeta/orbit.hpp"
#include "diskzeta/words.hpp"

using namespace diskzeta;

namespace {

// ---- independent word oracles (brute force, no shared code with the library)

bool oracle_prime(const std::string& s) {
    const int n = static_cast<int>(s.size());
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool repeats = true;
        for (int i = d; i < n && repeats; ++i) repeats = s[static_cast<std::size_t>(i)] ==
                                                         s[static_cast<std::size_t>(i - d)];
        if (repeats) return false;
    }
    return true;
}

bool oracle_canonical(const std::string& s) {
    std::string rot = s;
    for (std::size_t r = 1; r < s.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < s) return false;
    }
    return true;
}

std::vector<std::string> oracle_lyndon(int max_len) {
    std::vector<std::string> out;
    for (int n = 1; n <= max_len; ++n)
        for (unsigned m = 0; m < (1u << n); ++m) {
            std::string s(static_cast<std::size_t>(n), '0');
            for (int i = 0; i < n; ++i)
                if (m & (1u << i)) s[static_cast<std::size_t>(i)] = '1';
            if (oracle_prime(s) && oracle_canonical(s)) out.push_back(s);
        }
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

int mobius(int n) {
    int result = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
    }
    if (n > 1) result = -result;
    return result;
}

long oracle_lyndon_count(int n) {
    long sum = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) sum += mobius(d) * (1L << (n / d));
    return sum / n;
}

// ---- finite-difference return-map Jacobian (chain rule over single steps)

SectionPoint must_step(const DiskSystem& sys, SectionPoint x) {
    const std::optional<SectionPoint> next = section_map(sys, x);
    REQUIRE(next.has_value());
    return *next;
}

Eigen::Matrix2d fd_step_jacobian(const DiskSystem& sys, SectionPoint x, double h) {
    const SectionPoint qp = must_step(sys, {x.q + h, x.p});
    const SectionPoint qm = must_step(sys, {x.q - h, x.p});
    const SectionPoint pp = must_step(sys, {x.q, x.p + h});
    const SectionPoint pm = must_step(sys, {x.q, x.p - h});
    Eigen::Matrix2d j;
    j << (qp.q - qm.q) / (2 * h), (pp.q - pm.q) / (2 * h),
         (qp.p - qm.p) / (2 * h), (pp.p - pm.p) / (2 * h);
    return j;
}

double expanding_eig_2x2(const Eigen::Matrix2d& m) {
    const double tr = m.trace();
    const double disc = tr * tr - 4.0 * m.determinant();
    REQUIRE(disc > 0.0);
    const double root = (tr > 0 ? 1.0 : -1.0) * std::sqrt(disc);
    return (tr + root) / 2.0;
}

std::vector<OrbitRecord> solve_all(double d_over_r, int max_len) {
    const DiskSystem sys(d_over_r);
    std::vector<OrbitRecord> records;
    for (const Word& w : enumerate_words(max_len)) records.push_back(to_record(find_orbit(sys, w)));
    return records;
}

} // namespace

TEST_CASE("disk system geometry") {
    CHECK_THROWS_AS(DiskSystem(2.0), NonPhysicalGeometry);
    CHECK_THROWS_AS(DiskSystem(1.5), NonPhysicalGeometry);
    CHECK_THROWS_AS(DiskSystem(std::nan("")), NonPhysicalGeometry);

    const DiskSystem sys(6.0);
    CHECK(sys.radius() == 1.0);
    CHECK(sys.separation() == 6.0);
    const double circum = 6.0 / std::sqrt(3.0);
    for (int i = 0; i < 3; ++i) CHECK(sys.center(i).norm() == doctest::Approx(circum).epsilon(1e-14));
    for (int i = 0; i < 3; ++i)
        CHECK((sys.center(i) - sys.center((i + 1) % 3)).norm() ==
              doctest::Approx(6.0).epsilon(1e-14));
    // disk 0 on top, centroid at the origin
    CHECK(sys.center(0)(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sys.center(0)(1) == doctest::Approx(circum).epsilon(1e-14));
    CHECK((sys.center(0) + sys.center(1) + sys.center(2)).norm() < 1e-12);
}

TEST_CASE("C3v elements act as exact symmetries") {
    const DiskSystem sys(6.0);
    const auto& elems = c3v_elements();
    int reflections = 0;
    for (const GroupElement& g : elems) {
        CHECK((g.matrix.transpose() * g.matrix - Eigen::Matrix2d::Identity()).norm() < 1e-14);
        if (g.reflection) ++reflections;
        CHECK(g.reflection == (g.matrix.determinant() < 0));
        for (int i = 0; i < 3; ++i)
            CHECK((g.matrix * sys.center(i) - sys.center(g.perm[static_cast<std::size_t>(i)]))
                      .norm() < 1e-12);
    }
    CHECK(reflections == 3);

    // simply transitive action on ordered pairs
    for (int a0 = 0; a0 < 3; ++a0)
        for (int a1 = 0; a1 < 3; ++a1) {
            if (a0 == a1) continue;
            for (int b0 = 0; b0 < 3; ++b0)
                for (int b1 = 0; b1 < 3; ++b1) {
                    if (b0 == b1) continue;
                    const GroupElement& g = map_pair(a0, a1, b0, b1);
                    CHECK(g.perm[static_cast<std::size_t>(a0)] == b0);
                    CHECK(g.perm[static_cast<std::size_t>(a1)] == b1);
                }
        }
    CHECK(map_pair(0, 1, 0, 1).matrix.isApprox(Eigen::Matrix2d::Identity(), 1e-14));

    CHECK(third_disk(0, 1) == 2);
    CHECK(third_disk(1, 2) == 0);
    CHECK(third_disk(2, 0) == 1);
}

TEST_CASE("angle helpers") {
    const double pi = 3.14159265358979323846;
    CHECK(wrap_angle(0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(wrap_angle(pi) == doctest::Approx(-pi).epsilon(1e-12));
    CHECK(wrap_angle(3 * pi) == doctest::Approx(-pi).epsilon(1e-12));
    CHECK(wrap_angle(-pi) == doctest::Approx(-pi).epsilon(1e-12));
    CHECK(wrap_angle(2 * pi + 0.3) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("word validation and flags match the brute-force oracle") {
    CHECK_THROWS_AS(Word(""), std::invalid_argument);
    CHECK_THROWS_AS(Word("2"), std::invalid_argument);
    CHECK_THROWS_AS(Word("01a"), std::invalid_argument);

    for (int n = 1; n <= 8; ++n)
        for (unsigned m = 0; m < (1u << n); ++m) {
            std::string s(static_cast<std::size_t>(n), '0');
            for (int i = 0; i < n; ++i)
                if (m & (1u << i)) s[static_cast<std::size_t>(i)] = '1';
            const Word w(s);
            CHECK(w.prime() == oracle_prime(s));
            CHECK(w.canonical() == oracle_canonical(s));
            CHECK(w.count0() + w.count1() == n);
            CHECK(w.count0() == static_cast<int>(std::count(s.begin(), s.end(), '0')));
        }
}

TEST_CASE("prime canonical word enumeration equals the Lyndon oracle") {
    const std::vector<std::string> expected = oracle_lyndon(12);
    const std::vector<Word> got = enumerate_words(12);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].str() == expected[i]);

    const int per_length[12] = {2, 1, 2, 3, 6, 9, 18, 30, 56, 99, 186, 335};
    std::vector<int> counts(13, 0);
    for (const Word& w : got) ++counts[static_cast<std::size_t>(w.length())];
    long total = 0;
    for (int n = 1; n <= 12; ++n) {
        CHECK(counts[static_cast<std::size_t>(n)] == per_length[n - 1]);
        CHECK(oracle_lyndon_count(n) == per_length[n - 1]);
        total += per_length[n - 1];
    }
    CHECK(total == 747);
}

TEST_CASE("closed-form orbit data for the two fundamental cycles at d/r = 6") {
    const DiskSystem sys(6.0);

    const PeriodicOrbit o0 = find_orbit(sys, Word("0"));
    CHECK(std::abs(o0.length - 4.0) <= 1e-10 * 4.0);
    const double lam0 = 5.0 + 2.0 * std::sqrt(6.0);
    CHECK(std::abs(o0.stability - lam0) <= 1e-10 * lam0);
    // bounce at the base point, perpendicular launch: free flight 4 then a
    // head-on curvature kick 2/(r cos 0) = 2
    Eigen::Matrix2d m_expected;
    m_expected << 1, 4, 2, 9;
    CHECK((o0.monodromy - m_expected).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(o0.section.size() == 1);
    CHECK(std::abs(o0.section[0].q) < 1e-10);
    CHECK(std::abs(o0.section[0].p) < 1e-10);

    const PeriodicOrbit o1 = find_orbit(sys, Word("1"));
    const double len1 = 6.0 - std::sqrt(3.0);
    CHECK(std::abs(o1.length - len1) <= 1e-10 * len1);
    // trace of the reduced triangle-cycle monodromy is 2 - 8 sqrt(3); the
    // expanding root is 1 - 4 sqrt(3) - 2 sqrt(12 - 2 sqrt(3))
    const double lam1 = 1.0 - 4.0 * std::sqrt(3.0) - 2.0 * std::sqrt(12.0 - 2.0 * std::sqrt(3.0));
    CHECK(std::abs(o1.stability - lam1) <= 1e-10 * std::abs(lam1));
    CHECK(std::abs(lam1 - (-11.7714551963856)) < 1e-9);
}

TEST_CASE("solver determinism: identical bits on repeated solves") {
    const DiskSystem sys(6.0);
    for (const char* s : {"0", "1", "01", "0011", "00101"}) {
        const PeriodicOrbit a = find_orbit(sys, Word(s));
        const PeriodicOrbit b = find_orbit(sys, Word(s));
        CHECK(a.length == b.length);
        CHECK(a.stability == b.stability);
        REQUIRE(a.section.size() == b.section.size());
        for (std::size_t i = 0; i < a.section.size(); ++i) {
            CHECK(a.section[i].q == b.section[i].q);
            CHECK(a.section[i].p == b.section[i].p);
        }
    }
}

TEST_CASE("records mirror their orbits") {
    const DiskSystem sys(6.0);
    for (const char* s : {"0", "1", "001", "0111"}) {
        const PeriodicOrbit o = find_orbit(sys, Word(s));
        const OrbitRecord r = to_record(o);
        CHECK(r.word == s);
        CHECK(r.length == o.length);
        CHECK(r.stability == o.stability);
        CHECK(r.reflections == static_cast<int>(std::string(s).size()));
        CHECK(r.n0 == static_cast<int>(std::count(r.word.begin(), r.word.end(), '0')));
        CHECK(r.n1 == r.reflections - r.n0);
        CHECK(r.section.size() == static_cast<std::size_t>(r.reflections));
        CHECK(r.residual < 1e-12);
    }
}

TEST_CASE("section map follows the orbit and every bounce stays admissible") {
    const DiskSystem sys(6.0);
    for (const Word& w : enumerate_words(5)) {
        const PeriodicOrbit o = find_orbit(sys, w);
        const int n = o.reflections;
        const double pi = 3.14159265358979323846;
        for (int i = 0; i < n; ++i) {
            const SectionPoint& x = o.section[static_cast<std::size_t>(i)];
            CHECK(std::abs(x.p) < 1.0);
            CHECK(x.q >= -pi);
            CHECK(x.q < pi);
            const SectionPoint y = must_step(sys, x);
            const SectionPoint& expect = o.section[static_cast<std::size_t>((i + 1) % n)];
            CHECK(std::abs(y.q - expect.q) < 1e-8);
            CHECK(std::abs(y.p - expect.p) < 1e-8);
        }
    }
    // a launch from the far side of the reference disk escapes to infinity
    CHECK_FALSE(section_map(sys, SectionPoint{3.0, 0.0}).has_value());
}

TEST_CASE("monodromy eigenvalue matches the finite-difference return-map Jacobian (words <= 4)") {
    const DiskSystem sys(6.0);
    const double h = 1e-6;
    for (const Word& w : enumerate_words(4)) {
        const PeriodicOrbit o = find_orbit(sys, w);
        Eigen::Matrix2d j = Eigen::Matrix2d::Identity();
        for (int i = 0; i < o.reflections; ++i)
            j = fd_step_jacobian(sys, o.section[static_cast<std::size_t>(i)], h) * j;
        CHECK(std::abs(j.determinant() - 1.0) < 1e-6);  // FD symplecticity sanity
        const double eig = expanding_eig_2x2(j);
        CHECK(std::abs(eig - o.stability) <= 1e-5 * std::abs(o.stability));
    }
}

TEST_CASE("symplecticity through the factored determinant, d/r in {3, 6}, words <= 12") {
    for (const double ratio : {3.0, 6.0}) {
        const DiskSystem sys(ratio);
        double worst = 0.0;
        for (const Word& w : enumerate_words(12)) {
            const PeriodicOrbit o = find_orbit(sys, w);
            worst = std::max(worst, std::abs(monodromy_determinant(sys, o) - 1.0));
            CHECK(std::abs(o.stability) > 1.0);
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("hyperbolicity statistics and the pinching spread") {
    CHECK_THROWS_AS(hyperbolicity_stats({}), EmptyOrbitSet);

    const std::vector<OrbitRecord> r6 = solve_all(6.0, 12);
    const HyperbolicityStats s6 = hyperbolicity_stats(r6);
    CHECK(s6.n_primes == 747);

    // independent re-derivation straight from the documented definitions
    double max_len = 0.0, min_ratio = 1e300, max_ratio = 0.0, sum_ratio = 0.0;
    for (const OrbitRecord& r : r6) {
        max_len = std::max(max_len, r.length);
        const double ratio = std::log(std::abs(r.stability)) / r.length;
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
        sum_ratio += ratio;
    }
    long closed = 0;
    for (const OrbitRecord& r : r6)
        for (int rep = 1; rep * r.length < max_len; ++rep) ++closed;
    const double mean_ratio = sum_ratio / static_cast<double>(r6.size());
    CHECK(s6.max_length == doctest::Approx(max_len).epsilon(1e-15));
    CHECK(s6.beta_min == doctest::Approx(min_ratio).epsilon(1e-13));
    CHECK(s6.mean_ratio == doctest::Approx(mean_ratio).epsilon(1e-13));
    CHECK(s6.h_top ==
          doctest::Approx(std::log(static_cast<double>(closed)) / max_len).epsilon(1e-13));
    CHECK(s6.spread ==
          doctest::Approx((max_ratio - min_ratio) / mean_ratio).epsilon(1e-13));

    // pinching: ~1% peak to peak at d/r = 6, ~7% at d/r = 3
    CHECK(s6.spread >= 0.005);
    CHECK(s6.spread <= 0.015);
    const HyperbolicityStats s3 = hyperbolicity_stats(solve_all(3.0, 12));
    CHECK(s3.spread >= 0.05);
    CHECK(s3.spread <= 0.09);
}
