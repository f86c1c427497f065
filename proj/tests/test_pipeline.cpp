#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diskzeta/config.hpp"
#include "diskzeta/errors.hpp"
#include "diskzeta/pipeline.hpp"
#include "diskzeta/spectra_io.hpp"
#include "diskzeta/zeta.hpp"

using namespace diskzeta;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("diskzeta_pipe_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

// small, fast configuration used by the command tests
RunConfig small_config(const fs::path& base) {
    RunConfig cfg;
    cfg.max_len = 4;
    cfg.bands = 2;
    cfg.region = KRegion{100.0, 115.0, -0.8, 0.0};
    cfg.n_q = 24;
    cfg.n_p = 12;
    cfg.sigma_auto = false;
    cfg.sigma = 0.05;
    cfg.out_dir = (base / "out").string();
    cfg.cache_dir = (base / "cache").string();
    return cfg;
}

} // namespace

TEST_CASE("config validation rejects each bad field") {
    const RunConfig good;
    good.validate();  // defaults are valid

    auto expect_bad = [](auto&& mutate) {
        RunConfig cfg;
        mutate(cfg);
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    };
    expect_bad([](RunConfig& c) { c.d_over_r = 2.0; });
    expect_bad([](RunConfig& c) { c.d_over_r = std::nan(""); });
    expect_bad([](RunConfig& c) { c.max_len = 0; });
    expect_bad([](RunConfig& c) { c.bands = 0; });
    expect_bad([](RunConfig& c) { c.region = KRegion{5.0, 1.0, -1.0, 0.0}; });
    expect_bad([](RunConfig& c) { c.region = KRegion{1.0, 5.0, 0.0, 0.0}; });
    expect_bad([](RunConfig& c) { c.seed_density = 0.0; });
    expect_bad([](RunConfig& c) { c.n_q = 0; });
    expect_bad([](RunConfig& c) { c.n_p = -3; });
    expect_bad([](RunConfig& c) {
        c.sigma_auto = false;
        c.sigma = 0.0;
    });
    expect_bad([](RunConfig& c) { c.match_radius = 0.0; });
    expect_bad([](RunConfig& c) { c.out_dir.clear(); });
    expect_bad([](RunConfig& c) { c.cache_dir.clear(); });
}

TEST_CASE("parse helpers") {
    CHECK(parse_representation("A1") == Representation::A1);
    CHECK(parse_representation("a2") == Representation::A2);
    CHECK_THROWS_AS(parse_representation("B1"), ConfigError);

    CHECK(parse_on_off("on"));
    CHECK(parse_on_off("true"));
    CHECK(parse_on_off("1"));
    CHECK_FALSE(parse_on_off("off"));
    CHECK_FALSE(parse_on_off("false"));
    CHECK_FALSE(parse_on_off("0"));
    CHECK_THROWS_AS(parse_on_off("yes"), ConfigError);

    const KRegion r = parse_region("100, 200, -1, 0");
    CHECK(r.re_min == 100.0);
    CHECK(r.re_max == 200.0);
    CHECK(r.im_min == -1.0);
    CHECK(r.im_max == 0.0);
    CHECK_THROWS_AS(parse_region("1,2,3"), ConfigError);
    CHECK_THROWS_AS(parse_region("1,2,3,x"), ConfigError);

    int nq = 0, np = 0;
    parse_grid("400x200", nq, np);
    CHECK(nq == 400);
    CHECK(np == 200);
    parse_grid("7X3", nq, np);
    CHECK(nq == 7);
    CHECK(np == 3);
    CHECK_THROWS_AS(parse_grid("400", nq, np), ConfigError);
    CHECK_THROWS_AS(parse_grid("x200", nq, np), ConfigError);
    CHECK_THROWS_AS(parse_grid("400x", nq, np), ConfigError);

    bool auto_sigma = false;
    double sigma = -1.0;
    parse_sigma("auto", auto_sigma, sigma);
    CHECK(auto_sigma);
    parse_sigma("0.02", auto_sigma, sigma);
    CHECK_FALSE(auto_sigma);
    CHECK(sigma == 0.02);
    CHECK_THROWS_AS(parse_sigma("wide", auto_sigma, sigma), ConfigError);
}

TEST_CASE("config file application") {
    const fs::path dir = fresh_dir("cfgfile");
    spit(dir / "run.cfg",
         "# full configuration\n"
         "d_over_r = 3.5\n"
         "rep = A1\n"
         "maslov = off\n"
         "max_len = 6     # inline comment\n"
         "bands = 3\n"
         "region = 50, 80, -0.5, -0.1\n"
         "seed_density = 2.5\n"
         "grid = 32x16\n"
         "sigma = 0.125\n"
         "out_dir = results\n"
         "cache_dir = store\n"
         "pgm = on\n"
         "match_radius = 0.02\n");
    RunConfig cfg;
    apply_config_file(cfg, (dir / "run.cfg").string());
    CHECK(cfg.d_over_r == 3.5);
    CHECK(cfg.rep == Representation::A1);
    CHECK_FALSE(cfg.maslov);
    CHECK(cfg.max_len == 6);
    CHECK(cfg.bands == 3);
    CHECK(cfg.region.re_min == 50.0);
    CHECK(cfg.region.re_max == 80.0);
    CHECK(cfg.region.im_min == -0.5);
    CHECK(cfg.region.im_max == -0.1);
    CHECK(cfg.seed_density == 2.5);
    CHECK(cfg.n_q == 32);
    CHECK(cfg.n_p == 16);
    CHECK_FALSE(cfg.sigma_auto);
    CHECK(cfg.sigma == 0.125);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.cache_dir == "store");
    CHECK(cfg.write_pgm);
    CHECK(cfg.match_radius == 0.02);
    cfg.validate();

    spit(dir / "unknown.cfg", "colour = blue\n");
    RunConfig c2;
    CHECK_THROWS_AS(apply_config_file(c2, (dir / "unknown.cfg").string()), ConfigError);

    spit(dir / "syntax.cfg", "max_len = 4\nthis line has no equals sign\n");
    RunConfig c3;
    try {
        apply_config_file(c3, (dir / "syntax.cfg").string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    RunConfig c4;
    CHECK_THROWS_AS(apply_config_file(c4, (dir / "absent.cfg").string()), MissingFile);
}

TEST_CASE("artifact naming") {
    RunConfig cfg;
    cfg.max_len = 4;
    CHECK(resonance_csv_name(cfg) == "resonances_dR6_N4_A2.csv");
    cfg.maslov = false;
    CHECK(resonance_csv_name(cfg) == "resonances_dR6_N4_A2_nomaslov.csv");
    cfg.maslov = true;
    cfg.rep = Representation::A1;
    CHECK(resonance_csv_name(cfg) == "resonances_dR6_N4_A1.csv");
    cfg.rep = Representation::A2;
    CHECK(map_csv_name(cfg, Complex(105.5, -0.25)) == "map_dR6_N4_A2_k105.5-0.25i.csv");
    CHECK(map_csv_name(cfg, Complex(99.0, 0.125)) == "map_dR6_N4_A2_k99+0.125i.csv");
}

TEST_CASE("orbit database command: build once, then serve from cache") {
    const fs::path base = fresh_dir("orbits");
    const RunConfig cfg = small_config(base);

    std::ostringstream log1;
    const OrbitsResult first = cmd_orbits(cfg, log1);
    CHECK_FALSE(first.from_cache);
    CHECK(fs::exists(first.db_path));
    CHECK(first.stats.n_primes == 8);  // 2+1+2+3 primes up to length 4
    CHECK(!log1.str().empty());
    const std::string db_bytes = slurp(first.db_path);

    std::ostringstream log2;
    const OrbitsResult second = cmd_orbits(cfg, log2);
    CHECK(second.from_cache);
    CHECK(second.db_path == first.db_path);
    CHECK(second.stats.h_top == first.stats.h_top);
    CHECK(second.stats.beta_min == first.stats.beta_min);
    CHECK(second.stats.mean_ratio == first.stats.mean_ratio);
    CHECK(second.stats.spread == first.stats.spread);
    CHECK(second.stats.max_length == first.stats.max_length);
    CHECK(slurp(first.db_path) == db_bytes);

    // records come back sorted by (length, word)
    const std::vector<OrbitRecord> recs = ensure_orbit_db(cfg, log2);
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const bool ordered =
            recs[i - 1].word.size() < recs[i].word.size() ||
            (recs[i - 1].word.size() == recs[i].word.size() && recs[i - 1].word < recs[i].word);
        CHECK(ordered);
    }

    // a damaged cache file is rebuilt, not trusted
    spit(first.db_path, "garbage\n");
    std::ostringstream log3;
    const OrbitsResult third = cmd_orbits(cfg, log3);
    CHECK_FALSE(third.from_cache);
    CHECK(log3.str().find("rebuilding") != std::string::npos);
    CHECK(slurp(first.db_path) == db_bytes);
}

TEST_CASE("resonance command: determinism and cache-independence") {
    const fs::path base = fresh_dir("resonances");
    const RunConfig cfg = small_config(base);

    std::ostringstream log;
    const ResonancesResult first = cmd_resonances(cfg, log);
    CHECK(fs::exists(first.csv_path));
    REQUIRE(!first.rows.empty());
    const std::string csv_bytes = slurp(first.csv_path);

    // rows sorted by (Re k, Im k, band); bands within range; flags consistent
    const HyperbolicityStats stats = hyperbolicity_stats(ensure_orbit_db(cfg, log));
    const double edge = band0_validity(stats);
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        const ResonanceRow& r = first.rows[i];
        CHECK(r.resonance.order == cfg.max_len);
        CHECK(r.resonance.band >= 0);
        CHECK(r.resonance.band < cfg.bands);
        CHECK(r.resonance.residual < 1e-10);
        CHECK(r.reliable == (r.resonance.band == 0 && r.resonance.lambda.real() >= edge));
        if (i > 0) {
            const Resonance& a = first.rows[i - 1].resonance;
            const Resonance& b = r.resonance;
            const bool ordered =
                a.k.real() < b.k.real() ||
                (a.k.real() == b.k.real() &&
                 (a.k.imag() < b.k.imag() ||
                  (a.k.imag() == b.k.imag() && a.band < b.band)));
            CHECK(ordered);
        }
    }
    // both bands are represented at this order
    bool has_b0 = false, has_b1 = false;
    for (const ResonanceRow& r : first.rows) {
        has_b0 |= r.resonance.band == 0;
        has_b1 |= r.resonance.band == 1;
    }
    CHECK(has_b0);
    CHECK(has_b1);

    // rerun: byte-identical CSV
    std::ostringstream log2;
    const ResonancesResult second = cmd_resonances(cfg, log2);
    CHECK(slurp(second.csv_path) == csv_bytes);

    // wipe cache and outputs, rebuild everything: still byte-identical
    fs::remove_all(cfg.cache_dir);
    fs::remove_all(cfg.out_dir);
    std::ostringstream log3;
    const ResonancesResult third = cmd_resonances(cfg, log3);
    CHECK(slurp(third.csv_path) == csv_bytes);

    // the CSV holds the same rows (up to %.12g rounding)
    const std::vector<ResonanceRow> loaded = load_resonances(first.csv_path);
    REQUIRE(loaded.size() == first.rows.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(std::abs(loaded[i].resonance.k - first.rows[i].resonance.k) <=
              1e-10 * (1.0 + std::abs(first.rows[i].resonance.k)));
        CHECK(loaded[i].reliable == first.rows[i].reliable);
        CHECK(loaded[i].resonance.band == first.rows[i].resonance.band);
    }
}

TEST_CASE("residue-map command: selection, metadata, reruns, on-demand build") {
    const fs::path base = fresh_dir("mapcmd");
    const RunConfig cfg = small_config(base);

    // pick a band-0 row to target (build the table in passing)
    std::ostringstream log;
    const ResonancesResult res = cmd_resonances(cfg, log);
    const ResonanceRow* pick = nullptr;
    for (const ResonanceRow& r : res.rows)
        if (r.resonance.band == 0) {
            pick = &r;
            break;
        }
    REQUIRE(pick != nullptr);

    const MapResult mr = cmd_residue_map(cfg, pick->resonance.k, log);
    CHECK(fs::exists(mr.files.csv));
    CHECK(fs::exists(mr.files.sidecar));
    CHECK(mr.files.pgm.empty());  // cfg.write_pgm is off
    CHECK(mr.map.n_q == cfg.n_q);
    CHECK(mr.map.n_p == cfg.n_p);
    CHECK(mr.map.sigma == cfg.sigma);
    CHECK(mr.map.d_over_r == cfg.d_over_r);
    CHECK(mr.map.order == cfg.max_len);
    CHECK(std::abs(mr.map.resonance.k - pick->resonance.k) <=
          1e-8 * (1.0 + std::abs(pick->resonance.k)));

    const ResidueMap from_disk = load_map(mr.files.csv);
    CHECK(from_disk.n_q == cfg.n_q);
    CHECK(from_disk.n_p == cfg.n_p);
    for (std::size_t i = 0; i < from_disk.values.size(); ++i)
        CHECK(std::abs(from_disk.values[i] - mr.map.values[i]) <=
              1e-11 * (1.0 + std::abs(mr.map.values[i])));

    // rerun is byte-identical
    const std::string csv_bytes = slurp(mr.files.csv);
    const std::string side_bytes = slurp(mr.files.sidecar);
    std::ostringstream log2;
    const MapResult mr2 = cmd_residue_map(cfg, pick->resonance.k, log2);
    CHECK(slurp(mr2.files.csv) == csv_bytes);
    CHECK(slurp(mr2.files.sidecar) == side_bytes);

    // selector far from every row
    CHECK_THROWS_AS(cmd_residue_map(cfg, Complex(500.0, -0.1), log2), UnknownResonance);

    // on-demand: with no table on disk the command builds it first
    fs::remove_all(cfg.out_dir);
    std::ostringstream log3;
    const MapResult mr3 = cmd_residue_map(cfg, pick->resonance.k, log3);
    CHECK(fs::exists((fs::path(cfg.out_dir) / resonance_csv_name(cfg))));
    CHECK(slurp(mr3.files.csv) == csv_bytes);

    // with the sigma = 1/Re(k) rule the map records that width
    RunConfig auto_cfg = cfg;
    auto_cfg.sigma_auto = true;
    auto_cfg.sigma = 0.0;
    std::ostringstream log4;
    const MapResult mr4 = cmd_residue_map(auto_cfg, pick->resonance.k, log4);
    CHECK(mr4.map.sigma == doctest::Approx(1.0 / mr4.map.resonance.k.real()).epsilon(1e-12));

    // PGM on demand
    RunConfig pgm_cfg = cfg;
    pgm_cfg.write_pgm = true;
    std::ostringstream log5;
    const MapResult mr5 = cmd_residue_map(pgm_cfg, pick->resonance.k, log5);
    CHECK(!mr5.files.pgm.empty());
    CHECK(fs::exists(mr5.files.pgm));
}

TEST_CASE("compare command: self-match and empty input") {
    const fs::path base = fresh_dir("compare");
    const RunConfig cfg = small_config(base);

    std::ostringstream log;
    const ResonancesResult res = cmd_resonances(cfg, log);
    const std::vector<ResonanceRow> stored = load_resonances(res.csv_path);
    std::size_t n_reliable = 0;

    // a quantum CSV listing exactly the stored reliable k values
    std::ostringstream qcsv;
    qcsv << "re_k,im_k\n";
    for (const ResonanceRow& r : stored)
        if (r.reliable) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", r.resonance.k.real(),
                          r.resonance.k.imag());
            qcsv << buf;
            ++n_reliable;
        }
    REQUIRE(n_reliable > 0);
    const fs::path qpath = base / "quantum_self.csv";
    spit(qpath, qcsv.str());

    const CompareResult cr = cmd_compare(cfg, qpath.string(), log);
    CHECK(fs::exists(cr.report_path));
    CHECK(cr.report.pairs.size() == n_reliable);
    CHECK(cr.report.unmatched_classical.empty());
    CHECK(cr.report.unmatched_quantum.empty());
    CHECK(cr.report.n_classical == n_reliable);
    CHECK(cr.report.n_quantum == n_reliable);
    CHECK(cr.report.max_distance == 0.0);
    CHECK(cr.report.mean_distance == 0.0);
    const ComparisonReport reread = load_comparison(cr.report_path);
    CHECK(reread.pairs.size() == cr.report.pairs.size());

    // empty quantum list: nothing matches, everything classical is unmatched
    const fs::path epath = base / "quantum_empty.csv";
    spit(epath, "re_k,im_k\n");
    const CompareResult ce = cmd_compare(cfg, epath.string(), log);
    CHECK(ce.report.pairs.empty());
    CHECK(ce.report.n_quantum == 0);
    CHECK(ce.report.unmatched_classical.size() == n_reliable);
    CHECK(ce.report_path != cr.report_path);  // named after the input stem
}
