#include "diskzeta/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <utility>

#include "diskzeta/errors.hpp"
#include "diskzeta/geometry.hpp"
#include "diskzeta/ruelle_map.hpp"
#include "diskzeta/words.hpp"

namespace diskzeta {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string rep_tag(const RunConfig& cfg) {
    std::string tag = cfg.rep == Representation::A1 ? "A1" : "A2";
    if (!cfg.maslov) tag += "_nomaslov";
    return tag;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::vector<OrbitRecord> build_orbit_db(const RunConfig& cfg, std::ostream& log) {
    const DiskSystem system(cfg.d_over_r);
    const std::vector<Word> words = enumerate_words(cfg.max_len);
    std::vector<OrbitRecord> records;
    records.reserve(words.size());
    for (const Word& w : words) records.push_back(to_record(find_orbit(system, w)));
    log << "solved " << records.size() << " prime orbits at d/r = " << fmt(cfg.d_over_r)
        << ", N = " << cfg.max_len << "\n";
    return records;
}

} // namespace

std::string resonance_csv_name(const RunConfig& cfg) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "resonances_dR%g_N%d_%s.csv", cfg.d_over_r, cfg.max_len,
                  rep_tag(cfg).c_str());
    return buf;
}

std::string map_csv_name(const RunConfig& cfg, Complex k_selector) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "map_dR%g_N%d_%s_k%.12g%+.12gi.csv", cfg.d_over_r, cfg.max_len,
                  rep_tag(cfg).c_str(), k_selector.real(), k_selector.imag());
    return buf;
}

std::vector<OrbitRecord> ensure_orbit_db(const RunConfig& cfg, std::ostream& log,
                                         std::string* db_path, bool* from_cache) {
    cfg.validate();
    ensure_dir(cfg.cache_dir);
    const std::string path =
        (fs::path(cfg.cache_dir) / orbit_db_filename(cfg.d_over_r, cfg.max_len)).string();
    if (db_path) *db_path = path;
    if (from_cache) *from_cache = false;

    if (fs::exists(path)) {
        try {
            std::vector<OrbitRecord> records = load_orbit_db(path, cfg.d_over_r, cfg.max_len);
            log << "loaded " << records.size() << " prime orbits from cache " << path << "\n";
            if (from_cache) *from_cache = true;
            return records;
        } catch (const Error& e) {
            log << "cached orbit database is unusable (" << e.what() << "); rebuilding\n";
        }
    }
    std::vector<OrbitRecord> records = build_orbit_db(cfg, log);
    save_orbit_db(path, cfg.d_over_r, cfg.max_len, records);
    log << "wrote " << path << "\n";
    return records;
}

OrbitsResult cmd_orbits(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    OrbitsResult result;
    const std::vector<OrbitRecord> records =
        ensure_orbit_db(cfg, log, &result.db_path, &result.from_cache);
    result.stats = hyperbolicity_stats(records);
    log << "primes: " << result.stats.n_primes << "\n"
        << "beta_min (min log|Lambda|/L): " << fmt(result.stats.beta_min) << "\n"
        << "h_top estimate: " << fmt(result.stats.h_top) << "\n"
        << "pinching spread (peak-to-peak / mean): " << fmt(100.0 * result.stats.spread) << "%\n";
    return result;
}

ResonancesResult cmd_resonances(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    ensure_dir(cfg.out_dir);
    const std::vector<OrbitRecord> records = ensure_orbit_db(cfg, log);
    const HyperbolicityStats stats = hyperbolicity_stats(records);
    const double lambda_floor = band0_validity(stats);

    ResonancesResult result;
    for (int band = 0; band < cfg.bands; ++band) {
        const CycleExpansion expansion(records, CycleWeightSpec{cfg.rep, cfg.maslov, band},
                                       cfg.max_len);
        const std::vector<Resonance> zeros =
            find_resonances(expansion, cfg.region, cfg.seed_density);
        std::size_t n_reliable = 0;
        for (const Resonance& z : zeros) {
            const bool reliable = band == 0 && z.lambda.real() >= lambda_floor;
            n_reliable += reliable ? 1 : 0;
            result.rows.push_back({z, reliable});
        }
        log << "band " << band << ": " << zeros.size() << " zeros (" << n_reliable
            << " reliable)\n";
    }
    std::sort(result.rows.begin(), result.rows.end(),
              [](const ResonanceRow& a, const ResonanceRow& b) {
                  if (a.resonance.k.real() != b.resonance.k.real())
                      return a.resonance.k.real() < b.resonance.k.real();
                  if (a.resonance.k.imag() != b.resonance.k.imag())
                      return a.resonance.k.imag() < b.resonance.k.imag();
                  return a.resonance.band < b.resonance.band;
              });

    result.csv_path = (fs::path(cfg.out_dir) / resonance_csv_name(cfg)).string();
    save_resonances(result.csv_path, result.rows);
    log << "wrote " << result.csv_path << " (" << result.rows.size() << " rows)\n";
    return result;
}

namespace {

std::vector<ResonanceRow> resonance_rows_on_demand(const RunConfig& cfg, std::ostream& log,
                                                   std::string* csv_path) {
    const std::string path = (fs::path(cfg.out_dir) / resonance_csv_name(cfg)).string();
    if (csv_path) *csv_path = path;
    if (fs::exists(path)) {
        std::vector<ResonanceRow> rows = load_resonances(path);
        log << "loaded " << rows.size() << " resonances from " << path << "\n";
        return rows;
    }
    log << "resonance table " << path << " not found; computing it\n";
    cmd_resonances(cfg, log);
    // Reload what was just written: downstream consumers always see the
    // table's stored (text-rounded) values, so the artifacts they produce do
    // not depend on whether the table pre-existed.
    return load_resonances(path);
}

} // namespace

MapResult cmd_residue_map(const RunConfig& cfg, Complex k_selector, std::ostream& log) {
    cfg.validate();
    ensure_dir(cfg.out_dir);
    const std::vector<ResonanceRow> rows = resonance_rows_on_demand(cfg, log, nullptr);
    if (rows.empty())
        throw UnknownResonance("the resonance table is empty; nothing to select from");

    std::size_t best = 0;
    double best_dist = std::abs(rows[0].resonance.k - k_selector);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double d = std::abs(rows[i].resonance.k - k_selector);
        if (d < best_dist) {
            best = i;
            best_dist = d;
        }
    }
    const double tol = 1e-6 * (1.0 + std::abs(k_selector));
    if (best_dist > tol) {
        const Complex nk = rows[best].resonance.k;
        throw UnknownResonance("no resonance within " + fmt(tol) + " of k = " +
                               fmt(k_selector.real()) + " + " + fmt(k_selector.imag()) +
                               "i; nearest is k = " + fmt(nk.real()) + " + " + fmt(nk.imag()) +
                               "i at distance " + fmt(best_dist));
    }
    const ResonanceRow& row = rows[best];
    log << "selected resonance k = " << fmt(row.resonance.k.real()) << " + "
        << fmt(row.resonance.k.imag()) << "i (band " << row.resonance.band << ")\n";

    const std::vector<OrbitRecord> records = ensure_orbit_db(cfg, log);
    const CycleExpansion expansion(
        records, CycleWeightSpec{cfg.rep, cfg.maslov, row.resonance.band}, cfg.max_len);
    const auto [lambda, residual] = expansion.polish_zero(row.resonance.lambda);
    const Resonance resonance =
        make_resonance(lambda, residual, cfg.max_len, row.resonance.band);

    const double sigma = cfg.sigma_auto ? default_sigma(resonance) : cfg.sigma;
    log << "sigma = " << fmt(sigma) << (cfg.sigma_auto ? " (1/Re k rule)" : " (fixed)") << "\n";

    MapResult result;
    result.map = residue_map(expansion, resonance, cfg.n_q, cfg.n_p, sigma, cfg.d_over_r);
    const std::string csv =
        (fs::path(cfg.out_dir) / map_csv_name(cfg, k_selector)).string();
    result.files = save_map(csv, result.map, cfg.write_pgm);
    log << "wrote " << result.files.csv << " and " << result.files.sidecar;
    if (!result.files.pgm.empty()) log << " and " << result.files.pgm;
    log << "\n";
    return result;
}

CompareResult cmd_compare(const RunConfig& cfg, const std::string& quantum_csv_path,
                          std::ostream& log) {
    cfg.validate();
    ensure_dir(cfg.out_dir);
    const std::vector<ResonanceRow> rows = resonance_rows_on_demand(cfg, log, nullptr);
    std::vector<Complex> classical;
    for (const ResonanceRow& row : rows)
        if (row.reliable) classical.push_back(row.resonance.k);

    const std::vector<QuantumRecord> quantum = load_quantum_csv(quantum_csv_path);
    log << "matching " << classical.size() << " reliable classical resonances against "
        << quantum.size() << " quantum records (radius " << fmt(cfg.match_radius) << ")\n";

    CompareResult result;
    result.report = match_spectra(std::move(classical), quantum, cfg.match_radius);

    const std::string stem = fs::path(quantum_csv_path).stem().string();
    result.report_path =
        (fs::path(cfg.out_dir) / ("comparison_" + stem + ".json")).string();
    save_comparison(result.report_path, result.report);
    log << "matched " << result.report.pairs.size() << " pairs; " << "max distance "
        << fmt(result.report.max_distance) << ", mean " << fmt(result.report.mean_distance)
        << "; unmatched classical " << result.report.unmatched_classical.size() << ", quantum "
        << result.report.unmatched_quantum.size() << "\n"
        << "wrote " << result.report_path << "\n";
    return result;
}

} // namespace diskzeta
