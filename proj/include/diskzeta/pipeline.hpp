#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "diskzeta/config.hpp"
#include "diskzeta/spectra_io.hpp"

namespace diskzeta {

/// Canonical artifact names inside cfg.out_dir. All parts of a run agree on
/// these, so the residue-map and compare commands can find the resonance
/// table the resonance command wrote.
std::string resonance_csv_name(const RunConfig& cfg);
std::string map_csv_name(const RunConfig& cfg, Complex k_selector);

/// Load the orbit database for (cfg.d_over_r, cfg.max_len) from the cache,
/// or solve all prime orbits and write it. A cache file that fails to load
/// cleanly (wrong schema, parse damage) is rebuilt from scratch. The records
/// come back sorted by (length, word), the order enumerate_words produces.
/// `from_cache`, when given, reports whether the cached file actually served
/// the request (false on a fresh build and on a rebuild after damage).
std::vector<OrbitRecord> ensure_orbit_db(const RunConfig& cfg, std::ostream& log,
                                         std::string* db_path = nullptr,
                                         bool* from_cache = nullptr);

struct OrbitsResult {
    std::string db_path;
    HyperbolicityStats stats;
    bool from_cache = false;
};

/// `orbits`: build/refresh the cached orbit database and print the summary
/// (prime count, beta_min, h_top, pinching spread).
OrbitsResult cmd_orbits(const RunConfig& cfg, std::ostream& log);

struct ResonancesResult {
    std::string csv_path;
    std::vector<ResonanceRow> rows;  ///< sorted by (Re k, Im k, band)
};

/// `resonances`: search the configured k rectangle for zeros of the band-b
/// expansions, b = 0 .. cfg.bands-1, flag band-0 zeros inside the validity
/// strip as reliable, and write the CSV.
ResonancesResult cmd_resonances(const RunConfig& cfg, std::ostream& log);

struct MapResult {
    MapFiles files;
    ResidueMap map;
};

/// `residue-map`: pick the resonance nearest to k_selector from the resonance
/// CSV (|k - selector| <= 1e-6 (1 + |selector|), else UnknownResonance),
/// re-polish its lambda against the freshly built expansion, resolve sigma by
/// the configured rule, sample the map, and write CSV + sidecar (+ PGM).
/// Builds the resonance table (and the orbit database) on demand.
MapResult cmd_residue_map(const RunConfig& cfg, Complex k_selector, std::ostream& log);

struct CompareResult {
    std::string report_path;
    ComparisonReport report;
};

/// `compare`: match the reliable classical resonances against an external
/// quantum CSV and write the JSON report. Builds the resonance table on
/// demand. Reporting only: match quality never fails the command.
CompareResult cmd_compare(const RunConfig& cfg, const std::string& quantum_csv_path,
                          std::ostream& log);

} // namespace diskzeta
