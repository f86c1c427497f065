#pragma once

#include <string>
#include <vector>

#include "diskzeta/orbit.hpp"
#include "diskzeta/ruelle_map.hpp"
#include "diskzeta/zeta.hpp"

namespace diskzeta {

// --- quantum data (ingested, never computed) --------------------------------

/// One externally computed quantum resonance. The Husimi grid path and the
/// source label are optional annotations carried through from the input CSV.
struct QuantumRecord {
    Complex k;                ///< finite, Im(k) <= 0 for scattering resonances
    std::string husimi_path;  ///< optional reference to a Husimi-grid CSV
    std::string label;        ///< optional source label
};

/// Quantum CSV schema: header "re_k,im_k" or "re_k,im_k,husimi_path,label",
/// one record per data row. Blank lines are skipped, CRLF tolerated.
/// Throws MissingFile if the file cannot be opened and ParseError (with the
/// 1-based line number) for a malformed header, a malformed row, a non-finite
/// k, or Im(k) > 0.
std::vector<QuantumRecord> load_quantum_csv(const std::string& path);

// --- classical/quantum comparison -------------------------------------------

struct MatchedPair {
    Complex classical_k;
    Complex quantum_k;
    double distance = 0.0;  ///< |classical_k - quantum_k|, always <= radius
};

/// Result of greedy nearest-neighbor matching between a classical and a
/// quantum resonance list in the k plane.
struct ComparisonReport {
    double radius = 0.0;                      ///< matching radius used
    std::vector<MatchedPair> pairs;           ///< ascending distance
    std::vector<Complex> unmatched_classical; ///< sorted by (re, im)
    std::vector<Complex> unmatched_quantum;   ///< sorted by (re, im)
    std::size_t n_classical = 0;              ///< |classical| = pairs + unmatched_classical
    std::size_t n_quantum = 0;                ///< |quantum|   = pairs + unmatched_quantum
    double max_distance = 0.0;                ///< over matched pairs (0 when none)
    double mean_distance = 0.0;               ///< over matched pairs (0 when none)
};

/// Greedy injective matching by ascending pair distance; candidate pairs
/// beyond `radius` are never matched. Both inputs are sorted internally by
/// (re, im) first, so the output is invariant under permutations of either
/// list. Throws std::invalid_argument unless radius > 0.
ComparisonReport match_spectra(std::vector<Complex> classical,
                               const std::vector<QuantumRecord>& quantum,
                               double radius = 0.1);

/// JSON comparison report:
///   {"schema":1,"kind":"comparison","radius":r,
///    "pairs":[{"ck":[re,im],"qk":[re,im],"dist":d},...],
///    "unmatched_classical":[[re,im],...],"unmatched_quantum":[[re,im],...],
///    "stats":{...}}
/// save throws IoError; load throws MissingFile, ParseError, or
/// SchemaMismatch (wrong schema/kind). load(save(x)) == x bit-exact.
void save_comparison(const std::string& path, const ComparisonReport& report);
ComparisonReport load_comparison(const std::string& path);

// --- orbit database ----------------------------------------------------------

/// Canonical file name for an orbit database: orbits_dR{ratio}_N{maxlen}.jsonl
/// with the ratio printed as %g (e.g. orbits_dR6_N12.jsonl).
std::string orbit_db_filename(double d_over_r, int max_len);

/// JSONL orbit database. Line 1 is the header object
///   {"schema":1,"kind":"orbit_db","d_over_r":...,"max_len":...,"count":...}
/// and every further line is one record
///   {"word":...,"L":...,"lambda":...,"n_reflections":...,"n0":...,"n1":...,
///    "residual":...,"section":[[q,p],...]}.
/// Doubles are serialized with shortest round-trip precision, so
/// load(save(x)) == x bit-exact. save throws IoError.
void save_orbit_db(const std::string& path, double d_over_r, int max_len,
                   const std::vector<OrbitRecord>& records);

/// Loads a database and checks its header against the requested system:
/// schema/kind/d_over_r/max_len must all match or SchemaMismatch is thrown.
/// Throws MissingFile if absent and ParseError (with line number) for
/// malformed lines or records.
std::vector<OrbitRecord> load_orbit_db(const std::string& path,
                                       double d_over_r, int max_len);

// --- resonance table ----------------------------------------------------------

/// One row of the resonance CSV: the resonance plus its reliability flag
/// (inside the leading-band validity strip or not).
struct ResonanceRow {
    Resonance resonance;
    bool reliable = false;
};

/// Resonance CSV with mandatory header
///   re_k,im_k,re_lambda,im_lambda,residual,order,band,reliable
/// doubles printed as %.12g, reliable as 0/1. %.12g stays below the 15
/// significant digits a double round-trips losslessly, so text -> double ->
/// text is the identity and save(load(f)) reproduces f byte for byte.
/// save throws IoError; load throws MissingFile, SchemaMismatch (wrong
/// header), or ParseError (line number) and reconstitutes E = k^2 from the
/// stored k.
void save_resonances(const std::string& path,
                     const std::vector<ResonanceRow>& rows);
std::vector<ResonanceRow> load_resonances(const std::string& path);

// --- residue maps --------------------------------------------------------------

/// Paths produced by save_map: the long CSV itself, the metadata sidecar
/// (csv path + ".json"), and the optional PGM heatmap (csv path + ".pgm",
/// empty string when not written).
struct MapFiles {
    std::string csv;
    std::string sidecar;
    std::string pgm;
};

/// Writes a residue map as a long CSV "q,p,re,im,abs" (rows in storage order:
/// p-index outer, q-index inner), plus a JSON sidecar with the grid shape,
/// sigma, system metadata, the resonance, and the max-|value| normalization
/// constant. With write_pgm, also writes an 8-bit binary PGM (P5) heatmap of
/// |value| normalized by that constant, top row = largest p. The abs column
/// is computed from the %.12g-rounded re/im (not the full-precision value) so
/// that save(load(f)) reproduces f byte for byte. Throws IoError on write
/// failure.
MapFiles save_map(const std::string& csv_path, const ResidueMap& map,
                  bool write_pgm = false);

/// Reads back a map written by save_map (CSV + sidecar). Throws MissingFile,
/// SchemaMismatch (sidecar schema/kind, CSV header), or ParseError.
ResidueMap load_map(const std::string& csv_path);

} // namespace diskzeta
