#pragma once

#include <string>

#include "diskzeta/zeta.hpp"

namespace diskzeta {

/// Everything one pipeline run depends on. Defaults reproduce the standard
/// setup: d/r = 6, A2 representation with Maslov signs, leading band only,
/// truncation order 8, search window Re k in [100, 200] just below the real
/// axis, 400x200 maps with the sigma = 1/Re(k) width rule.
struct RunConfig {
    double d_over_r = 6.0;
    Representation rep = Representation::A2;
    bool maslov = true;
    int max_len = 8;                         ///< truncation order N
    int bands = 1;                           ///< bands 0 .. bands-1
    KRegion region{100.0, 200.0, -1.0, 0.0}; ///< k-plane search rectangle
    double seed_density = 4.0;               ///< Newton seeds per expected zero spacing
    int n_q = 400, n_p = 200;                ///< map grid
    bool sigma_auto = true;                  ///< sigma = 1/Re(k) rule
    double sigma = 0.0;                      ///< fixed width, used when !sigma_auto
    std::string out_dir = "out";
    std::string cache_dir = "cache";
    bool write_pgm = false;
    double match_radius = 0.1;               ///< comparison radius in k units

    /// Throws ConfigError with an actionable message on the first violated
    /// invariant (N >= 1, non-degenerate region, grid dims >= 1, sigma > 0
    /// when fixed, ...).
    void validate() const;
};

/// Parse helpers shared by the config-file reader and the CLI flags. Each
/// throws ConfigError on malformed input.
Representation parse_representation(const std::string& text);
bool parse_on_off(const std::string& text);              ///< on/off, true/false, 1/0
KRegion parse_region(const std::string& text);           ///< "re0,re1,im0,im1"
void parse_grid(const std::string& text, int& n_q, int& n_p);  ///< "NQxNP"
void parse_sigma(const std::string& text, bool& sigma_auto, double& sigma);  ///< "auto" | value

/// Apply a flat key = value config file on top of cfg. Keys mirror RunConfig:
///   d_over_r, rep, maslov, max_len, bands, region, seed_density, grid,
///   sigma, out_dir, cache_dir, pgm, match_radius.
/// '#' starts a comment; blank lines are ignored. Throws MissingFile,
/// ParseError (with line number) on syntax errors, and ConfigError on
/// unknown keys or unparsable values.
void apply_config_file(RunConfig& cfg, const std::string& path);

} // namespace diskzeta
