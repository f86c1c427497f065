#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "diskzeta/config.hpp"
#include "diskzeta/errors.hpp"
#include "diskzeta/pipeline.hpp"

namespace {

using diskzeta::Complex;
using diskzeta::ConfigError;
using diskzeta::RunConfig;

double flag_number(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        throw ConfigError(what + ": expected a number, got \"" + text + "\"");
    return v;
}

int flag_integer(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size())
        throw ConfigError(what + ": expected an integer, got \"" + text + "\"");
    return static_cast<int>(v);
}

Complex parse_k_selector(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("--k: expected re,im (e.g. 150.2,-0.25), got \"" + text + "\"");
    return Complex(flag_number(text.substr(0, comma), "--k real part"),
                   flag_number(text.substr(comma + 1), "--k imaginary part"));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ruelle resonances and invariant Ruelle distributions of the symmetric "
                 "three-disk billiard via cycle expansions"};
    app.fallthrough();
    app.require_subcommand(1);

    // All values arrive as strings so that "not given" is distinguishable and
    // the precedence defaults < config file < DISKZETA_CACHE < flags is exact.
    std::string config_path, d_over_r, rep, maslov, max_len, bands, region, seed_density, grid,
        sigma, out_dir, cache_dir;
    bool pgm = false;
    app.add_option("--config", config_path, "config file: flat key = value lines, '#' comments");
    app.add_option("--d-over-r", d_over_r, "disk separation over radius, > 2 (default 6)");
    app.add_option("--rep", rep, "symmetry representation: A1 or A2 (default A2)");
    app.add_option("--maslov", maslov, "Maslov sign (-1)^n per cycle: on or off (default on)");
    app.add_option("--max-len", max_len, "truncation order N, longest symbol word (default 8)");
    app.add_option("--bands", bands, "number of stability bands to search (default 1)");
    app.add_option("--region", region, "k search rectangle re0,re1,im0,im1 (default 100,200,-1,0)");
    app.add_option("--seed-density", seed_density, "Newton seeds per zero spacing (default 4)");
    app.add_option("--grid", grid, "map grid NQxNP (default 400x200)");
    app.add_option("--sigma", sigma, "probe width: auto (= 1/Re k) or a fixed value");
    app.add_option("--out", out_dir, "output directory (default out)");
    app.add_option("--cache", cache_dir,
                   "orbit cache directory (default cache; DISKZETA_CACHE overrides)");
    app.add_flag("--pgm", pgm, "also write a PGM heatmap next to the map CSV");

    CLI::App* c_orbits =
        app.add_subcommand("orbits", "solve all prime periodic orbits and cache the database");
    CLI::App* c_resonances = app.add_subcommand(
        "resonances", "locate zeta zeros in the search region and write the resonance CSV");
    CLI::App* c_map = app.add_subcommand(
        "residue-map", "sample the invariant Ruelle distribution of one resonance on a grid");
    std::string k_selector;
    c_map->add_option("--k", k_selector, "resonance selector re,im in the k plane")->required();
    CLI::App* c_compare = app.add_subcommand(
        "compare", "match the reliable classical resonances against a quantum CSV");
    std::string quantum_path, radius;
    c_compare->add_option("--quantum", quantum_path,
                          "quantum resonance CSV with header re_k,im_k[,husimi_path,label]")
        ->required();
    c_compare->add_option("--radius", radius, "matching radius in k units (default 0.1)");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) diskzeta::apply_config_file(cfg, config_path);
        if (const char* env = std::getenv("DISKZETA_CACHE"); env != nullptr && *env != '\0')
            cfg.cache_dir = env;
        if (!d_over_r.empty()) cfg.d_over_r = flag_number(d_over_r, "--d-over-r");
        if (!rep.empty()) cfg.rep = diskzeta::parse_representation(rep);
        if (!maslov.empty()) cfg.maslov = diskzeta::parse_on_off(maslov);
        if (!max_len.empty()) cfg.max_len = flag_integer(max_len, "--max-len");
        if (!bands.empty()) cfg.bands = flag_integer(bands, "--bands");
        if (!region.empty()) cfg.region = diskzeta::parse_region(region);
        if (!seed_density.empty()) cfg.seed_density = flag_number(seed_density, "--seed-density");
        if (!grid.empty()) diskzeta::parse_grid(grid, cfg.n_q, cfg.n_p);
        if (!sigma.empty()) diskzeta::parse_sigma(sigma, cfg.sigma_auto, cfg.sigma);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        if (pgm) cfg.write_pgm = true;
        if (!radius.empty()) cfg.match_radius = flag_number(radius, "--radius");
        cfg.validate();

        if (c_orbits->parsed()) {
            diskzeta::cmd_orbits(cfg, std::cout);
        } else if (c_resonances->parsed()) {
            diskzeta::cmd_resonances(cfg, std::cout);
        } else if (c_map->parsed()) {
            diskzeta::cmd_residue_map(cfg, parse_k_selector(k_selector), std::cout);
        } else if (c_compare->parsed()) {
            diskzeta::cmd_compare(cfg, quantum_path, std::cout);
        }
        return 0;
    } catch (const diskzeta::ParseError& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
