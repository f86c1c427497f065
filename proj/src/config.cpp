#include "diskzeta/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "diskzeta/errors.hpp"

namespace diskzeta {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& text, const std::string& what) {
    if (text.empty()) throw ConfigError(what + ": empty value");
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v))
        throw ConfigError(what + ": expected a finite number, got \"" + text + "\"");
    return v;
}

int parse_integer(const std::string& text, const std::string& what) {
    if (text.empty()) throw ConfigError(what + ": empty value");
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size())
        throw ConfigError(what + ": expected an integer, got \"" + text + "\"");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(strip(text.substr(start)));
            break;
        }
        out.push_back(strip(text.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

} // namespace

void RunConfig::validate() const {
    if (!std::isfinite(d_over_r) || d_over_r <= 2.0)
        throw ConfigError("d_over_r = " + std::to_string(d_over_r) +
                          ": disks must be separated, require d/r > 2");
    if (max_len < 1)
        throw ConfigError("max_len = " + std::to_string(max_len) +
                          ": the truncation order N must be at least 1");
    if (bands < 1)
        throw ConfigError("bands = " + std::to_string(bands) + ": need at least the leading band");
    if (!(std::isfinite(region.re_min) && std::isfinite(region.re_max) &&
          std::isfinite(region.im_min) && std::isfinite(region.im_max)) ||
        region.re_min >= region.re_max || region.im_min >= region.im_max)
        throw ConfigError("region must be a non-degenerate rectangle re0 < re1, im0 < im1");
    if (!(seed_density > 0.0) || !std::isfinite(seed_density))
        throw ConfigError("seed_density must be a positive number");
    if (n_q < 1 || n_p < 1)
        throw ConfigError("grid " + std::to_string(n_q) + "x" + std::to_string(n_p) +
                          ": both map dimensions must be at least 1");
    if (!sigma_auto && (!(sigma > 0.0) || !std::isfinite(sigma)))
        throw ConfigError("sigma must be positive when fixed (or \"auto\" for the 1/Re(k) rule)");
    if (!(match_radius > 0.0) || !std::isfinite(match_radius))
        throw ConfigError("match_radius must be a positive number");
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
    if (cache_dir.empty()) throw ConfigError("cache_dir must not be empty");
}

Representation parse_representation(const std::string& text) {
    if (text == "A1" || text == "a1") return Representation::A1;
    if (text == "A2" || text == "a2") return Representation::A2;
    throw ConfigError("rep: expected A1 or A2, got \"" + text + "\"");
}

bool parse_on_off(const std::string& text) {
    if (text == "on" || text == "true" || text == "1") return true;
    if (text == "off" || text == "false" || text == "0") return false;
    throw ConfigError("expected on/off, got \"" + text + "\"");
}

KRegion parse_region(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4)
        throw ConfigError("region: expected re0,re1,im0,im1 (4 numbers), got \"" + text + "\"");
    return KRegion{parse_number(parts[0], "region re0"), parse_number(parts[1], "region re1"),
                   parse_number(parts[2], "region im0"), parse_number(parts[3], "region im1")};
}

void parse_grid(const std::string& text, int& n_q, int& n_p) {
    const std::size_t pos = text.find_first_of("xX");
    if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size())
        throw ConfigError("grid: expected NQxNP (e.g. 400x200), got \"" + text + "\"");
    n_q = parse_integer(strip(text.substr(0, pos)), "grid NQ");
    n_p = parse_integer(strip(text.substr(pos + 1)), "grid NP");
}

void parse_sigma(const std::string& text, bool& sigma_auto, double& sigma) {
    if (text == "auto") {
        sigma_auto = true;
        sigma = 0.0;
        return;
    }
    sigma_auto = false;
    sigma = parse_number(text, "sigma");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("config file not found: " + path);

    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string s = strip(line);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line is not key = value: \"" + s + "\"", lineno);
        const std::string key = strip(s.substr(0, eq));
        const std::string value = strip(s.substr(eq + 1));
        if (key.empty()) throw ParseError("config line has an empty key", lineno);

        if (key == "d_over_r")
            cfg.d_over_r = parse_number(value, key);
        else if (key == "rep")
            cfg.rep = parse_representation(value);
        else if (key == "maslov")
            cfg.maslov = parse_on_off(value);
        else if (key == "max_len")
            cfg.max_len = parse_integer(value, key);
        else if (key == "bands")
            cfg.bands = parse_integer(value, key);
        else if (key == "region")
            cfg.region = parse_region(value);
        else if (key == "seed_density")
            cfg.seed_density = parse_number(value, key);
        else if (key == "grid")
            parse_grid(value, cfg.n_q, cfg.n_p);
        else if (key == "sigma")
            parse_sigma(value, cfg.sigma_auto, cfg.sigma);
        else if (key == "out_dir")
            cfg.out_dir = value;
        else if (key == "cache_dir")
            cfg.cache_dir = value;
        else if (key == "pgm")
            cfg.write_pgm = parse_on_off(value);
        else if (key == "match_radius")
            cfg.match_radius = parse_number(value, key);
        else
            throw ConfigError("unknown config key \"" + key + "\" (line " +
                              std::to_string(lineno) + " of " + path + ")");
    }
}

} // namespace diskzeta
