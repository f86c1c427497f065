#include "diskzeta/spectra_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "diskzeta/errors.hpp"

namespace diskzeta {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kResonanceHeader =
    "re_k,im_k,re_lambda,im_lambda,residual,order,band,reliable";
constexpr const char* kMapHeader = "q,p,re,im,abs";

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// The double whose %.12g representation we just wrote. 12 significant
/// digits are below the ~15.9 a double carries, so text -> double -> text is
/// the identity; deriving stored quantities (the abs column, the PGM
/// normalization) from this value instead of the full-precision one makes
/// save(load(f)) reproduce f byte for byte.
double reparse12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(strip(line.substr(start)));
            break;
        }
        fields.push_back(strip(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

double parse_double(const std::string& field, const char* what, long line) {
    if (field.empty())
        throw ParseError(std::string("empty ") + what + " field", line);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size())
        throw ParseError(std::string("malformed ") + what + " value \"" + field + "\"", line);
    return v;
}

double parse_finite(const std::string& field, const char* what, long line) {
    const double v = parse_double(field, what, line);
    if (!std::isfinite(v))
        throw ParseError(std::string("non-finite ") + what + " value \"" + field + "\"", line);
    return v;
}

long parse_int(const std::string& field, const char* what, long line) {
    if (field.empty())
        throw ParseError(std::string("empty ") + what + " field", line);
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size())
        throw ParseError(std::string("malformed ") + what + " value \"" + field + "\"", line);
    return v;
}

ordered_json parse_json_line(const std::string& line, long lineno) {
    try {
        return ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
}

bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

ordered_json complex_to_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

Complex complex_from_json(const ordered_json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(std::string(what) + " is not a [re, im] pair", 1);
    return Complex(j[0].get<double>(), j[1].get<double>());
}

} // namespace

// --- quantum CSV --------------------------------------------------------------

std::vector<QuantumRecord> load_quantum_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("quantum CSV not found: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty quantum CSV (missing header)", 1);
    const std::string header = strip(line);
    bool extended = false;
    if (header == "re_k,im_k")
        extended = false;
    else if (header == "re_k,im_k,husimi_path,label")
        extended = true;
    else
        throw ParseError("quantum CSV header must be \"re_k,im_k[,husimi_path,label]\", got \"" +
                             header + "\"",
                         1);

    std::vector<QuantumRecord> records;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty()) continue;
        const auto fields = split_csv(s);
        const std::size_t max_fields = extended ? 4 : 2;
        if (fields.size() < 2 || fields.size() > max_fields)
            throw ParseError("expected " + std::string(extended ? "2-4" : "2") +
                                 " comma-separated fields, got " + std::to_string(fields.size()),
                             lineno);
        QuantumRecord rec;
        const double re = parse_finite(fields[0], "re_k", lineno);
        const double im = parse_finite(fields[1], "im_k", lineno);
        if (im > 0.0)
            throw ParseError("Im(k) = " + fmt12(im) +
                                 " > 0; scattering resonances lie in the closed lower half plane",
                             lineno);
        rec.k = Complex(re, im);
        if (extended) {
            if (fields.size() > 2) rec.husimi_path = fields[2];
            if (fields.size() > 3) rec.label = fields[3];
        }
        records.push_back(std::move(rec));
    }
    return records;
}

// --- matching -------------------------------------------------------------------

ComparisonReport match_spectra(std::vector<Complex> classical,
                               const std::vector<QuantumRecord>& quantum, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("matching radius must be positive and finite");

    std::sort(classical.begin(), classical.end(), complex_less);
    std::vector<Complex> qk(quantum.size());
    for (std::size_t j = 0; j < quantum.size(); ++j) qk[j] = quantum[j].k;
    std::sort(qk.begin(), qk.end(), complex_less);

    struct Candidate {
        double dist;
        std::size_t i, j;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < classical.size(); ++i)
        for (std::size_t j = 0; j < qk.size(); ++j) {
            const double d = std::abs(classical[i] - qk[j]);
            if (d <= radius) candidates.push_back({d, i, j});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    ComparisonReport report;
    report.radius = radius;
    report.n_classical = classical.size();
    report.n_quantum = qk.size();

    std::vector<char> c_used(classical.size(), 0), q_used(qk.size(), 0);
    for (const auto& c : candidates) {
        if (c_used[c.i] || q_used[c.j]) continue;
        c_used[c.i] = q_used[c.j] = 1;
        report.pairs.push_back({classical[c.i], qk[c.j], c.dist});
    }
    for (std::size_t i = 0; i < classical.size(); ++i)
        if (!c_used[i]) report.unmatched_classical.push_back(classical[i]);
    for (std::size_t j = 0; j < qk.size(); ++j)
        if (!q_used[j]) report.unmatched_quantum.push_back(qk[j]);

    double sum = 0.0;
    for (const auto& p : report.pairs) {
        sum += p.distance;
        report.max_distance = std::max(report.max_distance, p.distance);
    }
    if (!report.pairs.empty()) report.mean_distance = sum / static_cast<double>(report.pairs.size());
    return report;
}

void save_comparison(const std::string& path, const ComparisonReport& report) {
    ordered_json j;
    j["schema"] = 1;
    j["kind"] = "comparison";
    j["radius"] = report.radius;
    j["pairs"] = ordered_json::array();
    for (const auto& p : report.pairs) {
        ordered_json pj;
        pj["ck"] = complex_to_json(p.classical_k);
        pj["qk"] = complex_to_json(p.quantum_k);
        pj["dist"] = p.distance;
        j["pairs"].push_back(std::move(pj));
    }
    j["unmatched_classical"] = ordered_json::array();
    for (const auto& z : report.unmatched_classical) j["unmatched_classical"].push_back(complex_to_json(z));
    j["unmatched_quantum"] = ordered_json::array();
    for (const auto& z : report.unmatched_quantum) j["unmatched_quantum"].push_back(complex_to_json(z));
    ordered_json stats;
    stats["n_classical"] = report.n_classical;
    stats["n_quantum"] = report.n_quantum;
    stats["n_matched"] = report.pairs.size();
    stats["max_distance"] = report.max_distance;
    stats["mean_distance"] = report.mean_distance;
    j["stats"] = std::move(stats);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write comparison report: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

ComparisonReport load_comparison(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("comparison report not found: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("comparison report: ") + e.what(), 1);
    }
    if (!j.is_object() || j.value("schema", -1) != 1 || j.value("kind", std::string()) != "comparison")
        throw SchemaMismatch("not a schema-1 comparison report: " + path);

    ComparisonReport report;
    try {
        report.radius = j.at("radius").get<double>();
        for (const auto& pj : j.at("pairs")) {
            MatchedPair p;
            p.classical_k = complex_from_json(pj.at("ck"), "ck");
            p.quantum_k = complex_from_json(pj.at("qk"), "qk");
            p.distance = pj.at("dist").get<double>();
            report.pairs.push_back(p);
        }
        for (const auto& zj : j.at("unmatched_classical"))
            report.unmatched_classical.push_back(complex_from_json(zj, "unmatched_classical entry"));
        for (const auto& zj : j.at("unmatched_quantum"))
            report.unmatched_quantum.push_back(complex_from_json(zj, "unmatched_quantum entry"));
        const auto& stats = j.at("stats");
        report.n_classical = stats.at("n_classical").get<std::size_t>();
        report.n_quantum = stats.at("n_quantum").get<std::size_t>();
        report.max_distance = stats.at("max_distance").get<double>();
        report.mean_distance = stats.at("mean_distance").get<double>();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("comparison report: ") + e.what(), 1);
    }
    if (report.n_classical != report.pairs.size() + report.unmatched_classical.size() ||
        report.n_quantum != report.pairs.size() + report.unmatched_quantum.size())
        throw SchemaMismatch("comparison report totals do not add up: " + path);
    return report;
}

// --- orbit database ---------------------------------------------------------------

std::string orbit_db_filename(double d_over_r, int max_len) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "orbits_dR%g_N%d.jsonl", d_over_r, max_len);
    return buf;
}

void save_orbit_db(const std::string& path, double d_over_r, int max_len,
                   const std::vector<OrbitRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write orbit database: " + path);

    ordered_json header;
    header["schema"] = 1;
    header["kind"] = "orbit_db";
    header["d_over_r"] = d_over_r;
    header["max_len"] = max_len;
    header["count"] = records.size();
    out << header.dump() << '\n';

    for (const auto& r : records) {
        ordered_json j;
        j["word"] = r.word;
        j["L"] = r.length;
        j["lambda"] = r.stability;
        j["n_reflections"] = r.reflections;
        j["n0"] = r.n0;
        j["n1"] = r.n1;
        j["residual"] = r.residual;
        ordered_json section = ordered_json::array();
        for (const auto& s : r.section) section.push_back(ordered_json::array({s.q, s.p}));
        j["section"] = std::move(section);
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<OrbitRecord> load_orbit_db(const std::string& path, double d_over_r, int max_len) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("orbit database not found: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty orbit database (missing header line)", 1);
    const ordered_json header = parse_json_line(line, 1);

    double file_ratio = 0.0;
    int file_maxlen = 0;
    long expected = -1;
    try {
        if (!header.is_object() || header.value("schema", -1) != 1 ||
            header.value("kind", std::string()) != "orbit_db")
            throw SchemaMismatch("not a schema-1 orbit database: " + path);
        file_ratio = header.at("d_over_r").get<double>();
        file_maxlen = header.at("max_len").get<int>();
        expected = header.value("count", -1L);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("orbit database header: ") + e.what(), 1);
    }
    if (file_ratio != d_over_r)
        throw SchemaMismatch("orbit database " + path + " is for d/r = " + fmt12(file_ratio) +
                             ", requested d/r = " + fmt12(d_over_r));
    if (file_maxlen != max_len)
        throw SchemaMismatch("orbit database " + path + " holds words up to length " +
                             std::to_string(file_maxlen) + ", requested " + std::to_string(max_len));

    std::vector<OrbitRecord> records;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        const ordered_json j = parse_json_line(line, lineno);
        OrbitRecord r;
        try {
            r.word = j.at("word").get<std::string>();
            r.length = j.at("L").get<double>();
            r.stability = j.at("lambda").get<double>();
            r.reflections = j.at("n_reflections").get<int>();
            r.n0 = j.at("n0").get<int>();
            r.n1 = j.at("n1").get<int>();
            r.residual = j.at("residual").get<double>();
            for (const auto& s : j.at("section")) {
                if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
                    throw ParseError("section entry is not a [q, p] pair", lineno);
                r.section.push_back({s[0].get<double>(), s[1].get<double>()});
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(std::string("orbit record: ") + e.what(), lineno);
        }
        records.push_back(std::move(r));
    }
    if (expected >= 0 && expected != static_cast<long>(records.size()))
        throw SchemaMismatch("orbit database header promises " + std::to_string(expected) +
                             " records but " + std::to_string(records.size()) + " were read: " + path);
    return records;
}

// --- resonance table -----------------------------------------------------------------

void save_resonances(const std::string& path, const std::vector<ResonanceRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write resonance table: " + path);
    out << kResonanceHeader << '\n';
    for (const auto& row : rows) {
        const Resonance& r = row.resonance;
        out << fmt12(r.k.real()) << ',' << fmt12(r.k.imag()) << ',' << fmt12(r.lambda.real())
            << ',' << fmt12(r.lambda.imag()) << ',' << fmt12(r.residual) << ',' << r.order << ','
            << r.band << ',' << (row.reliable ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<ResonanceRow> load_resonances(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("resonance table not found: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty resonance table (missing header)", 1);
    if (strip(line) != kResonanceHeader)
        throw SchemaMismatch("resonance table header must be \"" + std::string(kResonanceHeader) +
                             "\": " + path);

    std::vector<ResonanceRow> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty()) continue;
        const auto fields = split_csv(s);
        if (fields.size() != 8)
            throw ParseError("expected 8 comma-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        ResonanceRow row;
        Resonance& r = row.resonance;
        r.k = Complex(parse_finite(fields[0], "re_k", lineno), parse_finite(fields[1], "im_k", lineno));
        r.lambda = Complex(parse_finite(fields[2], "re_lambda", lineno),
                           parse_finite(fields[3], "im_lambda", lineno));
        r.E = r.k * r.k;
        r.residual = parse_finite(fields[4], "residual", lineno);
        r.order = static_cast<int>(parse_int(fields[5], "order", lineno));
        r.band = static_cast<int>(parse_int(fields[6], "band", lineno));
        if (fields[7] == "0")
            row.reliable = false;
        else if (fields[7] == "1")
            row.reliable = true;
        else
            throw ParseError("reliable flag must be 0 or 1, got \"" + fields[7] + "\"", lineno);
        rows.push_back(row);
    }
    return rows;
}

// --- residue maps ------------------------------------------------------------------------

MapFiles save_map(const std::string& csv_path, const ResidueMap& map, bool write_pgm) {
    if (map.n_q < 1 || map.n_p < 1 ||
        map.values.size() != static_cast<std::size_t>(map.n_q) * static_cast<std::size_t>(map.n_p))
        throw IoError("refusing to write inconsistent residue map (grid " + std::to_string(map.n_q) +
                      "x" + std::to_string(map.n_p) + ", " + std::to_string(map.values.size()) +
                      " values)");

    MapFiles files;
    files.csv = csv_path;
    files.sidecar = csv_path + ".json";
    files.pgm = write_pgm ? csv_path + ".pgm" : std::string();

    // The abs column and the PGM normalization are derived from the
    // %.12g-rounded re/im actually stored in the CSV, so every artifact is a
    // pure function of the CSV text and a load/save cycle is byte-identical.
    std::vector<double> abs12(map.values.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        abs12[i] = std::hypot(reparse12(map.values[i].real()), reparse12(map.values[i].imag()));
        max_abs = std::max(max_abs, abs12[i]);
    }

    {
        std::ofstream out(files.csv, std::ios::binary);
        if (!out) throw IoError("cannot write map CSV: " + files.csv);
        out << kMapHeader << '\n';
        for (int ip = 0; ip < map.n_p; ++ip)
            for (int iq = 0; iq < map.n_q; ++iq) {
                const Complex& v = map.at(iq, ip);
                const std::size_t idx =
                    static_cast<std::size_t>(ip) * static_cast<std::size_t>(map.n_q) + iq;
                out << fmt12(map.q_at(iq)) << ',' << fmt12(map.p_at(ip)) << ','
                    << fmt12(v.real()) << ',' << fmt12(v.imag()) << ',' << fmt12(abs12[idx])
                    << '\n';
            }
        if (!out) throw IoError("write failed: " + files.csv);
    }

    {
        ordered_json j;
        j["schema"] = 1;
        j["kind"] = "residue_map";
        j["d_over_r"] = map.d_over_r;
        j["representation"] = map.rep == Representation::A1 ? "A1" : "A2";
        j["maslov"] = map.maslov;
        j["order"] = map.order;
        j["sigma"] = map.sigma;
        j["n_q"] = map.n_q;
        j["n_p"] = map.n_p;
        ordered_json res;
        res["re_k"] = map.resonance.k.real();
        res["im_k"] = map.resonance.k.imag();
        res["re_lambda"] = map.resonance.lambda.real();
        res["im_lambda"] = map.resonance.lambda.imag();
        res["residual"] = map.resonance.residual;
        res["order"] = map.resonance.order;
        res["band"] = map.resonance.band;
        j["resonance"] = std::move(res);
        j["max_abs"] = max_abs;
        std::ofstream side(files.sidecar, std::ios::binary);
        if (!side) throw IoError("cannot write map sidecar: " + files.sidecar);
        side << j.dump(2) << '\n';
        if (!side) throw IoError("write failed: " + files.sidecar);
    }

    if (write_pgm) {
        std::ofstream pgm(files.pgm, std::ios::binary);
        if (!pgm) throw IoError("cannot write map PGM: " + files.pgm);
        pgm << "P5\n" << map.n_q << ' ' << map.n_p << "\n255\n";
        std::string rowbuf(static_cast<std::size_t>(map.n_q), '\0');
        for (int ip = map.n_p - 1; ip >= 0; --ip) {  // top image row = largest p
            for (int iq = 0; iq < map.n_q; ++iq) {
                const std::size_t idx =
                    static_cast<std::size_t>(ip) * static_cast<std::size_t>(map.n_q) + iq;
                long px = max_abs > 0.0 ? std::lround(255.0 * abs12[idx] / max_abs) : 0;
                px = std::clamp(px, 0L, 255L);
                rowbuf[static_cast<std::size_t>(iq)] = static_cast<char>(static_cast<unsigned char>(px));
            }
            pgm.write(rowbuf.data(), static_cast<std::streamsize>(rowbuf.size()));
        }
        if (!pgm) throw IoError("write failed: " + files.pgm);
    }

    return files;
}

ResidueMap load_map(const std::string& csv_path) {
    const std::string sidecar_path = csv_path + ".json";
    std::ifstream side(sidecar_path, std::ios::binary);
    if (!side) throw MissingFile("map sidecar not found: " + sidecar_path);
    ordered_json j;
    try {
        side >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("map sidecar: ") + e.what(), 1);
    }
    if (!j.is_object() || j.value("schema", -1) != 1 ||
        j.value("kind", std::string()) != "residue_map")
        throw SchemaMismatch("not a schema-1 residue-map sidecar: " + sidecar_path);

    ResidueMap map;
    try {
        map.d_over_r = j.at("d_over_r").get<double>();
        const std::string rep = j.at("representation").get<std::string>();
        if (rep == "A1")
            map.rep = Representation::A1;
        else if (rep == "A2")
            map.rep = Representation::A2;
        else
            throw ParseError("unknown representation \"" + rep + "\"", 1);
        map.maslov = j.at("maslov").get<bool>();
        map.order = j.at("order").get<int>();
        map.sigma = j.at("sigma").get<double>();
        map.n_q = j.at("n_q").get<int>();
        map.n_p = j.at("n_p").get<int>();
        const auto& res = j.at("resonance");
        map.resonance.k = Complex(res.at("re_k").get<double>(), res.at("im_k").get<double>());
        map.resonance.lambda =
            Complex(res.at("re_lambda").get<double>(), res.at("im_lambda").get<double>());
        map.resonance.E = map.resonance.k * map.resonance.k;
        map.resonance.residual = res.at("residual").get<double>();
        map.resonance.order = res.at("order").get<int>();
        map.resonance.band = res.at("band").get<int>();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("map sidecar: ") + e.what(), 1);
    }
    if (map.n_q < 1 || map.n_p < 1)
        throw SchemaMismatch("map sidecar declares an empty grid: " + sidecar_path);
    map.values.assign(static_cast<std::size_t>(map.n_q) * static_cast<std::size_t>(map.n_p),
                      Complex(0.0, 0.0));

    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw MissingFile("map CSV not found: " + csv_path);
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty map CSV (missing header)", 1);
    if (strip(line) != kMapHeader)
        throw SchemaMismatch("map CSV header must be \"" + std::string(kMapHeader) + "\": " +
                             csv_path);

    const std::size_t total = map.values.size();
    std::size_t row = 0;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = strip(line);
        if (s.empty()) continue;
        if (row >= total)
            throw ParseError("more data rows than the declared " + std::to_string(map.n_q) + "x" +
                                 std::to_string(map.n_p) + " grid",
                             lineno);
        const auto fields = split_csv(s);
        if (fields.size() != 5)
            throw ParseError("expected 5 comma-separated fields, got " +
                                 std::to_string(fields.size()),
                             lineno);
        const int ip = static_cast<int>(row / static_cast<std::size_t>(map.n_q));
        const int iq = static_cast<int>(row % static_cast<std::size_t>(map.n_q));
        const double q = parse_finite(fields[0], "q", lineno);
        const double p = parse_finite(fields[1], "p", lineno);
        if (std::abs(q - map.q_at(iq)) > 1e-9 || std::abs(p - map.p_at(ip)) > 1e-9)
            throw ParseError("grid coordinates out of storage order (expected q = " +
                                 fmt12(map.q_at(iq)) + ", p = " + fmt12(map.p_at(ip)) + ")",
                             lineno);
        const double re = parse_finite(fields[2], "re", lineno);
        const double im = parse_finite(fields[3], "im", lineno);
        parse_finite(fields[4], "abs", lineno);  // derived column; validated as a number only
        map.values[row] = Complex(re, im);
        ++row;
    }
    if (row != total)
        throw ParseError("map CSV ended after " + std::to_string(row) + " of " +
                             std::to_string(total) + " data rows",
                         lineno + 1);
    return map;
}

} // namespace diskzeta
