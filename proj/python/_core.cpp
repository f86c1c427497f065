#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "diskzeta/config.hpp"
#include "diskzeta/errors.hpp"
#include "diskzeta/geometry.hpp"
#include "diskzeta/orbit.hpp"
#include "diskzeta/ruelle_map.hpp"
#include "diskzeta/spectra_io.hpp"
#include "diskzeta/words.hpp"
#include "diskzeta/zeta.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using diskzeta::Complex;
using diskzeta::CycleExpansion;
using diskzeta::CycleWeightSpec;
using diskzeta::HyperbolicityStats;
using diskzeta::KRegion;
using diskzeta::OrbitRecord;
using diskzeta::QuantumRecord;
using diskzeta::Representation;
using diskzeta::ResidueMap;
using diskzeta::Resonance;
using diskzeta::SectionPoint;

std::string rep_to_string(Representation rep) {
    return rep == Representation::A1 ? "A1" : "A2";
}

Representation rep_from_string(const std::string& rep) {
    if (rep == "A1") return Representation::A1;
    if (rep == "A2") return Representation::A2;
    throw std::invalid_argument("representation must be \"A1\" or \"A2\", got \"" + rep + "\"");
}

std::vector<OrbitRecord> solve_orbits(double d_over_r, int max_len) {
    const diskzeta::DiskSystem system(d_over_r);
    std::vector<OrbitRecord> records;
    for (const diskzeta::Word& w : diskzeta::enumerate_words(max_len))
        records.push_back(diskzeta::to_record(diskzeta::find_orbit(system, w)));
    return records;
}

CycleExpansion make_expansion(const std::vector<OrbitRecord>& records, int order,
                              const std::string& rep, bool maslov, int band) {
    return CycleExpansion(records, CycleWeightSpec{rep_from_string(rep), maslov, band}, order);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ruelle resonances and invariant Ruelle distributions of the symmetric "
              "three-disk billiard via periodic-orbit cycle expansions";

    py::register_exception<diskzeta::Error>(m, "DiskZetaError");

    py::class_<SectionPoint>(m, "SectionPoint")
        .def(py::init<double, double>(), "q"_a, "p"_a)
        .def_readonly("q", &SectionPoint::q)
        .def_readonly("p", &SectionPoint::p)
        .def("__repr__", [](const SectionPoint& s) {
            return "SectionPoint(q=" + std::to_string(s.q) + ", p=" + std::to_string(s.p) + ")";
        });

    py::class_<OrbitRecord>(m, "OrbitRecord")
        .def_readonly("word", &OrbitRecord::word)
        .def_readonly("length", &OrbitRecord::length)
        .def_readonly("stability", &OrbitRecord::stability)
        .def_readonly("reflections", &OrbitRecord::reflections)
        .def_readonly("n0", &OrbitRecord::n0)
        .def_readonly("n1", &OrbitRecord::n1)
        .def_readonly("residual", &OrbitRecord::residual)
        .def_readonly("section", &OrbitRecord::section)
        .def("__repr__", [](const OrbitRecord& r) {
            return "OrbitRecord(word='" + r.word + "', length=" + std::to_string(r.length) +
                   ", stability=" + std::to_string(r.stability) + ")";
        });

    py::class_<HyperbolicityStats>(m, "HyperbolicityStats")
        .def_readonly("n_primes", &HyperbolicityStats::n_primes)
        .def_readonly("max_length", &HyperbolicityStats::max_length)
        .def_readonly("h_top", &HyperbolicityStats::h_top)
        .def_readonly("beta_min", &HyperbolicityStats::beta_min)
        .def_readonly("mean_ratio", &HyperbolicityStats::mean_ratio)
        .def_readonly("spread", &HyperbolicityStats::spread);

    py::class_<Resonance>(m, "Resonance")
        .def_property_readonly("lambda_", [](const Resonance& r) { return r.lambda; })
        .def_readonly("k", &Resonance::k)
        .def_readonly("E", &Resonance::E)
        .def_readonly("residual", &Resonance::residual)
        .def_readonly("order", &Resonance::order)
        .def_readonly("band", &Resonance::band)
        .def("__repr__", [](const Resonance& r) {
            return "Resonance(k=" + std::to_string(r.k.real()) + (r.k.imag() < 0 ? "" : "+") +
                   std::to_string(r.k.imag()) + "j, band=" + std::to_string(r.band) + ")";
        });

    py::class_<CycleExpansion>(m, "CycleExpansion")
        .def(py::init(&make_expansion), "records"_a, "order"_a, "rep"_a = "A2", "maslov"_a = true,
             "band"_a = 0,
             "Truncated pseudo-cycle expansion of the band zeta inverse over the given orbit "
             "records.")
        .def_property_readonly("order", &CycleExpansion::order)
        .def_property_readonly("band", [](const CycleExpansion& e) { return e.weight_spec().band; })
        .def_property_readonly(
            "rep", [](const CycleExpansion& e) { return rep_to_string(e.weight_spec().rep); })
        .def_property_readonly("maslov",
                               [](const CycleExpansion& e) { return e.weight_spec().maslov; })
        .def_property_readonly("term_count", &CycleExpansion::term_count)
        .def_property_readonly("primes", &CycleExpansion::primes)
        .def("eval", &CycleExpansion::eval, "lam"_a,
             "Value and lambda-derivative of the truncated zeta inverse.")
        .def("order_contribution", &CycleExpansion::order_contribution, "n"_a, "lam"_a)
        .def("residual_at", &CycleExpansion::residual_at, "lam"_a)
        .def("weight_derivative", &CycleExpansion::weight_derivative, "lam"_a, "A"_a)
        .def("residue_coefficients", &CycleExpansion::residue_coefficients, "lam0"_a)
        .def("polish_zero", &CycleExpansion::polish_zero, "lam0"_a, "max_iter"_a = 50,
             "Newton-polish a zero; returns (lambda, residual).");

    m.def("enumerate_words", [](int max_len) {
        std::vector<std::string> words;
        for (const diskzeta::Word& w : diskzeta::enumerate_words(max_len)) words.push_back(w.str());
        return words;
    }, "max_len"_a, "All prime canonical binary words of length 1..max_len.");
    m.def("solve_orbits", &solve_orbits, "d_over_r"_a, "max_len"_a,
          "Solve every prime periodic orbit with at most max_len symbols.");
    m.def("hyperbolicity_stats", &diskzeta::hyperbolicity_stats, "records"_a);
    m.def("band0_validity", &diskzeta::band0_validity, "stats"_a,
          "Lower edge (in Re lambda) of the leading-band validity strip.");
    m.def("lambda_to_k", &diskzeta::lambda_to_k, "lam"_a);
    m.def("k_to_lambda", &diskzeta::k_to_lambda, "k"_a);
    m.def("make_resonance", &diskzeta::make_resonance, "lam"_a, "residual"_a, "order"_a, "band"_a);
    m.def(
        "find_resonances",
        [](const CycleExpansion& e, double re_min, double re_max, double im_min, double im_max,
           double seed_density) {
            return diskzeta::find_resonances(e, KRegion{re_min, re_max, im_min, im_max},
                                             seed_density);
        },
        "expansion"_a, "re_min"_a, "re_max"_a, "im_min"_a, "im_max"_a, "seed_density"_a = 4.0,
        "Zeros of the expansion inside a k-plane rectangle.");
    m.def("residue", &diskzeta::residue, "expansion"_a, "lam0"_a, "A"_a,
          "Invariant Ruelle distribution evaluated on the weight direction A.");
    m.def(
        "partial_sum_zeta",
        [](const std::vector<OrbitRecord>& records, const std::string& rep, bool maslov,
           Complex lam, const std::vector<double>& A, double length_max) {
            return diskzeta::partial_sum_zeta(records, rep_from_string(rep), maslov, lam, A,
                                              length_max);
        },
        "records"_a, "rep"_a, "maslov"_a, "lam"_a, "A"_a, "length_max"_a,
        "Direct weighted trace sum over orbits and repetitions (determinant-identity oracle).");

    m.def(
        "probe_weight",
        [](const OrbitRecord& record, double q0, double p0, double sigma) {
            return diskzeta::probe_weight(record, diskzeta::GaussianProbe{q0, p0, sigma});
        },
        "record"_a, "q0"_a, "p0"_a, "sigma"_a = 0.1,
        "Orbit integral of a normalized Gaussian probe over the bounce section.");
    m.def("default_sigma", &diskzeta::default_sigma, "resonance"_a, "The sigma = 1/Re(k) rule.");

    py::class_<ResidueMap>(m, "ResidueMap")
        .def_readonly("resonance", &ResidueMap::resonance)
        .def_readonly("sigma", &ResidueMap::sigma)
        .def_readonly("n_q", &ResidueMap::n_q)
        .def_readonly("n_p", &ResidueMap::n_p)
        .def_readonly("values", &ResidueMap::values)
        .def_readonly("d_over_r", &ResidueMap::d_over_r)
        .def_property_readonly("rep", [](const ResidueMap& m_) { return rep_to_string(m_.rep); })
        .def_readonly("maslov", &ResidueMap::maslov)
        .def_readonly("order", &ResidueMap::order)
        .def("q_at", &ResidueMap::q_at, "iq"_a)
        .def("p_at", &ResidueMap::p_at, "ip"_a)
        .def("at", &ResidueMap::at, "iq"_a, "ip"_a);

    m.def("residue_map", &diskzeta::residue_map, "expansion"_a, "resonance"_a, "n_q"_a, "n_p"_a,
          "sigma"_a, "d_over_r"_a,
          "Sample the invariant Ruelle distribution on a cell-centered grid.");

    py::class_<QuantumRecord>(m, "QuantumRecord")
        .def(py::init([](Complex k, const std::string& husimi_path, const std::string& label) {
                 return QuantumRecord{k, husimi_path, label};
             }),
             "k"_a, "husimi_path"_a = "", "label"_a = "")
        .def_readonly("k", &QuantumRecord::k)
        .def_readonly("husimi_path", &QuantumRecord::husimi_path)
        .def_readonly("label", &QuantumRecord::label);

    py::class_<diskzeta::MatchedPair>(m, "MatchedPair")
        .def_readonly("classical_k", &diskzeta::MatchedPair::classical_k)
        .def_readonly("quantum_k", &diskzeta::MatchedPair::quantum_k)
        .def_readonly("distance", &diskzeta::MatchedPair::distance);

    py::class_<diskzeta::ComparisonReport>(m, "ComparisonReport")
        .def_readonly("radius", &diskzeta::ComparisonReport::radius)
        .def_readonly("pairs", &diskzeta::ComparisonReport::pairs)
        .def_readonly("unmatched_classical", &diskzeta::ComparisonReport::unmatched_classical)
        .def_readonly("unmatched_quantum", &diskzeta::ComparisonReport::unmatched_quantum)
        .def_readonly("n_classical", &diskzeta::ComparisonReport::n_classical)
        .def_readonly("n_quantum", &diskzeta::ComparisonReport::n_quantum)
        .def_readonly("max_distance", &diskzeta::ComparisonReport::max_distance)
        .def_readonly("mean_distance", &diskzeta::ComparisonReport::mean_distance);

    m.def(
        "match_spectra",
        [](const std::vector<Complex>& classical, const std::vector<Complex>& quantum,
           double radius) {
            std::vector<QuantumRecord> q;
            q.reserve(quantum.size());
            for (Complex k : quantum) q.push_back(QuantumRecord{k, "", ""});
            return diskzeta::match_spectra(classical, q, radius);
        },
        "classical"_a, "quantum"_a, "radius"_a = 0.1,
        "Greedy injective nearest-neighbor matching of two k-plane spectra.");
    m.def("load_quantum_csv", &diskzeta::load_quantum_csv, "path"_a);
}
