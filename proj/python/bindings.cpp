#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lmoments/arith.hpp"
#include "lmoments/errors.hpp"
#include "lmoments/experiments.hpp"
#include "lmoments/lfunction.hpp"
#include "lmoments/mollifier.hpp"
#include "lmoments/verifier.hpp"

namespace py = pybind11;
using namespace lmoments;

namespace {

py::array_t<cplx> to_array(const std::vector<cplx>& v) {
  return py::array_t<cplx>(static_cast<py::ssize_t>(v.size()), v.data());
}

CentralValueTable table_for(const CharacterGroup& g, const std::string& method, double tail) {
  AfeParams p;
  p.tail = tail;
  if (method == "afe") return central_values_afe(g, p);
  if (method == "direct") return central_values_direct(g, p);
  if (method == "oracle") return central_values_oracle(g);
  throw InputError("method must be afe, direct or oracle");
}

py::dict schedule_dict(const EllSchedule& s, const PrimeBlocks& b) {
  py::dict d;
  d["ells"] = s.ells;
  d["R"] = s.R;
  d["cuts"] = b.cuts;
  d["blocks"] = b.blocks;
  d["valid_decreasing"] = s.valid_decreasing;
  d["valid_sumbound"] = s.valid_sumbound;
  d["degenerate"] = s.degenerate;
  d["stalled"] = s.stalled;
  d["any_empty_block"] = b.any_empty;
  return d;
}

MollifierConfig mollifier_config(const std::string& mode, std::vector<double> cuts,
                                 std::vector<int> ells, int N, int M) {
  MollifierConfig m;
  m.mode = mode;
  m.cuts = std::move(cuts);
  m.ells = std::move(ells);
  m.N_param = N;
  m.M_param = M;
  return m;
}

py::dict row_dict(const MomentRow& r) {
  py::dict d;
  d["q"] = r.q;
  d["k"] = r.k;
  d["moment"] = r.moment;
  d["normalizer"] = r.normalizer;
  d["ratio"] = r.ratio;
  d["flagged"] = r.flagged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Central values, mollifiers and negative moments of Dirichlet L-functions.";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("sieve_primes", &sieve_primes, py::arg("limit"));
  m.def("is_prime", &is_prime, py::arg("n"));
  m.def("factorize", [](u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (const auto& pp : factorize(n).factors) out.emplace_back(pp.prime, pp.exponent);
    return out;
  }, py::arg("n"));
  m.def("big_omega", &big_omega, py::arg("n"));
  m.def("w_value", &w_value, py::arg("n"));
  m.def("primitive_root", &primitive_root, py::arg("q"));

  py::class_<CharacterGroup>(m, "CharacterGroup")
      .def(py::init(&make_group), py::arg("q"))
      .def_property_readonly("modulus", &CharacterGroup::modulus)
      .def_property_readonly("phi", &CharacterGroup::phi)
      .def_property_readonly("phi_star", &CharacterGroup::phi_star)
      .def_property_readonly("generator", [](const CharacterGroup& g) { return g.index().generator(); })
      .def("__call__", [](const CharacterGroup& g, u32 a, u64 n) { return g({a}, n); },
           py::arg("a"), py::arg("n"))
      .def("ind", [](const CharacterGroup& g, u64 n) { return g.index().ind(n); }, py::arg("n"))
      .def("parity", [](const CharacterGroup& g, u32 a) { return g.parity({a}); }, py::arg("a"))
      .def("conjugate", [](const CharacterGroup& g, u32 a) { return g.conjugate({a}).a; },
           py::arg("a"))
      .def("orthogonality_sum", [](const CharacterGroup& g, u64 n) {
        return orthogonality_sum(g, n).value;
      }, py::arg("n"))
      .def("char_sums", [](const CharacterGroup& g, const std::vector<u64>& n,
                           const std::vector<cplx>& c) {
        if (n.size() != c.size()) throw InputError("n and c differ in length");
        std::vector<Term> terms;
        for (std::size_t i = 0; i < n.size(); ++i) terms.push_back({n[i], c[i]});
        return to_array(batch_char_sums(g, terms));
      }, py::arg("n"), py::arg("c"), "sum_i c_i chi_a(n_i) for every a");

  m.def("gauss_sums", [](u64 q) { return to_array(gauss_sums(make_group(q)).tau); },
        py::arg("q"));
  m.def("central_values", [](u64 q, const std::string& method, double tail) {
    const auto g = make_group(q);
    py::gil_scoped_release release;
    auto t = table_for(g, method, tail);
    py::gil_scoped_acquire acquire;
    return to_array(t.values);
  }, py::arg("q"), py::arg("method") = "afe", py::arg("tail") = 40.0,
     "L(1/2, chi_a) indexed by a; entry 0 is unused");
  m.def("hurwitz_oracle", [](u64 q, u32 a) { return hurwitz_oracle(make_group(q), {a}); },
        py::arg("q"), py::arg("a"));
  m.def("functional_equation_residual", [](u64 q, u32 a, cplx value) {
    return functional_equation_residual(make_group(q), {a}, value);
  }, py::arg("q"), py::arg("a"), py::arg("value"));

  m.def("moment", [](u64 q, double k, bool skip_zeros, double zero_threshold) {
    const auto g = make_group(q);
    const auto t = central_values_afe(g);
    return row_dict(compute_moment(g, t, k, skip_zeros ? ZeroPolicy::skip : ZeroPolicy::abort,
                                   zero_threshold));
  }, py::arg("q"), py::arg("k"), py::arg("skip_zeros") = false, py::arg("zero_threshold") = 1e-10);

  m.def("truncated_exp", [](int ell, cplx x) { return truncated_exp(ell, x); }, py::arg("ell"),
        py::arg("x"));
  m.def("expand_coeffs", [](const std::vector<u64>& block, int ell, double alpha) {
    std::vector<std::pair<u64, double>> out;
    for (const auto& c : expand_coeffs(block, ell, alpha)) out.emplace_back(c.n, c.coeff);
    return out;
  }, py::arg("block"), py::arg("ell"), py::arg("alpha"));
  m.def("schedule", [](double q, const std::string& mode, std::vector<double> cuts,
                       std::vector<int> ells, int N, int M) {
    if (mode == "paper") {
      const auto s = build_schedule(N, M, q);
      return schedule_dict(s, build_blocks(s));
    }
    const auto s = relaxed_schedule(std::move(ells), q);
    return schedule_dict(s, build_blocks(s, cuts));
  }, py::arg("q"), py::arg("mode") = "relaxed", py::arg("cuts") = std::vector<double>{31, 97},
     py::arg("ells") = std::vector<int>{8, 6}, py::arg("N") = 2, py::arg("M") = 1);

  m.def("_verify_json", [](u64 q, double k, const std::string& mode, std::vector<double> cuts,
                           std::vector<int> ells, int N, int M, double ctol, u64 seed) {
    const auto cfg = mollifier_config(mode, std::move(cuts), std::move(ells), N, M);
    const auto g = make_group(q);
    const auto t = central_values_afe(g);
    const auto s = make_schedule(cfg, q);
    const auto b = make_blocks(cfg, s);
    InstanceDescriptor d;
    d.mode = mode;
    d.N_param = N;
    d.M_param = M;
    d.cuts = b.cuts;
    d.ells = s.ells;
    VerifyOptions opts;
    opts.ctol = ctol;
    opts.seed = seed;
    return run_verification(g, t, s, b, k, d, opts).to_json().dump();
  });

  m.def("_scan_json", [](std::vector<u64> qs, std::vector<double> ks, const std::string& mode,
                         std::vector<double> cuts, std::vector<int> ells, int N, int M,
                         unsigned workers) {
    ScanConfig cfg;
    cfg.mollifier = mollifier_config(mode, std::move(cuts), std::move(ells), N, M);
    cfg.workers = workers;
    ScanResult r;
    {
      py::gil_scoped_release release;
      r = scan(std::move(qs), std::move(ks), cfg);
    }
    return py::make_tuple(moments_to_json(r.moments), propositions_to_json(r.propositions));
  });
}
