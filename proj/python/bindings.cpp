#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twosource/color_table.hpp"
#include "twosource/errors.hpp"
#include "twosource/estimate.hpp"
#include "twosource/pipeline.hpp"
#include "twosource/regularity.hpp"
#include "twosource/schedule.hpp"
#include "twosource/sources.hpp"

namespace py = pybind11;
using namespace twosource;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Rational rational(const std::string& text) { return parse_rational(text); }

py::object found_to_py(const FoundTable& found) {
  nlohmann::json j;
  j["table"] = found.table.serialize();
  j["fingerprint"] = found.table.fingerprint();
  j["candidate_seed"] = found.candidate_seed;
  j["candidates_tried"] = found.candidates_tried;
  j["report"] = report_to_json(found.report);
  return to_py(j);
}

}  // namespace

PYBIND11_MODULE(_twosource, m) {
  m.doc() = "Bindings for the twosource C++ core. Bit strings are '0'/'1' text; rationals are strings like '1/2'.";

  static py::exception<InfeasibleError> infeasible(m, "InfeasibleError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InfeasibleError& e) {
      infeasible(e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("seeded_source", [](std::uint64_t seed, std::size_t length) { return seeded_source(seed, length).to_string(); },
        py::arg("seed"), py::arg("length"));
  m.def("zero_dilute", [](const std::string& bits, std::size_t period) {
    return zero_dilute(load_bits(bits), period).to_string();
  }, py::arg("bits"), py::arg("period"));
  m.def("generate", [](const std::string& spec) { return generate_from_spec(spec).to_string(); }, py::arg("spec"));

  m.def("schedule", [](const std::string& tau, long a, std::size_t count, std::optional<std::uint64_t> toy_max_n) {
    const SplitParams params = derive_params(rational(tau), BigInt(a));
    return to_py(schedule_to_json(toy_max_n ? capped_cut_points(params, count, BigInt(*toy_max_n))
                                            : cut_points(params, count)));
  }, py::arg("tau"), py::arg("a") = 2, py::arg("count") = 10, py::arg("toy_max_n") = py::none());

  m.def("khat", [](const std::string& bits) {
    const Khat k = khat(load_bits(bits));
    return py::make_tuple(k.raw_bits, k.corrected_bits);
  }, py::arg("bits"), "(raw_bits, corrected_bits) of the zlib level-9 estimate");
  m.def("rate_profile", [](const std::string& bits, const std::vector<std::size_t>& checkpoints) {
    std::vector<py::tuple> out;
    for (const auto& c : rate_profile(load_bits(bits), checkpoints).checkpoints) {
      out.push_back(py::make_tuple(c.prefix_len, c.khat_bits, c.ratio));
    }
    return out;
  }, py::arg("bits"), py::arg("checkpoints"));
  m.def("dependency", [](const std::string& x, const std::string& y, std::size_t n, std::size_t m_len) {
    return dependency_profile(load_bits(x), load_bits(y), n, m_len).value;
  }, py::arg("x"), py::arg("y"), py::arg("n"), py::arg("m"));
  m.def("dependency_threshold", &default_dependency_threshold, py::arg("n"), py::arg("m"));
  m.def("compressor_version", &compressor_version);

  m.def("random_table", [](unsigned n, unsigned m_len, std::uint64_t seed) {
    return random_table(n, m_len, seed).serialize();
  }, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("check_weak", [](const std::string& table, const std::string& sigma, const std::string& c) {
    return to_py(report_to_json(check_weak_regularity(parse_table(table), rational(sigma), rational(c))));
  }, py::arg("table"), py::arg("sigma"), py::arg("c") = "2");
  m.def("check_sampled", [](const std::string& table, const std::string& sigma, const std::string& c,
                            std::uint64_t trials, std::uint64_t seed) {
    return to_py(report_to_json(check_regularity_sampled(parse_table(table), rational(sigma), rational(c), trials, seed)));
  }, py::arg("table"), py::arg("sigma"), py::arg("c") = "2", py::arg("trials") = 2000, py::arg("seed") = 0);
  m.def("find_regular", [](unsigned n, unsigned m_len, const std::string& sigma, const std::string& c,
                           std::uint64_t seed, std::uint64_t budget) {
    SearchOptions options;
    options.budget = budget;
    return found_to_py(find_regular(n, m_len, rational(sigma), rational(c), seed, options));
  }, py::arg("n"), py::arg("m"), py::arg("sigma"), py::arg("c") = "2", py::arg("seed") = 0, py::arg("budget") = 10000);
  m.def("chernoff_feasible", [](unsigned n, unsigned m_len, const std::string& sigma) {
    const auto r = chernoff_feasible(n, m_len, rational(sigma));
    return py::make_tuple(r.holds, r.lhs, r.rhs);
  }, py::arg("n"), py::arg("m"), py::arg("sigma"));

  m.def("required_prefix", [](const std::string& tau, long a, std::size_t out_len, std::optional<std::uint64_t> toy_max_n) {
    const auto config = plan(rational(tau), BigInt(a), out_len, toy_max_n);
    const auto need = required_prefix(config, out_len);
    return py::make_tuple(need.blocks, need.prefix_bits.str());
  }, py::arg("tau"), py::arg("a"), py::arg("out_len"), py::arg("toy_max_n") = py::none());
  m.def("extract", [](const std::string& tau, long a, const std::string& x, const std::string& y,
                      std::size_t out_len, std::optional<std::uint64_t> toy_max_n, std::uint64_t seed) {
    const auto config = plan(rational(tau), BigInt(a), out_len, toy_max_n, seed);
    OracleSource xs(load_bits(x));
    OracleSource ys(load_bits(y));
    const RunResult r = run(config, xs, ys, out_len);
    nlohmann::json j;
    j["z"] = r.z.to_string();
    j["trace"] = trace_to_json(r.trace);
    return to_py(j);
  }, py::arg("tau"), py::arg("a"), py::arg("x"), py::arg("y"), py::arg("out_len"), py::arg("toy_max_n") = py::none(),
     py::arg("seed") = 0);
}
