#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arctyrex/bootstrap.hpp"
#include "arctyrex/circuit.hpp"
#include "arctyrex/counters.hpp"
#include "arctyrex/gates.hpp"
#include "arctyrex/io.hpp"
#include "arctyrex/keys.hpp"
#include "arctyrex/runtime.hpp"
#include "arctyrex/schedule.hpp"

namespace py = pybind11;
using namespace arctyrex;

namespace {

py::dict counters_dict(const OpCounters& c) {
    py::dict d;
    d["bootstraps"] = c.bootstraps;
    d["keyswitches"] = c.keyswitches;
    d["external_products"] = c.external_products;
    d["ntt_forward"] = c.ntt_forward;
    d["ntt_inverse"] = c.ntt_inverse;
    return d;
}

std::vector<uint32_t> raw_words(std::span<const Torus32> v) {
    std::vector<uint32_t> out;
    out.reserve(v.size());
    for (Torus32 t : v) out.push_back(t.raw);
    return out;
}

TorusPolynomial torus_poly(const std::vector<uint32_t>& raw) {
    TorusPolynomial p(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) p[i] = Torus32(raw[i]);
    return p;
}

IntPolynomial int_poly(const std::vector<int32_t>& v) {
    IntPolynomial p(v.size());
    for (size_t i = 0; i < v.size(); ++i) p[i] = v[i];
    return p;
}

}  // namespace

PYBIND11_MODULE(arctyrex, m) {
    m.doc() = "Encrypted Boolean circuit evaluation with gate bootstrapping";

    py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", m.attr("Error"));
    py::register_exception<ParamError>(m, "ParamError", m.attr("Error"));
    py::register_exception<DimensionError>(m, "DimensionError", m.attr("Error"));
    py::register_exception<ScheduleError>(m, "ScheduleError", m.attr("Error"));
    py::register_exception<FormatError>(m, "FormatError", m.attr("Error"));
    py::register_exception<IoError>(m, "IoError", m.attr("Error"));
    py::register_exception<RuntimeError>(m, "RuntimeError", m.attr("Error"));

    py::enum_<GateKind>(m, "GateKind")
        .value("AND", GateKind::And)
        .value("OR", GateKind::Or)
        .value("NAND", GateKind::Nand)
        .value("NOR", GateKind::Nor)
        .value("XOR", GateKind::Xor)
        .value("XNOR", GateKind::Xnor)
        .value("NOT", GateKind::Not)
        .value("MUX", GateKind::Mux)
        .value("CONST0", GateKind::Const0)
        .value("CONST1", GateKind::Const1)
        .value("COPY", GateKind::Copy);
    m.def("arity", [](GateKind k) { return arity(k); });
    m.def("evaluate_plain", &evaluate_plain, py::arg("kind"), py::arg("x") = false, py::arg("y") = false,
          py::arg("z") = false);

    py::class_<ParamSet>(m, "ParamSet")
        .def_static("default_110", &ParamSet::default_110)
        .def_static("security_128", &ParamSet::security_128)
        .def_static("by_name", &ParamSet::by_name)
        .def_readwrite("n", &ParamSet::n)
        .def_readwrite("ring_n", &ParamSet::ring_n)
        .def_readwrite("lwe_noise_std", &ParamSet::lwe_noise_std)
        .def_readwrite("rlwe_noise_std", &ParamSet::rlwe_noise_std)
        .def_readwrite("bg_bits", &ParamSet::bg_bits)
        .def_readwrite("gadget_levels", &ParamSet::gadget_levels)
        .def_readwrite("ks_base_bits", &ParamSet::ks_base_bits)
        .def_readwrite("ks_levels", &ParamSet::ks_levels)
        .def_property(
            "mu", [](const ParamSet& p) { return p.mu.raw; }, [](ParamSet& p, uint32_t raw) { p.mu = Torus32(raw); })
        .def("validate", &ParamSet::validate)
        .def("hash", &ParamSet::hash)
        .def("__repr__", [](const ParamSet& p) { return "ParamSet(" + describe(p) + ")"; });

    py::class_<Rng>(m, "Rng").def(py::init([](const std::string& seed, uint64_t stream) {
                                       return Rng(parse_seed(seed), stream);
                                   }),
                                   py::arg("seed"), py::arg("stream") = 0);

    py::class_<LweCiphertext>(m, "LweCiphertext")
        .def_property_readonly("dimension", &LweCiphertext::dimension)
        .def_property_readonly("a", [](const LweCiphertext& c) { return raw_words(c.a); })
        .def_property_readonly("b", [](const LweCiphertext& c) { return c.b.raw; })
        .def_static(
            "trivial", [](size_t dim, uint32_t raw) { return LweCiphertext::trivial(dim, Torus32(raw)); })
        .def(py::self == py::self);

    py::class_<SecretKey>(m, "SecretKey")
        .def_readonly("params", &SecretKey::params)
        .def_property_readonly("lwe_bits", [](const SecretKey& s) { return s.lwe.bits; })
        .def("save", [](const SecretKey& s, const std::string& path) { save_secret_key(path, s); })
        .def_static("load", &load_secret_key);

    py::class_<EvaluationKey, std::shared_ptr<EvaluationKey>>(m, "EvaluationKey")
        .def_readonly("params", &EvaluationKey::params)
        .def_property_readonly("bootstrapping_key_length",
                               [](const EvaluationKey& e) { return e.bootstrapping_key.size(); })
        .def("save", [](const EvaluationKey& e, const std::string& path) { save_evaluation_key(path, e); })
        .def_static("load", [](const std::string& path) {
            return std::const_pointer_cast<EvaluationKey>(load_evaluation_key(path));
        });

    m.def(
        "keygen",
        [](const ParamSet& p, const std::string& seed) {
            KeySet ks;
            {
                py::gil_scoped_release release;
                ks = keygen(p, parse_seed(seed));
            }
            return py::make_tuple(ks.secret, std::const_pointer_cast<EvaluationKey>(ks.eval));
        },
        py::arg("params"), py::arg("seed"), "Returns (secret_key, evaluation_key).");
    m.def("encrypt_bit", &encrypt_bit, py::arg("secret"), py::arg("bit"), py::arg("rng"));
    m.def("decrypt_bit", &decrypt_bit, py::arg("secret"), py::arg("ct"));
    m.def(
        "phase", [](const SecretKey& sk, const LweCiphertext& ct) { return phase(sk.lwe, ct).raw; },
        "Phase b - <a, s> as a raw 32-bit torus value.");

    m.def(
        "eval_gate",
        [](GateKind k, const std::vector<LweCiphertext>& inputs, const EvaluationKey& ek) {
            std::vector<const LweCiphertext*> ptrs;
            for (const auto& c : inputs) ptrs.push_back(&c);
            py::gil_scoped_release release;
            return eval_gate(k, ptrs, ek);
        },
        py::arg("kind"), py::arg("inputs"), py::arg("eval_key"));
    m.def("gate_bootstrap", &gate_bootstrap, py::call_guard<py::gil_scoped_release>());
    m.def("counters", [] { return counters_dict(thread_counters()); },
          "Operation counters of the calling thread.");

    m.def(
        "negacyclic_mul",
        [](const std::vector<int32_t>& p, const std::vector<uint32_t>& q) {
            const NttTables t(p.size());
            return raw_words(negacyclic_mul(int_poly(p), torus_poly(q), t).coeffs());
        },
        "Product mod X^N + 1 of a small-integer and a torus polynomial, via the NTT.");
    m.def("negacyclic_mul_naive", [](const std::vector<int32_t>& p, const std::vector<uint32_t>& q) {
        return raw_words(negacyclic_mul_naive(int_poly(p), torus_poly(q)).coeffs());
    });
    m.def("ntt_roundtrip", [](const std::vector<uint64_t>& v) {
        const NttTables t(v.size());
        return ntt_inverse(ntt_forward(v, t), t);
    });

    py::class_<WireGroup>(m, "WireGroup")
        .def_readonly("name", &WireGroup::name)
        .def_readonly("wires", &WireGroup::wires)
        .def_property_readonly("width", &WireGroup::width);
    py::class_<Gate>(m, "Gate")
        .def_readonly("id", &Gate::id)
        .def_readonly("kind", &Gate::kind)
        .def_readonly("operands", &Gate::operands);
    py::class_<Circuit>(m, "Circuit")
        .def_readonly("inputs", &Circuit::inputs)
        .def_readonly("outputs", &Circuit::outputs)
        .def_readonly("gates", &Circuit::gates)
        .def_property_readonly("wire_count", &Circuit::wire_count)
        .def_static("parse", [](const std::string& text) { return parse_circuit(text); })
        .def("serialize", [](const Circuit& c) { return serialize_circuit(c); })
        .def("validate", [](const Circuit& c) {
            std::vector<std::string> out;
            for (const auto& d : validate(c)) out.push_back(d.to_string());
            return out;
        })
        .def(py::self == py::self);
    m.def("gen_adder", &gen_adder);
    m.def("gen_mux_tree", &gen_mux_tree);
    m.def("gen_not_chain", &gen_not_chain);
    m.def("gen_flat", &gen_flat);
    m.def("simulate_plain", &simulate_plain);
    m.def("encode_integer", &encode_integer);
    m.def("decode_unsigned", &decode_unsigned);
    m.def("topology_stats", [](const Circuit& c) {
        const TopologyReport r = topology_stats(c);
        py::dict d;
        d["level_widths"] = r.level_widths;
        d["critical_path"] = r.critical_path;
        d["total_gates"] = r.total_gates;
        d["bootstrapped_gates"] = r.bootstrapped_gates;
        py::dict hist;
        for (const auto& [k, n] : r.gate_histogram) hist[py::str(std::string(name(k)))] = n;
        d["gate_histogram"] = hist;
        return d;
    });

    m.def("partition_waves", [](const Circuit& c) { return partition_waves(c).waves; },
          "Gate indices grouped by wave.");
    py::class_<Batch>(m, "Batch")
        .def_property_readonly("opcode", &Batch::opcode)
        .def_property_readonly("gates", &Batch::gates)
        .def_property_readonly("worker", &Batch::worker)
        .def_property_readonly("wave", &Batch::wave);
    py::class_<Schedule>(m, "Schedule")
        .def_readonly("worker_count", &Schedule::worker_count)
        .def_readonly("waves", &Schedule::waves)
        .def_property_readonly("gate_count", &Schedule::gate_count)
        .def("csv", [](const Schedule& s) { return schedule_csv(s, CostModel::standard()); })
        .def("load", [](const Schedule& s) {
            const LoadReport r = estimate_load(s, CostModel::standard());
            return py::make_tuple(r.per_wave, r.imbalance);
        }, "(per-wave per-worker cost units, per-wave max/min ratio)");
    m.def("build_schedule", &build_schedule, py::arg("circuit"), py::arg("workers"));

    m.def(
        "evaluate",
        [](const Circuit& c, const Schedule& s, const NamedCiphertexts& inputs, const EvaluationKey& ek) {
            EvalResult r;
            {
                py::gil_scoped_release release;
                r = evaluate(c, s, inputs, ek);
            }
            return py::make_tuple(r.outputs, r.metrics.to_json());
        },
        py::arg("circuit"), py::arg("schedule"), py::arg("inputs"), py::arg("eval_key"),
        "Returns (outputs by group name, metrics JSON text).");
}
