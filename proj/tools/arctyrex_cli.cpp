#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "arctyrex/circuit.hpp"
#include "arctyrex/io.hpp"
#include "arctyrex/keys.hpp"
#include "arctyrex/runtime.hpp"
#include "arctyrex/schedule.hpp"

using namespace arctyrex;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kCrypto = 3, kIo = 4 };

// An error tagged with the pipeline stage and the exit code it maps to.
struct StageError : std::runtime_error {
    StageError(int code, const std::string& stage, const std::string& msg)
        : std::runtime_error("[" + stage + "] " + msg), code(code) {}
    int code;
};

int exit_code_for(const std::exception& e) {
    if (auto* s = dynamic_cast<const StageError*>(&e)) return s->code;
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ScheduleError*>(&e)) return kInvalid;
    if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e)) return kIo;
    return kCrypto;
}

// Runs fn, re-tagging library errors with the stage name.
template <typename Fn>
auto stage(const std::string& name, Fn fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(exit_code_for(e), name, e.what());
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

Circuit load_circuit(const std::string& path) {
    const std::string text = stage("io", [&] { return read_text(path); });
    return stage("parse", [&] { return parse_circuit(text); });
}

// A parameter set by name, or a JSON file with the ParamSet fields; missing
// fields keep the default set's values.
ParamSet load_params(const std::string& spec) {
    if (!std::filesystem::exists(spec)) return ParamSet::by_name(spec);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(spec));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("parameter file '" + spec + "': " + e.what());
    }
    ParamSet p = ParamSet::default_110();
    try {
        p.n = j.value("n", p.n);
        p.ring_n = j.value("ring_n", p.ring_n);
        p.lwe_noise_std = j.value("lwe_noise_std", p.lwe_noise_std);
        p.rlwe_noise_std = j.value("rlwe_noise_std", p.rlwe_noise_std);
        p.bg_bits = j.value("bg_bits", p.bg_bits);
        p.gadget_levels = j.value("gadget_levels", p.gadget_levels);
        p.ks_base_bits = j.value("ks_base_bits", p.ks_base_bits);
        p.ks_levels = j.value("ks_levels", p.ks_levels);
        if (j.contains("mu")) p.mu = Torus32::from_double(j["mu"].get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ParamError("parameter file '" + spec + "': " + e.what());
    }
    p.validate();
    return p;
}

uint32_t default_workers() {
    if (const char* env = std::getenv("ARCTYREX_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<uint32_t>(v);
    }
    return 1;
}

std::string bits_to_string(const Bits& bits) {
    if (bits.size() <= 64) return std::to_string(decode_unsigned(bits));
    std::string s = "0b";
    for (size_t i = bits.size(); i-- > 0;) s += bits[i] ? '1' : '0';
    return s;
}

double mebibytes(uint64_t bytes) { return static_cast<double>(bytes) / (1024.0 * 1024.0); }

int cmd_keygen(const std::string& params_spec, const std::string& seed_hex, const std::string& out_secret,
               const std::string& out_eval) {
    const ParamSet p = stage("params", [&] { return load_params(params_spec); });
    const Seed seed = stage("params", [&] { return seed_hex.empty() ? random_seed() : parse_seed(seed_hex); });
    const KeySet ks = stage("keygen", [&] { return keygen(p, seed); });
    stage("io", [&] {
        save_secret_key(out_secret, ks.secret);
        save_evaluation_key(out_eval, *ks.eval);
        return 0;
    });
    std::cout << "n=" << p.n << " N=" << p.ring_n << "\n"
              << "lwe_noise_std=" << p.lwe_noise_std << " rlwe_noise_std=" << p.rlwe_noise_std << "\n"
              << "Bg_bits=" << p.bg_bits << " l=" << p.gadget_levels << " ks_base_bits=" << p.ks_base_bits
              << " ks_levels=" << p.ks_levels << "\n"
              << "secret key: " << out_secret << " (" << std::filesystem::file_size(out_secret) << " bytes)\n"
              << "evaluation key: " << out_eval << " (" << mebibytes(std::filesystem::file_size(out_eval))
              << " MiB)\n";
    return kOk;
}

int cmd_encrypt(const std::string& secret_path, const std::string& circuit_path,
                const std::vector<std::string>& assigns, const std::string& seed_hex, const std::string& out) {
    const SecretKey sk = stage("io", [&] { return load_secret_key(secret_path); });
    const Circuit c = load_circuit(circuit_path);

    std::map<std::string, int64_t> values;
    for (const std::string& a : assigns) {
        const size_t eq = a.find('=');
        if (eq == std::string::npos) throw StageError(kUsage, "args", "expected name=value, got '" + a + "'");
        const std::string key = a.substr(0, eq);
        int64_t v = 0;
        try {
            size_t used = 0;
            v = std::stoll(a.substr(eq + 1), &used, 0);
            if (used != a.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw StageError(kUsage, "args", "bad integer in '" + a + "'");
        }
        if (!c.find_input(key)) throw StageError(kInvalid, "inputs", "unknown input '" + key + "'");
        values[key] = v;
    }

    Rng rng = seed_hex.empty() ? Rng::from_entropy() : Rng(parse_seed(seed_hex), 1);
    CiphertextBundle bundle;
    bundle.param_hash = sk.params.hash();
    bundle.dimension = sk.params.n;
    for (const WireGroup& grp : c.inputs) {
        auto it = values.find(grp.name);
        if (it == values.end()) throw StageError(kInvalid, "inputs", "input '" + grp.name + "' not assigned");
        const Bits bits = stage("inputs", [&] {
            try {
                return encode_integer(it->second, grp.width());
            } catch (const DimensionError& e) {
                throw StageError(kInvalid, "inputs", "input '" + grp.name + "': " + e.what());
            }
        });
        for (size_t i = 0; i < grp.width(); ++i) bundle.wires[grp.wires[i]] = encrypt_bit(sk, bits[i], rng);
    }
    stage("io", [&] {
        save_bundle(out, bundle);
        return 0;
    });
    std::cout << "encrypted " << bundle.wires.size() << " bits to " << out << "\n";
    return kOk;
}

int cmd_run(const std::string& eval_path, const std::string& circuit_path, const std::string& in_path,
            uint32_t workers, const std::string& out_path, const std::string& metrics_path) {
    const Circuit c = load_circuit(circuit_path);
    auto ek = stage("io", [&] { return load_evaluation_key(eval_path); });
    const CiphertextBundle in = stage("io", [&] { return load_bundle(in_path); });
    stage("params", [&] {
        require_params(in, ek->params);
        return 0;
    });

    NamedCiphertexts inputs;
    for (const WireGroup& grp : c.inputs) {
        auto& cts = inputs[grp.name];
        for (WireId w : grp.wires) {
            auto it = in.wires.find(w);
            if (it == in.wires.end()) {
                throw StageError(kInvalid, "inputs", "bundle lacks input wire " + std::to_string(w));
            }
            cts.push_back(it->second);
        }
    }

    const Schedule s = stage("schedule", [&] { return build_schedule(c, workers); });
    const EvalResult r = stage("evaluate", [&] { return evaluate(c, s, inputs, *ek); });

    CiphertextBundle out;
    out.param_hash = ek->params.hash();
    out.dimension = ek->params.n;
    for (const WireGroup& grp : c.outputs) {
        const auto& cts = r.outputs.at(grp.name);
        for (size_t i = 0; i < grp.width(); ++i) out.wires[grp.wires[i]] = cts[i];
    }
    stage("io", [&] {
        save_bundle(out_path, out);
        if (!metrics_path.empty()) write_text(metrics_path, r.metrics.to_json() + "\n");
        return 0;
    });
    const Metrics& m = r.metrics;
    std::cout << "gates=" << m.gates << " waves=" << s.waves.size() << " workers=" << workers
              << " bootstraps=" << m.counters.bootstraps << " ntt_forward=" << m.counters.ntt_forward
              << " ntt_inverse=" << m.counters.ntt_inverse << " wall=" << m.wall_seconds << "s"
              << " gates/s=" << m.gates_per_second() << "\n";
    return kOk;
}

int cmd_decrypt(const std::string& secret_path, const std::string& circuit_path, const std::string& in_path) {
    const SecretKey sk = stage("io", [&] { return load_secret_key(secret_path); });
    const Circuit c = load_circuit(circuit_path);
    const CiphertextBundle in = stage("io", [&] { return load_bundle(in_path); });
    stage("params", [&] {
        require_params(in, sk.params);
        return 0;
    });

    // Print every group the bundle fully covers: outputs after `run`, inputs
    // straight after `encrypt`.
    auto print_groups = [&](const std::vector<WireGroup>& groups) {
        size_t printed = 0;
        for (const WireGroup& grp : groups) {
            Bits bits;
            for (WireId w : grp.wires) {
                auto it = in.wires.find(w);
                if (it == in.wires.end()) break;
                bits.push_back(decrypt_bit(sk, it->second) ? 1 : 0);
            }
            if (bits.size() != grp.width()) continue;
            std::cout << grp.name << "=" << bits_to_string(bits) << "\n";
            ++printed;
        }
        return printed;
    };
    size_t printed = print_groups(c.outputs);
    if (printed == 0) printed = print_groups(c.inputs);
    if (printed == 0) throw StageError(kInvalid, "decrypt", "bundle covers no input or output group");
    return kOk;
}

int cmd_analyze(const std::string& circuit_path, uint32_t workers, const std::string& csv_path,
                const std::string& schedule_csv_path) {
    const Circuit c = load_circuit(circuit_path);
    const TopologyReport t = topology_stats(c);
    const Schedule s = stage("schedule", [&] { return build_schedule(c, workers); });
    const CostModel model = CostModel::standard();
    const LoadReport load = estimate_load(s, model);

    size_t widest = 0;
    for (size_t w : t.level_widths) widest = std::max(widest, w);
    uint64_t cost = 0;
    for (const auto& [kind, count] : t.gate_histogram) cost += model.of(kind) * count;

    std::cout << "total gates: " << t.total_gates << "\n"
              << "bootstrapped gates: " << t.bootstrapped_gates << "\n"
              << "levels: " << t.critical_path << "\n"
              << "widest level: " << widest << "\n"
              << "estimated cost units: " << cost << "\n"
              << "histogram:";
    for (const auto& [kind, count] : t.gate_histogram) std::cout << " " << name(kind) << "=" << count;
    std::cout << "\n";

    std::vector<uint64_t> per_worker(workers, 0);
    for (const auto& wave : load.per_wave) {
        for (uint32_t w = 0; w < workers; ++w) per_worker[w] += wave[w];
    }
    std::cout << "split over " << workers << " workers (cost units):";
    for (uint64_t v : per_worker) std::cout << " " << v;
    std::cout << "\nworst per-wave imbalance: " << load.worst_imbalance() << "\n";

    std::ostringstream csv;
    csv << "level,width\n";
    for (size_t i = 0; i < t.level_widths.size(); ++i) csv << i << "," << t.level_widths[i] << "\n";
    stage("io", [&] {
        if (!csv_path.empty()) write_text(csv_path, csv.str());
        if (!schedule_csv_path.empty()) write_text(schedule_csv_path, schedule_csv(s, model));
        return 0;
    });
    if (csv_path.empty()) std::cout << csv.str();
    return kOk;
}

int cmd_gen(const std::string& fixture, size_t width, size_t depth, size_t length, size_t gates,
            const std::string& op, const std::string& out) {
    const Circuit c = stage("gen", [&]() -> Circuit {
        if (fixture == "adder") return gen_adder(width);
        if (fixture == "mux-tree") return gen_mux_tree(depth);
        if (fixture == "not-chain") return gen_not_chain(length);
        if (fixture == "flat") {
            const auto kind = gate_kind_from_name(op);
            if (!kind) throw StageError(kUsage, "args", "unknown opcode '" + op + "'");
            return gen_flat(gates, *kind);
        }
        throw StageError(kUsage, "args", "unknown fixture '" + fixture + "' (adder, mux-tree, not-chain, flat)");
    });
    const std::string text = serialize_circuit(c);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        stage("io", [&] {
            write_text(out, text);
            return 0;
        });
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Encrypted Boolean circuit evaluation"};
    app.require_subcommand(1);

    std::string params_spec = "default", seed_hex, out_secret, out_eval;
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate secret and evaluation keys");
    keygen_cmd->add_option("--params", params_spec, "Parameter set name (default, 110, 128) or JSON file");
    keygen_cmd->add_option("--seed", seed_hex, "Hex seed for reproducible keys");
    keygen_cmd->add_option("--out-secret", out_secret, "Secret key output path")->required();
    keygen_cmd->add_option("--out-eval", out_eval, "Evaluation key output path")->required();

    std::string secret_path, circuit_path, out_path, in_path, eval_path, metrics_path, csv_path, schedule_csv_path;
    std::vector<std::string> assigns;
    auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt circuit inputs into a bundle");
    encrypt_cmd->add_option("--secret", secret_path)->required();
    encrypt_cmd->add_option("--circuit", circuit_path)->required();
    encrypt_cmd->add_option("--assign", assigns, "name=value, repeatable")->required();
    encrypt_cmd->add_option("--seed", seed_hex, "Hex seed for reproducible encryption");
    encrypt_cmd->add_option("--out", out_path)->required();

    uint32_t workers = default_workers();
    auto* run_cmd = app.add_subcommand("run", "Evaluate a circuit on an encrypted bundle");
    run_cmd->add_option("--eval", eval_path)->required();
    run_cmd->add_option("--circuit", circuit_path)->required();
    run_cmd->add_option("--in", in_path)->required();
    run_cmd->add_option("--workers", workers, "Worker threads (default $ARCTYREX_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", out_path)->required();
    run_cmd->add_option("--metrics", metrics_path, "Write the metrics JSON report here");

    auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a bundle and print named groups");
    decrypt_cmd->add_option("--secret", secret_path)->required();
    decrypt_cmd->add_option("--circuit", circuit_path)->required();
    decrypt_cmd->add_option("--in", in_path)->required();

    auto* analyze_cmd = app.add_subcommand("analyze", "Topology and schedule statistics");
    analyze_cmd->add_option("--circuit", circuit_path)->required();
    analyze_cmd->add_option("--workers", workers)->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--csv", csv_path, "Write level,width CSV here");
    analyze_cmd->add_option("--schedule-csv", schedule_csv_path, "Write the batch schedule CSV here");

    std::string fixture, op = "AND";
    size_t width = 8, depth = 3, length = 10, gates = 10000;
    auto* gen_cmd = app.add_subcommand("gen", "Write a fixture circuit");
    gen_cmd->add_option("--fixture", fixture, "adder, mux-tree, not-chain or flat")->required();
    gen_cmd->add_option("--width", width, "Adder width");
    gen_cmd->add_option("--depth", depth, "MUX tree depth");
    gen_cmd->add_option("--length", length, "NOT chain length");
    gen_cmd->add_option("--gates", gates, "Flat sheet gate count");
    gen_cmd->add_option("--op", op, "Flat sheet opcode");
    gen_cmd->add_option("--out", out_path, "Output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*keygen_cmd) return cmd_keygen(params_spec, seed_hex, out_secret, out_eval);
        if (*encrypt_cmd) return cmd_encrypt(secret_path, circuit_path, assigns, seed_hex, out_path);
        if (*run_cmd) return cmd_run(eval_path, circuit_path, in_path, workers, out_path, metrics_path);
        if (*decrypt_cmd) return cmd_decrypt(secret_path, circuit_path, in_path);
        if (*analyze_cmd) return cmd_analyze(circuit_path, workers, csv_path, schedule_csv_path);
        if (*gen_cmd) return cmd_gen(fixture, width, depth, length, gates, op, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kUsage;
}
