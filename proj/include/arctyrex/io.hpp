#pragma once

// Binary files, all little-endian:
//
//   "ARFX" | u16 version | u16 kind | body
//
// Key and single-ciphertext bodies start with the parameter block
// (u32 n, u32 N, f64 lwe_noise_std, f64 rlwe_noise_std, u32 Bg_bits, u32 l,
// u32 ks_base_bits, u32 ks_levels, u32 mu). Bundles carry only the parameter
// hash followed by wire-sorted records. An LWE ciphertext is its mask words
// then its body word.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "arctyrex/circuit.hpp"
#include "arctyrex/keys.hpp"

namespace arctyrex {

inline constexpr uint16_t kFormatVersion = 1;

enum class FileKind : uint16_t {
    SecretKey = 1,
    EvaluationKey = 2,
    Bundle = 3,
    Ciphertext = 4,
};

/// Ciphertexts keyed by wire id, all under one parameter set.
struct CiphertextBundle {
    uint64_t param_hash = 0;
    uint32_t dimension = 0;
    std::map<WireId, LweCiphertext> wires;
};

// Stream forms throw FormatError on malformed input.
void write_secret_key(std::ostream& out, const SecretKey& sk);
SecretKey read_secret_key(std::istream& in);
void write_evaluation_key(std::ostream& out, const EvaluationKey& ek);
std::shared_ptr<const EvaluationKey> read_evaluation_key(std::istream& in);
void write_bundle(std::ostream& out, const CiphertextBundle& b);
CiphertextBundle read_bundle(std::istream& in);
void write_ciphertext(std::ostream& out, const ParamSet& p, const LweCiphertext& ct);
LweCiphertext read_ciphertext(std::istream& in, ParamSet* params = nullptr);

// Path forms add IoError when the file cannot be opened or written.
void save_secret_key(const std::string& path, const SecretKey& sk);
SecretKey load_secret_key(const std::string& path);
void save_evaluation_key(const std::string& path, const EvaluationKey& ek);
std::shared_ptr<const EvaluationKey> load_evaluation_key(const std::string& path);
void save_bundle(const std::string& path, const CiphertextBundle& b);
CiphertextBundle load_bundle(const std::string& path);

/// Throws ParamError when the bundle was made under other parameters.
void require_params(const CiphertextBundle& b, const ParamSet& p);

}  // namespace arctyrex
