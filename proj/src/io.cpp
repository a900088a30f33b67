#include "arctyrex/io.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "arctyrex/error.hpp"

namespace arctyrex {

namespace {

constexpr char kMagic[4] = {'A', 'R', 'F', 'X'};

// Vectors longer than this are treated as corrupt rather than allocated.
constexpr uint64_t kMaxElements = uint64_t{1} << 32;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void u16(uint16_t v) { bytes(v, 2); }
    void u32(uint32_t v) { bytes(v, 4); }
    void u64(uint64_t v) { bytes(v, 8); }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

    void header(FileKind kind) {
        out_.write(kMagic, 4);
        u16(kFormatVersion);
        u16(static_cast<uint16_t>(kind));
    }

    void params(const ParamSet& p) {
        u32(p.n);
        u32(p.ring_n);
        f64(p.lwe_noise_std);
        f64(p.rlwe_noise_std);
        u32(p.bg_bits);
        u32(p.gadget_levels);
        u32(p.ks_base_bits);
        u32(p.ks_levels);
        u32(p.mu.raw);
    }

    void torus(std::span<const Torus32> v) {
        for (Torus32 t : v) u32(t.raw);
    }

    void lwe(const LweCiphertext& ct) {
        torus(ct.a);
        u32(ct.b.raw);
    }

    void check() {
        if (!out_) throw IoError("write failed");
    }

private:
    void bytes(uint64_t v, int n) {
        char buf[8];
        for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(buf, n);
    }

    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    uint16_t u16() { return static_cast<uint16_t>(bytes(2)); }
    uint32_t u32() { return static_cast<uint32_t>(bytes(4)); }
    uint64_t u64() { return bytes(8); }
    double f64() { return std::bit_cast<double>(u64()); }

    void header(FileKind expected) {
        char magic[4];
        in_.read(magic, 4);
        if (!in_ || std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
            throw FormatError("not an ARFX file");
        }
        const uint16_t version = u16();
        if (version != kFormatVersion) {
            throw FormatError("unsupported format version " + std::to_string(version));
        }
        const uint16_t kind = u16();
        if (kind != static_cast<uint16_t>(expected)) {
            throw FormatError("wrong file kind " + std::to_string(kind) + ", expected " +
                              std::to_string(static_cast<uint16_t>(expected)));
        }
    }

    ParamSet params() {
        ParamSet p;
        p.n = u32();
        p.ring_n = u32();
        p.lwe_noise_std = f64();
        p.rlwe_noise_std = f64();
        p.bg_bits = u32();
        p.gadget_levels = u32();
        p.ks_base_bits = u32();
        p.ks_levels = u32();
        p.mu = Torus32(u32());
        try {
            p.validate();
        } catch (const ParamError& e) {
            throw FormatError(std::string("invalid parameter block: ") + e.what());
        }
        return p;
    }

    void torus(std::span<Torus32> v) {
        for (Torus32& t : v) t = Torus32(u32());
    }

    LweCiphertext lwe(size_t dim) {
        LweCiphertext ct(dim);
        torus(ct.a);
        ct.b = Torus32(u32());
        return ct;
    }

    void expect_end() {
        if (in_.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after payload");
    }

private:
    uint64_t bytes(int n) {
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), n);
        if (in_.gcount() != n) throw FormatError("unexpected end of file");
        uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= uint64_t{buf[i]} << (8 * i);
        return v;
    }

    std::istream& in_;
};

template <typename Fn>
void with_output(const std::string& path, Fn fn) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    fn(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

template <typename Fn>
auto with_input(const std::string& path, Fn fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return fn(in);
}

}  // namespace

void write_secret_key(std::ostream& out, const SecretKey& sk) {
    Writer w(out);
    w.header(FileKind::SecretKey);
    w.params(sk.params);
    for (int32_t b : sk.lwe.bits) w.u32(static_cast<uint32_t>(b));
    for (int32_t b : sk.ring.coeffs()) w.u32(static_cast<uint32_t>(b));
    w.check();
}

SecretKey read_secret_key(std::istream& in) {
    Reader r(in);
    r.header(FileKind::SecretKey);
    SecretKey sk;
    sk.params = r.params();
    auto bit = [&r] {
        const uint32_t v = r.u32();
        if (v > 1) throw FormatError("secret key coefficient is not binary");
        return static_cast<int32_t>(v);
    };
    sk.lwe.bits.resize(sk.params.n);
    for (auto& b : sk.lwe.bits) b = bit();
    sk.ring = IntPolynomial(sk.params.ring_n);
    for (auto& b : sk.ring.coeffs()) b = bit();
    r.expect_end();
    return sk;
}

void write_evaluation_key(std::ostream& out, const EvaluationKey& ek) {
    Writer w(out);
    w.header(FileKind::EvaluationKey);
    w.params(ek.params);
    for (const TgswCiphertext& g : ek.bootstrapping_key) {
        for (const TlweCiphertext& row : g.rows()) {
            w.torus(row.a.coeffs());
            w.torus(row.b.coeffs());
        }
    }
    for (uint32_t word : ek.keyswitch_key.words()) w.u32(word);
    w.check();
}

std::shared_ptr<const EvaluationKey> read_evaluation_key(std::istream& in) {
    Reader r(in);
    r.header(FileKind::EvaluationKey);
    auto ek = std::make_shared<EvaluationKey>();
    const ParamSet p = r.params();
    ek->params = p;
    ek->tables = std::make_shared<const NttTables>(p.ring_n);
    ek->bootstrapping_key.reserve(p.n);
    for (uint32_t i = 0; i < p.n; ++i) {
        std::vector<TlweCiphertext> rows;
        for (uint32_t row = 0; row < 2 * p.gadget_levels; ++row) {
            TlweCiphertext c(p.ring_n);
            r.torus(c.a.coeffs());
            r.torus(c.b.coeffs());
            rows.push_back(std::move(c));
        }
        ek->bootstrapping_key.emplace_back(std::move(rows), *ek->tables);
    }
    const uint64_t words =
        uint64_t{p.ring_n} * p.ks_levels * (p.ks_base() - 1) * (uint64_t{p.n} + 1);
    if (words > kMaxElements) throw FormatError("keyswitch key too large");
    std::vector<uint32_t> ksk(words);
    for (auto& v : ksk) v = r.u32();
    ek->keyswitch_key = KeyswitchKey(p, std::move(ksk));
    r.expect_end();
    return ek;
}

void write_bundle(std::ostream& out, const CiphertextBundle& b) {
    Writer w(out);
    w.header(FileKind::Bundle);
    w.u64(b.param_hash);
    w.u32(b.dimension);
    w.u64(b.wires.size());
    for (const auto& [id, ct] : b.wires) {
        if (ct.dimension() != b.dimension) throw DimensionError("bundle ciphertext dimension mismatch");
        w.u32(id);
        w.lwe(ct);
    }
    w.check();
}

CiphertextBundle read_bundle(std::istream& in) {
    Reader r(in);
    r.header(FileKind::Bundle);
    CiphertextBundle b;
    b.param_hash = r.u64();
    b.dimension = r.u32();
    const uint64_t count = r.u64();
    if (count > kMaxElements) throw FormatError("bundle record count too large");
    bool first = true;
    WireId last = 0;
    for (uint64_t i = 0; i < count; ++i) {
        const WireId id = r.u32();
        if (!first && id <= last) throw FormatError("bundle records not sorted by wire id");
        first = false;
        last = id;
        b.wires.emplace(id, r.lwe(b.dimension));
    }
    r.expect_end();
    return b;
}

void write_ciphertext(std::ostream& out, const ParamSet& p, const LweCiphertext& ct) {
    if (ct.dimension() != p.n) throw DimensionError("ciphertext dimension does not match parameters");
    Writer w(out);
    w.header(FileKind::Ciphertext);
    w.params(p);
    w.lwe(ct);
    w.check();
}

LweCiphertext read_ciphertext(std::istream& in, ParamSet* params) {
    Reader r(in);
    r.header(FileKind::Ciphertext);
    const ParamSet p = r.params();
    LweCiphertext ct = r.lwe(p.n);
    r.expect_end();
    if (params) *params = p;
    return ct;
}

void save_secret_key(const std::string& path, const SecretKey& sk) {
    with_output(path, [&](std::ostream& out) { write_secret_key(out, sk); });
}

SecretKey load_secret_key(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_secret_key(in); });
}

void save_evaluation_key(const std::string& path, const EvaluationKey& ek) {
    with_output(path, [&](std::ostream& out) { write_evaluation_key(out, ek); });
}

std::shared_ptr<const EvaluationKey> load_evaluation_key(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_evaluation_key(in); });
}

void save_bundle(const std::string& path, const CiphertextBundle& b) {
    with_output(path, [&](std::ostream& out) { write_bundle(out, b); });
}

CiphertextBundle load_bundle(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_bundle(in); });
}

void require_params(const CiphertextBundle& b, const ParamSet& p) {
    if (b.param_hash != p.hash()) {
        throw ParamError("ciphertext bundle was produced under different parameters");
    }
    if (b.dimension != p.n) throw ParamError("ciphertext bundle dimension does not match parameters");
}

}  // namespace arctyrex
