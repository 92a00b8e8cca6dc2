#include "asc/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace asc {
namespace {

constexpr char kMagic[4] = {'A', 'S', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

// all integers little-endian; this code assumes a little-endian host
template <typename T>
void write_pod(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated checkpoint");
    return v;
}

void append_store(Checkpoint& ckpt, const ParamStore& store, const std::string& prefix) {
    for (const auto& name : store.names()) {
        TensorPtr t = store.get(name);
        ckpt.records.push_back({prefix + name, t->shape, t->data});
    }
}

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
        out.write(kMagic, 4);
        write_pod<std::uint32_t>(out, kVersion);
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.config_json.size()));
        out.write(ckpt.config_json.data(), static_cast<std::streamsize>(ckpt.config_json.size()));
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.records.size()));
        for (const auto& rec : ckpt.records) {
            write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(rec.name.size()));
            out.write(rec.name.data(), static_cast<std::streamsize>(rec.name.size()));
            write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(rec.extents.size()));
            for (int e : rec.extents) write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(e));
            out.write(reinterpret_cast<const char*>(rec.values.data()),
                      static_cast<std::streamsize>(rec.values.size() * sizeof(double)));
        }
        if (!out) throw std::runtime_error("short write to checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void save_checkpoint(const std::string& path, const std::string& config_json,
                     const ParamStore& online, const ParamStore& target) {
    Checkpoint ckpt;
    ckpt.config_json = config_json;
    append_store(ckpt, online, "online/");
    append_store(ckpt, target, "target/");
    save_checkpoint(path, ckpt);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not an ASC checkpoint: " + path);
    }
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion) throw std::runtime_error("unsupported checkpoint version");
    Checkpoint ckpt;
    const auto cfg_len = read_pod<std::uint32_t>(in);
    ckpt.config_json.resize(cfg_len);
    in.read(ckpt.config_json.data(), cfg_len);
    const auto count = read_pod<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < count; ++i) {
        CheckpointRecord rec;
        const auto name_len = read_pod<std::uint32_t>(in);
        rec.name.resize(name_len);
        in.read(rec.name.data(), name_len);
        const auto rank = read_pod<std::uint32_t>(in);
        std::size_t n = 1;
        for (std::uint32_t r = 0; r < rank; ++r) {
            const auto e = read_pod<std::uint64_t>(in);
            rec.extents.push_back(static_cast<int>(e));
            n *= static_cast<std::size_t>(e);
        }
        rec.values.resize(n);
        in.read(reinterpret_cast<char*>(rec.values.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
        if (!in) throw std::runtime_error("truncated checkpoint " + path);
        ckpt.records.push_back(std::move(rec));
    }
    return ckpt;
}

void restore_params(ParamStore& store, const Checkpoint& ckpt, const std::string& store_prefix) {
    std::size_t restored = 0;
    for (const auto& rec : ckpt.records) {
        if (rec.name.rfind(store_prefix, 0) != 0) continue;
        const std::string name = rec.name.substr(store_prefix.size());
        if (!store.has(name)) {
            throw std::runtime_error("checkpoint parameter " + rec.name + " not in model");
        }
        TensorPtr t = store.get(name);
        if (t->shape != rec.extents) {
            throw std::runtime_error("checkpoint shape mismatch for " + rec.name);
        }
        t->data = rec.values;
        ++restored;
    }
    if (restored != store.count()) {
        throw std::runtime_error("checkpoint is missing parameters for prefix " + store_prefix);
    }
}

} // namespace asc
