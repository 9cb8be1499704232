#include "phqs/stream_file.hpp"

#include "phqs/json_io.hpp"

#include <bit>
#include <cstring>
#include <vector>

namespace phqs::io {

namespace {

static_assert(sizeof(double) == 8);

void write_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xFF;
    if (std::fwrite(b, 1, 4, f) != 4) throw io_error("short write");
}

void write_u64(std::FILE* f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xFF;
    if (std::fwrite(b, 1, 8, f) != 8) throw io_error("short write");
}

std::uint32_t read_u32(std::FILE* f, const std::string& path) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) throw io_error(path + ": truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::FILE* f, const std::string& path) {
    unsigned char b[8];
    if (std::fread(b, 1, 8, f) != 8) throw io_error(path + ": truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

void byteswap_doubles(double* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        auto v = std::bit_cast<std::uint64_t>(data[i]);
        v = ((v & 0x00000000FFFFFFFFull) << 32) | ((v >> 32) & 0x00000000FFFFFFFFull);
        v = ((v & 0x0000FFFF0000FFFFull) << 16) | ((v >> 16) & 0x0000FFFF0000FFFFull);
        v = ((v & 0x00FF00FF00FF00FFull) << 8) | ((v >> 8) & 0x00FF00FF00FF00FFull);
        data[i] = std::bit_cast<double>(v);
    }
}

} // namespace

StreamWriter::StreamWriter(const std::string& path, const states::StateConfig& meta,
                           std::uint64_t count)
    : file_(std::fopen(path.c_str(), "wb")), path_(path), declared_(count) {
    if (!file_) throw io_error(path + ": cannot open for writing");
    std::FILE* f = file_.get();
    const std::string meta_json = to_json(meta).dump();
    if (std::fwrite(kStreamMagic, 1, 4, f) != 4) throw io_error(path + ": short write");
    write_u32(f, kStreamVersion);
    write_u64(f, count);
    write_u32(f, std::uint32_t(meta_json.size()));
    if (std::fwrite(meta_json.data(), 1, meta_json.size(), f) != meta_json.size())
        throw io_error(path + ": short write");
}

StreamWriter::~StreamWriter() = default;

void StreamWriter::write(std::span<const double> samples) {
    if (!file_) throw io_error(path_ + ": writer already closed");
    if (written_ + samples.size() > declared_)
        throw io_error(path_ + ": more samples than declared");
    if constexpr (std::endian::native == std::endian::little) {
        if (std::fwrite(samples.data(), sizeof(double), samples.size(), file_.get()) !=
            samples.size())
            throw io_error(path_ + ": short write");
    } else {
        std::vector<double> tmp(samples.begin(), samples.end());
        byteswap_doubles(tmp.data(), tmp.size());
        if (std::fwrite(tmp.data(), sizeof(double), tmp.size(), file_.get()) != tmp.size())
            throw io_error(path_ + ": short write");
    }
    written_ += samples.size();
}

void StreamWriter::close() {
    if (!file_) return;
    if (written_ != declared_)
        throw io_error(path_ + ": wrote " + std::to_string(written_) + " of " +
                       std::to_string(declared_) + " declared samples");
    if (std::fflush(file_.get()) != 0) throw io_error(path_ + ": flush failed");
    file_.reset();
}

StreamReader::StreamReader(const std::string& path)
    : file_(std::fopen(path.c_str(), "rb")), path_(path) {
    if (!file_) throw io_error(path + ": cannot open");
    std::FILE* f = file_.get();
    char magic[4];
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, kStreamMagic, 4) != 0)
        throw io_error(path + ": not a quadrature stream file (bad magic)");
    const std::uint32_t version = read_u32(f, path);
    if (version != kStreamVersion)
        throw io_error(path + ": unsupported format version " + std::to_string(version));
    count_ = read_u64(f, path);
    const std::uint32_t meta_len = read_u32(f, path);
    std::string meta_json(meta_len, '\0');
    if (std::fread(meta_json.data(), 1, meta_len, f) != meta_len)
        throw io_error(path + ": truncated metadata");
    try {
        meta_ = state_config_from_string(meta_json);
    } catch (const std::exception& e) {
        throw io_error(path + ": corrupt metadata: " + e.what());
    }
}

std::size_t StreamReader::read(std::span<double> out) {
    if (remaining() == 0) return 0;
    const std::size_t want = std::size_t(std::min<std::uint64_t>(out.size(), remaining()));
    const std::size_t got = std::fread(out.data(), sizeof(double), want, file_.get());
    if (got < want)
        throw io_error(path_ + ": body truncated (declared " + std::to_string(count_) +
                       " samples, stream ends at " + std::to_string(read_ + got) + ")");
    if constexpr (std::endian::native != std::endian::little)
        byteswap_doubles(out.data(), got);
    read_ += got;
    return got;
}

} // namespace phqs::io
