#pragma once

#include "phqs/states.hpp"

#include <cstdint>
#include <cstdio>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

namespace phqs::io {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature stream file:
//   magic "PHQS" | u32 version | u64 sample count | u32 metadata length |
//   metadata (StateConfig JSON, UTF-8) | samples as little-endian f64
inline constexpr char kStreamMagic[4] = {'P', 'H', 'Q', 'S'};
inline constexpr std::uint32_t kStreamVersion = 1;

class StreamWriter {
public:
    // Declares the sample count up front; exactly that many must be written.
    StreamWriter(const std::string& path, const states::StateConfig& meta,
                 std::uint64_t count);
    ~StreamWriter();

    StreamWriter(const StreamWriter&) = delete;
    StreamWriter& operator=(const StreamWriter&) = delete;

    void write(std::span<const double> samples);
    void close();  // flushes and verifies the declared count

private:
    struct FileCloser {
        void operator()(std::FILE* f) const {
            if (f) std::fclose(f);
        }
    };
    std::unique_ptr<std::FILE, FileCloser> file_;
    std::string path_;
    std::uint64_t declared_;
    std::uint64_t written_ = 0;
};

class StreamReader {
public:
    explicit StreamReader(const std::string& path);

    const states::StateConfig& meta() const { return meta_; }
    std::uint64_t count() const { return count_; }
    std::uint64_t remaining() const { return count_ - read_; }

    // Reads up to out.size() samples; returns the number delivered (0 at
    // end of stream). A body shorter than the declared count is an error.
    std::size_t read(std::span<double> out);

private:
    struct FileCloser {
        void operator()(std::FILE* f) const {
            if (f) std::fclose(f);
        }
    };
    std::unique_ptr<std::FILE, FileCloser> file_;
    std::string path_;
    states::StateConfig meta_;
    std::uint64_t count_ = 0;
    std::uint64_t read_ = 0;
};

} // namespace phqs::io
