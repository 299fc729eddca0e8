#pragma once

// ZIP container support for OOXML packages: stored and deflate entries, no
// zip64, no encryption. Byte buffers are carried in std::string.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace slidelab::zip {

class Reader {
public:
    /// Throws Error(not_an_archive) when no valid central directory is found.
    explicit Reader(std::string_view bytes);

    std::vector<std::string> names() const;
    bool contains(std::string_view name) const;
    /// Throws Error(ingest) on a missing or corrupt entry.
    std::string read(std::string_view name) const;

private:
    struct Entry {
        std::string name;
        std::uint16_t method = 0;
        std::uint32_t crc = 0;
        std::uint32_t compressed_size = 0;
        std::uint32_t uncompressed_size = 0;
        std::uint32_t local_offset = 0;
    };
    const Entry* entry(std::string_view name) const;

    std::string_view bytes_;
    std::vector<Entry> entries_;
};

/// Deterministic writer: fixed timestamps, entries in insertion order.
class Writer {
public:
    void add(std::string name, std::string_view data, bool compress = true);
    std::string finish() &&;

private:
    struct Entry {
        std::string name;
        std::uint16_t method;
        std::uint32_t crc;
        std::uint32_t compressed_size;
        std::uint32_t uncompressed_size;
        std::uint32_t local_offset;
    };
    std::string out_;
    std::vector<Entry> entries_;
};

/// Largest entry the reader will inflate.
inline constexpr std::uint32_t kMaxEntrySize = 256u << 20;

}  // namespace slidelab::zip
