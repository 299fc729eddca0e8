#include "slidelab/zip.hpp"

#include <zlib.h>

#include "slidelab/error.hpp"

namespace slidelab::zip {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
// 1980-01-01 00:00 in DOS format.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

std::uint16_t u16(std::string_view b, std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) | (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t u32(std::string_view b, std::size_t at) {
    return static_cast<std::uint32_t>(u16(b, at)) | (static_cast<std::uint32_t>(u16(b, at + 2)) << 16);
}

void put16(std::string& out, std::uint16_t v) {
    out += static_cast<char>(v & 0xFF);
    out += static_cast<char>(v >> 8);
}

void put32(std::string& out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v & 0xFFFF));
    put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint32_t crc_of(std::string_view data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string inflate_raw(std::string_view in, std::uint32_t expected) {
    std::string out(expected, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw Error(ErrorKind::ingest, "zip: inflate init failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    const auto produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected) throw Error(ErrorKind::ingest, "zip: corrupt deflate stream");
    return out;
}

std::string deflate_raw(std::string_view in) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error(ErrorKind::io, "zip: deflate init failed");
    std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(ErrorKind::io, "zip: deflate failed");
    return out;
}

}  // namespace

Reader::Reader(std::string_view bytes) : bytes_(bytes) {
    if (bytes.size() < 22) throw Error(ErrorKind::not_an_archive, "not a zip archive: too short");
    // The end record sits in the last 22 + 65535 bytes.
    std::size_t eocd = std::string_view::npos;
    const std::size_t lowest = bytes.size() > 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
        if (u32(bytes, i) == kEndSig) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string_view::npos) throw Error(ErrorKind::not_an_archive, "not a zip archive: no end record");

    const std::uint16_t count = u16(bytes, eocd + 10);
    const std::uint32_t cd_size = u32(bytes, eocd + 12);
    const std::uint32_t cd_offset = u32(bytes, eocd + 16);
    if (static_cast<std::uint64_t>(cd_offset) + cd_size > eocd)
        throw Error(ErrorKind::not_an_archive, "not a zip archive: central directory out of range");

    std::size_t p = cd_offset;
    for (std::uint16_t i = 0; i < count; ++i) {
        if (p + 46 > eocd || u32(bytes, p) != kCentralSig)
            throw Error(ErrorKind::not_an_archive, "not a zip archive: bad central directory entry");
        Entry e;
        e.method = u16(bytes, p + 10);
        e.crc = u32(bytes, p + 16);
        e.compressed_size = u32(bytes, p + 20);
        e.uncompressed_size = u32(bytes, p + 24);
        const std::uint16_t name_len = u16(bytes, p + 28);
        const std::uint16_t extra_len = u16(bytes, p + 30);
        const std::uint16_t comment_len = u16(bytes, p + 32);
        e.local_offset = u32(bytes, p + 42);
        if (p + 46 + name_len > eocd) throw Error(ErrorKind::not_an_archive, "not a zip archive: truncated name");
        e.name = std::string(bytes.substr(p + 46, name_len));
        entries_.push_back(std::move(e));
        p += 46 + static_cast<std::size_t>(name_len) + extra_len + comment_len;
    }
}

std::vector<std::string> Reader::names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
}

const Reader::Entry* Reader::entry(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

bool Reader::contains(std::string_view name) const { return entry(name) != nullptr; }

std::string Reader::read(std::string_view name) const {
    const Entry* e = entry(name);
    if (!e) throw Error(ErrorKind::ingest, "zip: no entry " + std::string(name));
    const std::size_t lh = e->local_offset;
    if (lh + 30 > bytes_.size() || u32(bytes_, lh) != kLocalSig)
        throw Error(ErrorKind::ingest, "zip: bad local header for " + e->name);
    const std::size_t data = lh + 30 + u16(bytes_, lh + 26) + u16(bytes_, lh + 28);
    if (data + e->compressed_size > bytes_.size()) throw Error(ErrorKind::ingest, "zip: truncated entry " + e->name);
    if (e->uncompressed_size > kMaxEntrySize) throw Error(ErrorKind::ingest, "zip: entry too large " + e->name);
    const auto raw = bytes_.substr(data, e->compressed_size);

    std::string out;
    if (e->method == 0) {
        if (e->compressed_size != e->uncompressed_size) throw Error(ErrorKind::ingest, "zip: size mismatch " + e->name);
        out = std::string(raw);
    } else if (e->method == 8) {
        out = inflate_raw(raw, e->uncompressed_size);
    } else {
        throw Error(ErrorKind::ingest, "zip: unsupported compression method for " + e->name);
    }
    if (crc_of(out) != e->crc) throw Error(ErrorKind::ingest, "zip: crc mismatch for " + e->name);
    return out;
}

void Writer::add(std::string name, std::string_view data, bool compress) {
    Entry e;
    e.name = std::move(name);
    e.crc = crc_of(data);
    e.uncompressed_size = static_cast<std::uint32_t>(data.size());
    e.local_offset = static_cast<std::uint32_t>(out_.size());
    std::string payload;
    if (compress) {
        payload = deflate_raw(data);
        e.method = 8;
    } else {
        payload = std::string(data);
        e.method = 0;
    }
    e.compressed_size = static_cast<std::uint32_t>(payload.size());

    put32(out_, kLocalSig);
    put16(out_, 20);
    put16(out_, 0);
    put16(out_, e.method);
    put16(out_, kDosTime);
    put16(out_, kDosDate);
    put32(out_, e.crc);
    put32(out_, e.compressed_size);
    put32(out_, e.uncompressed_size);
    put16(out_, static_cast<std::uint16_t>(e.name.size()));
    put16(out_, 0);
    out_ += e.name;
    out_ += payload;
    entries_.push_back(std::move(e));
}

std::string Writer::finish() && {
    const auto cd_offset = static_cast<std::uint32_t>(out_.size());
    for (const auto& e : entries_) {
        put32(out_, kCentralSig);
        put16(out_, 20);
        put16(out_, 20);
        put16(out_, 0);
        put16(out_, e.method);
        put16(out_, kDosTime);
        put16(out_, kDosDate);
        put32(out_, e.crc);
        put32(out_, e.compressed_size);
        put32(out_, e.uncompressed_size);
        put16(out_, static_cast<std::uint16_t>(e.name.size()));
        put16(out_, 0);
        put16(out_, 0);
        put16(out_, 0);
        put16(out_, 0);
        put32(out_, 0);
        put32(out_, e.local_offset);
        out_ += e.name;
    }
    const auto cd_size = static_cast<std::uint32_t>(out_.size()) - cd_offset;
    put32(out_, kEndSig);
    put16(out_, 0);
    put16(out_, 0);
    put16(out_, static_cast<std::uint16_t>(entries_.size()));
    put16(out_, static_cast<std::uint16_t>(entries_.size()));
    put32(out_, cd_size);
    put32(out_, cd_offset);
    put16(out_, 0);
    return std::move(out_);
}

}  // namespace slidelab::zip
