// Copyright (C) 2026 The LKB Authors
// SPDX-License-Identifier: Apache-2.0

#include "lkb/vindex/index_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "lkb/digest.hpp"
#include "lkb/error.hpp"

namespace lkb::vindex {

std::string_view to_string(IndexKind kind) noexcept {
  switch (kind) {
    case IndexKind::flat: return "flat";
    case IndexKind::ivf: return "ivf";
    case IndexKind::ivfpq: return "ivfpq";
  }
  return "flat";
}

IndexKind parse_index_kind(std::string_view name) {
  if (name == "flat") return IndexKind::flat;
  if (name == "ivf") return IndexKind::ivf;
  if (name == "ivfpq" || name == "ivf-pq") return IndexKind::ivfpq;
  throw Error(ErrorKind::invalid_argument,
              "unknown index mode '" + std::string(name) + "' (expected flat, ivf or ivfpq)");
}

IndexKind kind_of(const AnyIndex& index) noexcept {
  if (const auto* ivf = std::get_if<IvfIndex>(&index)) {
    return ivf->quantized() ? IndexKind::ivfpq : IndexKind::ivf;
  }
  return IndexKind::flat;
}

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { uint_le(v, 2); }
  void u32(std::uint32_t v) { uint_le(v, 4); }
  void u64(std::uint64_t v) { uint_le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f32s(std::span<const float> v) {
    for (float x : v) f32(x);
  }
  void id(const std::string& s) {
    if (s.size() > 0xFFFF) throw Error(ErrorKind::invalid_argument, "id longer than 65535 bytes");
    u16(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void uint_le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

// Thrown internally when the declared structure runs past the buffer.
struct OutOfBytes {};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::size_t remaining() const noexcept { return in_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

  void need(std::size_t n) const {
    if (remaining() < n) throw OutOfBytes{};
  }
  std::uint64_t uint_le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(uint_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(uint_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint_le(4)); }
  std::uint64_t u64() { return uint_le(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  std::vector<float> f32s(std::size_t n) {
    need(n * 4);
    std::vector<float> v(n);
    for (float& x : v) x = f32();
    return v;
  }
  std::string id() {
    const std::uint16_t len = u16();
    need(len);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), len);
    pos_ += len;
    return s;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, IndexKind kind, std::size_t dim, std::size_t count) {
  w.bytes(kIndexMagic, sizeof kIndexMagic);
  w.u32(kIndexFormatVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u32(static_cast<std::uint32_t>(dim));
  w.u64(count);
}

std::vector<std::uint8_t> finish(Writer& w) {
  const std::uint32_t crc = crc32(w.buffer());
  w.u32(crc);
  return std::move(w.buffer());
}

unsigned code_width(unsigned bits) { return (bits + 7) / 8; }

}  // namespace

std::vector<std::uint8_t> save_index(const FlatIndex& index) {
  Writer w;
  write_header(w, IndexKind::flat, index.dim(), index.size());
  w.u32(static_cast<std::uint32_t>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) {
    w.id(index.ids()[i]);
    w.f32s(index.row(i));
  }
  return finish(w);
}

std::vector<std::uint8_t> save_index(const IvfIndex& index) {
  Writer w;
  const auto& books = index.codebooks();
  write_header(w, books ? IndexKind::ivfpq : IndexKind::ivf, index.dim(), index.size());
  w.u32(static_cast<std::uint32_t>(index.nlist()));
  if (books) {
    w.u32(static_cast<std::uint32_t>(books->subquantizers()));
    w.u32(books->bits());
  }
  w.u64(index.seed());
  w.f32s(index.centroids());
  if (books) w.f32s(books->all_codewords());

  const std::size_t m = books ? books->subquantizers() : 0;
  const unsigned width = books ? code_width(books->bits()) : 0;
  for (const auto& list : index.lists()) {
    w.u32(static_cast<std::uint32_t>(list.live_count));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list.live[i]) continue;
      w.id(list.ids[i]);
      if (books) {
        for (std::size_t s = 0; s < m; ++s) w.uint_le(list.codes[i * m + s], static_cast<int>(width));
      } else {
        w.f32s(std::span<const float>(list.vectors).subspan(i * index.dim(), index.dim()));
      }
    }
  }
  return finish(w);
}

std::vector<std::uint8_t> save_index(const AnyIndex& index) {
  return std::visit([](const auto& idx) { return save_index(idx); }, index);
}

AnyIndex load_index(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kIndexMagic) throw Error(ErrorKind::truncated, "index file truncated");
  if (std::memcmp(bytes.data(), kIndexMagic, sizeof kIndexMagic) != 0) {
    throw Error(ErrorKind::bad_magic, "not an LKB index file (bad magic)");
  }
  Reader r(bytes);
  try {
    r.uint_le(8);
    const std::uint32_t version = r.u32();
    if (version != kIndexFormatVersion) {
      throw Error(ErrorKind::unsupported_version,
                  "unsupported index format version " + std::to_string(version) +
                      " (this build reads version " + std::to_string(kIndexFormatVersion) + ")");
    }
  } catch (const OutOfBytes&) {
    throw Error(ErrorKind::truncated, "index file truncated in header");
  }

  const bool crc_ok =
      bytes.size() >= 4 &&
      crc32(bytes.first(bytes.size() - 4)) ==
          (static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
           static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8 |
           static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16 |
           static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
  const auto corrupt = [&](const std::string& what) {
    return Error(crc_ok ? ErrorKind::invalid_argument : ErrorKind::checksum_mismatch,
                 crc_ok ? "invalid index file: " + what
                        : "index checksum mismatch (" + what + ")");
  };

  try {
    const std::uint8_t kind_byte = r.u8();
    const std::uint32_t dim = r.u32();
    const std::uint64_t count = r.u64();
    if (kind_byte > 2) throw corrupt("unknown index kind " + std::to_string(kind_byte));
    if (dim == 0) throw corrupt("zero dimension");
    const auto kind = static_cast<IndexKind>(kind_byte);

    std::optional<AnyIndex> result;
    std::size_t seen = 0;
    if (kind == IndexKind::flat) {
      FlatIndex flat(dim);
      const std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        std::string id = r.id();
        const std::vector<float> v = r.f32s(dim);
        try {
          flat.add(std::move(id), v);
        } catch (const Error& e) {
          throw corrupt(e.what());
        }
      }
      seen = n;
      result.emplace(std::move(flat));
    } else {
      const std::uint32_t nlist = r.u32();
      std::uint32_t m = 0, bits = 0;
      if (kind == IndexKind::ivfpq) {
        m = r.u32();
        bits = r.u32();
        if (m == 0 || dim % m != 0 || bits < 1 || bits > PqCodebooks::kMaxBits) {
          throw corrupt("invalid PQ parameters");
        }
      }
      const std::uint64_t seed = r.u64();
      if (nlist == 0) throw corrupt("nlist is zero");
      r.need(static_cast<std::size_t>(nlist) * dim * 4);
      std::vector<float> centroids = r.f32s(static_cast<std::size_t>(nlist) * dim);
      std::optional<PqCodebooks> books;
      if (kind == IndexKind::ivfpq) {
        const std::size_t words = (std::size_t{1} << bits) * dim;
        r.need(words * 4);
        books.emplace(dim, m, bits, seed, r.f32s(words));
      }
      IvfIndex ivf(dim, std::move(centroids), seed, std::move(books));
      const unsigned width = code_width(bits);
      std::vector<std::uint16_t> code(m);
      for (std::uint32_t l = 0; l < nlist; ++l) {
        const std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
          std::string id = r.id();
          try {
            if (kind == IndexKind::ivfpq) {
              for (auto& c : code) c = static_cast<std::uint16_t>(r.uint_le(static_cast<int>(width)));
              ivf.add_encoded(l, std::move(id), {}, code);
            } else {
              ivf.add_encoded(l, std::move(id), r.f32s(dim), {});
            }
          } catch (const Error& e) {
            throw corrupt(e.what());
          }
        }
        seen += n;
      }
      ivf.set_trained_on(seen);
      result.emplace(std::move(ivf));
    }
    if (seen != count) throw corrupt("posting count disagrees with header");
    if (r.remaining() < 4) throw OutOfBytes{};
    if (r.remaining() > 4) throw corrupt("trailing bytes after postings");
    if (!crc_ok) throw Error(ErrorKind::checksum_mismatch, "index checksum mismatch");
    return std::move(*result);
  } catch (const OutOfBytes&) {
    throw Error(ErrorKind::truncated, "index file truncated at byte " + std::to_string(r.position()));
  }
}

void write_index_file(const std::filesystem::path& path, const AnyIndex& index) {
  const std::vector<std::uint8_t> bytes = save_index(index);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

AnyIndex read_index_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return load_index(bytes);
}

}  // namespace lkb::vindex
