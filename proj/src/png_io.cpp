#include "relgen/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "relgen/errors.hpp"

namespace relgen {

namespace {

constexpr unsigned char kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};
constexpr int kDeflateLevel = 6;  // pinned: byte output must be reproducible

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t read_be32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_at = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + type_at, static_cast<uInt>(4 + data.size()));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  const int w = img.width(), h = img.height();
  if (w <= 0 || h <= 0) throw IoFailure("png: empty image");

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(h) * (1 + 3 * w));
  for (int y = 0; y < h; ++y) {
    raw.push_back(0);  // filter: none
    for (int x = 0; x < w; ++x) {
      raw.push_back(img.r(y, x));
      raw.push_back(img.g(y, x));
      raw.push_back(img.b(y, x));
    }
  }

  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()), kDeflateLevel) != Z_OK)
    throw IoFailure("png: deflate failed");
  compressed.resize(bound);

  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(w));
  put_be32(ihdr, static_cast<std::uint32_t>(h));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // colour type: truecolour
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter method
  ihdr.push_back(0);  // no interlace

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kSignature, kSignature + 8);
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", compressed);
  append_chunk(out, "IEND", {});
  return out;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
    throw IoFailure("png: bad signature");

  std::size_t pos = 8;
  std::uint32_t w = 0, h = 0;
  bool have_ihdr = false;
  std::vector<std::uint8_t> idat;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t len = read_be32(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) throw IoFailure("png: truncated chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, &bytes[pos + 4], 4 + len);
    if (static_cast<std::uint32_t>(crc) != read_be32(&bytes[pos + 8 + len]))
      throw IoFailure("png: chunk crc mismatch");
    const std::uint8_t* data = &bytes[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw IoFailure("png: bad IHDR");
      w = read_be32(data);
      h = read_be32(data + 4);
      if (data[8] != 8 || data[9] != 2 || data[10] != 0 || data[11] != 0 ||
          data[12] != 0)
        throw IoFailure("png: unsupported format (need 8-bit RGB)");
      have_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_ihdr || w == 0 || h == 0) throw IoFailure("png: missing IHDR");
  if (idat.empty()) throw IoFailure("png: missing IDAT");

  const std::size_t stride = 1 + 3 * static_cast<std::size_t>(w);
  std::vector<std::uint8_t> raw(stride * h);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_len, idat.data(),
                 static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size())
    throw IoFailure("png: inflate failed");

  Image img = Image::filled(static_cast<int>(w), static_cast<int>(h), kBlack);
  std::vector<std::uint8_t> prev(3 * w, 0), cur(3 * w, 0);
  for (std::uint32_t y = 0; y < h; ++y) {
    const std::uint8_t* row = &raw[y * stride];
    const std::uint8_t filter = row[0];
    const std::uint8_t* src = row + 1;
    for (std::size_t i = 0; i < 3 * w; ++i) {
      const int a = i >= 3 ? cur[i - 3] : 0;
      const int b = prev[i];
      const int c = i >= 3 ? prev[i - 3] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw IoFailure("png: unknown scanline filter");
      }
      cur[i] = static_cast<std::uint8_t>(v);
    }
    for (std::uint32_t x = 0; x < w; ++x)
      img.set(static_cast<int>(x), static_cast<int>(y),
              {cur[3 * x], cur[3 * x + 1], cur[3 * x + 2]});
    std::swap(prev, cur);
  }
  return img;
}

void write_bytes(const std::filesystem::path& path,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoFailure("write failed: " + path.string());
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoFailure("cannot open: " + path.string());
  const std::streamsize n = f.tellg();
  f.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(n));
  f.read(reinterpret_cast<char*>(bytes.data()), n);
  if (!f) throw IoFailure("read failed: " + path.string());
  return bytes;
}

}  // namespace relgen
