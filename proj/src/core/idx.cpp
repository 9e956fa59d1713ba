#include "core/idx.hpp"

#include <cstdio>
#include <fstream>

#include "core/errors.hpp"

namespace metapac {

std::size_t IdxData::item_size() const {
  std::size_t s = 1;
  for (std::size_t i = 1; i < header.dims.size(); ++i) s *= header.dims[i];
  return s;
}

namespace {

std::uint32_t read_be32(std::ifstream& in, long long offset, const char* what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (in.gcount() != 4)
    throw FormatError(std::string("truncated IDX file while reading ") + what,
                      offset + in.gcount());
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace

IdxData read_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open IDX file '" + path + "'");

  IdxData out;
  out.header.magic = read_be32(in, 0, "magic");
  std::size_t ndims = 0;
  if (out.header.magic == 2051)
    ndims = 3;  // count, rows, cols
  else if (out.header.magic == 2049)
    ndims = 1;  // count
  else
    throw FormatError("unsupported IDX magic " + std::to_string(out.header.magic) +
                          " (expected 2051 images or 2049 labels)",
                      0);

  long long offset = 4;
  for (std::size_t i = 0; i < ndims; ++i) {
    out.header.dims.push_back(read_be32(in, offset, "dimension size"));
    offset += 4;
  }

  std::size_t total = 1;
  for (std::uint32_t d : out.header.dims) total *= d;
  std::vector<unsigned char> raw(total);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(total));
  if (static_cast<std::size_t>(in.gcount()) != total)
    throw FormatError("truncated IDX payload", offset + in.gcount());

  out.values.resize(total);
  const double scale = out.header.magic == 2051 ? 1.0 / 255.0 : 1.0;
  for (std::size_t i = 0; i < total; ++i) out.values[i] = raw[i] * scale;
  return out;
}

void write_idx_images(const std::string& path, std::uint32_t count, std::uint32_t rows,
                      std::uint32_t cols, const std::vector<double>& pixels01) {
  if (pixels01.size() != static_cast<std::size_t>(count) * rows * cols)
    throw DomainError("pixel buffer size does not match count*rows*cols");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_be32(out, 2051);
  write_be32(out, count);
  write_be32(out, rows);
  write_be32(out, cols);
  for (double v : pixels01) {
    const double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    const unsigned char b = static_cast<unsigned char>(c * 255.0 + 0.5);
    out.write(reinterpret_cast<const char*>(&b), 1);
  }
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  write_be32(out, 2049);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

}  // namespace metapac
