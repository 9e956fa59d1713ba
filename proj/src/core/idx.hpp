#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace metapac {

// IDX binary container (the MNIST distribution format): 4-byte big-endian
// magic (0x00000803 images / 0x00000801 labels), then one 4-byte big-endian
// size per dimension, then raw unsigned bytes.
struct IdxHeader {
  std::uint32_t magic = 0;
  std::vector<std::uint32_t> dims;
};

struct IdxData {
  IdxHeader header;
  // Pixel bytes scaled to [0,1] for images; raw byte values for labels.
  std::vector<double> values;

  bool is_images() const { return header.magic == 2051; }
  bool is_labels() const { return header.magic == 2049; }
  std::uint32_t count() const { return header.dims.empty() ? 0 : header.dims[0]; }
  std::size_t item_size() const;  // pixels per image (1 for labels)
};

// Throws FormatError (with the byte offset of the first bad byte) on a
// malformed header or truncated payload.
IdxData read_idx(const std::string& path);

// Fixture/export helpers; values are clamped to bytes ([0,1] scaled for
// images, raw 0..255 for labels).
void write_idx_images(const std::string& path, std::uint32_t count, std::uint32_t rows,
                      std::uint32_t cols, const std::vector<double>& pixels01);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

}  // namespace metapac
