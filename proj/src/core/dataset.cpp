#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace metapac {

namespace {

constexpr char kMagicLine[] = "METAPAC-DATASET v1";
constexpr std::uint64_t kSchemaVersion = 1;

void write_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<char*>(b), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (in.gcount() != 8) throw FormatError("truncated dataset payload (u64)");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void write_f64s(std::ofstream& out, const std::vector<double>& v) {
  write_u64(out, v.size());
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * 8));
}

std::vector<double> read_f64s(std::ifstream& in, std::uint64_t expect) {
  const std::uint64_t count = read_u64(in);
  if (count != expect)
    throw FormatError("dataset payload length mismatch: expected " + std::to_string(expect) +
                      " values, found " + std::to_string(count));
  std::vector<double> v(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * 8));
  if (static_cast<std::uint64_t>(in.gcount()) != count * 8)
    throw FormatError("truncated dataset payload (f64 block)");
  return v;
}

void write_task(std::ofstream& out, const TaskData& t) {
  write_f64s(out, t.x);
  write_f64s(out, t.y);
  write_f64s(out, t.x_test);
  write_f64s(out, t.y_test);
}

TaskData read_task(std::ifstream& in, std::uint64_t dim, std::uint64_t m, std::uint64_t m_test) {
  TaskData t;
  t.x = read_f64s(in, m * dim);
  t.y = read_f64s(in, m);
  t.x_test = read_f64s(in, m_test * dim);
  t.y_test = read_f64s(in, m_test);
  return t;
}

}  // namespace

void MetaDataset::validate() const {
  if (dim < 1) throw DomainError("MetaDataset.dim must be >= 1");
  if (m < 1) throw DomainError("MetaDataset.m must be >= 1");
  if (m_test < 0) throw DomainError("MetaDataset.m_test must be >= 0");
  if (tasks.empty()) throw DomainError("MetaDataset needs n >= 1 tasks");
  auto check = [&](const TaskData& t, const char* which) {
    const std::uint64_t md = static_cast<std::uint64_t>(m), dd = static_cast<std::uint64_t>(dim);
    if (t.x.size() != md * dd || t.y.size() != md)
      throw DomainError(std::string(which) + " task has unequal m (all tasks must share m)");
    if (t.x_test.size() != static_cast<std::uint64_t>(m_test) * dd ||
        t.y_test.size() != static_cast<std::uint64_t>(m_test))
      throw DomainError(std::string(which) + " task has an inconsistent held-out split");
  };
  for (const auto& t : tasks) check(t, "train");
  for (const auto& t : test_tasks) check(t, "test");
}

void save_dataset(const MetaDataset& ds, const std::string& path) {
  ds.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  nlohmann::json header = {
      {"version", kSchemaVersion}, {"dim", ds.dim},
      {"m", ds.m},                 {"m_test", ds.m_test},
      {"n_tasks", ds.n()},         {"n_test_tasks", ds.test_tasks.size()},
      {"provenance", ds.provenance}};
  out << kMagicLine << "\n" << header.dump() << "\n";
  for (const auto& t : ds.tasks) write_task(out, t);
  for (const auto& t : ds.test_tasks) write_task(out, t);
  if (!out) throw FormatError("write failure on '" + path + "'");
}

MetaDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open dataset '" + path + "'");
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagicLine)
    throw FormatError("not a metapac dataset: bad descriptor line (expected '" +
                          std::string(kMagicLine) + "')",
                      0);
  std::string header_line;
  std::getline(in, header_line);
  nlohmann::json header = nlohmann::json::parse(header_line, nullptr, false);
  if (header.is_discarded()) throw FormatError("dataset header is not valid JSON");
  if (!header.contains("version") || header["version"].get<std::uint64_t>() != kSchemaVersion)
    throw FormatError("unsupported dataset schema version (this build reads v" +
                      std::to_string(kSchemaVersion) + ")");

  MetaDataset ds;
  ds.dim = header.at("dim").get<std::int64_t>();
  ds.m = header.at("m").get<std::int64_t>();
  ds.m_test = header.at("m_test").get<std::int64_t>();
  ds.provenance = header.at("provenance");
  const std::uint64_t n = header.at("n_tasks").get<std::uint64_t>();
  const std::uint64_t nt = header.at("n_test_tasks").get<std::uint64_t>();
  for (std::uint64_t i = 0; i < n; ++i)
    ds.tasks.push_back(read_task(in, static_cast<std::uint64_t>(ds.dim),
                                 static_cast<std::uint64_t>(ds.m),
                                 static_cast<std::uint64_t>(ds.m_test)));
  for (std::uint64_t i = 0; i < nt; ++i)
    ds.test_tasks.push_back(read_task(in, static_cast<std::uint64_t>(ds.dim),
                                      static_cast<std::uint64_t>(ds.m),
                                      static_cast<std::uint64_t>(ds.m_test)));
  ds.validate();
  return ds;
}

std::vector<std::uint32_t> compose_swaps(std::size_t size, std::int64_t swaps,
                                         std::uint64_t seed, std::uint64_t task_index) {
  RngStream rng(seed, stream_id({0x5057ULL, task_index}));
  std::vector<std::uint32_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::int64_t s = 0; s < swaps; ++s) {
    const std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(size));
    const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(size));
    std::swap(perm[std::min(i, size - 1)], perm[std::min(j, size - 1)]);
  }
  return perm;
}

MetaDataset make_permuted_tasks(const IdxData& images, const IdxData& labels, PermuteKind kind,
                                std::int64_t swaps, std::int64_t n, std::int64_t m,
                                std::int64_t m_test, std::int64_t n_test_tasks,
                                std::uint64_t seed) {
  if (!images.is_images() || !labels.is_labels())
    throw DomainError("make_permuted_tasks needs an image IDX (2051) and a label IDX (2049)");
  if (images.count() != labels.count())
    throw DomainError("image and label counts differ");
  if (n < 1 || m < 1 || m_test < 0 || n_test_tasks < 0)
    throw DomainError("need n >= 1, m >= 1, m_test >= 0, n_test_tasks >= 0");
  const std::int64_t per_task = m + m_test;
  if (per_task > static_cast<std::int64_t>(images.count()))
    throw DomainError("a task draws " + std::to_string(per_task) +
                      " images without replacement but only " +
                      std::to_string(images.count()) + " are available");

  const std::size_t pix = images.item_size();
  double max_label = 0.0;
  for (double v : labels.values) max_label = std::max(max_label, v);
  const double label_scale = max_label > 0.0 ? 1.0 / max_label : 1.0;
  const std::int64_t n_classes = static_cast<std::int64_t>(max_label) + 1;

  MetaDataset ds;
  ds.dim = static_cast<std::int64_t>(pix);
  ds.m = m;
  ds.m_test = m_test;

  auto build_task = [&](std::uint64_t task_index) {
    // Per-task transform.
    std::vector<std::uint32_t> pixel_perm, label_perm;
    if (kind == PermuteKind::PixelSwaps) {
      pixel_perm = compose_swaps(pix, swaps, seed, task_index);
    } else {
      RngStream rng(seed, stream_id({0x4c50ULL, task_index}));
      label_perm.resize(static_cast<std::size_t>(n_classes));
      std::iota(label_perm.begin(), label_perm.end(), 0u);
      for (std::size_t i = label_perm.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(label_perm[i - 1], label_perm[std::min(j, i - 1)]);
      }
    }
    // Partial Fisher-Yates draw of per_task distinct image indices.
    RngStream rng(seed, stream_id({0x4452ULL, task_index}));
    std::vector<std::uint32_t> pool(images.count());
    std::iota(pool.begin(), pool.end(), 0u);
    TaskData t;
    for (std::int64_t s = 0; s < per_task; ++s) {
      const std::size_t remaining = pool.size() - static_cast<std::size_t>(s);
      const std::size_t j =
          static_cast<std::size_t>(s) +
          std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(remaining)),
                   remaining - 1);
      std::swap(pool[static_cast<std::size_t>(s)], pool[j]);
      const std::uint32_t img = pool[static_cast<std::size_t>(s)];
      const double* src = &images.values[static_cast<std::size_t>(img) * pix];
      double label = labels.values[img];
      std::vector<double>& xs = s < m ? t.x : t.x_test;
      std::vector<double>& ys = s < m ? t.y : t.y_test;
      if (kind == PermuteKind::PixelSwaps) {
        for (std::size_t k = 0; k < pix; ++k) xs.push_back(src[pixel_perm[k]]);
      } else {
        xs.insert(xs.end(), src, src + pix);
        label = static_cast<double>(label_perm[static_cast<std::size_t>(label)]);
      }
      ys.push_back(label * label_scale);
    }
    return t;
  };

  for (std::int64_t i = 0; i < n; ++i) ds.tasks.push_back(build_task(static_cast<std::uint64_t>(i)));
  for (std::int64_t i = 0; i < n_test_tasks; ++i)
    ds.test_tasks.push_back(build_task(static_cast<std::uint64_t>(n + i)));

  ds.provenance = {{"kind", kind == PermuteKind::PixelSwaps ? "pixel-swaps" : "label-permute"},
                   {"swaps", swaps},
                   {"n", n},
                   {"m", m},
                   {"m_test", m_test},
                   {"n_test_tasks", n_test_tasks},
                   {"seed", seed},
                   {"n_classes", n_classes}};
  ds.validate();
  return ds;
}

}  // namespace metapac
