#include "qhdc/tasks/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "qhdc/error.hpp"
#include "qhdc/rng.hpp"

namespace qhdc::tasks {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t off, const std::filesystem::path& p) {
  if (b.size() < off + 4) {
    throw FormatError(p.string() + ": truncated header at byte " + std::to_string(off) + " (file is " +
                      std::to_string(b.size()) + " bytes)");
  }
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) | (std::uint32_t{b[off + 2]} << 8) |
         std::uint32_t{b[off + 3]};
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

void check_magic(std::uint32_t got, std::uint32_t want, const std::filesystem::path& p) {
  if (got != want) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ": bad magic at byte 0 (0x%08x, expected 0x%08x)", got, want);
    throw FormatError(p.string() + buf);
  }
}

void check_length(std::size_t actual, std::size_t expected, std::size_t header, const std::filesystem::path& p) {
  if (actual != expected) {
    throw FormatError(p.string() + ": expected " + std::to_string(expected) + " bytes (" + std::to_string(header) +
                      "-byte header + payload), found " + std::to_string(actual) +
                      (actual < expected ? "; data truncated at byte " + std::to_string(actual) : ""));
  }
}

// Block layouts on the 4x4 grid, row-major.
constexpr std::array<std::uint8_t, 16> kThree{1, 1, 1, 1,  //
                                              0, 0, 1, 1,  //
                                              0, 1, 1, 1,  //
                                              1, 1, 1, 1};
constexpr std::array<std::uint8_t, 16> kSix{1, 1, 0, 0,  //
                                            1, 0, 0, 0,  //
                                            1, 1, 1, 1,  //
                                            1, 1, 1, 1};

}  // namespace

Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const auto ib = read_file(images);
  const auto lb = read_file(labels);
  check_magic(be32(ib, 0, images), kImageMagic, images);
  check_magic(be32(lb, 0, labels), kLabelMagic, labels);

  const std::size_t n = be32(ib, 4, images);
  const std::size_t rows = be32(ib, 8, images);
  const std::size_t cols = be32(ib, 12, images);
  const std::size_t nl = be32(lb, 4, labels);
  check_length(ib.size(), 16 + n * rows * cols, 16, images);
  check_length(lb.size(), 8 + nl, 8, labels);
  if (n != nl) {
    throw FormatError("image count " + std::to_string(n) + " (" + images.string() + " byte 4) does not match label count " +
                      std::to_string(nl) + " (" + labels.string() + " byte 4)");
  }

  Dataset ds;
  ds.source = "mnist-idx";
  ds.images.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Image img{Eigen::MatrixXd(rows, cols), static_cast<int>(lb[8 + i])};
    const std::size_t base = 16 + i * rows * cols;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        img.pixels(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = ib[base + r * cols + c] / 255.0;
      }
    }
    ds.images.push_back(std::move(img));
  }
  return ds;
}

Dataset filter_classes(Dataset ds, const std::vector<int>& classes) {
  std::erase_if(ds.images, [&](const Image& im) {
    return std::find(classes.begin(), classes.end(), im.label) == classes.end();
  });
  return ds;
}

Dataset synthetic_dataset(std::uint64_t seed, std::size_t per_class, double noise) {
  if (per_class < 1) throw InvalidArgument("synthetic_dataset: per_class must be >= 1");
  if (noise < 0.0 || noise > 1.0) throw InvalidArgument("synthetic_dataset: noise must lie in [0, 1]");
  Rng rng(seed);
  Dataset ds;
  ds.source = "synthetic";
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int label : {3, 6}) {
      const auto& layout = label == 3 ? kThree : kSix;
      Image img{Eigen::MatrixXd(28, 28), label};
      for (int r = 0; r < 28; ++r) {
        for (int c = 0; c < 28; ++c) {
          double v = layout[static_cast<std::size_t>(4 * (r / 7) + c / 7)];
          if (noise > 0.0 && rng.uniform() < noise) v = rng.uniform();
          img.pixels(r, c) = v;
        }
      }
      ds.images.push_back(std::move(img));
    }
  }
  return ds;
}

FeatureSample preprocess(const Image& img, Downscale method, double threshold) {
  if (img.pixels.rows() != 28 || img.pixels.cols() != 28) throw InvalidArgument("preprocess: image is not 28x28");
  FeatureSample s{{}, img.label};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double v = method == Downscale::Center ? img.pixels(7 * i + 3, 7 * j + 3)
                                                   : img.pixels.block<7, 7>(7 * i, 7 * j).mean();
      s.bits[static_cast<std::size_t>(4 * i + j)] = v >= threshold ? 1 : 0;
    }
  }
  return s;
}

std::vector<FeatureSample> preprocess(const Dataset& ds, Downscale method, double threshold) {
  std::vector<FeatureSample> out;
  out.reserve(ds.images.size());
  for (const auto& im : ds.images) out.push_back(preprocess(im, method, threshold));
  return out;
}

std::string to_string(Downscale d) { return d == Downscale::Center ? "center" : "mean"; }

Downscale parse_downscale(const std::string& s) {
  if (s == "center") return Downscale::Center;
  if (s == "mean") return Downscale::Mean;
  throw InvalidArgument("unknown downscale method '" + s + "'");
}

void write_idx_images(const std::filesystem::path& path, const std::vector<Image>& images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto rows = images.empty() ? 28 : images.front().pixels.rows();
  const auto cols = images.empty() ? 28 : images.front().pixels.cols();
  put_be32(out, kImageMagic);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  put_be32(out, static_cast<std::uint32_t>(rows));
  put_be32(out, static_cast<std::uint32_t>(cols));
  for (const auto& im : images) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double v = std::clamp(im.pixels(r, c), 0.0, 1.0);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
      }
    }
  }
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<Image>& images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  put_be32(out, kLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  for (const auto& im : images) out.put(static_cast<char>(im.label));
}

}  // namespace qhdc::tasks
