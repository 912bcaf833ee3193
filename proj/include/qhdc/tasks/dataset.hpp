#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qhdc::tasks {

struct Image {
  Eigen::MatrixXd pixels;  // 28x28, values in [0, 1]
  int label;
};

struct Dataset {
  std::vector<Image> images;
  std::string source;  // "mnist-idx" or "synthetic"
};

/// Standard IDX pair (magic 2051 / 2049, big-endian). Pixels are divided by 255.
/// Throws IoError when a file cannot be read and FormatError on bad magic,
/// truncation or count mismatch; messages carry byte offsets.
Dataset load_mnist(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Keeps images whose label is in `classes`.
Dataset filter_classes(Dataset ds, const std::vector<int>& classes = {3, 6});

/// Two block-pattern families labeled 3 and 6. Each pixel is replaced by a
/// uniform draw with probability `noise`; noise 0 gives identical images per class.
Dataset synthetic_dataset(std::uint64_t seed, std::size_t per_class, double noise = 0.1);

enum class Downscale {
  Center,  ///< sample pixel (7i + 3, 7j + 3) of each 7x7 block
  Mean,    ///< average of each 7x7 block
};

struct FeatureSample {
  std::array<std::uint8_t, 16> bits;  // row-major 4x4, pixel index = 4 * row + col
  int label;
};

/// 28x28 -> 4x4 -> bits with value >= threshold mapping to 1.
FeatureSample preprocess(const Image& img, Downscale method = Downscale::Center, double threshold = 0.5);
std::vector<FeatureSample> preprocess(const Dataset& ds, Downscale method = Downscale::Center,
                                      double threshold = 0.5);

std::string to_string(Downscale d);
Downscale parse_downscale(const std::string& s);

/// IDX writers, used by tooling and tests to produce fixture files.
void write_idx_images(const std::filesystem::path& path, const std::vector<Image>& images);
void write_idx_labels(const std::filesystem::path& path, const std::vector<Image>& images);

}  // namespace qhdc::tasks
