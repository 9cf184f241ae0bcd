#include "gaborset/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "gaborset/error.hpp"

namespace fs = std::filesystem;

namespace gaborset {

RawImage read_image(const fs::path& path) {
  cv::Mat mat;
  try {
    mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
  }
  if (mat.empty()) throw Error(ErrorCode::IoError, "cannot decode " + path.string());

  if (mat.depth() == CV_16U) {
    mat.convertTo(mat, CV_8U, 1.0 / 257.0);
  } else if (mat.depth() != CV_8U) {
    throw Error(ErrorCode::IoError, "unsupported sample depth in " + path.string());
  }

  const int src_channels = mat.channels();
  if (src_channels != 1 && src_channels != 3 && src_channels != 4) {
    throw Error(ErrorCode::IoError, "unsupported channel count in " + path.string());
  }
  const int channels = src_channels == 1 ? 1 : 3;
  RawImage img(mat.cols, mat.rows, channels);
  for (int r = 0; r < mat.rows; ++r) {
    const std::uint8_t* row = mat.ptr<std::uint8_t>(r);
    for (int c = 0; c < mat.cols; ++c) {
      const std::uint8_t* px = row + static_cast<std::ptrdiff_t>(c) * src_channels;
      if (channels == 1) {
        img.at(r, c) = px[0];
      } else {
        // OpenCV stores BGR(A).
        img.at(r, c, 0) = px[2];
        img.at(r, c, 1) = px[1];
        img.at(r, c, 2) = px[0];
      }
    }
  }
  return img;
}

void write_png(const fs::path& path, const RawImage& img) {
  img.validate();
  cv::Mat mat(img.height, img.width, img.channels == 1 ? CV_8UC1 : CV_8UC3);
  for (int r = 0; r < img.height; ++r) {
    std::uint8_t* row = mat.ptr<std::uint8_t>(r);
    for (int c = 0; c < img.width; ++c) {
      if (img.channels == 1) {
        row[c] = img.at(r, c);
      } else {
        row[3 * c + 0] = img.at(r, c, 2);
        row[3 * c + 1] = img.at(r, c, 1);
        row[3 * c + 2] = img.at(r, c, 0);
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
  }
  if (!ok) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

RawImage to_display(std::span<const double> values, int side) {
  RawImage out(side, side, 1);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < values.size() && i < out.data.size(); ++i) {
    const double t = range > 0.0 ? (values[i] - *lo) / range : 0.5;
    out.data[i] = static_cast<std::uint8_t>(std::lround(255.0 * t));
  }
  return out;
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace gaborset
