#include "repulse/data_io.hpp"

#include "repulse/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>
#include <vector>

namespace repulse {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

template <class T>
bool parse_whole(std::string_view text, T& value) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IdxError(IdxError::Kind::io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset, const std::string& name) {
  if (bytes.size() < offset + 4) {
    throw IdxError(IdxError::Kind::truncated, name + ": header truncated at byte " + std::to_string(bytes.size()));
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void expect_magic(const std::vector<unsigned char>& bytes, std::uint32_t magic, const std::string& name) {
  const std::uint32_t found = read_be32(bytes, 0, name);
  if (found != magic) {
    std::ostringstream msg;
    msg << name << ": magic 0x" << std::hex << found << " (expected 0x" << magic << ")";
    throw IdxError(IdxError::Kind::magic_mismatch, msg.str());
  }
}

}  // namespace

Dataset parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_text;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_text = line;
      header = split(header_text);
      break;
    }
  }
  if (header.empty()) throw InvalidInput("CSV has no header row");
  const bool labeled = header.back() == "label";
  const std::size_t columns = header.size();
  const std::size_t dim = labeled ? columns - 1 : columns;
  if (dim == 0) throw ParseError(line_no, "no feature columns");

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) + " columns, found " +
                                    std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < dim; ++c) {
      double v = 0.0;
      if (!parse_whole(cells[c], v) || !std::isfinite(v)) {
        throw ParseError(line_no, "feature '" + std::string(cells[c]) + "' is not a finite real");
      }
      values.push_back(v);
    }
    if (labeled) {
      int label = 0;
      if (!parse_whole(cells.back(), label) || label < 0) {
        throw ParseError(line_no, "label '" + std::string(cells.back()) + "' is not a non-negative integer");
      }
      labels.push_back(label);
    }
    ++rows;
  }
  if (rows == 0) throw InvalidInput("CSV has no data rows");
  FeatureMatrix features = Eigen::Map<FeatureMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                                     static_cast<Eigen::Index>(dim));
  if (labeled) return Dataset(std::move(features), std::move(labels));
  return Dataset(std::move(features));
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse_csv(in);
}

std::string format_real(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, ptr);
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t c = 0; c < data.dim(); ++c) out << (c ? "," : "") << 'f' << c;
  if (data.has_labels()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.point(i);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_real(row[c]);
    if (data.has_labels()) out << ',' << data.labels()[i];
    out << '\n';
  }
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  write_csv(data, out);
  if (!out) throw InvalidInput("write failed for " + path.string());
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::size_t limit) {
  if (limit == 0) throw InvalidInput("IDX limit must be positive");
  const auto image_bytes = read_bytes(images);
  const auto label_bytes = read_bytes(labels);
  const std::string image_name = images.filename().string();
  const std::string label_name = labels.filename().string();

  expect_magic(image_bytes, 0x00000803U, image_name);
  expect_magic(label_bytes, 0x00000801U, label_name);
  const std::uint32_t image_count = read_be32(image_bytes, 4, image_name);
  const std::uint32_t height = read_be32(image_bytes, 8, image_name);
  const std::uint32_t width = read_be32(image_bytes, 12, image_name);
  const std::uint32_t label_count = read_be32(label_bytes, 4, label_name);
  if (image_count != label_count) {
    throw IdxError(IdxError::Kind::count_mismatch, "image count " + std::to_string(image_count) +
                                                       " does not match label count " + std::to_string(label_count));
  }
  if (image_count == 0 || height == 0 || width == 0) throw InvalidInput("IDX file holds no pixels");

  const std::size_t pixels = std::size_t{height} * width;
  if (image_bytes.size() < 16 + std::size_t{image_count} * pixels) {
    throw IdxError(IdxError::Kind::truncated, image_name + ": pixel payload truncated");
  }
  if (label_bytes.size() < 8 + std::size_t{label_count}) {
    throw IdxError(IdxError::Kind::truncated, label_name + ": label payload truncated");
  }

  const std::size_t count = std::min<std::size_t>(limit, image_count);
  FeatureMatrix features(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(pixels));
  Labels out_labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* src = image_bytes.data() + 16 + i * pixels;
    for (std::size_t p = 0; p < pixels; ++p) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = static_cast<double>(src[p]) / 255.0;
    }
    out_labels[i] = label_bytes[8 + i];
  }
  return Dataset(std::move(features), std::move(out_labels));
}

}  // namespace repulse
