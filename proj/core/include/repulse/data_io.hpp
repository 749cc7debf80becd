#pragma once

#include "repulse/dataset.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace repulse {

/// Reads a CSV with a header row of feature columns and an optional final
/// `label` column. Row order is preserved. Malformed rows raise ParseError
/// with their 1-based line number; a header-only file raises InvalidInput.
[[nodiscard]] Dataset load_csv(const std::filesystem::path& path);
[[nodiscard]] Dataset parse_csv(std::istream& in);

/// Writes f0..f{d-1}[,label] with 17 significant digits per feature.
void save_csv(const Dataset& data, const std::filesystem::path& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Formats a real with 17 significant digits (round-trips binary64 exactly).
[[nodiscard]] std::string format_real(double value);

/// MNIST-style IDX pair: images (magic 0x00000803, count, rows, cols) and
/// labels (magic 0x00000801, count), big-endian headers. Pixels are scaled to
/// [0, 1] and flattened row-major. At most `limit` items are read; limit = 0
/// is rejected. Failures raise IdxError with a distinct kind per cause.
[[nodiscard]] Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                               std::size_t limit);

}  // namespace repulse
