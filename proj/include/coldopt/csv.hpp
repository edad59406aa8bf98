#pragma once

#include <string>
#include <string_view>

#include "coldopt/quality_data.hpp"

namespace coldopt {

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

/// Writes content to a sibling temp file and renames it into place, so
/// readers never observe a half-written file.
void atomic_write_file(const std::string& path, std::string_view content);

std::string dataset_csv_text(const QualityDataset& dataset);
void write_dataset_csv(const QualityDataset& dataset, const std::string& path);

/// Parses a dataset CSV (header T,HU,packaging,environment,quality).
/// Malformed content raises std::runtime_error naming the line.
QualityDataset read_dataset_csv(const std::string& path);

} // namespace coldopt
