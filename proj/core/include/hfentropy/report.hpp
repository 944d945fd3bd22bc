#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hfentropy/pipeline.hpp"

namespace hfentropy::report {

inline constexpr const char* kVersion = "0.1.0";

/// Machine-readable report. Byte-identical for identical results.
std::string to_json(const pipeline::RunResults& results);

/// Writes report.json, the CSV tables, plot-data files, audit files and
/// manifest.json into `output_dir` (created if needed). Returns the file names
/// written. Throws IoError if the directory cannot be written, and InputError
/// when there are no assets and `allow_empty` is false.
std::vector<std::string> emit_reports(const pipeline::RunResults& results,
                                      const std::filesystem::path& output_dir, bool allow_empty = true);

}  // namespace hfentropy::report
