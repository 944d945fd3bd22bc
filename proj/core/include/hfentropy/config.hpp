#pragma once

#include <filesystem>
#include <string>

#include "hfentropy/pipeline.hpp"

namespace hfentropy::config {

/// Parses a JSON run configuration. Missing keys keep their defaults.
/// Relative CSV paths resolve against `base_dir`. Throws ParseError for
/// malformed JSON and InputError for unknown keys or values of the wrong type.
pipeline::RunConfig parse(const std::string& text, const std::filesystem::path& base_dir = {});
pipeline::RunConfig load(const std::filesystem::path& path);

/// Canonical JSON text of a configuration (sorted keys, every field present).
std::string to_json(const pipeline::RunConfig& config);

/// Parses a synthetic series specification object, as used in the `synthetic`
/// field of an asset entry.
ingest::SyntheticSpec parse_synthetic(const std::string& text);

}  // namespace hfentropy::config
