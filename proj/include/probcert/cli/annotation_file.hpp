// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "probcert/certificates/certificates.hpp"

namespace probcert::cli {

class AnnotationFileError : public Error {
 public:
  AnnotationFileError(const std::string& where, int line, const std::string& msg)
      : Error(where + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + msg) {}
};

/// Raw `[section]` / `key = value` content.
using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections parse_sections(const std::string& text, const std::string& where);

struct AnnotationFile {
  std::filesystem::path path;
  std::string program_source;
  certificates::Rule rule = certificates::Rule::ParkUpper;
  transformers::TransformerKind kind = transformers::TransformerKind::WP;
  certificates::AnnotationSet annotations;
  certificates::CheckConfig config;
  /// `[expect] verdict`, read by the test harness only.
  std::optional<std::string> expected_verdict;
};

/// Parses and validates an annotation file; `[config]` entries override `base`.
AnnotationFile load_annotation_file(const std::filesystem::path& path,
                                    const certificates::CheckConfig& base = {});
AnnotationFile parse_annotation_file(const std::string& text, const std::filesystem::path& path,
                                     const certificates::CheckConfig& base = {});

}  // namespace probcert::cli
