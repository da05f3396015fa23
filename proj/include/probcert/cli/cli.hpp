// Copyright (c) probcert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "probcert/cli/annotation_file.hpp"

namespace probcert::cli {

enum ExitCode : int { kAccepted = 0, kRejected = 1, kInconclusive = 2, kUsageError = 3 };

inline constexpr const char* kReportSchemaVersion = "1.0";

ExitCode exit_code(certificates::CertVerdict v);

nlohmann::json to_json(const syntax::State& s);
nlohmann::json report_json(const AnnotationFile& file, const certificates::Certificate& cert,
                           double wall_clock_seconds);
std::string render_report(const AnnotationFile& file, const certificates::Certificate& cert,
                          double wall_clock_seconds);

/// Entry point shared by the executable and in-process callers; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace probcert::cli
