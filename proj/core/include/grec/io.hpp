#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "grec/dataset.hpp"
#include "grec/report.hpp"
#include "grec/scaling.hpp"
#include "grec/synth.hpp"

namespace grec {

inline constexpr std::uint32_t kSchemaVersion = 1;

// Binary dataset layout, little-endian throughout:
//   magic "GREC" | u32 version (=1) | u64 row count | u32 dim |
//   rows*dim float32 row-major | per row: u32 byte length + UTF-8 label.
// CSV layout: optional header; a `label` column (any position) holds labels,
// every other column is a numeric dimension in file order; decimal point '.',
// no thousands separators. Labels may instead come from a newline-delimited
// sidecar file (LF or CRLF).
enum class FileFormat { csv, binary };

struct DatasetFileRef {
  std::string path;
  std::optional<FileFormat> format;       // empty = detect (magic bytes / extension)
  std::optional<std::string> label_path;  // sidecar labels; CSV only
};

// Detection for reads: binary magic wins, then a .csv extension.
FileFormat detect_read_format(const std::string& path);
// Detection for writes: .csv extension means CSV, anything else binary.
FileFormat detect_write_format(const std::string& path);

EmbeddingSet load_dataset(const DatasetFileRef& ref);
void save_dataset(const EmbeddingSet& set, const DatasetFileRef& ref);

enum class ReportFormat { json, csv };

// Report serialization. JSON uses a fixed key order and prints every double
// with 17 significant digits, so emitted bytes are deterministic and a
// reparse restores the exact values. CSV variants are flat plot-ready tables.
std::string metric_report_json(const MetricReport& report);
std::string metric_report_csv(const MetricReport& report);
MetricReport parse_metric_report_json(const std::string& text);

std::string gap_report_json(const GapReport& report);
std::string gap_report_csv(const GapReport& report);

std::string split_comparison_json(const SplitComparison& comparison);
std::string split_comparison_csv(const SplitComparison& comparison);

std::string sweep_report_json(const SweepReport& report);
std::string sweep_report_csv(const SweepReport& report);  // one row per (classes, trial)

std::string coverage_report_json(const CoverageReport& report);
std::string coverage_report_csv(const CoverageReport& report);

std::string correlation_report_json(const CorrelationReport& report);
std::string correlation_report_csv(const CorrelationReport& report);

std::string scaling_report_json(const ScalingReport& report);
std::string scaling_report_csv(const ScalingReport& report);

// Whole-file write; throws Error{io_failure} when the path cannot be opened
// or written.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace grec
