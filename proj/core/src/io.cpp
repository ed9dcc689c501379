#include "grec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace grec {

namespace {

constexpr char kMagic[4] = {'G', 'R', 'E', 'C'};
constexpr std::uint32_t kBinaryVersion = 1;

// ---------------------------------------------------------------------------
// raw file helpers

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_failure, "cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io_failure, "read failed for '" + path + "'");
  return std::move(buffer).str();
}

void write_file_bytes(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_failure, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::io_failure, "write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// little-endian packing

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffULL));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_f32(std::string& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u32(out, bits);
}

class ByteReader {
 public:
  ByteReader(std::string_view bytes, const std::string& path) : bytes_(bytes), path_(path) {}

  void need(std::uint64_t count, const char* what) const {
    if (count > bytes_.size() - offset_) {  // offset_ <= size always
      throw Error(ErrorKind::bad_format,
                  "truncated payload in '" + path_ + "' reading " + what + ": expected " +
                      std::to_string(static_cast<std::uint64_t>(offset_) + count) +
                      " bytes, got " + std::to_string(bytes_.size()));
    }
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
      v = (v << 8) | static_cast<std::uint8_t>(bytes_[offset_ + static_cast<std::size_t>(i)]);
    }
    offset_ += 4;
    return v;
  }

  std::uint64_t u64(const char* what) {
    const std::uint64_t low = u32(what);
    const std::uint64_t high = u32(what);
    return (high << 32) | low;
  }

  float f32(const char* what) {
    const std::uint32_t bits = u32(what);
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  std::string_view take(std::size_t count, const char* what) {
    need(count, what);
    std::string_view view = bytes_.substr(offset_, count);
    offset_ += count;
    return view;
  }

  std::size_t remaining() const { return bytes_.size() - offset_; }

 private:
  std::string_view bytes_;
  const std::string& path_;
  std::size_t offset_ = 0;
};

// ---------------------------------------------------------------------------
// binary dataset format

std::string encode_binary(const EmbeddingSet& set) {
  std::string out;
  out.reserve(20 + set.values().size() * 4 + set.rows() * 8);
  out.append(kMagic, 4);
  put_u32(out, kBinaryVersion);
  put_u64(out, set.rows());
  put_u32(out, static_cast<std::uint32_t>(set.dim()));
  for (const float v : set.values()) put_f32(out, v);
  for (std::size_t i = 0; i < set.rows(); ++i) {
    const std::string& name = set.label_name(set.label_id(i));
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
  }
  return out;
}

EmbeddingSet decode_binary(const std::string& bytes, const std::string& path) {
  ByteReader reader(bytes, path);
  const std::string_view magic = reader.take(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw Error(ErrorKind::bad_format, "bad magic in '" + path + "': not a GREC dataset");
  }
  const std::uint32_t version = reader.u32("version");
  if (version != kBinaryVersion) {
    throw Error(ErrorKind::bad_format, "unsupported GREC version " + std::to_string(version) +
                                           " in '" + path + "' (expected 1)");
  }
  const std::uint64_t rows = reader.u64("row count");
  const std::uint32_t dim = reader.u32("dim");
  if (rows == 0 || dim == 0) {
    throw Error(ErrorKind::empty_input, "'" + path + "' declares an empty dataset");
  }
  // Bound the payload before allocating anything; the declared count can be
  // arbitrary, so guard the multiplication too.
  if (rows > (std::numeric_limits<std::uint64_t>::max() / 4) / dim) {
    throw Error(ErrorKind::bad_format, "'" + path + "' declares an implausible row count " +
                                           std::to_string(rows));
  }
  reader.need(rows * std::uint64_t{dim} * 4, "embedding block");

  std::vector<float> values;
  values.reserve(rows * dim);
  for (std::uint64_t i = 0; i < rows * std::uint64_t{dim}; ++i) {
    values.push_back(reader.f32("embedding block"));
  }
  std::vector<std::string> labels;
  labels.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) {
    const std::uint32_t length = reader.u32("label length");
    labels.emplace_back(reader.take(length, "label bytes"));
  }
  if (reader.remaining() != 0) {
    throw Error(ErrorKind::bad_format, "'" + path + "' has " +
                                           std::to_string(reader.remaining()) +
                                           " unexpected trailing bytes");
  }
  return EmbeddingSet::validate_packed(std::move(values), dim, labels);
}

// ---------------------------------------------------------------------------
// csv dataset format

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<float> parse_float_cell(std::string_view raw) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // from_chars rejects '+'
  if (s.empty()) return std::nullopt;

  float value = 0.0f;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ptr != s.data() + s.size()) return std::nullopt;
  if (ec == std::errc{}) return value;
  if (ec == std::errc::result_out_of_range) {
    double wide = 0.0;
    auto [wptr, wec] = std::from_chars(s.data(), s.data() + s.size(), wide);
    if (wptr == s.data() + s.size() && wec == std::errc{}) return static_cast<float>(wide);
    // Out of range even for double: overflow unless a negative exponent says
    // underflow. Either way the value is only ever seen by the finiteness
    // check or as zero.
    const bool underflow = s.find("e-") != std::string_view::npos ||
                           s.find("E-") != std::string_view::npos;
    const float sign = raw.find('-') != std::string_view::npos && trim(raw).front() == '-'
                           ? -1.0f
                           : 1.0f;
    return underflow ? std::copysign(0.0f, sign) : sign * INFINITY;
  }
  return std::nullopt;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return cells;
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= content.size(); ++i) {
    if (i == content.size() || content[i] == '\n') {
      std::string_view line = content.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  return lines;
}

std::vector<std::string> load_sidecar_labels(const std::string& path) {
  const std::string content = read_file_bytes(path);
  std::vector<std::string> labels;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= content.size(); ++i) {
    if (i == content.size() || content[i] == '\n') {
      std::string_view line(content.data() + start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (i == content.size() && line.empty()) break;  // trailing newline
      labels.emplace_back(line);
      start = i + 1;
    }
  }
  if (labels.empty()) throw Error(ErrorKind::empty_input, "sidecar '" + path + "' has no labels");
  return labels;
}

EmbeddingSet decode_csv(const std::string& content, const DatasetFileRef& ref) {
  const std::vector<std::string_view> lines = split_lines(content);
  if (lines.empty()) throw Error(ErrorKind::empty_input, "'" + ref.path + "' has no rows");

  // A header is any first line with a cell that does not parse as a number.
  const std::vector<std::string_view> first_cells = split_cells(lines[0]);
  bool has_header = false;
  for (const std::string_view cell : first_cells) {
    if (!parse_float_cell(cell)) {
      has_header = true;
      break;
    }
  }

  std::ptrdiff_t label_col = -1;
  if (has_header) {
    for (std::size_t c = 0; c < first_cells.size(); ++c) {
      if (trim(first_cells[c]) == "label") {
        if (label_col >= 0) {
          throw Error(ErrorKind::bad_format, "'" + ref.path + "' has duplicate label columns");
        }
        label_col = static_cast<std::ptrdiff_t>(c);
      }
    }
  }

  if (label_col >= 0 && ref.label_path) {
    throw Error(ErrorKind::bad_format,
                "'" + ref.path + "' has an inline label column and a sidecar was also given");
  }
  if (label_col < 0 && !ref.label_path) {
    throw Error(ErrorKind::bad_format, "'" + ref.path +
                                           "' has no 'label' column and no sidecar label file "
                                           "was given");
  }

  const std::size_t expected_cells = first_cells.size();
  const std::size_t dim = expected_cells - (label_col >= 0 ? 1 : 0);
  if (dim == 0) throw Error(ErrorKind::empty_input, "'" + ref.path + "' has no numeric columns");

  std::vector<float> values;
  std::vector<std::string> labels;
  std::size_t data_row = 0;
  for (std::size_t l = has_header ? 1 : 0; l < lines.size(); ++l, ++data_row) {
    const std::vector<std::string_view> cells = split_cells(lines[l]);
    if (cells.size() != expected_cells) {
      throw Error(ErrorKind::dimension_mismatch,
                  "row " + std::to_string(data_row) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(expected_cells),
                  data_row);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<std::ptrdiff_t>(c) == label_col) {
        labels.emplace_back(cells[c]);
        continue;
      }
      const std::optional<float> value = parse_float_cell(cells[c]);
      if (!value) {
        throw Error(ErrorKind::bad_format,
                    "non-numeric cell at (" + std::to_string(data_row) + ", " +
                        std::to_string(c) + ") in '" + ref.path + "'",
                    data_row, c);
      }
      values.push_back(*value);
    }
  }
  if (data_row == 0) throw Error(ErrorKind::empty_input, "'" + ref.path + "' has no data rows");

  if (ref.label_path) {
    labels = load_sidecar_labels(*ref.label_path);
    if (labels.size() != data_row) {
      throw Error(ErrorKind::label_mismatch,
                  "sidecar '" + *ref.label_path + "' has " + std::to_string(labels.size()) +
                      " labels but '" + ref.path + "' has " + std::to_string(data_row) + " rows");
    }
  }
  return EmbeddingSet::validate_packed(std::move(values), dim, labels);
}

std::string fmt_f32(float v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.9g", static_cast<double>(v));
  return buffer;
}

std::string encode_csv(const EmbeddingSet& set, bool inline_labels,
                       std::vector<std::string>* sidecar_labels) {
  std::string out;
  if (inline_labels) {
    out += "label";
    for (std::size_t c = 0; c < set.dim(); ++c) out += ",f" + std::to_string(c);
  } else {
    for (std::size_t c = 0; c < set.dim(); ++c) {
      if (c > 0) out += ',';
      out += "f" + std::to_string(c);
    }
  }
  out += '\n';

  for (std::size_t r = 0; r < set.rows(); ++r) {
    const std::string& name = set.label_name(set.label_id(r));
    if (inline_labels) {
      if (name.find_first_of(",\"\n\r") != std::string::npos) {
        throw Error(ErrorKind::invalid_argument,
                    "label '" + name +
                        "' is not representable in csv; use the binary format or a sidecar");
      }
      out += name;
    } else {
      sidecar_labels->push_back(name);
    }
    const std::span<const float> row = set.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (inline_labels || c > 0) out += ',';
      out += fmt_f32(row[c]);
    }
    out += '\n';
  }
  return out;
}

bool ends_with_csv(const std::string& path) {
  if (path.size() < 4) return false;
  std::string tail = path.substr(path.size() - 4);
  for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return tail == ".csv";
}

// ---------------------------------------------------------------------------
// json emission: fixed key order, doubles at 17 significant digits

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string("null");
}

std::string fmt_opt_u32(const std::optional<std::uint32_t>& v) {
  return v ? std::to_string(*v) : std::string("null");
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char raw : s) {
    const unsigned char c = static_cast<unsigned char>(raw);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += raw;  // UTF-8 passes through untouched
        }
    }
  }
  out += '"';
  return out;
}

std::string json_double_array(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt_double(values[i]);
  }
  out += ']';
  return out;
}

std::string json_string_array(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_escape(values[i]);
  }
  out += ']';
  return out;
}

std::string json_u32_array(std::span<const std::uint32_t> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(values[i]);
  }
  out += ']';
  return out;
}

std::string json_bool_array(std::span<const std::uint8_t> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += values[i] ? "true" : "false";
  }
  out += ']';
  return out;
}

const char* backend_name(Backend backend) {
  return backend == Backend::brute_force ? "brute" : "vptree";
}

}  // namespace

// ---------------------------------------------------------------------------
// dataset entry points

FileFormat detect_read_format(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) return FileFormat::binary;
  if (ends_with_csv(path)) return FileFormat::csv;
  throw Error(ErrorKind::bad_format,
              "cannot detect format of '" + path + "': no GREC magic and extension is not .csv");
}

FileFormat detect_write_format(const std::string& path) {
  return ends_with_csv(path) ? FileFormat::csv : FileFormat::binary;
}

EmbeddingSet load_dataset(const DatasetFileRef& ref) {
  const FileFormat format = ref.format ? *ref.format : detect_read_format(ref.path);
  const std::string bytes = read_file_bytes(ref.path);
  if (format == FileFormat::binary) {
    if (ref.label_path) {
      throw Error(ErrorKind::bad_format,
                  "binary datasets carry inline labels; a sidecar label file is not supported");
    }
    return decode_binary(bytes, ref.path);
  }
  return decode_csv(bytes, ref);
}

void save_dataset(const EmbeddingSet& set, const DatasetFileRef& ref) {
  const FileFormat format = ref.format ? *ref.format : detect_write_format(ref.path);
  if (format == FileFormat::binary) {
    if (ref.label_path) {
      throw Error(ErrorKind::bad_format,
                  "binary datasets carry inline labels; a sidecar label file is not supported");
    }
    write_file_bytes(ref.path, encode_binary(set));
    return;
  }
  if (ref.label_path) {
    std::vector<std::string> sidecar;
    const std::string csv = encode_csv(set, /*inline_labels=*/false, &sidecar);
    write_file_bytes(ref.path, csv);
    std::string label_text;
    for (const std::string& label : sidecar) {
      label_text += label;
      label_text += '\n';
    }
    write_file_bytes(*ref.label_path, label_text);
    return;
  }
  write_file_bytes(ref.path, encode_csv(set, /*inline_labels=*/true, nullptr));
}

// ---------------------------------------------------------------------------
// report serialization

std::string metric_report_json(const MetricReport& report) {
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": " + json_escape(report.metric) + ",\n";
  out += "  \"k\": " + std::to_string(report.k) + ",\n";
  out += "  \"group_size\": " + fmt_opt_u32(report.group_size) + ",\n";
  out += "  \"seed\": " + std::to_string(report.seed) + ",\n";
  out += "  \"value\": " + fmt_double(report.value) + ",\n";
  out += "  \"group_values\": " + json_double_array(report.group_values) + ",\n";
  out += "  \"group_count\": " + std::to_string(report.group_count()) + ",\n";
  out += "  \"sample_variance\": " + fmt_opt(report.sample_variance) + ",\n";
  out += "  \"ci\": {\"alpha\": " + fmt_double(report.ci_alpha) +
         ", \"half_width\": " + fmt_opt(report.ci_half_width) + "},\n";
  out += "  \"skipped_queries\": " + std::to_string(report.skipped_queries) + ",\n";
  out += "  \"warnings\": " + json_string_array(report.warnings) + ",\n";
  out += "  \"timing\": {\"build_ms\": " + fmt_double(report.timing.build_ms) +
         ", \"query_ms\": " + fmt_double(report.timing.query_ms) + "}\n";
  out += "}\n";
  return out;
}

std::string metric_report_csv(const MetricReport& report) {
  std::string out = "metric,k,group_size,seed,alpha,group_index,group_value\n";
  const std::string prefix = report.metric + "," + std::to_string(report.k) + "," +
                             (report.group_size ? std::to_string(*report.group_size) : "") + "," +
                             std::to_string(report.seed) + "," + fmt_double(report.ci_alpha) + ",";
  for (std::size_t g = 0; g < report.group_values.size(); ++g) {
    out += prefix + std::to_string(g) + "," + fmt_double(report.group_values[g]) + "\n";
  }
  return out;
}

MetricReport parse_metric_report_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::bad_format, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw Error(ErrorKind::bad_format, "report JSON is not an object");
    if (j.at("schema_version").get<std::uint32_t>() != kSchemaVersion) {
      throw Error(ErrorKind::bad_format, "unsupported report schema version");
    }
    MetricReport report;
    report.metric = j.at("metric").get<std::string>();
    report.k = j.at("k").get<std::uint32_t>();
    if (!j.at("group_size").is_null()) report.group_size = j.at("group_size").get<std::uint32_t>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.value = j.at("value").get<double>();
    report.group_values = j.at("group_values").get<std::vector<double>>();
    if (j.at("group_count").get<std::size_t>() != report.group_values.size()) {
      throw Error(ErrorKind::bad_format, "group_count disagrees with group_values length");
    }
    if (!j.at("sample_variance").is_null()) {
      report.sample_variance = j.at("sample_variance").get<double>();
    }
    const auto& ci = j.at("ci");
    report.ci_alpha = ci.at("alpha").get<double>();
    if (!ci.at("half_width").is_null()) report.ci_half_width = ci.at("half_width").get<double>();
    report.skipped_queries = j.at("skipped_queries").get<std::uint64_t>();
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    const auto& timing = j.at("timing");
    report.timing.build_ms = timing.at("build_ms").get<double>();
    report.timing.query_ms = timing.at("query_ms").get<double>();

    // Loaded reports feed gap/compare arithmetic, so enforce the report
    // invariants here rather than trusting the file.
    if (report.k == 0) throw Error(ErrorKind::bad_format, "report has k = 0");
    if (report.group_values.empty()) {
      throw Error(ErrorKind::bad_format, "report has no group values");
    }
    if (!(report.ci_alpha > 0.0 && report.ci_alpha < 1.0)) {
      throw Error(ErrorKind::bad_format, "report alpha outside (0, 1)");
    }
    double sum = 0.0;
    for (const double v : report.group_values) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorKind::bad_format, "report group value outside [0, 1]");
      }
      sum += v;
    }
    const double mean = sum / static_cast<double>(report.group_values.size());
    if (std::fabs(report.value - mean) > 1e-9 * std::max(1.0, std::fabs(mean))) {
      throw Error(ErrorKind::bad_format, "report value disagrees with its group values");
    }
    if (report.sample_variance && !(*report.sample_variance >= 0.0)) {
      throw Error(ErrorKind::bad_format, "report variance is negative");
    }
    return report;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::bad_format, std::string("malformed metric report: ") + e.what());
  }
}

std::string gap_report_json(const GapReport& report) {
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": " + json_escape(report.metric) + ",\n";
  out += "  \"k\": " + std::to_string(report.k) + ",\n";
  out += "  \"group_size\": " + fmt_opt_u32(report.group_size) + ",\n";
  out += "  \"train_value\": " + fmt_double(report.train_value) + ",\n";
  out += "  \"test_value\": " + fmt_double(report.test_value) + ",\n";
  out += "  \"gap\": " + fmt_double(report.gap) + ",\n";
  out += "  \"train_ci_half_width\": " + fmt_opt(report.train_ci_half_width) + ",\n";
  out += "  \"test_ci_half_width\": " + fmt_opt(report.test_ci_half_width) + "\n";
  out += "}\n";
  return out;
}

std::string gap_report_csv(const GapReport& report) {
  std::string out =
      "metric,k,group_size,train_value,test_value,gap,train_ci_half_width,test_ci_half_width\n";
  out += report.metric + "," + std::to_string(report.k) + "," +
         (report.group_size ? std::to_string(*report.group_size) : "") + "," +
         fmt_double(report.train_value) + "," + fmt_double(report.test_value) + "," +
         fmt_double(report.gap) + "," +
         (report.train_ci_half_width ? fmt_double(*report.train_ci_half_width) : "") + "," +
         (report.test_ci_half_width ? fmt_double(*report.test_ci_half_width) : "") + "\n";
  return out;
}

std::string split_comparison_json(const SplitComparison& comparison) {
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": " + json_escape(comparison.metric) + ",\n";
  out += "  \"k\": " + std::to_string(comparison.k) + ",\n";
  out += "  \"group_size\": " + fmt_opt_u32(comparison.group_size) + ",\n";
  out += "  \"alpha\": " + fmt_double(comparison.alpha) + ",\n";
  out += "  \"value_a\": " + fmt_double(comparison.value_a) + ",\n";
  out += "  \"value_b\": " + fmt_double(comparison.value_b) + ",\n";
  out += "  \"difference\": " + fmt_double(comparison.difference) + ",\n";
  out += "  \"bound\": " + fmt_double(comparison.bound) + ",\n";
  out += std::string("  \"consistent\": ") + (comparison.consistent ? "true" : "false") + "\n";
  out += "}\n";
  return out;
}

std::string split_comparison_csv(const SplitComparison& comparison) {
  std::string out = "metric,k,group_size,alpha,value_a,value_b,difference,bound,consistent\n";
  out += comparison.metric + "," + std::to_string(comparison.k) + "," +
         (comparison.group_size ? std::to_string(*comparison.group_size) : "") + "," +
         fmt_double(comparison.alpha) + "," + fmt_double(comparison.value_a) + "," +
         fmt_double(comparison.value_b) + "," + fmt_double(comparison.difference) + "," +
         fmt_double(comparison.bound) + "," + (comparison.consistent ? "true" : "false") + "\n";
  return out;
}

std::string sweep_report_json(const SweepReport& report) {
  std::vector<std::uint32_t> counts;
  std::vector<double> plain_mean, plain_se, grouped_mean, grouped_se;
  for (const SweepPoint& point : report.points) {
    counts.push_back(point.num_classes);
    plain_mean.push_back(point.plain_mean);
    plain_se.push_back(point.plain_se);
    grouped_mean.push_back(point.grouped_mean);
    grouped_se.push_back(point.grouped_se);
  }
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": \"sweep\",\n";
  out += "  \"k\": " + std::to_string(report.k) + ",\n";
  out += "  \"group_size\": " + std::to_string(report.group_size) + ",\n";
  out += "  \"trials\": " + std::to_string(report.trials) + ",\n";
  out += "  \"seed\": " + std::to_string(report.seed) + ",\n";
  out += "  \"class_counts\": " + json_u32_array(counts) + ",\n";
  out += "  \"plain_mean\": " + json_double_array(plain_mean) + ",\n";
  out += "  \"plain_se\": " + json_double_array(plain_se) + ",\n";
  out += "  \"grouped_mean\": " + json_double_array(grouped_mean) + ",\n";
  out += "  \"grouped_se\": " + json_double_array(grouped_se) + ",\n";
  out += "  \"plain_trials\": [";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_double_array(report.points[i].plain_trials);
  }
  out += "],\n";
  out += "  \"grouped_trials\": [";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    if (i > 0) out += ", ";
    out += json_double_array(report.points[i].grouped_trials);
  }
  out += "]\n";
  out += "}\n";
  return out;
}

std::string sweep_report_csv(const SweepReport& report) {
  std::string out = "classes,trial,plain_recall,grouped_recall\n";
  for (const SweepPoint& point : report.points) {
    for (std::size_t t = 0; t < point.plain_trials.size(); ++t) {
      out += std::to_string(point.num_classes) + "," + std::to_string(t) + "," +
             fmt_double(point.plain_trials[t]) + "," + fmt_double(point.grouped_trials[t]) + "\n";
    }
  }
  return out;
}

std::string coverage_report_json(const CoverageReport& report) {
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": \"coverage\",\n";
  out += "  \"k\": " + std::to_string(report.k) + ",\n";
  out += "  \"group_size\": " + std::to_string(report.group_size) + ",\n";
  out += "  \"alpha\": " + fmt_double(report.alpha) + ",\n";
  out += "  \"trials\": " + std::to_string(report.trials) + ",\n";
  out += "  \"seed\": " + std::to_string(report.seed) + ",\n";
  out += "  \"coverage\": " + fmt_double(report.coverage) + ",\n";
  out += "  \"differences\": " + json_double_array(report.differences) + ",\n";
  out += "  \"bounds\": " + json_double_array(report.bounds) + ",\n";
  out += "  \"within\": " + json_bool_array(report.within) + "\n";
  out += "}\n";
  return out;
}

std::string coverage_report_csv(const CoverageReport& report) {
  std::string out = "trial,difference,bound,within\n";
  for (std::size_t t = 0; t < report.differences.size(); ++t) {
    out += std::to_string(t) + "," + fmt_double(report.differences[t]) + "," +
           fmt_double(report.bounds[t]) + "," + (report.within[t] ? "true" : "false") + "\n";
  }
  return out;
}

std::string correlation_report_json(const CorrelationReport& report) {
  std::vector<double> stds, plain, grouped;
  for (const CorrelationPoint& point : report.points) {
    stds.push_back(point.cluster_std);
    plain.push_back(point.plain_recall);
    grouped.push_back(point.grouped_recall);
  }
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": \"correlation\",\n";
  out += "  \"k\": " + std::to_string(report.k) + ",\n";
  out += "  \"group_size\": " + std::to_string(report.group_size) + ",\n";
  out += "  \"cluster_std\": " + json_double_array(stds) + ",\n";
  out += "  \"plain_recall\": " + json_double_array(plain) + ",\n";
  out += "  \"grouped_recall\": " + json_double_array(grouped) + ",\n";
  out += "  \"pearson_r\": " + fmt_opt(report.pearson_r) + ",\n";
  out += std::string("  \"degenerate\": ") + (report.pearson_r ? "false" : "true") + "\n";
  out += "}\n";
  return out;
}

std::string correlation_report_csv(const CorrelationReport& report) {
  std::string out = "cluster_std,plain_recall,grouped_recall\n";
  for (const CorrelationPoint& point : report.points) {
    out += fmt_double(point.cluster_std) + "," + fmt_double(point.plain_recall) + "," +
           fmt_double(point.grouped_recall) + "\n";
  }
  return out;
}

std::string scaling_report_json(const ScalingReport& report) {
  std::vector<std::uint32_t> sizes, rows;
  std::vector<double> full_ms, grouped_ms, full_value, grouped_value;
  for (const ScalingPoint& point : report.points) {
    sizes.push_back(point.requested_size);
    rows.push_back(point.rows);
    full_ms.push_back(point.full_ms);
    grouped_ms.push_back(point.grouped_ms);
    full_value.push_back(point.full_value);
    grouped_value.push_back(point.grouped_value);
  }
  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(kSchemaVersion) + ",\n";
  out += "  \"metric\": \"scaling_bench\",\n";
  out += std::string("  \"backend\": \"") + backend_name(report.backend) + "\",\n";
  out += "  \"k\": " + std::to_string(report.k) + ",\n";
  out += "  \"group_size\": " + std::to_string(report.group_size) + ",\n";
  out += "  \"trials\": " + std::to_string(report.trials) + ",\n";
  out += "  \"seed\": " + std::to_string(report.seed) + ",\n";
  out += "  \"sizes\": " + json_u32_array(sizes) + ",\n";
  out += "  \"rows\": " + json_u32_array(rows) + ",\n";
  out += "  \"full_ms\": " + json_double_array(full_ms) + ",\n";
  out += "  \"grouped_ms\": " + json_double_array(grouped_ms) + ",\n";
  out += "  \"full_value\": " + json_double_array(full_value) + ",\n";
  out += "  \"grouped_value\": " + json_double_array(grouped_value) + ",\n";
  out += "  \"full_slope\": " + fmt_opt(report.full_slope) + ",\n";
  out += "  \"grouped_slope\": " + fmt_opt(report.grouped_slope) + "\n";
  out += "}\n";
  return out;
}

std::string scaling_report_csv(const ScalingReport& report) {
  std::string out = "size,rows,full_ms,grouped_ms,full_value,grouped_value,full_slope,grouped_slope\n";
  const std::string full_slope = report.full_slope ? fmt_double(*report.full_slope) : "";
  const std::string grouped_slope = report.grouped_slope ? fmt_double(*report.grouped_slope) : "";
  for (const ScalingPoint& point : report.points) {
    out += std::to_string(point.requested_size) + "," + std::to_string(point.rows) + "," +
           fmt_double(point.full_ms) + "," + fmt_double(point.grouped_ms) + "," +
           fmt_double(point.full_value) + "," + fmt_double(point.grouped_value) + "," + full_slope +
           "," + grouped_slope + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  write_file_bytes(path, text);
}

std::string read_text_file(const std::string& path) { return read_file_bytes(path); }

}  // namespace grec
