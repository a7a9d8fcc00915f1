// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include "ddframe/document.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ddframe {

namespace {

std::string fmt_double(double v) {
  if (!std::isfinite(v)) {
    throw DocumentError("document fields must be finite");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string out = buf;
  // keep integer-valued doubles on the double parse path (sign of -0.0)
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

void write_filter(std::ostream& os, const char* name, const Filter& f,
                  const char* indent) {
  os << indent << "\"" << name << "\": {\"offset\": " << f.offset()
     << ", \"coeffs\": [";
  for (long i = 0; i < f.size(); ++i) {
    if (i) os << ", ";
    os << fmt_double(f.coeffs()[static_cast<size_t>(i)]);
  }
  os << "]}";
}

}  // namespace

FilterBankDocument make_document(const Pipeline& pl,
                                 const VerificationReport& report) {
  FilterBankDocument doc;
  doc.n = pl.cfg.n;
  doc.h_left = pl.cfg.h_left;
  doc.h_right = pl.cfg.h_right;
  doc.p = pl.filters.p;
  doc.d = pl.filters.d;
  doc.q1 = pl.filters.q1;
  doc.q2 = pl.filters.q2;
  doc.row_offset = central_window(pl.cfg.n).lo;
  doc.q_irr = pl.frame.q_irr;
  doc.diagnostics = report;
  return doc;
}

std::string serialize_document(const FilterBankDocument& doc) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema_version\": " << doc.schema_version << ",\n";
  os << "  \"n\": " << doc.n << ",\n";
  os << "  \"h_left\": " << fmt_double(doc.h_left) << ",\n";
  os << "  \"h_right\": " << fmt_double(doc.h_right) << ",\n";
  os << "  \"regular\": {\n";
  write_filter(os, "p", doc.p, "    ");
  os << ",\n";
  write_filter(os, "d", doc.d, "    ");
  os << ",\n";
  write_filter(os, "q1", doc.q1, "    ");
  os << ",\n";
  write_filter(os, "q2", doc.q2, "    ");
  os << "\n  },\n";
  os << "  \"irregular\": {\n";
  os << "    \"row_offset\": " << doc.row_offset << ",\n";
  os << "    \"rows\": " << doc.q_irr.rows() << ",\n";
  os << "    \"columns\": " << doc.q_irr.cols() << ",\n";
  os << "    \"matrix\": [";
  for (Eigen::Index r = 0; r < doc.q_irr.rows(); ++r) {
    for (Eigen::Index c = 0; c < doc.q_irr.cols(); ++c) {
      if (r || c) os << ", ";
      os << fmt_double(doc.q_irr(r, c));
    }
  }
  os << "]\n";
  os << "  },\n";
  os << "  \"diagnostics\": {\n";
  os << "    \"all_pass\": " << (doc.diagnostics.all_pass() ? "true" : "false")
     << ",\n";
  os << "    \"checks\": [\n";
  for (size_t i = 0; i < doc.diagnostics.checks.size(); ++i) {
    const ResidualCheck& c = doc.diagnostics.checks[i];
    os << "      {\"name\": \"" << c.name
       << "\", \"residual\": " << fmt_double(c.residual)
       << ", \"threshold\": " << fmt_double(c.threshold)
       << ", \"pass\": " << (c.pass ? "true" : "false") << "}";
    if (i + 1 < doc.diagnostics.checks.size()) os << ",";
    os << "\n";
  }
  os << "    ]\n";
  os << "  }\n";
  os << "}\n";
  return os.str();
}

void write_document(const FilterBankDocument& doc, const std::string& path) {
  const std::string text = serialize_document(doc);
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DocumentError("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out.good()) throw DocumentError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw DocumentError("rename failed for " + target.string() + ": " + ec.message());
}

namespace {

using json = nlohmann::json;

const json& field(const json& obj, const char* key, const char* context) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw DocumentError(std::string("missing field '") + key + "' in " + context);
  }
  return *it;
}

Filter parse_filter(const json& obj, const char* name) {
  const json& offset = field(obj, "offset", name);
  const json& coeffs = field(obj, "coeffs", name);
  if (!offset.is_number_integer() || !coeffs.is_array()) {
    throw DocumentError(std::string("malformed filter '") + name + "'");
  }
  std::vector<double> values;
  for (const auto& v : coeffs) {
    if (!v.is_number()) {
      throw DocumentError(std::string("non-numeric coefficient in filter '") + name + "'");
    }
    values.push_back(v.get<double>());
  }
  return Filter(std::move(values), offset.get<long>());
}

}  // namespace

FilterBankDocument parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError(std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw DocumentError("document root must be an object");

  FilterBankDocument doc;
  doc.schema_version = field(root, "schema_version", "document").get<int>();
  if (doc.schema_version != 1) {
    throw DocumentError("unsupported schema_version");
  }
  doc.n = field(root, "n", "document").get<int>();
  doc.h_left = field(root, "h_left", "document").get<double>();
  doc.h_right = field(root, "h_right", "document").get<double>();
  if (doc.n < 1 || !(doc.h_left > 0.0) || !(doc.h_right > 0.0)) {
    throw DocumentError("invalid mesh parameters (need n >= 1, h_left > 0, h_right > 0)");
  }

  const json& regular = field(root, "regular", "document");
  doc.p = parse_filter(field(regular, "p", "regular"), "p");
  doc.d = parse_filter(field(regular, "d", "regular"), "d");
  doc.q1 = parse_filter(field(regular, "q1", "regular"), "q1");
  doc.q2 = parse_filter(field(regular, "q2", "regular"), "q2");

  const json& irregular = field(root, "irregular", "document");
  doc.row_offset = field(irregular, "row_offset", "irregular").get<long>();
  const long rows = field(irregular, "rows", "irregular").get<long>();
  const long cols = field(irregular, "columns", "irregular").get<long>();
  const json& matrix = field(irregular, "matrix", "irregular");
  if (doc.row_offset != central_window(doc.n).lo ||
      rows != central_window(doc.n).length()) {
    throw DocumentError("irregular block shape inconsistent with n");
  }
  if (rows < 0 || cols < 0 ||
      !matrix.is_array() ||
      static_cast<long>(matrix.size()) != rows * cols) {
    throw DocumentError("irregular matrix size mismatch");
  }
  doc.q_irr = Eigen::MatrixXd::Zero(rows, cols);
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      const json& v = matrix[static_cast<size_t>(r * cols + c)];
      if (!v.is_number()) throw DocumentError("non-numeric irregular matrix entry");
      doc.q_irr(r, c) = v.get<double>();
    }
  }

  const json& diag = field(root, "diagnostics", "document");
  for (const auto& entry : field(diag, "checks", "diagnostics")) {
    ResidualCheck check;
    check.name = field(entry, "name", "checks").get<std::string>();
    check.residual = field(entry, "residual", "checks").get<double>();
    check.threshold = field(entry, "threshold", "checks").get<double>();
    check.pass = field(entry, "pass", "checks").get<bool>();
    doc.diagnostics.checks.push_back(std::move(check));
  }
  return doc;
}

FilterBankDocument read_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

VerificationReport verify_document(const FilterBankDocument& doc) {
  const MeshConfig cfg(doc.n, doc.h_left, doc.h_right);
  const Pipeline pl = build_pipeline(cfg);

  RegularFrame stored;
  stored.p = doc.p;
  stored.d = doc.d;
  stored.q1 = doc.q1;
  stored.q2 = doc.q2;
  const FrameOperator frame = assemble_frame(stored, doc.q_irr, cfg);
  return verify_against(pl, stored, frame);
}

}  // namespace ddframe
