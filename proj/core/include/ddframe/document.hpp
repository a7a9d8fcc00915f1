// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_DOCUMENT_HPP
#define DDFRAME_DOCUMENT_HPP

#include <stdexcept>
#include <string>

#include "ddframe/pipeline.hpp"

namespace ddframe {

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Serialized filter bank: the regular filters, the irregular block with its
/// row offset 5-6n, and a diagnostics snapshot. Numeric fields are written
/// with 17 significant digits and round-trip bit-exactly.
struct FilterBankDocument {
  int schema_version = 1;
  int n = 0;
  double h_left = 1.0;
  double h_right = 1.0;
  Filter p, d, q1, q2;
  long row_offset = 0;       // 5 - 6n
  Eigen::MatrixXd q_irr;     // (12n-9) x rank
  VerificationReport diagnostics;
};

FilterBankDocument make_document(const Pipeline& pl,
                                 const VerificationReport& report);

std::string serialize_document(const FilterBankDocument& doc);

/// Atomic write: temp file in the target directory, then rename.
void write_document(const FilterBankDocument& doc, const std::string& path);

FilterBankDocument parse_document(const std::string& text);

/// Throws DocumentError with parse/field context on malformed input.
FilterBankDocument read_document(const std::string& path);

/// Rebuilds the pipeline for the stored (n, h_left, h_right) and recomputes
/// every residual from the stored filters.
VerificationReport verify_document(const FilterBankDocument& doc);

}  // namespace ddframe

#endif  // DDFRAME_DOCUMENT_HPP
