#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "ddframe/document.hpp"
#include "oracles.hpp"

using namespace ddframe;

namespace {

bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

FilterBankDocument sample_document() {
  static const FilterBankDocument cached = [] {
    const Pipeline pl = build_pipeline(MeshConfig(1, 1.0, 2.0));
    return make_document(pl, verify_frame(pl));
  }();
  return cached;
}

}  // namespace

TEST_SUITE_BEGIN("document");

TEST_CASE("serialization round-trips bit-exactly") {
  oracles::Rng rng(6001);
  FilterBankDocument doc = sample_document();
  // scribble awkward values over the irregular block
  doc.q_irr = Eigen::MatrixXd(3, 2);
  doc.q_irr << 1.0 / 3.0, 5e-324, -0.0, 1.9999999999999998,
      6.02214076e23, -3.141592653589793e-17;
  doc.h_right = 0.30000000000000004;

  const FilterBankDocument parsed = parse_document(serialize_document(doc));
  CHECK(parsed.n == doc.n);
  CHECK(bit_equal(parsed.h_left, doc.h_left));
  CHECK(bit_equal(parsed.h_right, doc.h_right));
  for (long k = doc.p.first(); k <= doc.p.last(); ++k) {
    CHECK(bit_equal(parsed.p.at(k), doc.p.at(k)));
  }
  for (long k = doc.d.first(); k <= doc.d.last(); ++k) {
    CHECK(bit_equal(parsed.d.at(k), doc.d.at(k)));
  }
  REQUIRE(parsed.q_irr.rows() == doc.q_irr.rows());
  REQUIRE(parsed.q_irr.cols() == doc.q_irr.cols());
  for (Eigen::Index r = 0; r < doc.q_irr.rows(); ++r) {
    for (Eigen::Index c = 0; c < doc.q_irr.cols(); ++c) {
      CHECK(bit_equal(parsed.q_irr(r, c), doc.q_irr(r, c)));
    }
  }

  for (int trial = 0; trial < 30; ++trial) {
    FilterBankDocument fuzz = sample_document();
    for (Eigen::Index r = 0; r < fuzz.q_irr.rows(); ++r) {
      for (Eigen::Index c = 0; c < fuzz.q_irr.cols(); ++c) {
        fuzz.q_irr(r, c) = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.integer(-14, 3));
      }
    }
    const FilterBankDocument back = parse_document(serialize_document(fuzz));
    for (Eigen::Index r = 0; r < fuzz.q_irr.rows(); ++r) {
      for (Eigen::Index c = 0; c < fuzz.q_irr.cols(); ++c) {
        CHECK(bit_equal(back.q_irr(r, c), fuzz.q_irr(r, c)));
      }
    }
  }
}

TEST_CASE("own documents verify clean") {
  for (double h : {1.0, 2.0}) {
    const Pipeline pl = build_pipeline(MeshConfig(2, 1.0, h));
    const FilterBankDocument doc = make_document(pl, verify_frame(pl));
    CHECK(verify_document(doc).all_pass());
  }
}

TEST_CASE("perturbed irregular entries are detected") {
  const Pipeline pl = build_pipeline(MeshConfig(2, 1.0, 2.0));
  FilterBankDocument doc = make_document(pl, verify_frame(pl));
  Eigen::Index r = 0, c = 0;
  doc.q_irr.cwiseAbs().maxCoeff(&r, &c);
  doc.q_irr(r, c) += 1e-3;
  const VerificationReport report = verify_document(doc);
  CHECK_FALSE(report.all_pass());
  const ResidualCheck* recon = report.find("psd_reconstruction");
  REQUIRE(recon != nullptr);
  CHECK_FALSE(recon->pass);
}

TEST_CASE("tampered regular filters are detected too") {
  const Pipeline pl = build_pipeline(MeshConfig(2, 1.0, 2.0));
  FilterBankDocument doc = make_document(pl, verify_frame(pl));
  std::vector<double> coeffs = doc.q1.coeffs();
  coeffs[2] += 1e-3;
  doc.q1 = Filter(std::move(coeffs), doc.q1.offset());
  const VerificationReport report = verify_document(doc);
  CHECK_FALSE(report.all_pass());
  const ResidualCheck* uep = report.find("uep");
  REQUIRE(uep != nullptr);
  CHECK_FALSE(uep->pass);
}

TEST_CASE("diagnostics snapshot survives the round trip") {
  const FilterBankDocument doc = sample_document();
  const FilterBankDocument back = parse_document(serialize_document(doc));
  REQUIRE(back.diagnostics.checks.size() == doc.diagnostics.checks.size());
  for (size_t i = 0; i < doc.diagnostics.checks.size(); ++i) {
    CHECK(back.diagnostics.checks[i].name == doc.diagnostics.checks[i].name);
    CHECK(back.diagnostics.checks[i].pass == doc.diagnostics.checks[i].pass);
    CHECK(bit_equal(back.diagnostics.checks[i].residual,
                    doc.diagnostics.checks[i].residual));
  }
  CHECK(back.diagnostics.all_pass() == doc.diagnostics.all_pass());
}

TEST_CASE("write is atomic and readable") {
  const std::filesystem::path path = std::filesystem::temp_directory_path() /
                                     "ddframe_doc_test.json";
  const FilterBankDocument doc = sample_document();
  write_document(doc, path.string());
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const FilterBankDocument back = read_document(path.string());
  CHECK(back.n == doc.n);
  CHECK(bit_equal(back.h_right, doc.h_right));
  std::filesystem::remove(path);
}

TEST_CASE("malformed documents raise parse errors") {
  CHECK_THROWS_AS(parse_document("{ not json"), DocumentError);
  CHECK_THROWS_AS(parse_document("[1,2,3]"), DocumentError);

  const std::string text = serialize_document(sample_document());
  // truncation
  CHECK_THROWS_AS(parse_document(text.substr(0, text.size() / 2)), DocumentError);

  // missing field carries the field name
  try {
    parse_document("{\"schema_version\": 1}");
    FAIL("expected DocumentError");
  } catch (const DocumentError& e) {
    CHECK(std::string(e.what()).find("'n'") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_document("{\"schema_version\": 7}"), DocumentError);
  CHECK_THROWS_AS(read_document("/nonexistent/ddframe.json"), DocumentError);
}

TEST_SUITE_END();
