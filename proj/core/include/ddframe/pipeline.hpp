// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDFRAME_PIPELINE_HPP
#define DDFRAME_PIPELINE_HPP

#include <vector>

#include "ddframe/frame.hpp"

namespace ddframe {

/// All artifacts of the construction for one mesh configuration.
struct Pipeline {
  MeshConfig cfg{};
  BandedOperator op{};
  RegularFrame filters{};
  WindowedVector unit_gram{};
  GramianWindow gram_raw{};
  GramianWindow gram{};        // normalized
  Eigen::VectorXd d_diag;
  MomentTable moments{};
  SMatrix S{};
  IndexWindow padded{};
  Eigen::MatrixXd R;           // over padded window
  Eigen::MatrixXd R_irr;       // over central window
  Eigen::MatrixXd Q_irr;
  FrameOperator frame{};
};

/// Runs the full construction. Throws AdmissibilityError for inadmissible
/// mesh ratios and std::runtime_error on internal self-check failures.
/// s_columns < n builds the reduced vanishing-moment variant.
Pipeline build_pipeline(const MeshConfig& cfg, int s_columns = -1);

// Individual residuals, exposed for targeted testing. Residuals over
// polynomially growing vectors are normalized entrywise by
// max(1, |reference|).
double s_projector_residual(const SMatrix& S, const MomentTable& moments);
double moment_map_residual(const SMatrix& S, const MomentTable& moments);
/// max over alpha < n_moments of the normalized residuals |Q^T m_alpha| over
/// all columns touching the padded window.
double vanishing_moment_residual(const FrameOperator& frame,
                                 const MomentTable& moments, int n_moments);
double eigen_relation_residual(const BandedOperator& op,
                               const MomentTable& moments);

struct ParsevalWitness {
  double telescope_max = 0.0;          // max over levels and test functions,
                                       // relative to ||f||^2
  std::vector<double> limit_errors;    // |v_j^T S v_j - ||f||^2| / ||f||^2,
                                       // j = 0..depth, worst test function
  double limit_final = 0.0;
  bool monotone_from_3 = false;
};

/// Telescoping and limit witness with a smooth bump straddling the irregular
/// region and the same bump shifted fully into each regular region. The
/// finest-level coefficients are computed by trapezoidal quadrature at
/// cfg.tol.quad_level; coarser levels follow the exact two-scale recursion.
ParsevalWitness parseval_witness(const Pipeline& pl);

/// Full verification battery over the pipeline's own artifacts.
VerificationReport verify_frame(const Pipeline& pl);

/// Same battery, but the frame-dependent residuals (UEP, factor
/// reconstruction, vanishing moments, Parseval) are evaluated with the given
/// filters and frame operator; used to verify stored filter banks against a
/// freshly built pipeline.
VerificationReport verify_against(const Pipeline& pl,
                                  const RegularFrame& filters,
                                  const FrameOperator& frame);

}  // namespace ddframe

#endif  // DDFRAME_PIPELINE_HPP
