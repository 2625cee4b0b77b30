#pragma once

// One fusion instance: z = H x + e with E[e e^T] = R + C P C^T and P constrained
// by an information structure.

#include "oci/information_structure.hpp"

#include <string>

namespace oci {

class FusionProblem {
 public:
  FusionProblem(Matrix H, const Matrix& R, Matrix C, InfoStructure info, const Tolerances& tol = {})
      : H_(std::move(H)),
        R_(R, Definiteness::PositiveDefinite, tol),
        C_(std::move(C)),
        info_(std::move(info)) {
    if (H_.rows() < 1 || H_.cols() < 1) throw Error("problem: H must be non-empty");
    if (!H_.allFinite() || !C_.allFinite()) throw Error("problem: non-finite entries");
    if (R_.dim() != H_.rows()) throw Error("problem: R must be o x o with o = rows of H");
    if (C_.rows() != H_.rows()) throw Error("problem: C must have o rows");
    if (C_.cols() != info_.m()) throw Error("problem: C must have m columns");
  }

  const Matrix& H() const { return H_; }
  const PsdMatrix& R() const { return R_; }
  const Matrix& C() const { return C_; }
  const InfoStructure& info() const { return info_; }

  Eigen::Index n() const { return H_.cols(); }
  Eigen::Index o() const { return H_.rows(); }
  Eigen::Index m() const { return info_.m(); }

  /// Free-form provenance note, e.g. an epsilon substitution for R = 0.
  const std::string& note() const { return note_; }
  FusionProblem with_note(std::string note) const {
    FusionProblem p = *this;
    p.note_ = std::move(note);
    return p;
  }

  /// H^T R^{-1} H.
  Matrix information() const { return H_.transpose() * R_.matrix().llt().solve(H_); }

 private:
  Matrix H_;
  PsdMatrix R_;
  Matrix C_;
  InfoStructure info_;
  std::string note_;
};

}  // namespace oci
