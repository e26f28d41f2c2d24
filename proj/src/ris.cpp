#include "sagin/ris.hpp"

#include <limits>
#include <stdexcept>

#include "sagin/linalg.hpp"

namespace sagin::ris {

const char* to_string(BlockRole role) {
  switch (role) {
    case BlockRole::Desired: return "desired";
    case BlockRole::Nulled: return "nulled";
    case BlockRole::Aligned: return "aligned";
  }
  return "unknown";
}

LinearSystem assemble(const std::vector<NullConstraint>& constraints) {
  if (constraints.empty()) throw std::invalid_argument("assemble: no constraints");
  const Eigen::Index l = constraints.front().g_bar.cols();
  Eigen::Index rows = 0;
  for (const auto& c : constraints) {
    if (c.g_bar.cols() != l || c.f_bar.rows() != l)
      throw std::invalid_argument("assemble: inconsistent RIS element count");
    if (c.target.rows() != c.g_bar.rows() || c.target.cols() != c.f_bar.cols())
      throw std::invalid_argument("assemble: block dimension mismatch");
    rows += c.target.size();
  }

  LinearSystem sys;
  sys.a.resize(rows, l);
  sys.rhs.resize(rows);
  Eigen::Index r0 = 0;
  for (const auto& c : constraints) {
    const Eigen::Index block = c.target.size();
    // Column p of (f^T (x) g) * beta is vec(g_p * f_p^T): the action of the
    // p-th reflection element on this block.
    for (Eigen::Index p = 0; p < l; ++p) {
      const CMat outer = c.g_bar.col(p) * c.f_bar.row(p);
      sys.a.block(r0, p, block, 1) = linalg::vec(outer);
    }
    sys.rhs.segment(r0, block) = -linalg::vec(c.target);
    r0 += block;
  }
  return sys;
}

double constraint_residual(const NullConstraint& c, const CVec& alpha) {
  return (c.target + c.g_bar * alpha.asDiagonal() * c.f_bar).norm();
}

RisDesign solve(const std::vector<NullConstraint>& constraints) {
  const LinearSystem sys = assemble(constraints);

  // Minimum-norm least squares through the SVD pseudoinverse; the literal
  // normal-equations form is unstable when the stacked system is
  // ill-conditioned and agrees with this one otherwise.
  RisDesign design;
  design.alpha = linalg::pinv(sys.a) * sys.rhs;
  design.theta = CMat(design.alpha.asDiagonal());

  design.residuals.reserve(constraints.size());
  design.labels.reserve(constraints.size());
  for (const auto& c : constraints) {
    design.residuals.push_back(constraint_residual(c, design.alpha));
    design.labels.push_back(c.label);
    design.max_residual = std::max(design.max_residual, design.residuals.back());
  }
  return design;
}

CMat effective_block(const EffectiveBlockSpec& spec, const CMat& theta) {
  CMat inner;
  if (spec.direct.size() > 0) inner = spec.direct;
  if (spec.g.size() > 0) {
    const CMat cascade = spec.g * theta * spec.f;
    inner = inner.size() > 0 ? CMat(inner + cascade) : cascade;
  }
  if (inner.size() == 0) throw std::invalid_argument("effective_block: no channel term");
  CMat out = inner;
  if (spec.decoder.size() > 0) out = spec.decoder * out;
  if (spec.precoder.size() > 0) out = out * spec.precoder;
  if (spec.offset.size() > 0) out += spec.offset;
  return out;
}

nlohmann::ordered_json to_json(const RisDesign& design) {
  nlohmann::ordered_json doc;
  doc["elements"] = design.alpha.size();
  doc["max_residual"] = design.max_residual;
  doc["residuals"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < design.residuals.size(); ++i) {
    nlohmann::ordered_json row;
    row["tx"] = design.labels[i].tx;
    row["rx"] = design.labels[i].rx;
    row["slot"] = design.labels[i].slot;
    row["residual"] = design.residuals[i];
    doc["residuals"].push_back(std::move(row));
  }
  return doc;
}

nlohmann::ordered_json to_json(const VerifyReport& report) {
  nlohmann::ordered_json doc;
  doc["max_interference"] = report.max_interference;
  doc["min_desired_smin"] = report.min_desired_smin;
  doc["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : report.blocks) {
    nlohmann::ordered_json row;
    row["tx"] = b.label.tx;
    row["rx"] = b.label.rx;
    row["slot"] = b.label.slot;
    row["role"] = to_string(b.role);
    row["frob"] = b.frob;
    row["smin"] = b.smin;
    doc["blocks"].push_back(std::move(row));
  }
  return doc;
}

VerifyReport verify(const std::vector<EffectiveBlockSpec>& blocks, const CMat& theta) {
  VerifyReport report;
  report.min_desired_smin = std::numeric_limits<double>::infinity();
  bool any_desired = false;
  for (const auto& spec : blocks) {
    const CMat m = effective_block(spec, theta);
    BlockReport row;
    row.label = spec.label;
    row.role = spec.role;
    row.frob = m.norm();
    const auto s = linalg::svd(m).s;
    row.smin = s.size() > 0 ? s(s.size() - 1) : 0.0;
    if (spec.role == BlockRole::Nulled)
      report.max_interference = std::max(report.max_interference, row.frob);
    if (spec.role == BlockRole::Desired) {
      report.min_desired_smin = std::min(report.min_desired_smin, row.smin);
      any_desired = true;
    }
    report.blocks.push_back(std::move(row));
  }
  if (!any_desired) report.min_desired_smin = 0.0;
  return report;
}

}  // namespace sagin::ris
