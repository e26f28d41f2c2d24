#pragma once

#include <vector>

#include <json.hpp>

#include "sagin/types.hpp"

namespace sagin::ris {

// One nulling condition on the reflection matrix: the effective block
// target + g_bar * Theta * f_bar must vanish. target is the pre-reflection
// effective block (possibly zero for cascade-only conditions), g_bar the
// receiver-side cascade and f_bar the transmitter-side cascade.
struct NullConstraint {
  CMat target;  // N x N
  CMat g_bar;   // N x L
  CMat f_bar;   // L x N
  LinkLabel label;
};

struct LinearSystem {
  CMat a;    // (N^2 * #constraints) x L
  CVec rhs;  // -vec(target) stacked
};

// Vectorizes the constraints: per reflection element l the column is
// vec(g_l * f_l^T), the lifted action of Theta = diag(alpha) on each block.
LinearSystem assemble(const std::vector<NullConstraint>& constraints);

struct RisDesign {
  CVec alpha;                 // per-element reflection coefficients
  CMat theta;                 // diag(alpha)
  std::vector<double> residuals;  // Frobenius norm per constraint, recomputed
  std::vector<LinkLabel> labels;
  double max_residual = 0.0;
};

// Minimum-norm least-squares reflection design. Infeasible systems are not
// an error: the least-squares alpha is returned with its nonzero residual
// and the caller decides. Residuals are recomputed from alpha by direct
// substitution, never read back from the linear solve.
RisDesign solve(const std::vector<NullConstraint>& constraints);

double constraint_residual(const NullConstraint& c, const CVec& alpha);

enum class BlockRole { Desired, Nulled, Aligned };

const char* to_string(BlockRole role);

// One block of the whole-system matrix: decoder * (direct + g * Theta * f)
// * precoder + offset. Cascade factors may be empty for links that do not
// touch the reflection path; offset covers merged-block conditions that
// compare two effective channels.
struct EffectiveBlockSpec {
  LinkLabel label;
  BlockRole role = BlockRole::Nulled;
  CMat decoder;   // may be empty (identity)
  CMat direct;    // may be empty (zero); otherwise rx-antennas x tx dims
  CMat g;         // may be empty together with f
  CMat f;
  CMat precoder;  // may be empty (identity)
  CMat offset;    // may be empty (zero)
};

CMat effective_block(const EffectiveBlockSpec& spec, const CMat& theta);

struct BlockReport {
  LinkLabel label;
  BlockRole role;
  double frob = 0.0;
  double smin = 0.0;
};

struct VerifyReport {
  std::vector<BlockReport> blocks;
  double max_interference = 0.0;   // over Nulled blocks
  double min_desired_smin = 0.0;   // over Desired blocks
};

// Recomputes every effective block of the whole-system matrix under theta
// and reports interference norms and desired-block smallest singular values.
VerifyReport verify(const std::vector<EffectiveBlockSpec>& blocks, const CMat& theta);

nlohmann::ordered_json to_json(const RisDesign& design);
nlohmann::ordered_json to_json(const VerifyReport& report);

}  // namespace sagin::ris
