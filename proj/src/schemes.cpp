#include "sagin/schemes.hpp"

#include <stdexcept>

namespace sagin {

const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::NoCsi: return "nocsi";
    case SchemeId::Icsi: return "icsi";
    case SchemeId::Dcsi: return "dcsi";
  }
  return "unknown";
}

SchemeId scheme_from_string(const std::string& name) {
  if (name == "nocsi") return SchemeId::NoCsi;
  if (name == "icsi") return SchemeId::Icsi;
  if (name == "dcsi") return SchemeId::Dcsi;
  throw std::invalid_argument("unknown scheme: " + name);
}

double relative_error(const CVec& sent, const CVec& recovered) {
  const double scale = sent.norm();
  return (recovered - sent).norm() / (scale > 0.0 ? scale : 1.0);
}

nlohmann::ordered_json outcome_to_json(const SchemeOutcome& outcome) {
  nlohmann::ordered_json doc;
  doc["slots"] = outcome.slots;
  doc["recovery_err"] = outcome.recovery_err;
  doc["max_residual"] = outcome.interference_residual;
  doc["dof_num"] = outcome.dof_counted.num;
  doc["dof_den"] = outcome.dof_counted.den;
  doc["sources"] = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < outcome.sent.size(); ++s) {
    nlohmann::ordered_json row;
    row["source"] = s;  // 0 is the satellite
    row["streams"] = outcome.sent[s].size();
    row["recovery_err"] = relative_error(outcome.sent[s], outcome.recovered[s]);
    doc["sources"].push_back(std::move(row));
  }
  if (!outcome.aligned_dims.empty()) doc["aligned_dims"] = outcome.aligned_dims;
  return doc;
}

}  // namespace sagin
