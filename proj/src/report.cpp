#include "virtheta/report.hpp"

namespace virtheta {

nlohmann::json rational_to_json(const Rational& q) { return nlohmann::json::array({q.numerator(), q.denominator()}); }

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["params"] = params;
  j["trunc"] = rational_to_json(trunc);
  j["pass"] = pass;
  if (first_mismatch) {
    j["first_mismatch"] = {{"exponent", rational_to_json(first_mismatch->exponent)},
                           {"lhs", bigint_to_json(first_mismatch->lhs)},
                           {"rhs", bigint_to_json(first_mismatch->rhs)}};
  } else {
    j["first_mismatch"] = nullptr;
  }
  j["wall_time_ms"] = wall_time_ms;
  return j;
}

VerificationReport make_report(std::string name, nlohmann::json params, const QSeries& lhs, const QSeries& rhs,
                               Rational T, const Stopwatch& clock) {
  VerificationReport r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.trunc = T;
  Comparison c = equals_to_order(lhs, rhs, T);
  r.pass = c.equal;
  r.first_mismatch = c.first_mismatch;
  r.wall_time_ms = clock.elapsed_ms();
  return r;
}

}  // namespace virtheta
