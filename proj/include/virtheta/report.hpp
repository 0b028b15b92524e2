#pragma once

#include "virtheta/qseries.hpp"

#include <chrono>

namespace virtheta {

struct VerificationReport {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  Rational trunc{0};
  bool pass = false;
  std::optional<Mismatch> first_mismatch;
  double wall_time_ms = 0;

  nlohmann::json to_json() const;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Compares lhs and rhs up to T and fills a report; the stopwatch supplies the wall time.
VerificationReport make_report(std::string name, nlohmann::json params, const QSeries& lhs, const QSeries& rhs,
                               Rational T, const Stopwatch& clock);

nlohmann::json rational_to_json(const Rational& q);

}  // namespace virtheta
