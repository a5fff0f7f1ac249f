#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace freenorm {

/// One checked inequality.  For bound rows the contract is
/// pass <=> lhs <= constant * rhs * (1 + slack); residual rows encode the
/// residual as lhs, the tolerance as rhs with constant 1 and slack 0.
struct ReportRow {
  std::string experiment;
  std::string instance;
  std::uint64_t seed = 0;
  std::string quantity;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 1.0;
  double slack = 0.0;
  bool pass = false;
  double ms = 0.0;
};

ReportRow make_bound_row(std::string experiment, std::string instance, std::uint64_t seed,
                         std::string quantity, double lhs, double rhs, double constant,
                         double slack);

ReportRow make_residual_row(std::string experiment, std::string instance, std::uint64_t seed,
                            std::string quantity, double residual, double tolerance);

bool all_pass(const std::vector<ReportRow>& rows);

}  // namespace freenorm
