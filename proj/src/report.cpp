#include "freenorm/report.hpp"

namespace freenorm {

ReportRow make_bound_row(std::string experiment, std::string instance, std::uint64_t seed,
                         std::string quantity, double lhs, double rhs, double constant,
                         double slack) {
  ReportRow row;
  row.experiment = std::move(experiment);
  row.instance = std::move(instance);
  row.seed = seed;
  row.quantity = std::move(quantity);
  row.lhs = lhs;
  row.rhs = rhs;
  row.constant = constant;
  row.slack = slack;
  row.pass = lhs <= constant * rhs * (1.0 + slack);
  return row;
}

ReportRow make_residual_row(std::string experiment, std::string instance, std::uint64_t seed,
                            std::string quantity, double residual, double tolerance) {
  return make_bound_row(std::move(experiment), std::move(instance), seed, std::move(quantity),
                        residual, tolerance, 1.0, 0.0);
}

bool all_pass(const std::vector<ReportRow>& rows) {
  for (const ReportRow& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace freenorm
