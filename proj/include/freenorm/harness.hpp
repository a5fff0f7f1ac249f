#pragma once

#include <map>
#include <string>
#include <vector>

#include "freenorm/algebra.hpp"
#include "freenorm/report.hpp"
#include "freenorm/rmt.hpp"
#include "freenorm/solver.hpp"
#include "freenorm/spaces.hpp"

namespace freenorm {

/// Flat `key = value` configuration with dotted key paths.  Lines starting
/// with `#` (or trailing `# ...` fragments) are comments.  Duplicate keys are
/// rejected.  Every key must belong to the fixed schema; validation happens
/// before any computation starts.
class Config {
 public:
  Config() = default;

  static Config parse_text(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  /// Comma-separated values; integer lists also accept inclusive `a..b` ranges.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::string& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::string& fallback) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key,
                                      const std::string& fallback) const;

  /// Throws std::invalid_argument naming the first key outside the schema.
  void validate_keys() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

ModelConfig model_config_from(const Config& cfg);
SolverConfig solver_config_from(const Config& cfg);
/// Parses the `spaces` key into a norm grid; rejects an empty grid.
std::vector<SymmetricSpace> space_grid_from(const Config& cfg,
                                            const std::string& fallback);

/// The batch experiment names, in canonical order.
std::vector<std::string> suite_names();

/// Runs one named suite.  Deterministic given the config; per-instance
/// failures (including thrown resource guards) become failed rows rather
/// than aborting the batch.
std::vector<ReportRow> run_suite(const std::string& suite, const Config& cfg);

/// Dispatches on the `suite` key ("all" runs every suite in order).
std::vector<ReportRow> run_experiment(const Config& cfg);

/// Fixed-schema CSV: experiment,instance,seed,quantity,lhs,rhs,constant,
/// slack,pass,ms with %.12g numbers.  Byte-identical across reruns.
std::string to_csv(const std::vector<ReportRow>& rows);
/// Per-quantity series (x = seed, y = both sides) for external plotting.
std::string to_plotdata(const std::vector<ReportRow>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// {"blocks":[{"dim":n,"mass":w,"entries":[[re,im],...]}]} with row-major
/// entries per block.
std::string operator_to_json(const Operator& x);
Operator operator_from_json(const std::string& text);

}  // namespace freenorm
