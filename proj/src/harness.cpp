#include "freenorm/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "freenorm/free_sums.hpp"
#include "freenorm/js.hpp"
#include "freenorm/random.hpp"
#include "freenorm/words.hpp"

namespace freenorm {

namespace {

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

const std::set<std::string>& schema() {
  static const std::set<std::string> keys = {
      "suite",           "out",
      "timing",          "slack",
      "seeds",           "instances",
      "spaces",          "distribution",
      "hermitian",       "K",
      "dims",            "d",
      "n",               "m",
      "L",               "with_sigma",
      "with_pipeline",   "with_truncation",
      "model.N",         "model.trials",
      "model.seed",      "model.slack",
      "solver.max_iter", "solver.eps_start",
      "solver.eps_end",  "solver.tol_rel",
      "solver.seed",
  };
  return keys;
}

long long parse_integer(const std::string& text) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
  return value;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return value;
}

std::vector<long long> expand_integer_list(const std::vector<std::string>& items) {
  std::vector<long long> out;
  for (const std::string& item : items) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_integer(item));
      continue;
    }
    const long long lo = parse_integer(item.substr(0, dots));
    const long long hi = parse_integer(item.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range: '" + item + "'");
    for (long long v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string sanitize_field(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

ReportRow error_row(const std::string& experiment, const std::string& instance,
                    std::uint64_t seed, const std::string& what) {
  return make_residual_row(experiment, instance, seed, "error:" + what, 1.0, 0.0);
}

/// Runs one instance body; an exception becomes a failed row, and with
/// timing enabled every row the body appended is stamped with the elapsed
/// wall time.
void run_instance(std::vector<ReportRow>& rows, bool timing, const std::string& experiment,
                  const std::string& instance, std::uint64_t seed,
                  const std::function<void()>& body) {
  const std::size_t before = rows.size();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    rows.push_back(error_row(experiment, instance, seed, e.what()));
  }
  if (timing) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    for (std::size_t i = before; i < rows.size(); ++i) rows[i].ms = ms;
  }
}

FreeFamily make_instance_family(int K, int dims, const std::string& distribution,
                                bool hermitian, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("family needs at least one summand");
  if (dims < 1) throw std::invalid_argument("summand dimension must be positive");
  std::vector<Operator> xs;
  if (distribution == "bernoulli") {
    if (dims % 2 != 0)
      throw std::invalid_argument("sign summands need an even dimension");
    Matrix sign = Matrix::Zero(dims, dims);
    for (int j = 0; j < dims; ++j) sign(j, j) = (j % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i < K; ++i) xs.push_back(Operator::from_matrix(sign));
  } else if (distribution == "gaussian") {
    Rng gen = make_rng(seed, 911);
    for (int i = 0; i < K; ++i) xs.push_back(random_centered(dims, hermitian, gen));
  } else {
    throw std::invalid_argument("unknown distribution: '" + distribution + "'");
  }
  return FreeFamily::over_scalars(std::move(xs));
}

constexpr const char* kDefaultGrid =
    "lp:1,lp:1.5,lp:2,lp:3,lp:inf,l1+tlinf:0.1,l1+tlinf:1,l1+tlinf:10";

void run_voiculescu(const Config& cfg, std::vector<ReportRow>& rows) {
  const std::vector<std::uint64_t> seeds = cfg.get_u64s("seeds", "0..19");
  const int K = cfg.get_int("K", 2);
  const int dims = cfg.get_int("dims", 2);
  const std::string distribution = cfg.get_string("distribution", "bernoulli");
  const bool hermitian = cfg.get_bool("hermitian", true);
  const bool timing = cfg.get_bool("timing", false);
  ModelConfig model = model_config_from(cfg);
  model.trials = cfg.get_int("model.trials", 1);  // one sample per seed
  const double slack = cfg.get_double("slack", model.slack);
  const SymmetricSpace linf = SymmetricSpace::linf();

  const bool windowed = distribution == "bernoulli" && K == 2 && dims == 2;
  int in_window = 0;
  for (std::uint64_t seed : seeds) {
    const std::string id = "s" + std::to_string(seed);
    run_instance(rows, timing, "voiculescu", id, seed, [&] {
      const FreeFamily family = make_instance_family(K, dims, distribution, hermitian, seed);
      ModelConfig mc = model;
      mc.seed = seed;
      const ModelNorm mn = model_symmetric_norm(family, linf, mc);
      const CapNorm cap = cap_norm(family, linf);
      rows.push_back(make_bound_row("voiculescu", id, seed, "max_le_model", cap.value,
                                    mn.mean, 1.0, slack));
      rows.push_back(make_bound_row("voiculescu", id, seed, "model_le_sum", mn.mean,
                                    cap.column + cap.row + cap.diagonal, 1.0, slack));
      if (windowed && mn.mean >= 1.9 && mn.mean <= 2.1) ++in_window;
    });
  }
  if (windowed && !seeds.empty()) {
    const double outside =
        1.0 - static_cast<double>(in_window) / static_cast<double>(seeds.size());
    rows.push_back(make_residual_row("voiculescu", "aggregate", model.seed,
                                     "arcsine_window_outside_q", outside, 0.1));
  }
}

void run_maincor(const Config& cfg, std::vector<ReportRow>& rows) {
  const int instances = cfg.get_int("instances", 10);
  const int K = cfg.get_int("K", 2);
  const int dims = cfg.get_int("dims", 2);
  const std::string distribution = cfg.get_string("distribution", "gaussian");
  const bool hermitian = cfg.get_bool("hermitian", true);
  const bool timing = cfg.get_bool("timing", false);
  VerifyOptions options;
  options.spaces = space_grid_from(cfg, kDefaultGrid);
  options.model = model_config_from(cfg);
  options.solver = solver_config_from(cfg);
  options.slack = cfg.get_double("slack", 0.05);
  options.with_sigma = cfg.get_bool("with_sigma", true);
  options.with_pipeline = cfg.get_bool("with_pipeline", true);
  options.with_truncation = cfg.get_bool("with_truncation", false);

  for (int idx = 0; idx < instances; ++idx) {
    VerifyOptions oi = options;
    oi.model.seed = options.model.seed + static_cast<std::uint64_t>(idx);
    const std::string id = "i" + std::to_string(idx);
    run_instance(rows, timing, "free_sums", id, oi.model.seed, [&] {
      const FreeFamily family =
          make_instance_family(K, dims, distribution, hermitian, oi.model.seed);
      const std::vector<ReportRow> got = verify_free_sum_inequalities(family, oi, id);
      rows.insert(rows.end(), got.begin(), got.end());
    });
  }
}

void run_buchholz(const Config& cfg, std::vector<ReportRow>& rows) {
  const int n = cfg.get_int("n", 2);
  const int L = cfg.get_int("L", 8);
  const int instances = cfg.get_int("instances", 20);
  const bool timing = cfg.get_bool("timing", false);
  ModelConfig model = model_config_from(cfg);
  model.N = cfg.get_int("model.N", 128);
  model.trials = cfg.get_int("model.trials", 4);
  const double slack = cfg.get_double("slack", model.slack);
  const SymmetricSpace linf = SymmetricSpace::linf();

  run_instance(rows, timing, "buchholz", "ones", model.seed, [&] {
    const WordCoefficients x = WordCoefficients::ones(n, 1);
    std::vector<double> values;
    for (int l = 0; l <= L; ++l) values.push_back(compression_lower_bound(x, l));
    double drop = 0.0;
    for (std::size_t l = 1; l < values.size(); ++l)
      drop = std::max(drop, values[l - 1] - values[l]);
    const WordBounds bounds = buchholz_bounds(x, linf);
    rows.push_back(make_residual_row("buchholz", "ones", model.seed,
                                     "compression_monotone", drop, 1e-12));
    rows.push_back(make_residual_row("buchholz", "ones", model.seed, "compression_le_sum",
                                     values.back() - bounds.upper, 1e-9));
    // Two generators, length one, all-ones: the limiting value is 2.
    if (n == 2)
      rows.push_back(make_bound_row("buchholz", "ones", model.seed,
                                    "oracle_le_compression", 1.96, values.back(), 1.0,
                                    0.0));
  });

  for (int i = 0; i < instances; ++i) {
    const int d = 1 + i % 3;
    const int m = 1 + i % 2;
    ModelConfig mc = model;
    mc.seed = model.seed + static_cast<std::uint64_t>(i);
    const std::string id = "d" + std::to_string(d) + "m" + std::to_string(m) + "i" +
                           std::to_string(i);
    run_instance(rows, timing, "buchholz", id, mc.seed, [&] {
      Rng gen = make_rng(mc.seed, 3000 + static_cast<std::uint64_t>(i));
      const WordCoefficients x = WordCoefficients::random(n, d, m, gen);
      const ModelNorm mn = evaluate_model_norm(word_model_mu_samples(x, mc), linf);
      const WordBounds bounds = buchholz_bounds(x, linf);
      rows.push_back(make_bound_row("buchholz", id, mc.seed, "max_le_model", bounds.lower,
                                    mn.mean, 1.0, slack));
      rows.push_back(make_bound_row("buchholz", id, mc.seed, "model_le_sum", mn.mean,
                                    bounds.upper, 1.0, slack));
      rows.push_back(make_bound_row("buchholz", id, mc.seed, "compression_le_model",
                                    compression_lower_bound(x, 4), mn.mean, 1.0, slack));
    });
  }
}

void run_lengthd(const Config& cfg, std::vector<ReportRow>& rows) {
  const std::vector<int> degrees = cfg.get_ints("d", "1,2");
  const int instances = cfg.get_int("instances", 5);
  const int n = cfg.get_int("n", 2);
  const int m = cfg.get_int("m", 2);
  const bool timing = cfg.get_bool("timing", false);
  LengthdOptions options;
  options.spaces = space_grid_from(cfg, kDefaultGrid);
  options.model = model_config_from(cfg);
  options.model.N = cfg.get_int("model.N", 96);
  options.model.trials = cfg.get_int("model.trials", 4);
  options.solver = solver_config_from(cfg);
  options.slack = cfg.get_double("slack", 0.05);

  for (int d : degrees)
    for (int i = 0; i < instances; ++i) {
      LengthdOptions oi = options;
      oi.model.seed = options.model.seed + static_cast<std::uint64_t>(i);
      const std::string id = "d" + std::to_string(d) + "i" + std::to_string(i);
      run_instance(rows, timing, "lengthd", id, oi.model.seed, [&] {
        Rng gen =
            make_rng(oi.model.seed, 4000 + 100 * static_cast<std::uint64_t>(d) +
                                        static_cast<std::uint64_t>(i));
        const WordCoefficients x = WordCoefficients::random(n, d, m, gen);
        const std::vector<ReportRow> got = verify_lengthd(x, oi, id);
        rows.insert(rows.end(), got.begin(), got.end());
      });
    }
}

void run_js(const Config& cfg, std::vector<ReportRow>& rows) {
  const std::vector<int> counts = cfg.get_ints("K", "2,4");
  const std::vector<std::uint64_t> seeds = cfg.get_u64s("seeds", "0..19");
  const int dims = cfg.get_int("dims", 2);
  const bool timing = cfg.get_bool("timing", false);
  if (dims < 2 || dims % 2 != 0)
    throw std::invalid_argument("symmetric summands need an even dimension >= 2");
  const std::vector<SymmetricSpace> bases = space_grid_from(cfg, "lp:inf,l1+tlinf:1");
  JsOptions options;
  options.model = model_config_from(cfg);
  options.model.N = cfg.get_int("model.N", 128);
  options.model.trials = cfg.get_int("model.trials", 4);
  options.slack = cfg.get_double("slack", 0.05);

  for (int K : counts)
    for (std::uint64_t seed : seeds) {
      const std::string id = "k" + std::to_string(K) + "s" + std::to_string(seed);
      run_instance(rows, timing, "js", id, seed, [&] {
        Rng gen = make_rng(seed, 5000 + static_cast<std::uint64_t>(K));
        std::uniform_real_distribution<double> uniform(0.1, 3.0);
        std::vector<std::vector<double>> diagonals;
        for (int i = 0; i < K; ++i) {
          std::vector<double> diag;
          for (int j = 0; j < dims / 2; ++j) {
            const double v = uniform(gen);
            diag.push_back(v);
            diag.push_back(-v);
          }
          std::shuffle(diag.begin(), diag.end(), gen);
          diagonals.push_back(std::move(diag));
        }
        const SymmetricDiagonalFamily family(std::move(diagonals));
        for (const SymmetricSpace& base : bases) {
          JsOptions oi = options;
          oi.model.seed = seed;
          const std::vector<ReportRow> got = verify_js(family, base, oi, id);
          rows.insert(rows.end(), got.begin(), got.end());
        }
      });
    }
}

void run_burkholder(const Config& cfg, std::vector<ReportRow>& rows) {
  const int instances = cfg.get_int("instances", 50);
  const int dims = cfg.get_int("dims", 8);
  const bool timing = cfg.get_bool("timing", false);
  const std::uint64_t base_seed = cfg.get_u64("model.seed", 0);
  const SymmetricSpace l2 = SymmetricSpace::lp(2.0);

  for (int i = 0; i < instances; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    const std::string id = "i" + std::to_string(i);
    run_instance(rows, timing, "burkholder", id, seed, [&] {
      Rng gen = make_rng(seed, 6000);
      std::normal_distribution<double> gauss(0.0, 1.0);

      // Random coarsening chain: singletons merged pairwise down to one block.
      std::vector<std::vector<int>> groups;
      for (int j = 0; j < dims; ++j) groups.push_back({j});
      std::vector<std::vector<std::vector<int>>> partitions = {groups};
      while (groups.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, groups.size() - 1);
        std::size_t a = pick(gen), b = pick(gen);
        while (b == a) b = pick(gen);
        if (a > b) std::swap(a, b);
        groups[a].insert(groups[a].end(), groups[b].begin(), groups[b].end());
        groups.erase(groups.begin() + static_cast<long>(b));
        partitions.push_back(groups);
      }
      const MatrixFiltration filtration =
          MatrixFiltration::from_partitions(dims, partitions, i % 2 == 1);

      Matrix m(dims, dims);
      for (int r = 0; r < dims; ++r)
        for (int c = 0; c < dims; ++c) m(r, c) = Complex(gauss(gen), gauss(gen));
      const Operator x = Operator::from_matrix(m);
      const BurkholderNorms norms = burkholder_norms(filtration, x, l2);
      const double target = x.l2_norm() * x.l2_norm();
      rows.push_back(make_residual_row("burkholder", id, seed, "column_sq_pythagoras",
                                       std::abs(norms.column * norms.column - target),
                                       1e-9));
      rows.push_back(make_residual_row("burkholder", id, seed, "row_sq_pythagoras",
                                       std::abs(norms.row * norms.row - target), 1e-9));
      rows.push_back(make_residual_row("burkholder", id, seed, "diagonal_sq_pythagoras",
                                       std::abs(norms.diagonal * norms.diagonal - target),
                                       1e-9));
    });
  }
}

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.entries_.count(key))
      throw std::invalid_argument("duplicate config key: '" + key + "'");
    cfg.entries_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  return parse_text(read_text_file(path));
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const std::string v = get_string(key, fallback ? "true" : "false");
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + v +
                              "'");
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const long long v = parse_integer(it->second);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw std::invalid_argument("config key '" + key + "': value out of range");
  return static_cast<int>(v);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const long long v = parse_integer(it->second);
  if (v < 0) throw std::invalid_argument("config key '" + key + "': expected non-negative");
  return static_cast<std::uint64_t>(v);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return parse_real(it->second);
}

std::vector<std::string> Config::get_list(const std::string& key,
                                          const std::string& fallback) const {
  const std::string joined = get_string(key, fallback);
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(joined);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<int> Config::get_ints(const std::string& key, const std::string& fallback) const {
  std::vector<int> out;
  for (long long v : expand_integer_list(get_list(key, fallback))) {
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw std::invalid_argument("config key '" + key + "': value out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::uint64_t> Config::get_u64s(const std::string& key,
                                            const std::string& fallback) const {
  std::vector<std::uint64_t> out;
  for (long long v : expand_integer_list(get_list(key, fallback))) {
    if (v < 0)
      throw std::invalid_argument("config key '" + key + "': expected non-negative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

void Config::validate_keys() const {
  for (const auto& [key, value] : entries_)
    if (!schema().count(key))
      throw std::invalid_argument("unknown config key: '" + key + "'");
}

ModelConfig model_config_from(const Config& cfg) {
  ModelConfig model;
  model.N = cfg.get_int("model.N", model.N);
  model.trials = cfg.get_int("model.trials", model.trials);
  model.seed = cfg.get_u64("model.seed", model.seed);
  model.slack = cfg.get_double("model.slack", model.slack);
  if (model.N < 1 || model.trials < 1)
    throw std::invalid_argument("model size and trial count must be positive");
  return model;
}

SolverConfig solver_config_from(const Config& cfg) {
  SolverConfig solver;
  solver.max_iter = cfg.get_int("solver.max_iter", solver.max_iter);
  solver.eps_start = cfg.get_double("solver.eps_start", solver.eps_start);
  solver.eps_end = cfg.get_double("solver.eps_end", solver.eps_end);
  solver.tol_rel = cfg.get_double("solver.tol_rel", solver.tol_rel);
  solver.seed = cfg.get_u64("solver.seed", solver.seed);
  return solver;
}

std::vector<SymmetricSpace> space_grid_from(const Config& cfg, const std::string& fallback) {
  std::vector<SymmetricSpace> spaces;
  for (const std::string& descriptor : cfg.get_list("spaces", fallback))
    spaces.push_back(SymmetricSpace::parse(descriptor));
  if (spaces.empty()) throw std::invalid_argument("empty norm grid");
  return spaces;
}

std::vector<std::string> suite_names() {
  return {"voiculescu", "maincor", "buchholz", "lengthd", "js", "burkholder"};
}

std::vector<ReportRow> run_suite(const std::string& suite, const Config& cfg) {
  cfg.validate_keys();
  std::vector<ReportRow> rows;
  if (suite == "voiculescu")
    run_voiculescu(cfg, rows);
  else if (suite == "maincor")
    run_maincor(cfg, rows);
  else if (suite == "buchholz")
    run_buchholz(cfg, rows);
  else if (suite == "lengthd")
    run_lengthd(cfg, rows);
  else if (suite == "js")
    run_js(cfg, rows);
  else if (suite == "burkholder")
    run_burkholder(cfg, rows);
  else
    throw std::invalid_argument("unknown suite: '" + suite + "'");
  return rows;
}

std::vector<ReportRow> run_experiment(const Config& cfg) {
  const std::string suite = cfg.get_string("suite", "all");
  if (suite != "all") return run_suite(suite, cfg);
  std::vector<ReportRow> rows;
  for (const std::string& name : suite_names()) {
    const std::vector<ReportRow> got = run_suite(name, cfg);
    rows.insert(rows.end(), got.begin(), got.end());
  }
  return rows;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = "experiment,instance,seed,quantity,lhs,rhs,constant,slack,pass,ms\n";
  for (const ReportRow& row : rows) {
    out += sanitize_field(row.experiment) + ',' + sanitize_field(row.instance) + ',' +
           std::to_string(row.seed) + ',' + sanitize_field(row.quantity) + ',' +
           format_double(row.lhs) + ',' + format_double(row.rhs) + ',' +
           format_double(row.constant) + ',' + format_double(row.slack) + ',' +
           (row.pass ? "true" : "false") + ',' + format_double(row.ms) + '\n';
  }
  return out;
}

std::string to_plotdata(const std::vector<ReportRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::string> series;
  for (const ReportRow& row : rows) {
    const std::string key =
        sanitize_field(row.experiment) + ":" + sanitize_field(row.quantity);
    auto it = series.find(key);
    if (it == series.end()) {
      order.push_back(key);
      it = series.emplace(key, "series " + key + "\n").first;
    }
    it->second += std::to_string(row.seed) + ' ' + format_double(row.lhs) + ' ' +
                  format_double(row.rhs) + '\n';
  }
  std::string out;
  for (const std::string& key : order) out += series.at(key);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string operator_to_json(const Operator& x) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t b = 0; b < x.block_count(); ++b) {
    const Matrix& block = x.block(b);
    nlohmann::json entries = nlohmann::json::array();
    for (long r = 0; r < block.rows(); ++r)
      for (long c = 0; c < block.cols(); ++c)
        entries.push_back({block(r, c).real(), block(r, c).imag()});
    blocks.push_back({{"dim", x.algebra().dim(b)},
                      {"mass", x.algebra().mass(b)},
                      {"entries", std::move(entries)}});
  }
  return nlohmann::json{{"blocks", std::move(blocks)}}.dump(2) + "\n";
}

Operator operator_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
    throw std::invalid_argument("operator json: missing non-empty 'blocks' array");
  std::vector<AlgebraBlock> shape;
  std::vector<Matrix> matrices;
  for (const nlohmann::json& jb : j["blocks"]) {
    const int dim = jb.at("dim").get<int>();
    const double mass = jb.at("mass").get<double>();
    if (dim < 1 || mass <= 0.0)
      throw std::invalid_argument("operator json: block needs dim >= 1 and mass > 0");
    const nlohmann::json& entries = jb.at("entries");
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim) * dim)
      throw std::invalid_argument("operator json: expected dim^2 row-major entries");
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        const nlohmann::json& e = entries.at(static_cast<std::size_t>(r) * dim + c);
        if (!e.is_array() || e.size() != 2)
          throw std::invalid_argument("operator json: entries are [re, im] pairs");
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      }
    shape.push_back({dim, mass});
    matrices.push_back(std::move(m));
  }
  return Operator(make_algebra(std::move(shape)), std::move(matrices));
}

}  // namespace freenorm
