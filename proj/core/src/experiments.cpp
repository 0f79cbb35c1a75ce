// Copyright 2026 The tfqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "tfqkd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tfqkd/decoy_lp.hpp"
#include "tfqkd/errors.hpp"
#include "tfqkd/security_bound.hpp"

namespace tfqkd {
namespace {

using nlohmann::json;

// Reads fields out of one JSON object and rejects any it was never asked for.
class Reader {
 public:
  Reader(const json& object, std::string prefix) : object_(object), prefix_(std::move(prefix)) {
    if (!object_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(object_.at(key), key);
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key), "required field missing");
    const json& v = object_.at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& item : v) out.push_back(as_number(item, key));
    return out;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = object_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = object_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return object_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.count(key)) throw ConfigError(path(key), "unknown field");
    }
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key), "expected a finite number");
    return d;
  }

  const json& object_;
  std::string prefix_;
  std::set<std::string> seen_;
};

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_header(std::ostream& out, const char* command, const std::string& canonical_json) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_json)));
  out << "# tfqkd " << TFQKD_VERSION << "\n";
  out << "# command " << command << "\n";
  out << "# config_hash fnv1a64:" << hash << "\n";
}

}  // namespace

SweepConfig SweepConfig::parse(const std::string& json_text) {
  const json doc = parse_document(json_text);
  Reader r(doc, "");
  SweepConfig c;
  c.total_loss_db_grid = r.numbers("total_loss_db_grid");
  require(!c.total_loss_db_grid.empty(), "total_loss_db_grid", "must not be empty");
  for (double l : c.total_loss_db_grid) require(l >= 0.0, "total_loss_db_grid", "losses must be non-negative");

  c.mismatch_ratio = r.number("mismatch_ratio", c.mismatch_ratio);
  require(c.mismatch_ratio > 0.0 && c.mismatch_ratio <= 1.0, "mismatch_ratio", "must lie in (0, 1]");
  c.p_d = r.number("p_d", c.p_d);
  require(c.p_d >= 0.0 && c.p_d < 1.0, "p_d", "must lie in [0, 1)");
  c.e_d = r.number("e_d", c.e_d);
  require(c.e_d >= 0.0 && c.e_d < 1.0, "e_d", "must lie in [0, 1)");
  c.phi = r.number("phi", c.phi);

  const std::string mode = r.string("mode", "asymptotic");
  if (mode == "asymptotic") {
    c.mode = EvaluationMode::asymptotic();
    for (const char* key : {"pulses", "epsilon", "sigma_multiplier"}) {
      require(!r.has(key), key, "only valid with mode \"finite\"");
    }
  } else if (mode == "finite") {
    c.mode = EvaluationMode::finite_size(r.number("pulses", 1e12));
    require(c.mode.total_pulses > 0.0, "pulses", "must be positive");
    const bool has_eps = r.has("epsilon");
    const bool has_sigma = r.has("sigma_multiplier");
    require(!(has_eps && has_sigma), "sigma_multiplier", "give either epsilon or sigma_multiplier, not both");
    if (has_eps) {
      const double eps = r.number("epsilon", 1e-7);
      require(eps > 0.0 && eps < 1.0, "epsilon", "must lie in (0, 1)");
      c.mode.sigma_multiplier = sigma_multiplier_for_epsilon(eps);
    } else {
      c.mode.sigma_multiplier = r.number("sigma_multiplier", kDefaultSigmaMultiplier);
      require(c.mode.sigma_multiplier > 0.0, "sigma_multiplier", "must be positive");
    }
  } else {
    throw ConfigError("mode", "expected \"asymptotic\" or \"finite\"");
  }

  if (r.has("strategies")) {
    const json& list = r.raw("strategies");
    require(list.is_array() && !list.empty(), "strategies", "expected a non-empty array of names");
    c.strategies.clear();
    for (const auto& item : list) {
      require(item.is_string(), "strategies", "expected strategy names");
      const auto s = parse_strategy(item.get<std::string>());
      require(s.has_value(), "strategies", "unknown strategy \"" + item.get<std::string>() + "\"");
      require(std::find(c.strategies.begin(), c.strategies.end(), *s) == c.strategies.end(), "strategies",
              "duplicate strategy");
      c.strategies.push_back(*s);
    }
  }

  if (r.has("optimizer")) {
    Reader o(r.raw("optimizer"), "optimizer");
    const auto starts = o.integer("n_starts", c.n_starts);
    require(starts >= 1 && starts <= 1000, "optimizer.n_starts", "must lie in [1, 1000]");
    c.n_starts = static_cast<int>(starts);
    const auto seed = o.integer("seed", static_cast<std::int64_t>(c.seed));
    require(seed >= 0, "optimizer.seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    o.finish();
  }
  r.finish();
  c.canonical_json = doc.dump();
  return c;
}

QberScanConfig QberScanConfig::parse(const std::string& json_text) {
  const json doc = parse_document(json_text);
  Reader r(doc, "");
  QberScanConfig c;
  c.ratio_grid = r.numbers("ratio_grid");
  require(!c.ratio_grid.empty(), "ratio_grid", "must not be empty");
  for (double v : c.ratio_grid) require(v > 0.0, "ratio_grid", "ratios must be positive");
  c.s_b = r.number("s_b", c.s_b);
  require(c.s_b > 0.0, "s_b", "must be positive");
  c.mu_b = r.number("mu_b", c.mu_b);
  c.nu = r.number("nu", c.nu);
  require(c.nu >= 0.0, "nu", "must be non-negative");
  require(c.mu_b >= c.nu, "mu_b", "must not be below nu");
  c.eta_a = r.number("eta_a", c.eta_a);
  require(c.eta_a > 0.0 && c.eta_a <= 1.0, "eta_a", "must lie in (0, 1]");
  c.eta_b = r.number("eta_b", c.eta_b);
  require(c.eta_b > 0.0 && c.eta_b <= 1.0, "eta_b", "must lie in (0, 1]");
  c.p_d = r.number("p_d", c.p_d);
  require(c.p_d >= 0.0 && c.p_d < 1.0, "p_d", "must lie in [0, 1)");
  c.e_d = r.number("e_d", c.e_d);
  require(c.e_d >= 0.0 && c.e_d < 1.0, "e_d", "must lie in [0, 1)");
  c.phi = r.number("phi", c.phi);
  r.finish();
  c.canonical_json = doc.dump();
  return c;
}

std::pair<double, double> split_loss(double loss_db, double mismatch_ratio) {
  if (!(loss_db >= 0.0)) throw DomainError("loss must be non-negative");
  if (!(mismatch_ratio > 0.0 && mismatch_ratio <= 1.0)) throw DomainError("mismatch ratio must lie in (0, 1]");
  const double eta_b = std::min(1.0, std::pow(10.0, -loss_db / 20.0) / std::sqrt(mismatch_ratio));
  const double eta_a = db_to_transmittance(loss_db) / eta_b;
  return {eta_a, eta_b};
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, int workers) {
  const std::size_t n_strategies = config.strategies.size();
  const std::size_t n_jobs = config.total_loss_db_grid.size() * n_strategies;
  std::vector<SweepRow> rows(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < n_jobs; j = next++) {
      try {
        SweepRow& row = rows[j];
        row.loss_db = config.total_loss_db_grid[j / n_strategies];
        const auto [eta_a, eta_b] = split_loss(row.loss_db, config.mismatch_ratio);
        row.scenario = {eta_a, eta_b, config.p_d, config.e_d, config.phi};
        MultistartOptions options;
        options.n_starts = config.n_starts;
        options.seed = config.seed;
        row.result = optimize_strategy(row.scenario, config.strategies[j % n_strategies], config.mode, options);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const int pool_size = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(1, n_jobs)));
  if (pool_size == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < pool_size; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<QberScanRow> run_qber_scan(const QberScanConfig& config) {
  const ChannelScenario scenario{config.eta_a, config.eta_b, config.p_d, config.e_d, config.phi};
  scenario.validate();
  const YieldBounds exact = asymptotic_yield_table(scenario, KeyRateEvaluator::kAsymptoticTableMaxPhotons);
  const auto cat_signal = cat_coefficients(std::sqrt(config.s_b));
  const double p_xx_signal = x_basis_gain(scenario, arriving_intensities(scenario, config.s_b, config.s_b));

  std::vector<QberScanRow> rows;
  for (double ratio : config.ratio_grid) {
    QberScanRow row;
    row.ratio = ratio;
    row.s_a = ratio * config.s_b;
    row.mu_a = ratio * config.mu_b;

    const ArrivingIntensities gamma = arriving_intensities(scenario, row.s_a, config.s_b);
    row.e_xx_full = x_basis_qber(scenario, gamma);
    row.e_xx_first_order = first_order_diagnostics(scenario, gamma).e_xx_approx;

    std::vector<double> decoys_a{row.mu_a, config.nu, 0.0};
    std::sort(decoys_a.rbegin(), decoys_a.rend());
    const DecoyObservations obs = simulate_observations(scenario, decoys_a, {config.mu_b, config.nu, 0.0});
    const YieldBounds bounds = estimate_yield_bounds(build_problem(obs, false));
    row.u_11 = bounds.get({1, 1});
    row.e_zz_upper = phase_error_upper_bound(p_xx_signal, cat_signal, cat_signal, bounds);

    YieldBounds five;
    for (const PhotonPair pair : kBoundedYieldPairs) five.set(pair, exact.get(pair));
    row.e_zz_infinite_decoy = phase_error_upper_bound(p_xx_signal, cat_signal, cat_signal, five);
    rows.push_back(row);
  }
  return rows;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_sweep_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows) {
  write_header(out, "sweep", config.canonical_json);
  out << "loss_db,strategy,eta_a,eta_b,key_rate,raw_key_rate,s_a,s_b,mu_a,nu_a,mu_b,nu_b,"
         "p_s_a,p_mu_a,p_nu_a,p_s_b,p_mu_b,p_nu_b,p_xx,e_xx,e_zz_upper\n";
  for (const auto& row : rows) {
    const auto& p = row.result.search.params;
    const auto& rep = row.result.report;
    const bool finite = config.mode.finite;
    // Probabilities play no part in asymptotic mode; leave them blank.
    auto prob = [&](double v) { return finite ? fmt(v) : std::string(); };
    out << fmt(row.loss_db) << ',' << strategy_name(row.result.strategy) << ',' << fmt(row.scenario.eta_a) << ','
        << fmt(row.scenario.eta_b) << ',' << fmt(rep.key_rate) << ',' << fmt(rep.raw_key_rate) << ','
        << fmt(p.s_a) << ',' << fmt(p.s_b) << ',' << prob(p.mu_a) << ',' << prob(p.nu_a) << ',' << prob(p.mu_b)
        << ',' << prob(p.nu_b) << ',' << prob(p.p_s_a) << ',' << prob(p.p_mu_a) << ',' << prob(p.p_nu_a) << ','
        << prob(p.p_s_b) << ',' << prob(p.p_mu_b) << ',' << prob(p.p_nu_b) << ',' << fmt(rep.p_xx) << ','
        << fmt(rep.e_xx) << ',' << fmt(rep.e_zz_upper) << '\n';
  }
}

void write_qber_scan_csv(std::ostream& out, const QberScanConfig& config, const std::vector<QberScanRow>& rows) {
  write_header(out, "qber-scan", config.canonical_json);
  out << "ratio,s_a,mu_a,e_xx_full,e_xx_first_order,e_zz_upper,u_11,e_zz_infinite_decoy\n";
  for (const auto& r : rows) {
    out << fmt(r.ratio) << ',' << fmt(r.s_a) << ',' << fmt(r.mu_a) << ',' << fmt(r.e_xx_full) << ','
        << fmt(r.e_xx_first_order) << ',' << fmt(r.e_zz_upper) << ',' << fmt(r.u_11) << ','
        << fmt(r.e_zz_infinite_decoy) << '\n';
  }
}

std::string dump_sweep_lps(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    out << "## loss_db=" << fmt(row.loss_db) << " strategy=" << strategy_name(row.result.strategy) << "\n";
    if (!config.mode.finite) {
      out << "# asymptotic mode: yields come from the infinite-decoy formula, no LP is solved\n";
      continue;
    }
    const KeyRateEvaluator evaluator(row.result.evaluated_scenario, config.mode);
    out << evaluator.decoy_problem(row.result.search.params).dump();
  }
  return out.str();
}

}  // namespace tfqkd
