// cbm: exact trace-moment tables, bound checks and Monte Carlo
// cross-validation for Dyson's circular beta-ensembles.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/capacity error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cbm/errors.hpp"
#include "cbm/jack.hpp"
#include "cbm/moments.hpp"
#include "cbm/partition.hpp"
#include "cbm/rational.hpp"
#include "cbm/sampler.hpp"
#include "cbm/verify.hpp"

namespace {

using cbm::Partition;
using cbm::Rat;
using json = nlohmann::ordered_json;

json partition_to_json(const Partition& p) {
  json arr = json::array();
  for (unsigned v : p.parts()) arr.push_back(v);
  return arr;
}

json rat_or_null(const std::optional<Rat>& r) {
  return r ? json(cbm::rat_to_string(*r)) : json(nullptr);
}

// Both --alpha and --beta are accepted everywhere, mutually exclusive;
// everything is stored as alpha = 2/beta internally.
struct ParamFlags {
  std::string alpha, beta;

  void attach(CLI::App* cmd) {
    auto* a = cmd->add_option("--alpha", alpha, "Jack parameter alpha (rational p/q)");
    auto* b = cmd->add_option("--beta", beta, "ensemble exponent beta (rational p/q)");
    a->excludes(b);
    b->excludes(a);
  }

  Rat resolve_alpha() const {
    if (alpha.empty() == beta.empty())
      throw CLI::ValidationError("exactly one of --alpha/--beta is required");
    if (!alpha.empty()) {
      Rat a = cbm::rat_from_string(alpha);
      if (a <= 0) throw std::domain_error("alpha must be positive");
      return a;
    }
    Rat b = cbm::rat_from_string(beta);
    if (b <= 0) throw std::domain_error("beta must be positive");
    return Rat(2) / b;
  }
};

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << payload;
  }
}

json moment_report_json(const cbm::moments::MomentReport& r) {
  json doc;
  doc["mu"] = partition_to_json(r.mu);
  doc["nu"] = partition_to_json(r.nu);
  doc["n"] = r.params.n;
  doc["alpha"] = cbm::rat_to_string(r.params.alpha);
  doc["beta"] = cbm::rat_to_string(r.params.beta());
  doc["value"] = cbm::rat_to_string(r.value);
  doc["value_float"] = cbm::rat_to_double(r.value);
  json bounds;
  bounds["A"] = rat_or_null(r.bounds.A);
  bounds["B"] = rat_or_null(r.bounds.B);
  bounds["Gamma"] = rat_or_null(r.bounds.Gamma);
  bounds["gamma"] = rat_or_null(r.bounds.gamma);
  bounds["corollary"] = rat_or_null(r.bounds.corollary);
  doc["bounds"] = std::move(bounds);
  return doc;
}

int run_table(const Rat& alpha, unsigned n_from, unsigned n_to, const std::string& format,
              const std::string& out_path) {
  if (n_from < 2 || n_from > n_to)
    throw std::domain_error("table requires 2 <= n-from <= n-to");
  const Partition one{1}, two{2}, one_one{1, 1};
  std::string csv =
      "n,E_p1_sq,E_p1_sq_jack,E_p1_4,E_p1_4_jack,E_p2_sq,E_p2_sq_jack,E_p2_p11,E_p2_p11_jack,"
      "match\n";
  json rows = json::array();
  bool all_match = true;
  for (unsigned n = n_from; n <= n_to; ++n) {
    auto p = cbm::moments::EnsembleParams::from_alpha(n, alpha);
    auto cf = cbm::moments::closed_forms(p);
    Rat j1 = cbm::moments::exact_moment(one, one, p);
    Rat j2 = cbm::moments::exact_moment(one_one, one_one, p);
    Rat j3 = cbm::moments::exact_moment(two, two, p);
    Rat j4 = cbm::moments::exact_moment(two, one_one, p);
    bool match = cf.p1_sq == j1 && cf.p1_quad == j2 && cf.p2_sq == j3 && cf.p2_p11 == j4;
    all_match = all_match && match;
    if (format == "csv") {
      csv += std::to_string(n) + ',' + cbm::rat_to_string(cf.p1_sq) + ',' +
             cbm::rat_to_string(j1) + ',' + cbm::rat_to_string(cf.p1_quad) + ',' +
             cbm::rat_to_string(j2) + ',' + cbm::rat_to_string(cf.p2_sq) + ',' +
             cbm::rat_to_string(j3) + ',' + cbm::rat_to_string(cf.p2_p11) + ',' +
             cbm::rat_to_string(j4) + ',' + (match ? "true" : "false") + '\n';
    } else {
      json row;
      row["n"] = n;
      row["E_p1_sq"] = cbm::rat_to_string(cf.p1_sq);
      row["E_p1_sq_jack"] = cbm::rat_to_string(j1);
      row["E_p1_4"] = cbm::rat_to_string(cf.p1_quad);
      row["E_p1_4_jack"] = cbm::rat_to_string(j2);
      row["E_p2_sq"] = cbm::rat_to_string(cf.p2_sq);
      row["E_p2_sq_jack"] = cbm::rat_to_string(j3);
      row["E_p2_p11"] = cbm::rat_to_string(cf.p2_p11);
      row["E_p2_p11_jack"] = cbm::rat_to_string(j4);
      row["match"] = match;
      rows.push_back(std::move(row));
    }
  }
  emit(format == "csv" ? csv : rows.dump(2) + "\n", out_path);
  return all_match ? 0 : 1;
}

int run_verify(const std::string& suite, unsigned kmax, std::uint64_t seed,
               const std::string& out_path) {
  auto results = cbm::verify::run_suites(suite, kmax, seed);
  std::string text;
  unsigned total = 0, failed = 0;
  for (const auto& r : results) {
    total += r.passed + r.failed;
    failed += r.failed;
    text += "suite " + r.name + ": " + std::to_string(r.passed) + "/" +
            std::to_string(r.passed + r.failed) + " pass\n";
    for (const auto& f : r.failures) text += "FAIL " + f + "\n";
  }
  text += failed == 0 ? "verify: PASS (" + std::to_string(total) + " checks)\n"
                      : "verify: FAIL (" + std::to_string(failed) + " of " +
                            std::to_string(total) + " checks)\n";
  emit(text, out_path);
  return failed == 0 ? 0 : 1;
}

int run_sample(const Rat& alpha, unsigned n, std::uint64_t steps, std::uint64_t seed,
               const std::string& mu_str, const std::string& nu_str, int m,
               std::optional<std::uint64_t> burn_in, std::optional<std::uint64_t> thin,
               std::optional<double> proposal_scale, const std::string& dump_path,
               const std::string& out_path) {
  double beta = cbm::rat_to_double(Rat(2) / alpha);
  auto cfg = cbm::sampler::ChainConfig::with_defaults(n, beta, seed, steps);
  if (burn_in) cfg.burn_in = *burn_in;
  if (thin) cfg.thin = *thin;
  if (proposal_scale) cfg.proposal_scale = *proposal_scale;
  cfg.validate();

  auto batch = cbm::sampler::run_chain(cfg);
  if (!dump_path.empty()) cbm::sampler::save_batch_csv(batch, dump_path);

  cbm::sampler::Estimate est;
  std::optional<Rat> exact;
  auto params = cbm::moments::EnsembleParams::from_alpha(n, alpha);
  if (m >= 0) {
    est = cbm::sampler::estimate_i(batch, unsigned(m));
    if (unsigned(m) <= cbm::jack::k_max()) exact = cbm::moments::i_of(unsigned(m), params);
  } else {
    Partition mu = Partition::parse(mu_str);
    Partition nu = nu_str == "\x01" ? mu : Partition::parse(nu_str);
    est = cbm::sampler::estimate_moment(batch, mu, nu);
    unsigned K = std::max(mu.weight(), nu.weight());
    if (K <= cbm::jack::k_max()) exact = cbm::moments::exact_moment(mu, nu, params);
  }

  json doc;
  doc["estimate"] = est.mean;
  doc["stderr"] = est.std_error;
  doc["imag_mean"] = est.imag_mean;
  doc["exact"] = rat_or_null(exact);
  doc["z_score"] =
      exact ? json((est.mean - cbm::rat_to_double(*exact)) / est.std_error) : json(nullptr);
  doc["acceptance_rate"] = batch.acceptance_rate;
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact circular beta-ensemble trace moments (Jack expansion) "
               "with Monte Carlo cross-checks"};
  app.require_subcommand(1);

  // jack
  auto* cmd_jack = app.add_subcommand("jack", "emit the exact theta table for one weight");
  unsigned jack_k = 1;
  ParamFlags jack_params;
  std::string jack_out;
  cmd_jack->add_option("--k", jack_k, "table weight")->required();
  jack_params.attach(cmd_jack);
  cmd_jack->add_option("--out", jack_out, "write payload to file instead of stdout");

  // moment
  auto* cmd_moment = app.add_subcommand("moment", "exact E[p_mu conj(p_nu)] with bounds");
  ParamFlags moment_params;
  unsigned moment_n = 2;
  std::string moment_mu, moment_nu = "\x01", moment_out;
  moment_params.attach(cmd_moment);
  cmd_moment->add_option("--n", moment_n, "matrix size")->required();
  cmd_moment->add_option("--mu", moment_mu, "partition, e.g. 2,1 (empty for the empty partition)")
      ->required();
  cmd_moment->add_option("--nu", moment_nu, "partition; defaults to --mu");
  cmd_moment->add_option("--out", moment_out, "output file");

  // bounds
  auto* cmd_bounds = app.add_subcommand("bounds", "sandwich constants A, B, Gamma, gamma");
  ParamFlags bounds_params;
  unsigned bounds_k = 1, bounds_n = 2;
  std::string bounds_out;
  bounds_params.attach(cmd_bounds);
  cmd_bounds->add_option("--k", bounds_k, "weight K")->required();
  cmd_bounds->add_option("--n", bounds_n, "matrix size")->required();
  cmd_bounds->add_option("--out", bounds_out, "output file");

  // table
  auto* cmd_table = app.add_subcommand("table", "closed forms vs exact moments over a range of n");
  ParamFlags table_params;
  unsigned table_from = 2, table_to = 2;
  std::string table_format = "csv", table_out;
  table_params.attach(cmd_table);
  cmd_table->add_option("--n-from", table_from, "first n")->required();
  cmd_table->add_option("--n-to", table_to, "last n")->required();
  cmd_table->add_option("--format", table_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_table->add_option("--out", table_out, "output file");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run a named invariant suite");
  std::string verify_suite = "all", verify_out;
  unsigned verify_kmax = 6;
  std::uint64_t verify_seed = 12345;
  cmd_verify->add_option("--suite", verify_suite, "suite name")
      ->check(CLI::IsMember(
          {"orthogonality", "diaconis-evans", "sandwich", "corollary", "appendix", "all"}));
  cmd_verify->add_option("--kmax", verify_kmax, "orthogonality weight ceiling");
  cmd_verify->add_option("--seed", verify_seed, "seed for the randomized suites");
  cmd_verify->add_option("--out", verify_out, "output file");

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "Metropolis chain estimate vs exact value");
  ParamFlags sample_params;
  unsigned sample_n = 2;
  std::uint64_t sample_steps = 200000, sample_seed = 1;
  std::string sample_mu, sample_nu = "\x01", sample_dump, sample_out;
  int sample_m = -1;
  std::uint64_t sample_burn = 0, sample_thin = 0;
  double sample_scale = 0.0;
  sample_params.attach(cmd_sample);
  cmd_sample->add_option("--n", sample_n, "matrix size")->required();
  cmd_sample->add_option("--steps", sample_steps, "total sweeps");
  cmd_sample->add_option("--seed", sample_seed, "chain seed");
  auto* opt_mu = cmd_sample->add_option("--mu", sample_mu, "partition observable");
  cmd_sample->add_option("--nu", sample_nu, "second partition; defaults to --mu");
  auto* opt_m = cmd_sample->add_option("--m", sample_m, "estimate I(m, n) instead of a moment");
  opt_m->excludes(opt_mu);
  auto* opt_burn = cmd_sample->add_option("--burn-in", sample_burn, "override burn-in sweeps");
  auto* opt_thin = cmd_sample->add_option("--thin", sample_thin, "override thinning");
  auto* opt_scale =
      cmd_sample->add_option("--proposal-scale", sample_scale, "override proposal half-width");
  cmd_sample->add_option("--dump", sample_dump, "write draws as CSV (+ .meta.json sidecar)");
  cmd_sample->add_option("--out", sample_out, "output file");

  // appendix
  auto* cmd_appendix =
      app.add_subcommand("appendix", "three-way COE second-moment identity");
  unsigned appendix_n = 2;
  std::string appendix_out;
  cmd_appendix->add_option("--n", appendix_n, "matrix size")->required();
  cmd_appendix->add_option("--out", appendix_out, "output file");

  try {
    app.parse(argc, argv);

    if (cmd_jack->parsed()) {
      auto table = cbm::jack::build_jack_table(jack_k, jack_params.resolve_alpha());
      emit(cbm::jack::table_to_json(*table), jack_out);
      return 0;
    }
    if (cmd_moment->parsed()) {
      Partition mu = Partition::parse(moment_mu);
      Partition nu = moment_nu == "\x01" ? mu : Partition::parse(moment_nu);
      auto p = cbm::moments::EnsembleParams::from_alpha(moment_n, moment_params.resolve_alpha());
      emit(moment_report_json(cbm::moments::moment_report(mu, nu, p)).dump(2) + "\n", moment_out);
      return 0;
    }
    if (cmd_bounds->parsed()) {
      auto p = cbm::moments::EnsembleParams::from_alpha(bounds_n, bounds_params.resolve_alpha());
      auto ab = cbm::moments::ab_bounds(bounds_k, p);
      auto ex = cbm::moments::gamma_bounds(bounds_k, p);
      json doc;
      doc["k"] = bounds_k;
      doc["n"] = bounds_n;
      doc["alpha"] = cbm::rat_to_string(p.alpha);
      doc["beta"] = cbm::rat_to_string(p.beta());
      doc["A"] = cbm::rat_to_string(ab.A);
      doc["B"] = cbm::rat_to_string(ab.B);
      doc["Gamma"] = cbm::rat_to_string(ex.Gamma);
      doc["gamma"] = cbm::rat_to_string(ex.gamma);
      doc["corollary"] = bounds_n >= 2 * bounds_k
                             ? json(cbm::rat_to_string(cbm::moments::corollary_bound(bounds_k, p)))
                             : json(nullptr);
      emit(doc.dump(2) + "\n", bounds_out);
      return 0;
    }
    if (cmd_table->parsed())
      return run_table(table_params.resolve_alpha(), table_from, table_to, table_format,
                       table_out);
    if (cmd_verify->parsed())
      return run_verify(verify_suite, verify_kmax, verify_seed, verify_out);
    if (cmd_sample->parsed()) {
      if (sample_m < 0 && sample_mu.empty() && opt_mu->count() == 0)
        throw CLI::ValidationError("sample needs either --mu or --m");
      return run_sample(sample_params.resolve_alpha(), sample_n, sample_steps, sample_seed,
                        sample_mu, sample_nu, sample_m,
                        opt_burn->count() ? std::optional<std::uint64_t>(sample_burn)
                                          : std::nullopt,
                        opt_thin->count() ? std::optional<std::uint64_t>(sample_thin)
                                          : std::nullopt,
                        opt_scale->count() ? std::optional<double>(sample_scale) : std::nullopt,
                        sample_dump, sample_out);
    }
    if (cmd_appendix->parsed()) {
      auto m = cbm::moments::coe_trace_second_moment(appendix_n);
      json doc;
      doc["n"] = appendix_n;
      doc["dirichlet"] = cbm::rat_to_string(m.via_dirichlet);
      doc["weingarten"] = cbm::rat_to_string(m.via_weingarten);
      doc["jack"] = cbm::rat_to_string(m.via_jack);
      emit(doc.dump(2) + "\n", appendix_out);
      if (!m.consistent()) {
        std::cerr << "appendix: route mismatch\n";
        return 1;
      }
      return 0;
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const cbm::capacity_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
