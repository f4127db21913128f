// Python bindings for the main operations. Rationals cross the boundary as
// fractions.Fraction (or int / "p/q" strings on the way in), partitions as
// tuples of ints.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "cbm/errors.hpp"
#include "cbm/jack.hpp"
#include "cbm/moments.hpp"
#include "cbm/partition.hpp"
#include "cbm/rational.hpp"
#include "cbm/sampler.hpp"
#include "cbm/verify.hpp"

namespace py = pybind11;

namespace pybind11::detail {

template <>
struct type_caster<mpq_class> {
  PYBIND11_TYPE_CASTER(mpq_class, const_name("Fraction"));

  bool load(handle src, bool) {
    if (py::isinstance<py::float_>(src)) return false;  // exact inputs only
    bool fraction_like = py::isinstance<py::int_>(src) || py::isinstance<py::str>(src) ||
                         (py::hasattr(src, "numerator") && py::hasattr(src, "denominator"));
    if (!fraction_like) return false;
    try {
      value = cbm::rat_from_string(py::str(src).cast<std::string>());
    } catch (const std::invalid_argument&) {
      return false;
    }
    return true;
  }

  static handle cast(const mpq_class& q, return_value_policy, handle) {
    auto fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(py::str(cbm::rat_to_string(q))).release();
  }
};

template <>
struct type_caster<cbm::Partition> {
  PYBIND11_TYPE_CASTER(cbm::Partition, const_name("tuple[int, ...]"));

  bool load(handle src, bool) {
    if (py::isinstance<py::str>(src) || !py::isinstance<py::sequence>(src)) return false;
    std::vector<unsigned> parts;
    for (handle item : py::reinterpret_borrow<py::sequence>(src)) {
      if (!py::isinstance<py::int_>(item)) return false;
      long v = item.cast<long>();
      if (v <= 0) return false;
      parts.push_back(unsigned(v));
    }
    value = cbm::Partition(std::move(parts));  // nonincreasing check -> ValueError
    return true;
  }

  static handle cast(const cbm::Partition& p, return_value_policy, handle) {
    py::tuple out(p.length());
    for (unsigned i = 0; i < p.length(); ++i) out[i] = p.parts()[i];
    return out.release();
  }
};

}  // namespace pybind11::detail

namespace {

using cbm::Partition;
using cbm::Rat;
using cbm::moments::EnsembleParams;

EnsembleParams resolve_params(unsigned n, const std::optional<Rat>& alpha,
                              const std::optional<Rat>& beta) {
  if (alpha.has_value() == beta.has_value())
    throw std::invalid_argument("provide exactly one of alpha= / beta=");
  return alpha ? EnsembleParams::from_alpha(n, *alpha) : EnsembleParams::from_beta(n, *beta);
}

py::object rat_or_none(const std::optional<Rat>& r) {
  return r ? py::cast(*r) : py::none();
}

py::dict report_dict(const cbm::moments::MomentReport& r) {
  py::dict d;
  d["mu"] = r.mu;
  d["nu"] = r.nu;
  d["n"] = r.params.n;
  d["alpha"] = r.params.alpha;
  d["beta"] = r.params.beta();
  d["value"] = r.value;
  d["normalized"] = rat_or_none(r.normalized);
  d["A"] = rat_or_none(r.bounds.A);
  d["B"] = rat_or_none(r.bounds.B);
  d["Gamma"] = rat_or_none(r.bounds.Gamma);
  d["gamma"] = rat_or_none(r.bounds.gamma);
  d["corollary"] = rat_or_none(r.bounds.corollary);
  d["holds"] = r.sandwich_holds();
  return d;
}

py::dict estimate_dict(const cbm::sampler::Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["stderr"] = e.std_error;
  d["imag_mean"] = e.imag_mean;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact circular beta-ensemble trace moments via Jack polynomial expansions";

  py::register_exception<cbm::capacity_error>(m, "CapacityError", PyExc_RuntimeError);

  // partitions
  m.def("enumerate_partitions", &cbm::enumerate_partitions, py::arg("k"),
        "All partitions of k in descending lexicographic order.");
  m.def("conjugate", [](const Partition& p) { return p.conjugate(); }, py::arg("partition"));
  m.def("z", [](const Partition& p) {
          return py::module_::import("builtins").attr("int")(py::str(cbm::z_of(p).get_str()));
        },
        py::arg("partition"), "Centralizer size prod i^{m_i} m_i!.");
  m.def("dominance",
        [](const Partition& mu, const Partition& nu) -> std::string {
          switch (cbm::compare_dominance(mu, nu)) {
            case cbm::Dominance::equal: return "equal";
            case cbm::Dominance::less: return "less";
            case cbm::Dominance::greater: return "greater";
            default: return "incomparable";
          }
        },
        py::arg("mu"), py::arg("nu"));

  // jack
  m.def("k_max", &cbm::jack::k_max);
  m.def("set_k_max", &cbm::jack::set_k_max, py::arg("k"));
  m.def("c_lambda", &cbm::jack::c_lambda, py::arg("partition"), py::arg("alpha"));
  m.def("theta", &cbm::jack::theta, py::arg("lam"), py::arg("rho"), py::arg("alpha"));
  m.def("big_theta", &cbm::jack::big_theta, py::arg("lam"), py::arg("rho"), py::arg("alpha"));
  m.def("jack_table",
        [](unsigned k, const Rat& alpha) {
          auto t = cbm::jack::build_jack_table(k, alpha);
          py::dict d;
          d["k"] = t->weight;
          d["alpha"] = t->alpha;
          d["order"] = t->order;
          d["theta"] = t->theta;
          d["c"] = t->c_norm;
          return d;
        },
        py::arg("k"), py::arg("alpha"));
  m.def("verify_orthogonality",
        [](unsigned k, const Rat& alpha) {
          py::list out;
          for (const auto& defect : cbm::jack::verify_orthogonality(k, alpha)) {
            py::dict d;
            d["relation"] = std::string(1, defect.relation);
            d["a"] = defect.a;
            d["b"] = defect.b;
            d["lhs"] = defect.lhs;
            d["rhs"] = defect.rhs;
            out.append(d);
          }
          return out;
        },
        py::arg("k"), py::arg("alpha"), "Empty list when both relations hold exactly.");

  // moments
  m.def("n_factor",
        [](const Partition& lam, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          return cbm::moments::n_factor(lam, resolve_params(n, alpha, beta));
        },
        py::arg("partition"), py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("exact_moment",
        [](const Partition& mu, const Partition& nu, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          return cbm::moments::exact_moment(mu, nu, resolve_params(n, alpha, beta));
        },
        py::arg("mu"), py::arg("nu"), py::kw_only(), py::arg("n"),
        py::arg("alpha") = std::nullopt, py::arg("beta") = std::nullopt);
  m.def("closed_forms",
        [](unsigned n, const std::optional<Rat>& alpha, const std::optional<Rat>& beta) {
          auto cf = cbm::moments::closed_forms(resolve_params(n, alpha, beta));
          py::dict d;
          d["p1_sq"] = cf.p1_sq;
          d["p1_quad"] = cf.p1_quad;
          d["p2_sq"] = cf.p2_sq;
          d["p2_p11"] = cf.p2_p11;
          return d;
        },
        py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("ab_bounds",
        [](unsigned K, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          auto ab = cbm::moments::ab_bounds(K, resolve_params(n, alpha, beta));
          return py::make_tuple(ab.A, ab.B);
        },
        py::arg("K"), py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("gamma_bounds",
        [](unsigned K, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          auto ex = cbm::moments::gamma_bounds(K, resolve_params(n, alpha, beta));
          return py::make_tuple(ex.Gamma, ex.gamma);
        },
        py::arg("K"), py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("corollary_bound",
        [](unsigned K, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          return cbm::moments::corollary_bound(K, resolve_params(n, alpha, beta));
        },
        py::arg("K"), py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("moment_report",
        [](const Partition& mu, const Partition& nu, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          return report_dict(cbm::moments::moment_report(mu, nu, resolve_params(n, alpha, beta)));
        },
        py::arg("mu"), py::arg("nu"), py::kw_only(), py::arg("n"),
        py::arg("alpha") = std::nullopt, py::arg("beta") = std::nullopt);
  m.def("sandwich_check",
        [](const Partition& mu, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          return report_dict(cbm::moments::sandwich_check(mu, resolve_params(n, alpha, beta)));
        },
        py::arg("mu"), py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("cross_moment_bound_check",
        [](const Partition& mu, const Partition& nu, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          auto c =
              cbm::moments::cross_moment_bound_check(mu, nu, resolve_params(n, alpha, beta));
          py::dict d;
          d["value"] = c.value;
          d["lhs_sq"] = c.lhs_sq;
          d["rhs_sq"] = c.rhs_sq;
          d["holds"] = c.holds;
          return d;
        },
        py::arg("mu"), py::arg("nu"), py::kw_only(), py::arg("n"),
        py::arg("alpha") = std::nullopt, py::arg("beta") = std::nullopt);
  m.def("cue_expected",
        [](const Partition& mu, const Partition& nu, unsigned n) {
          return rat_or_none(cbm::moments::cue_expected(mu, nu, n));
        },
        py::arg("mu"), py::arg("nu"), py::arg("n"));
  m.def("i_of",
        [](unsigned mm, unsigned n, const std::optional<Rat>& alpha,
           const std::optional<Rat>& beta) {
          return cbm::moments::i_of(mm, resolve_params(n, alpha, beta));
        },
        py::arg("m"), py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt);
  m.def("tail_rate_check",
        [](unsigned n, const std::optional<Rat>& alpha, const std::optional<Rat>& beta,
           unsigned m_lo, unsigned m_hi) {
          auto r = cbm::moments::tail_rate_check(resolve_params(n, alpha, beta), m_lo, m_hi);
          py::dict d;
          py::list pts;
          for (const auto& pt : r.points) pts.append(py::make_tuple(pt.m, py::cast(pt.d)));
          d["d"] = pts;
          d["d_nonincreasing"] = r.d_nonincreasing;
          d["exponent"] = r.exponent;
          d["sup_weighted"] = r.sup_weighted;
          d["sup_at"] = r.sup_at;
          d["weighted_bounded"] = r.weighted_bounded;
          return d;
        },
        py::kw_only(), py::arg("n"), py::arg("alpha") = std::nullopt,
        py::arg("beta") = std::nullopt, py::arg("m_lo") = 1,
        py::arg("m_hi") = 12);
  m.def("dirichlet_moment", &cbm::moments::dirichlet_moment, py::arg("a"), py::arg("n_vars"));
  m.def("coe_trace_second_moment",
        [](unsigned n) {
          auto c = cbm::moments::coe_trace_second_moment(n);
          py::dict d;
          d["dirichlet"] = c.via_dirichlet;
          d["weingarten"] = c.via_weingarten;
          d["jack"] = c.via_jack;
          d["consistent"] = c.consistent();
          return d;
        },
        py::arg("n"));
  m.def("limit_check",
        [](const Partition& mu, const Partition& nu, const Rat& alpha,
           const std::vector<unsigned>& schedule) {
          auto r = cbm::moments::limit_check(mu, nu, alpha, schedule);
          py::dict d;
          d["target"] = r.target;
          py::list pts;
          for (const auto& pt : r.points)
            pts.append(py::make_tuple(pt.n, py::cast(pt.value), py::cast(pt.deviation)));
          d["points"] = pts;
          d["deviations_nonincreasing"] = r.deviations_nonincreasing;
          d["rate_target"] = rat_or_none(r.rate_target);
          py::list rate;
          for (const auto& pt : r.rate_points)
            rate.append(py::make_tuple(pt.n, py::cast(pt.scaled)));
          d["rate_points"] = rate;
          return d;
        },
        py::arg("mu"), py::arg("nu"), py::arg("alpha"), py::arg("n_schedule"));

  // sampler
  py::class_<cbm::sampler::SampleBatch>(m, "SampleBatch")
      .def_property_readonly("draws",
                             [](const cbm::sampler::SampleBatch& b) { return b.draws; })
      .def_readonly("acceptance_rate", &cbm::sampler::SampleBatch::acceptance_rate)
      .def_property_readonly("n",
                             [](const cbm::sampler::SampleBatch& b) { return b.config.n; })
      .def_property_readonly("seed",
                             [](const cbm::sampler::SampleBatch& b) { return b.config.seed; })
      .def("__len__", [](const cbm::sampler::SampleBatch& b) { return b.draws.size(); });

  m.def("run_chain",
        [](unsigned n, double beta, std::uint64_t steps, std::uint64_t seed,
           std::optional<std::uint64_t> burn_in, std::optional<std::uint64_t> thin,
           std::optional<double> proposal_scale) {
          auto cfg = cbm::sampler::ChainConfig::with_defaults(n, beta, seed, steps);
          if (burn_in) cfg.burn_in = *burn_in;
          if (thin) cfg.thin = *thin;
          if (proposal_scale) cfg.proposal_scale = *proposal_scale;
          return cbm::sampler::run_chain(cfg);
        },
        py::kw_only(), py::arg("n"), py::arg("beta"), py::arg("steps"), py::arg("seed"),
        py::arg("burn_in") = std::nullopt, py::arg("thin") = std::nullopt,
        py::arg("proposal_scale") = std::nullopt);
  m.def("log_density_unnormalized",
        [](const std::vector<double>& theta, double beta) {
          return cbm::sampler::log_density_unnormalized(theta, beta);
        },
        py::arg("theta"), py::arg("beta"));
  m.def("power_sum_eval",
        [](const std::vector<double>& theta, const Partition& mu) {
          return cbm::sampler::power_sum_eval(theta, mu);
        },
        py::arg("theta"), py::arg("mu"));
  m.def("estimate_moment",
        [](const cbm::sampler::SampleBatch& batch, const Partition& mu, const Partition& nu) {
          return estimate_dict(cbm::sampler::estimate_moment(batch, mu, nu));
        },
        py::arg("batch"), py::arg("mu"), py::arg("nu"));
  m.def("estimate_i",
        [](const cbm::sampler::SampleBatch& batch, unsigned mm) {
          return estimate_dict(cbm::sampler::estimate_i(batch, mm));
        },
        py::arg("batch"), py::arg("m"));
  m.def("save_batch_csv", &cbm::sampler::save_batch_csv, py::arg("batch"), py::arg("path"));
}
