#include "fonrev/fonrev.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "fonrev/decalg.hpp"
#include "fonrev/error.hpp"
#include "fonrev/milp.hpp"
#include "fonrev/netmodel.hpp"
#include "fonrev/pwlfit.hpp"
#include "fonrev/scenario.hpp"

struct fonrev_network {
  fonrev::Network net;
};

struct fonrev_demands {
  std::vector<fonrev::Request> list;
};

struct fonrev_modes {
  fonrev::ModeSet set;
};

struct fonrev_result {
  fonrev::Network net;
  std::vector<fonrev::Request> demands;
  fonrev::ModeSet modes;
  fonrev::DecAlgResult res;
  std::string csv;
};

struct fonrev_records {
  std::vector<fonrev::ResultRecord> records;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

fonrev_status fail(fonrev_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
fonrev_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const fonrev::ParseError& e) {
    return fail(FONREV_ERR_PARSE, e.what());
  } catch (const fonrev::PlanError& e) {
    return fail(FONREV_ERR_PLAN, e.what());
  } catch (const fonrev::DomainError& e) {
    return fail(FONREV_ERR_DOMAIN, e.what());
  } catch (const fonrev::IoError& e) {
    return fail(FONREV_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FONREV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FONREV_ERR_INTERNAL, e.what());
  }
}

size_t copy_out(const std::string& s, char* buf, size_t cap) {
  if (buf && cap > 0) {
    size_t n = s.size() < cap - 1 ? s.size() : cap - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return s.size();
}

fonrev::DecAlgConfig to_config(const fonrev_params* p) {
  fonrev::DecAlgConfig c;
  if (!p) return c;
  if (p->policy < FONREV_POLICY_SA || p->policy > FONREV_POLICY_SA_RA)
    throw fonrev::DomainError("unknown policy " + std::to_string(p->policy));
  c.k = p->k;
  c.n_rtma = p->n_rtma;
  c.n_round = p->n_round;
  c.phi = p->phi;
  c.eps2 = p->eps2;
  c.guard_ghz = p->guard_ghz;
  c.step_ghz = p->step_ghz;
  c.policy = static_cast<fonrev::ArrangePolicy>(p->policy);
  c.seed = p->seed;
  c.first_round_offset_db = p->first_round_offset_db;
  c.node_limit = p->node_limit;
  c.xci_envelope_q = p->xci_envelope_q;
  return c;
}

fonrev::Algorithm to_algorithm(int a) {
  switch (a) {
    case FONREV_ALGO_DECALG: return fonrev::Algorithm::DecAlg;
    case FONREV_ALGO_REFA: return fonrev::Algorithm::RefA;
    case FONREV_ALGO_MILP_EXPORT: return fonrev::Algorithm::MilpExport;
  }
  throw fonrev::DomainError("unknown algorithm " + std::to_string(a));
}

#define REQUIRE(cond, what) \
  if (!(cond)) return fail(FONREV_ERR_ARGUMENT, what)

}  // namespace

extern "C" {

const char* fonrev_version(void) { return "0.1.0"; }

const char* fonrev_last_error(void) { return g_last_error.c_str(); }

void fonrev_params_default(fonrev_params* p) {
  if (!p) return;
  fonrev::DecAlgConfig c;
  p->k = c.k;
  p->n_rtma = c.n_rtma;
  p->n_round = c.n_round;
  p->phi = c.phi;
  p->eps2 = c.eps2;
  p->guard_ghz = c.guard_ghz;
  p->step_ghz = c.step_ghz;
  p->policy = static_cast<int>(c.policy);
  p->seed = c.seed;
  p->first_round_offset_db = c.first_round_offset_db;
  p->node_limit = c.node_limit;
  p->xci_envelope_q = c.xci_envelope_q;
}

fonrev_status fonrev_network_load(const char* text, double length_divisor, fonrev_network** out) {
  REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    fonrev::TopologyOptions o;
    o.length_divisor = length_divisor;
    *out = new fonrev_network{fonrev::load_topology(text, o)};
    return FONREV_OK;
  });
}

fonrev_status fonrev_network_load_file(const char* path, double length_divisor,
                                       fonrev_network** out) {
  REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    fonrev::TopologyOptions o;
    o.length_divisor = length_divisor;
    *out = new fonrev_network{fonrev::load_topology(fonrev::read_file(path), o)};
    return FONREV_OK;
  });
}

void fonrev_network_free(fonrev_network* net) { delete net; }

size_t fonrev_network_node_count(const fonrev_network* net) {
  return net ? net->net.nodes().size() : 0;
}

size_t fonrev_network_link_count(const fonrev_network* net) {
  return net ? net->net.link_count() : 0;
}

double fonrev_network_spectrum_ghz(const fonrev_network* net) {
  return net ? net->net.spectrum_ghz() : 0.0;
}

fonrev_status fonrev_demands_load(const char* text, const fonrev_network* net,
                                  fonrev_demands** out) {
  REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new fonrev_demands{fonrev::load_demands(text, net ? &net->net : nullptr)};
    return FONREV_OK;
  });
}

fonrev_status fonrev_demands_load_file(const char* path, const fonrev_network* net,
                                       fonrev_demands** out) {
  REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new fonrev_demands{
        fonrev::load_demands(fonrev::read_file(path), net ? &net->net : nullptr)};
    return FONREV_OK;
  });
}

fonrev_status fonrev_demands_generate(const fonrev_network* net, uint64_t seed, int count,
                                      const double* rates, size_t n_rates,
                                      double psd_dbm_per_ghz, fonrev_demands** out) {
  REQUIRE(net && out && (rates || n_rates == 0), "null argument");
  *out = nullptr;
  return guarded([&] {
    fonrev::DemandGenOptions g;
    if (n_rates > 0) g.rates.assign(rates, rates + n_rates);
    g.psd_dbm_per_ghz = psd_dbm_per_ghz;
    *out = new fonrev_demands{fonrev::gen_demands(seed, count, net->net, g)};
    return FONREV_OK;
  });
}

void fonrev_demands_free(fonrev_demands* d) { delete d; }

size_t fonrev_demands_count(const fonrev_demands* d) { return d ? d->list.size() : 0; }

size_t fonrev_demands_text(const fonrev_demands* d, char* buf, size_t cap) {
  if (!d) return copy_out("", buf, cap);
  return copy_out(fonrev::emit_demands(d->list), buf, cap);
}

fonrev_status fonrev_modes_load(const char* catalog_text, const char* selector,
                                fonrev_modes** out) {
  REQUIRE(catalog_text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto cat = fonrev::load_catalog(catalog_text);
    *out = new fonrev_modes{cat.select(selector ? selector : "all")};
    return FONREV_OK;
  });
}

fonrev_status fonrev_modes_load_file(const char* path, const char* selector,
                                     fonrev_modes** out) {
  REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto cat = fonrev::load_catalog(fonrev::read_file(path));
    *out = new fonrev_modes{cat.select(selector ? selector : "all")};
    return FONREV_OK;
  });
}

void fonrev_modes_free(fonrev_modes* m) { delete m; }

size_t fonrev_modes_count(const fonrev_modes* m) { return m ? m->set.size() : 0; }

fonrev_status fonrev_modes_get(const fonrev_modes* m, size_t index, char* label, size_t cap,
                               double* m_bits, double* fec_oh_percent, double* snr_th_db) {
  REQUIRE(m, "null argument");
  REQUIRE(index < m->set.size(), "mode index out of range");
  const auto& md = m->set[index];
  copy_out(md.label(), label, cap);
  if (m_bits) *m_bits = md.m_bits;
  if (fec_oh_percent) *fec_oh_percent = md.fec_oh * 100.0;
  if (snr_th_db) *snr_th_db = md.snr_th_db;
  return FONREV_OK;
}

fonrev_status fonrev_run(const fonrev_network* net, const fonrev_demands* d,
                         const fonrev_modes* m, const fonrev_params* p, int algorithm,
                         fonrev_result** out) {
  REQUIRE(net && d && m && out, "null argument");
  REQUIRE(algorithm == FONREV_ALGO_DECALG || algorithm == FONREV_ALGO_REFA,
          "fonrev_run takes FONREV_ALGO_DECALG or FONREV_ALGO_REFA");
  REQUIRE(!p || (p->policy >= FONREV_POLICY_SA && p->policy <= FONREV_POLICY_SA_RA),
          "unknown policy");
  *out = nullptr;
  return guarded([&] {
    auto algo = to_algorithm(algorithm);
    auto cfg = to_config(p);
    auto r = std::make_unique<fonrev_result>(
        fonrev_result{net->net, d->list, m->set, {}, {}});
    r->res = algo == fonrev::Algorithm::DecAlg ? fonrev::dec_alg(r->net, r->demands, r->modes, cfg)
                                               : fonrev::ref_a(r->net, r->demands, r->modes, cfg);
    r->csv = fonrev::result_csv(r->res, r->net);
    *out = r.release();
    return FONREV_OK;
  });
}

void fonrev_result_free(fonrev_result* r) { delete r; }

double fonrev_result_revenue(const fonrev_result* r) { return r ? r->res.revenue : 0.0; }

int fonrev_result_accepted(const fonrev_result* r) { return r ? r->res.state.accepted : 0; }

size_t fonrev_result_csv(const fonrev_result* r, char* buf, size_t cap) {
  return copy_out(r ? r->csv : std::string(), buf, cap);
}

fonrev_status fonrev_result_check(const fonrev_result* r, double eps1, int q, size_t* violations,
                                  double* objective) {
  REQUIRE(r, "null argument");
  return guarded([&] {
    auto fit = fonrev::instance_fit(r->net, r->demands, r->modes, q);
    fonrev::RmaxConfig rc;
    rc.eps1 = eps1;
    auto rmax = fonrev::build_rmax(r->net, r->demands, r->modes, fit, fonrev::ImpairmentModel(), rc);
    auto sol = fonrev::assignment_to_solution(r->res.state.assignments, rmax);
    auto rep = fonrev::check_solution(rmax.lp, sol);
    if (violations) *violations = rep.rows.size() + rep.bounds.size();
    if (objective) *objective = rep.objective;
    return FONREV_OK;
  });
}

fonrev_status fonrev_export_lp_file(const fonrev_network* net, const fonrev_demands* d,
                                    const fonrev_modes* m, double eps1, int q, const char* path) {
  REQUIRE(net && d && m && path, "null argument");
  return guarded([&] {
    auto fit = fonrev::instance_fit(net->net, d->list, m->set, q);
    fonrev::RmaxConfig rc;
    rc.eps1 = eps1;
    auto rmax = fonrev::build_rmax(net->net, d->list, m->set, fit, fonrev::ImpairmentModel(), rc);
    std::ofstream f(path, std::ios::binary);
    f << fonrev::export_lp(rmax.lp);
    if (!f) throw fonrev::IoError(std::string("cannot write ") + path);
    return FONREV_OK;
  });
}

fonrev_status fonrev_check_solution(const fonrev_network* net, const fonrev_demands* d,
                                    const fonrev_modes* m, double eps1, int q,
                                    const char* solution_text, size_t* violations,
                                    double* objective) {
  REQUIRE(net && d && m && solution_text, "null argument");
  return guarded([&] {
    auto fit = fonrev::instance_fit(net->net, d->list, m->set, q);
    fonrev::RmaxConfig rc;
    rc.eps1 = eps1;
    auto rmax = fonrev::build_rmax(net->net, d->list, m->set, fit, fonrev::ImpairmentModel(), rc);
    auto rep = fonrev::check_solution(rmax.lp, fonrev::parse_solution(solution_text));
    if (violations) *violations = rep.rows.size() + rep.bounds.size();
    if (objective) *objective = rep.objective;
    return FONREV_OK;
  });
}

void fonrev_scenario_config_init(fonrev_scenario_config* c) {
  if (!c) return;
  fonrev::ScenarioConfig s;
  std::memset(c, 0, sizeof *c);
  c->length_divisor = s.length_divisor;
  c->psd_start = s.psd.start;
  c->psd_stop = s.psd.stop;
  c->psd_step = s.psd.step;
  c->catalog_spec = "all";
  c->algorithm = FONREV_ALGO_DECALG;
  c->runs = s.runs;
  c->seed = s.seed;
  fonrev_params_default(&c->params);
  c->eps1 = s.eps1;
  c->pwl_segments = s.pwl_segments;
}

fonrev_status fonrev_scenario_run(const fonrev_scenario_config* c, fonrev_records** out) {
  REQUIRE(c && out, "null argument");
  REQUIRE(c->topology_path && c->modes_path, "topology and mode catalog paths are required");
  *out = nullptr;
  return guarded([&] {
    fonrev::ScenarioConfig s;
    s.topology_path = c->topology_path;
    s.length_divisor = c->length_divisor;
    if (c->demands_path) s.demands_path = c->demands_path;
    s.gen_count = c->gen_count;
    if (c->rates && c->n_rates > 0) s.rates.assign(c->rates, c->rates + c->n_rates);
    s.psd.start = c->psd_start;
    s.psd.stop = c->psd_stop;
    s.psd.step = c->psd_step;
    s.modes_path = c->modes_path;
    if (c->catalog_spec) s.catalog_spec = c->catalog_spec;
    s.algorithm = to_algorithm(c->algorithm);
    s.runs = c->runs;
    s.seed = c->seed;
    s.heuristic = to_config(&c->params);
    s.eps1 = c->eps1;
    s.pwl_segments = c->pwl_segments;
    if (c->lp_out_path) s.lp_out = c->lp_out_path;
    s.keep_detail = c->keep_detail != 0;
    auto r = std::make_unique<fonrev_records>();
    r->records = fonrev::run_scenario(s);
    r->csv = fonrev::emit_csv(r->records);
    *out = r.release();
    return FONREV_OK;
  });
}

void fonrev_records_free(fonrev_records* r) { delete r; }

size_t fonrev_records_csv(const fonrev_records* r, char* buf, size_t cap) {
  return copy_out(r ? r->csv : std::string(), buf, cap);
}

size_t fonrev_records_failed(const fonrev_records* r) {
  size_t n = 0;
  if (r)
    for (const auto& rec : r->records)
      for (const auto& run : rec.runs) n += run.status == "failed";
  return n;
}

size_t fonrev_records_detail(const fonrev_records* r, char* buf, size_t cap) {
  std::string s;
  if (r)
    for (const auto& rec : r->records)
      for (const auto& run : rec.runs)
        if (run.status == "ok" && !run.detail_csv.empty()) s = run.detail_csv;
  return copy_out(s, buf, cap);
}

}  // extern "C"
