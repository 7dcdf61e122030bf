#include "corridor/corridor.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "oracle.hpp"
#include "policies.hpp"
#include "selftest.hpp"

namespace {

using nlohmann::json;

struct Bundle {
  corridor::Corridor c;
  corridor::ScheduleDelay f = corridor::ScheduleDelay::piecewise_linear(0.5, 0.5);
  corridor::DsoSolution dso;
  std::optional<corridor::DueSolution> due;  // absent when the slope condition fails
  corridor::QrpReport qrp;
};

struct Column {
  std::string name;
  const corridor::PiecewiseCurve* curve;
};

}  // namespace

struct corridor_instance {
  corridor::InstanceConfig cfg;
  std::string message;
  std::shared_ptr<Bundle> bundle;
};

struct corridor_solution {
  std::shared_ptr<Bundle> bundle;
  corridor::StateKind kind = corridor::StateKind::Due;
  std::optional<corridor::DueSolution> due;
  std::optional<corridor::PolicySolution> policy;

  std::vector<Column> columns() const;
  double total_cost() const { return due ? due->total_cost : policy->total_cost; }
  double revenue() const { return due ? 0.0 : policy->revenue; }
  const std::vector<std::vector<double>>& rho() const { return due ? due->rho : policy->rho; }
};

std::vector<Column> corridor_solution::columns() const {
  std::vector<Column> cols;
  const corridor::Corridor& c = bundle->c;
  const int n = c.n_bottlenecks();
  const int k = c.n_groups();
  auto flow = [&](int i, int g) -> const corridor::PiecewiseCurve* {
    return due ? &due->flows[i][g] : &policy->flows[i][g];
  };
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < k; ++g) {
      std::ostringstream os;
      os << "flow_i" << i + 1 << "_k" << g + 1;
      cols.push_back({os.str(), flow(i, g)});
    }
  auto family = [&](const char* prefix, const std::vector<corridor::PiecewiseCurve>& curves) {
    bool any = false;
    for (const auto& cur : curves) any = any || !cur.empty();
    if (!any) return;
    for (int i = 0; i < n; ++i)
      cols.push_back({std::string(prefix) + "_i" + std::to_string(i + 1), &curves[i]});
  };
  if (due) {
    family("queue", due->queue_delays);
  } else {
    family("queue", policy->mainline_queues);
    family("price", policy->bottleneck_tolls);
    family("ramp_queue", policy->ramp_queues);
    family("ramp_toll", policy->ramp_tolls);
  }
  return cols;
}

namespace {

corridor_status map_error(corridor_instance* inst, const std::exception& e) {
  if (inst) inst->message = e.what();
  if (dynamic_cast<const corridor::ParseError*>(&e)) return CORRIDOR_ERR_PARSE;
  if (dynamic_cast<const corridor::InvalidCorridor*>(&e)) return CORRIDOR_ERR_INVALID_CORRIDOR;
  if (dynamic_cast<const corridor::QrpConditionViolated*>(&e)) return CORRIDOR_ERR_QRP_VIOLATED;
  if (dynamic_cast<const corridor::NonContiguousSubset*>(&e))
    return CORRIDOR_ERR_NONCONTIGUOUS_SUBSET;
  if (dynamic_cast<const corridor::HorizonTooSmall*>(&e)) return CORRIDOR_ERR_HORIZON;
  if (dynamic_cast<const corridor::NonConvergence*>(&e)) return CORRIDOR_ERR_NONCONVERGENCE;
  if (dynamic_cast<const corridor::SolverError*>(&e)) return CORRIDOR_ERR_ARGUMENT;
  return CORRIDOR_ERR_INTERNAL;
}

corridor_status build_bundle(corridor_instance* inst) {
  if (inst->bundle) return CORRIDOR_OK;
  auto b = std::make_shared<Bundle>();
  b->c = inst->cfg.corridor;
  b->f = inst->cfg.schedule;
  b->dso = corridor::solve_dso(b->c, b->f);
  const corridor::EqualCostWindow& h = b->dso.horizon();
  b->qrp = corridor::check_qrp_condition(b->f, b->c.capacities, h.t_minus, h.t_plus);
  if (b->qrp.holds) b->due = corridor::construct_due(b->dso, b->c, b->f);
  inst->bundle = std::move(b);
  return CORRIDOR_OK;
}

char* alloc_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json residual_json(const corridor::ResidualReport& rep, double tol) {
  json j;
  j["max_departure_time_choice_residual"] = rep.max_dtc;
  j["max_queueing_residual"] = rep.max_queue;
  j["max_conservation_gap"] = rep.max_conservation;
  j["max_flow_negativity"] = rep.max_flow_negativity;
  j["min_consistency_margin"] = rep.min_consistency;
  j["tolerance"] = tol;
  j["pass"] = rep.pass(tol);
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  return j;
}

}  // namespace

extern "C" {

corridor_status corridor_instance_create(const char* json_text, corridor_instance** out) {
  if (!json_text || !out) return CORRIDOR_ERR_ARGUMENT;
  *out = nullptr;
  auto inst = std::make_unique<corridor_instance>();
  try {
    inst->cfg = corridor::parse_config(json_text);
  } catch (const std::exception& e) {
    return map_error(nullptr, e);
  }
  *out = inst.release();
  return CORRIDOR_OK;
}

void corridor_instance_destroy(corridor_instance* inst) { delete inst; }

const char* corridor_last_message(const corridor_instance* inst) {
  return inst ? inst->message.c_str() : "";
}

int corridor_n_bottlenecks(const corridor_instance* inst) {
  return inst ? inst->cfg.corridor.n_bottlenecks() : 0;
}

int corridor_n_groups(const corridor_instance* inst) {
  return inst ? inst->cfg.corridor.n_groups() : 0;
}

corridor_status corridor_instance_output_dir(const corridor_instance* inst, char* buf,
                                             int buf_len) {
  if (!inst || !buf || buf_len <= 0) return CORRIDOR_ERR_ARGUMENT;
  std::snprintf(buf, static_cast<std::size_t>(buf_len), "%s", inst->cfg.output_dir.c_str());
  return CORRIDOR_OK;
}

corridor_status corridor_validate(corridor_instance* inst) {
  if (!inst) return CORRIDOR_ERR_ARGUMENT;
  corridor::Diagnostics diag = corridor::validate(inst->cfg.corridor);
  if (!diag.ok) {
    inst->message = diag.text();
    return CORRIDOR_ERR_INVALID_CORRIDOR;
  }
  try {
    build_bundle(inst);
  } catch (const std::exception& e) {
    return map_error(inst, e);
  }
  inst->message = inst->bundle->qrp.summary();
  return inst->bundle->qrp.holds ? CORRIDOR_OK : CORRIDOR_ERR_QRP_VIOLATED;
}

corridor_status corridor_solve(corridor_instance* inst, corridor_state state, const int* subset,
                               int subset_len, int force, corridor_solution** out) {
  if (!inst || !out || subset_len < 0 || (subset_len > 0 && !subset))
    return CORRIDOR_ERR_ARGUMENT;
  *out = nullptr;
  try {
    build_bundle(inst);
    auto sol = std::make_unique<corridor_solution>();
    sol->bundle = inst->bundle;
    std::vector<int> sub(subset, subset + subset_len);
    Bundle& b = *inst->bundle;

    if (state == CORRIDOR_STATE_DUE) {
      sol->kind = corridor::StateKind::Due;
      if (b.due)
        sol->due = *b.due;
      else if (force)
        sol->due = corridor::construct_due(b.dso, b.c, b.f, true);
      else
        throw corridor::QrpConditionViolated(b.qrp.summary());
    } else {
      if (!b.due) throw corridor::QrpConditionViolated(b.qrp.summary());
      corridor::PolicySpec spec;
      spec.subset = sub;
      switch (state) {
        case CORRIDOR_STATE_DSO: spec.kind = corridor::StateKind::Dso; break;
        case CORRIDOR_STATE_PBP: spec.kind = corridor::StateKind::Pbp; break;
        case CORRIDOR_STATE_RM: spec.kind = corridor::StateKind::Rm; break;
        case CORRIDOR_STATE_RP: spec.kind = corridor::StateKind::Rp; break;
        case CORRIDOR_STATE_PRM: spec.kind = corridor::StateKind::Prm; break;
        case CORRIDOR_STATE_PRP: spec.kind = corridor::StateKind::Prp; break;
        default: throw corridor::SolverError("unknown state");
      }
      sol->kind = spec.kind;
      sol->policy = corridor::solve_policy(b.dso, *b.due, b.c, b.f, spec);
    }
    *out = sol.release();
    return CORRIDOR_OK;
  } catch (const std::exception& e) {
    return map_error(inst, e);
  }
}

void corridor_solution_destroy(corridor_solution* sol) { delete sol; }

corridor_state corridor_solution_state(const corridor_solution* sol) {
  switch (sol->kind) {
    case corridor::StateKind::Dso: return CORRIDOR_STATE_DSO;
    case corridor::StateKind::Due: return CORRIDOR_STATE_DUE;
    case corridor::StateKind::Pbp: return CORRIDOR_STATE_PBP;
    case corridor::StateKind::Rm: return CORRIDOR_STATE_RM;
    case corridor::StateKind::Rp: return CORRIDOR_STATE_RP;
    case corridor::StateKind::Prm: return CORRIDOR_STATE_PRM;
    case corridor::StateKind::Prp: return CORRIDOR_STATE_PRP;
  }
  return CORRIDOR_STATE_DUE;
}

double corridor_solution_total_cost(const corridor_solution* sol) { return sol->total_cost(); }

double corridor_solution_revenue(const corridor_solution* sol) { return sol->revenue(); }

corridor_status corridor_solution_rho(const corridor_solution* sol, double* out) {
  if (!sol || !out) return CORRIDOR_ERR_ARGUMENT;
  const auto& rho = sol->rho();
  std::size_t pos = 0;
  for (const auto& row : rho)
    for (double v : row) out[pos++] = v;
  return CORRIDOR_OK;
}

int corridor_solution_n_columns(const corridor_solution* sol) {
  return static_cast<int>(sol->columns().size());
}

corridor_status corridor_solution_column_name(const corridor_solution* sol, int column, char* buf,
                                              int buf_len) {
  if (!sol || !buf || buf_len <= 0) return CORRIDOR_ERR_ARGUMENT;
  std::vector<Column> cols = sol->columns();
  if (column < 0 || column >= static_cast<int>(cols.size())) return CORRIDOR_ERR_ARGUMENT;
  std::snprintf(buf, static_cast<std::size_t>(buf_len), "%s", cols[column].name.c_str());
  return CORRIDOR_OK;
}

int corridor_solution_n_breakpoints(const corridor_solution* sol) {
  return static_cast<int>(sol->bundle->dso.slices.breaks.size());
}

corridor_status corridor_solution_breakpoints(const corridor_solution* sol, double* out,
                                              int cap) {
  if (!sol || !out) return CORRIDOR_ERR_ARGUMENT;
  const auto& breaks = sol->bundle->dso.slices.breaks;
  if (cap < static_cast<int>(breaks.size())) return CORRIDOR_ERR_ARGUMENT;
  for (std::size_t j = 0; j < breaks.size(); ++j) out[j] = breaks[j];
  return CORRIDOR_OK;
}

corridor_status corridor_solution_sample(const corridor_solution* sol, const double* times,
                                         const int* sides, int n_times, double* out) {
  if (!sol || !times || !out || n_times < 0) return CORRIDOR_ERR_ARGUMENT;
  std::vector<Column> cols = sol->columns();
  const corridor::ScheduleDelay& f = sol->bundle->f;
  for (int r = 0; r < n_times; ++r) {
    corridor::Side side =
        sides && sides[r] == 0 ? corridor::Side::Left : corridor::Side::Right;
    for (std::size_t c = 0; c < cols.size(); ++c)
      out[r * cols.size() + c] = cols[c].curve->eval(times[r], f, side);
  }
  return CORRIDOR_OK;
}

corridor_status corridor_verify(corridor_instance* inst, const corridor_solution* sol, double dt,
                                double padding, char** report_json, int* pass) {
  if (!inst || !sol || !report_json || !pass) return CORRIDOR_ERR_ARGUMENT;
  *report_json = nullptr;
  *pass = 0;
  try {
    Bundle& b = *sol->bundle;
    json j;
    j["state"] = corridor::state_name(sol->kind);
    bool ok = false;

    if (sol->kind == corridor::StateKind::Dso) {
      double use_dt = dt > 0.0 ? dt : inst->cfg.dt;
      double use_padding = padding >= 0.0 ? padding : inst->cfg.padding;
      corridor::DiscreteLp d = corridor::discretize(b.c, b.f, use_dt, use_padding);
      corridor::LpOracleResult r = corridor::solve_discrete(d);
      if (r.status != corridor::LpStatus::Optimal)
        throw corridor::SolverError("oracle program did not reach an optimum");
      corridor::OracleComparison cmp = corridor::compare_to_closed_form(r, d, b.dso, b.f);
      j["dt"] = use_dt;
      j["bins"] = d.n_bins;
      j["pivots"] = r.pivots;
      j["objective"] = {{"program", cmp.lp_objective},
                        {"closed_form", cmp.closed_form_objective},
                        {"relative_gap", cmp.objective_gap_rel},
                        {"tolerance", 0.005}};
      j["price_gap"] = {{"max_away_from_breakpoints", cmp.max_price_gap}, {"tolerance", 0.05}};
      j["rho_gap"] = {{"max", cmp.max_rho_gap}, {"tolerance", 0.02}};
      j["duality_gap"] = r.duality_gap;

      // Commuting-cost formula evidence: the window-cost term must follow the
      // inner summation index; the fixed-index reading disagrees with the
      // program's duals whenever K > 1.
      double literal_gap = 0.0;
      for (int i = 0; i < b.c.n_bottlenecks(); ++i)
        for (int g = 0; g < b.c.n_groups(); ++g) {
          double literal = b.c.betas[g] * b.dso.windows[i][g].cost + b.c.free_flow_times[i];
          literal_gap = std::max(literal_gap, std::abs(r.rho_hat[i][g] - literal));
        }
      j["rho_formula_evidence"] = {
          {"sum_indexed_max_gap", cmp.max_rho_gap},
          {"fixed_index_max_gap", literal_gap},
          {"note", "duals follow the sum-indexed window-cost formula; the fixed-index reading "
                   "diverges on multi-group instances"}};
      ok = cmp.objective_gap_rel <= 0.005 && cmp.max_price_gap <= 0.05 && cmp.max_rho_gap <= 0.02;
    } else {
      const double tol = 1e-8;
      corridor::ResidualReport rep;
      if (sol->due) {
        rep = corridor::verify_due(*sol->due, b.c, b.f);
        j["qrp"] = {{"holds", sol->due->qrp.holds}, {"margin", sol->due->qrp.worst_margin}};
      } else {
        rep = corridor::verify_policy(*sol->policy, b.dso, b.c, b.f);
      }
      j["residuals"] = residual_json(rep, tol);
      ok = rep.pass(tol);
    }
    j["pass"] = ok;
    *pass = ok ? 1 : 0;
    *report_json = alloc_string(j.dump(2));
    return CORRIDOR_OK;
  } catch (const std::exception& e) {
    return map_error(inst, e);
  }
}

corridor_status corridor_dump_program(corridor_instance* inst, double dt, double padding,
                                      char** out) {
  if (!inst || !out) return CORRIDOR_ERR_ARGUMENT;
  *out = nullptr;
  try {
    double use_dt = dt > 0.0 ? dt : inst->cfg.dt;
    double use_padding = padding >= 0.0 ? padding : inst->cfg.padding;
    corridor::DiscreteLp d =
        corridor::discretize(inst->cfg.corridor, inst->cfg.schedule, use_dt, use_padding);
    std::ostringstream os;
    corridor::dump_lp(d, os);
    *out = alloc_string(os.str());
    return CORRIDOR_OK;
  } catch (const std::exception& e) {
    return map_error(inst, e);
  }
}

corridor_status corridor_selftest(unsigned long long seed, int count, char** report, int* pass) {
  if (!report || !pass || count <= 0) return CORRIDOR_ERR_ARGUMENT;
  try {
    corridor::SelftestResult res = corridor::run_selftest(seed, count);
    *report = alloc_string(res.report);
    *pass = res.pass() ? 1 : 0;
    return CORRIDOR_OK;
  } catch (const std::exception& e) {
    (void)e;
    return CORRIDOR_ERR_INTERNAL;
  }
}

void corridor_string_free(char* s) { std::free(s); }

}  // extern "C"
