// Batch front end: loads a corridor instance, runs the solvers and the
// verification oracle through the shared-library C API, and writes CSV
// time-series plus structured summaries for plotting and regression tests.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corridor/corridor.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;

int exit_code_for(corridor_status st) {
  return st == CORRIDOR_ERR_PARSE ? kExitParse : kExitDomain;
}

const char* status_tag(corridor_status st) {
  switch (st) {
    case CORRIDOR_OK: return "ok";
    case CORRIDOR_ERR_PARSE: return "parse_error";
    case CORRIDOR_ERR_INVALID_CORRIDOR: return "invalid_corridor";
    case CORRIDOR_ERR_QRP_VIOLATED: return "qrp_condition_violated";
    case CORRIDOR_ERR_NONCONTIGUOUS_SUBSET: return "noncontiguous_subset";
    case CORRIDOR_ERR_HORIZON: return "horizon_too_small";
    case CORRIDOR_ERR_ITER_LIMIT: return "iteration_limit";
    case CORRIDOR_ERR_NONCONVERGENCE: return "nonconvergence";
    case CORRIDOR_ERR_ARGUMENT: return "bad_argument";
    case CORRIDOR_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

struct InstancePtr {
  corridor_instance* p = nullptr;
  ~InstancePtr() { corridor_instance_destroy(p); }
};
struct SolutionPtr {
  corridor_solution* p = nullptr;
  ~SolutionPtr() { corridor_solution_destroy(p); }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string read_file(const std::string& path, bool& ok) {
  std::ifstream in(path);
  if (!in) {
    ok = false;
    return {};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ok = true;
  return buf.str();
}

int load_instance(const std::string& config_path, InstancePtr& inst) {
  bool ok = false;
  std::string text = read_file(config_path, ok);
  if (!ok) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return kExitParse;
  }
  corridor_status st = corridor_instance_create(text.c_str(), &inst.p);
  if (st != CORRIDOR_OK) {
    std::cerr << "error: config did not parse\n";
    return kExitParse;
  }
  return kExitOk;
}

std::optional<corridor_state> state_from_name(const std::string& name) {
  static const std::map<std::string, corridor_state> table = {
      {"dso", CORRIDOR_STATE_DSO}, {"due", CORRIDOR_STATE_DUE}, {"pbp", CORRIDOR_STATE_PBP},
      {"rm", CORRIDOR_STATE_RM},   {"rp", CORRIDOR_STATE_RP},   {"prm", CORRIDOR_STATE_PRM},
      {"prp", CORRIDOR_STATE_PRP}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

const char* state_to_name(corridor_state s) {
  switch (s) {
    case CORRIDOR_STATE_DSO: return "dso";
    case CORRIDOR_STATE_DUE: return "due";
    case CORRIDOR_STATE_PBP: return "pbp";
    case CORRIDOR_STATE_RM: return "rm";
    case CORRIDOR_STATE_RP: return "rp";
    case CORRIDOR_STATE_PRM: return "prm";
    case CORRIDOR_STATE_PRP: return "prp";
  }
  return "?";
}

std::vector<int> parse_subset(const std::string& text, char sep) {
  std::vector<int> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep))
    if (!token.empty()) out.push_back(std::stoi(token));
  return out;
}

bool needs_subset(corridor_state s) {
  return s == CORRIDOR_STATE_PBP || s == CORRIDOR_STATE_PRM || s == CORRIDOR_STATE_PRP;
}

// Sampling grid: every analytic breakpoint (duplicated with both one-sided
// limits so jumps come out vertical) plus uniform fill.
struct SampleGrid {
  std::vector<double> times;
  std::vector<int> sides;  // 0 = limit from below, 1 = from above
};

SampleGrid sample_grid(const corridor_solution* sol, double dt) {
  int nb = corridor_solution_n_breakpoints(sol);
  std::vector<double> breaks(nb);
  corridor_solution_breakpoints(sol, breaks.data(), nb);
  std::vector<double> fill;
  if (nb >= 2) {
    double lo = breaks.front(), hi = breaks.back();
    double step = std::max(dt, (hi - lo) / 2048.0);
    for (double t = lo + step; t < hi; t += step) fill.push_back(t);
  }
  SampleGrid g;
  std::size_t fi = 0;
  for (int b = 0; b < nb; ++b) {
    while (fi < fill.size() && fill[fi] < breaks[b]) {
      if (g.times.empty() || fill[fi] != g.times.back()) {
        g.times.push_back(fill[fi]);
        g.sides.push_back(1);
      }
      ++fi;
    }
    if (fi < fill.size() && fill[fi] == breaks[b]) ++fi;
    g.times.push_back(breaks[b]);
    g.sides.push_back(0);
    g.times.push_back(breaks[b]);
    g.sides.push_back(1);
  }
  return g;
}

int write_curves_csv(const corridor_solution* sol, double dt, const std::string& path) {
  std::ofstream out(path);
  if (!out) return kExitParse;
  int nc = corridor_solution_n_columns(sol);
  out << "t";
  std::vector<char> name(64);
  for (int c = 0; c < nc; ++c) {
    corridor_solution_column_name(sol, c, name.data(), static_cast<int>(name.size()));
    out << "," << name.data();
  }
  out << "\n";
  SampleGrid g = sample_grid(sol, dt);
  std::vector<double> row(g.times.size() * nc);
  corridor_solution_sample(sol, g.times.data(), g.sides.data(),
                           static_cast<int>(g.times.size()), row.data());
  for (std::size_t r = 0; r < g.times.size(); ++r) {
    out << fmt(g.times[r]);
    for (int c = 0; c < nc; ++c) out << "," << fmt(row[r * nc + c]);
    out << "\n";
  }
  return kExitOk;
}

int write_rho_csv(const corridor_instance* inst, const corridor_solution* sol,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) return kExitParse;
  int n = corridor_n_bottlenecks(inst), k = corridor_n_groups(inst);
  std::vector<double> rho(static_cast<std::size_t>(n) * k);
  corridor_solution_rho(sol, rho.data());
  out << "bottleneck";
  for (int g = 1; g <= k; ++g) out << ",k" << g;
  out << "\n";
  for (int i = 0; i < n; ++i) {
    out << i + 1;
    for (int g = 0; g < k; ++g) out << "," << fmt(rho[i * k + g]);
    out << "\n";
  }
  return kExitOk;
}

void write_summary(const corridor_instance* inst, const corridor_solution* sol,
                   const std::vector<int>& subset, const std::string& path) {
  std::ofstream out(path);
  int n = corridor_n_bottlenecks(inst), k = corridor_n_groups(inst);
  std::vector<double> rho(static_cast<std::size_t>(n) * k);
  corridor_solution_rho(sol, rho.data());
  double z = corridor_solution_total_cost(sol);
  double rev = corridor_solution_revenue(sol);
  out << "{\n  \"state\": \"" << state_to_name(corridor_solution_state(sol)) << "\",\n";
  out << "  \"subset\": [";
  for (std::size_t j = 0; j < subset.size(); ++j) out << (j ? "," : "") << subset[j];
  out << "],\n";
  out << "  \"total_cost\": " << fmt(z) << ",\n";
  out << "  \"revenue\": " << fmt(rev) << ",\n";
  out << "  \"payments\": " << fmt(z + rev) << ",\n";
  out << "  \"rho\": [\n";
  for (int i = 0; i < n; ++i) {
    out << "    [";
    for (int g = 0; g < k; ++g) out << (g ? "," : "") << fmt(rho[i * k + g]);
    out << (i + 1 < n ? "],\n" : "]\n");
  }
  out << "  ]\n}\n";
}

struct PolicyArg {
  corridor_state state;
  std::vector<int> subset;
  std::string label;
};

std::optional<PolicyArg> parse_policy(const std::string& text) {
  PolicyArg p;
  p.label = text;
  std::string name = text;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    p.subset = parse_subset(text.substr(colon + 1), '+');
  }
  auto st = state_from_name(name);
  if (!st) return std::nullopt;
  p.state = *st;
  if (colon == std::string::npos && needs_subset(p.state)) {
    // bare partial-policy name means full implementation
    // (filled in once the instance size is known)
    p.subset.clear();
    p.label = name + ":all";
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-form corridor departure-time equilibrium solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", subset_text, policies_text, dump_lp_path;
  std::string state_name_arg;
  double dt_override = 0.0;
  double padding_override = -1.0;
  bool force = false;
  unsigned long long seed = 1;
  int count = 50;

  CLI::App* validate = app.add_subcommand("validate", "check corridor invariants and the "
                                                      "queue-replacement slope condition");
  validate->add_option("config", config_path)->required();

  CLI::App* solve = app.add_subcommand("solve", "solve one state and write curves.csv, rho.csv "
                                                "and summary.json");
  solve->add_option("state", state_name_arg, "dso|due|pbp|rm|rp|prm|prp")->required();
  solve->add_option("config", config_path)->required();
  solve->add_option("--subset", subset_text, "comma-separated 1-based indices for pbp/prm/prp");
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--dt", dt_override, "curve sampling step");
  solve->add_flag("--force", force, "emit diagnostic curves even if the slope condition fails");

  CLI::App* verify = app.add_subcommand("verify", "verify a state (oracle program for dso, "
                                                  "residual check otherwise)");
  verify->add_option("state", state_name_arg)->required();
  verify->add_option("config", config_path)->required();
  verify->add_option("--subset", subset_text);
  verify->add_option("--dt", dt_override, "oracle grid step override");
  verify->add_option("--padding", padding_override, "oracle horizon padding override");
  verify->add_option("--out", out_dir);
  verify->add_option("--dump-lp", dump_lp_path, "write the discretized program as row/col/value "
                                                "triplets");

  CLI::App* compare = app.add_subcommand("compare", "solve a policy menu and check the "
                                                    "total-cost orderings");
  compare->add_option("config", config_path)->required();
  compare->add_option("--policies", policies_text,
                      "comma list, e.g. dso,due,rp,rm,pbp:2,prm:1+2,prp:2")
      ->required();
  compare->add_option("--out", out_dir);

  CLI::App* selftest = app.add_subcommand("selftest", "randomized equilibrium verification "
                                                      "sweep");
  selftest->add_option("--seed", seed);
  selftest->add_option("--count", count);

  CLI11_PARSE(app, argc, argv);

  InstancePtr inst;
  if (!app.got_subcommand(selftest)) {
    int rc = load_instance(config_path, inst);
    if (rc != kExitOk) return rc;
    if (out_dir == ".") {  // --out wins over the config's output_dir
      char buf[512];
      if (corridor_instance_output_dir(inst.p, buf, sizeof buf) == CORRIDOR_OK && buf[0])
        out_dir = buf;
    }
  }

  if (app.got_subcommand(validate)) {
    corridor_status st = corridor_validate(inst.p);
    std::cout << corridor_last_message(inst.p) << "\n";
    if (st == CORRIDOR_OK) return kExitOk;
    return exit_code_for(st);
  }

  if (app.got_subcommand(solve) || app.got_subcommand(verify)) {
    auto state = state_from_name(state_name_arg);
    if (!state) {
      std::cerr << "error: unknown state '" << state_name_arg << "'\n";
      return kExitParse;
    }
    std::vector<int> subset = parse_subset(subset_text, ',');
    if (needs_subset(*state) && subset_text.empty()) {
      for (int i = 1; i <= corridor_n_bottlenecks(inst.p); ++i) subset.push_back(i);
    }
    SolutionPtr sol;
    corridor_status st = corridor_solve(inst.p, *state, subset.data(),
                                        static_cast<int>(subset.size()), force ? 1 : 0, &sol.p);
    if (st != CORRIDOR_OK) {
      std::cerr << "error [" << status_tag(st) << "]: " << corridor_last_message(inst.p) << "\n";
      return exit_code_for(st);
    }

    std::filesystem::create_directories(out_dir);
    if (app.got_subcommand(solve)) {
      double dt = dt_override > 0.0 ? dt_override : 0.01;
      int rc = write_curves_csv(sol.p, dt, out_dir + "/curves.csv");
      if (rc != kExitOk) return rc;
      rc = write_rho_csv(inst.p, sol.p, out_dir + "/rho.csv");
      if (rc != kExitOk) return rc;
      write_summary(inst.p, sol.p, subset, out_dir + "/summary.json");
      std::cout << "total_cost " << fmt(corridor_solution_total_cost(sol.p)) << " revenue "
                << fmt(corridor_solution_revenue(sol.p)) << "\n";
      return kExitOk;
    }

    // verify
    if (!dump_lp_path.empty()) {
      char* text = nullptr;
      corridor_status ds = corridor_dump_program(inst.p, dt_override, padding_override, &text);
      if (ds != CORRIDOR_OK) {
        std::cerr << "error [" << status_tag(ds) << "]: " << corridor_last_message(inst.p) << "\n";
        return exit_code_for(ds);
      }
      std::ofstream(dump_lp_path) << text;
      corridor_string_free(text);
    }
    char* report = nullptr;
    int pass = 0;
    st = corridor_verify(inst.p, sol.p, dt_override, padding_override, &report, &pass);
    if (st != CORRIDOR_OK) {
      std::cerr << "error [" << status_tag(st) << "]: " << corridor_last_message(inst.p) << "\n";
      return exit_code_for(st);
    }
    std::cout << report << "\n";
    std::ofstream(out_dir + "/verify_" + state_name_arg + ".json") << report << "\n";
    corridor_string_free(report);
    return pass ? kExitOk : kExitDomain;
  }

  if (app.got_subcommand(compare)) {
    std::vector<PolicyArg> menu;
    {
      std::istringstream in(policies_text);
      std::string token;
      while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        auto p = parse_policy(token);
        if (!p) {
          std::cerr << "error: unknown policy '" << token << "'\n";
          return kExitParse;
        }
        menu.push_back(*p);
      }
    }
    if (menu.empty()) {
      std::cerr << "error: empty policy list\n";
      return kExitDomain;
    }
    const int n = corridor_n_bottlenecks(inst.p);
    const int k = corridor_n_groups(inst.p);
    for (auto& p : menu)
      if (needs_subset(p.state) && p.label.size() > 4 &&
          p.label.compare(p.label.size() - 4, 4, ":all") == 0)
        for (int i = 1; i <= n; ++i) p.subset.push_back(i);

    // Reference states for the ordering checks and the Pareto flag.
    SolutionPtr ref_dso, ref_due;
    corridor_status st = corridor_solve(inst.p, CORRIDOR_STATE_DSO, nullptr, 0, 0, &ref_dso.p);
    if (st == CORRIDOR_OK) st = corridor_solve(inst.p, CORRIDOR_STATE_DUE, nullptr, 0, 0, &ref_due.p);
    if (st != CORRIDOR_OK) {
      std::cerr << "error [" << status_tag(st) << "]: " << corridor_last_message(inst.p) << "\n";
      return exit_code_for(st);
    }
    double z_dso = corridor_solution_total_cost(ref_dso.p);
    double z_due = corridor_solution_total_cost(ref_due.p);
    std::vector<double> rho_dso(static_cast<std::size_t>(n) * k);
    corridor_solution_rho(ref_dso.p, rho_dso.data());

    struct Row {
      std::string label;
      double z, revenue, rho_gap;
      bool pareto;
    };
    std::vector<Row> rows;
    std::vector<std::string> failures;
    const double tol = 1e-8;
    for (const auto& p : menu) {
      SolutionPtr sol;
      st = corridor_solve(inst.p, p.state, p.subset.data(), static_cast<int>(p.subset.size()), 0,
                          &sol.p);
      if (st != CORRIDOR_OK) {
        std::cerr << "error [" << status_tag(st) << "]: " << p.label << ": "
                  << corridor_last_message(inst.p) << "\n";
        return exit_code_for(st);
      }
      Row row;
      row.label = p.label;
      row.z = corridor_solution_total_cost(sol.p);
      row.revenue = corridor_solution_revenue(sol.p);
      std::vector<double> rho(static_cast<std::size_t>(n) * k);
      corridor_solution_rho(sol.p, rho.data());
      row.rho_gap = 0.0;
      for (std::size_t q = 0; q < rho.size(); ++q)
        row.rho_gap = std::max(row.rho_gap, std::abs(rho[q] - rho_dso[q]));
      row.pareto = row.rho_gap <= 1e-10 && row.z < z_due - tol;
      rows.push_back(row);

      switch (p.state) {
        case CORRIDOR_STATE_DSO:
        case CORRIDOR_STATE_RP:
          if (std::abs(row.z - z_dso) > tol)
            failures.push_back(row.label + ": Z != Z_dso");
          break;
        case CORRIDOR_STATE_DUE:
        case CORRIDOR_STATE_RM:
        case CORRIDOR_STATE_PRM:
          if (std::abs(row.z - z_due) > tol)
            failures.push_back(row.label + ": Z != Z_due");
          break;
        case CORRIDOR_STATE_PBP:
        case CORRIDOR_STATE_PRP:
          if (row.z < z_dso - tol || row.z > z_due + tol)
            failures.push_back(row.label + ": Z outside [Z_dso, Z_due]");
          break;
      }
      if (row.rho_gap > 1e-10) failures.push_back(row.label + ": commuting costs changed");
    }
    if (z_dso < z_due - tol || corridor_solution_revenue(ref_dso.p) <= tol) {
      // strict separation holds whenever prices are nonzero
    } else {
      failures.push_back("Z_dso not strictly below Z_due despite nonzero prices");
    }

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/compare.csv");
    csv << "policy,total_cost,revenue,rho_gap,pareto\n";
    for (const auto& r : rows)
      csv << r.label << "," << fmt(r.z) << "," << fmt(r.revenue) << "," << fmt(r.rho_gap) << ","
          << (r.pareto ? 1 : 0) << "\n";

    std::ostringstream table;
    table << "policy        total_cost      revenue    Pareto\n";
    for (const auto& r : rows) {
      char line[128];
      std::snprintf(line, sizeof line, "%-12s %12.6f %12.6f    %s\n", r.label.c_str(), r.z,
                    r.revenue, r.pareto ? "yes" : "no");
      table << line;
    }
    table << "ordering Z_dso = Z_rp < Z_rm = Z_due and partial policies in between: "
          << (failures.empty() ? "PASS" : "FAIL") << "\n";
    for (const auto& msg : failures) table << "  violated: " << msg << "\n";
    std::cout << table.str();
    std::ofstream(out_dir + "/compare.txt") << table.str();
    return failures.empty() ? kExitOk : kExitDomain;
  }

  if (app.got_subcommand(selftest)) {
    char* report = nullptr;
    int pass = 0;
    corridor_status st = corridor_selftest(seed, count, &report, &pass);
    if (st != CORRIDOR_OK) {
      std::cerr << "error: selftest failed to run\n";
      return kExitDomain;
    }
    std::cout << report;
    corridor_string_free(report);
    return pass ? kExitOk : kExitDomain;
  }
  return kExitParse;
}
