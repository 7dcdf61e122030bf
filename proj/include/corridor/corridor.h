/* C interface to the corridor departure-time equilibrium solver.
 *
 * All functions return corridor_status; every handle-producing call leaves a
 * human-readable message retrievable via corridor_last_message on failure.
 * Handles are opaque and single-owner; destroy functions accept NULL.
 */
#ifndef CORRIDOR_CORRIDOR_H
#define CORRIDOR_CORRIDOR_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct corridor_instance corridor_instance;
typedef struct corridor_solution corridor_solution;

typedef enum {
  CORRIDOR_OK = 0,
  CORRIDOR_ERR_PARSE = 1,
  CORRIDOR_ERR_INVALID_CORRIDOR = 2,
  CORRIDOR_ERR_QRP_VIOLATED = 3,
  CORRIDOR_ERR_NONCONTIGUOUS_SUBSET = 4,
  CORRIDOR_ERR_HORIZON = 5,
  CORRIDOR_ERR_ITER_LIMIT = 6,
  CORRIDOR_ERR_NONCONVERGENCE = 7,
  CORRIDOR_ERR_ARGUMENT = 8,
  CORRIDOR_ERR_INTERNAL = 9
} corridor_status;

typedef enum {
  CORRIDOR_STATE_DSO = 0,
  CORRIDOR_STATE_DUE = 1,
  CORRIDOR_STATE_PBP = 2,
  CORRIDOR_STATE_RM = 3,
  CORRIDOR_STATE_RP = 4,
  CORRIDOR_STATE_PRM = 5,
  CORRIDOR_STATE_PRP = 6
} corridor_state;

/* --- instances ---------------------------------------------------------- */

/* Parses a JSON instance description (see README for the schema). */
corridor_status corridor_instance_create(const char* json_text, corridor_instance** out);
void corridor_instance_destroy(corridor_instance* inst);

/* Message describing the outcome of the last failed call on this instance. */
const char* corridor_last_message(const corridor_instance* inst);

int corridor_n_bottlenecks(const corridor_instance* inst);
int corridor_n_groups(const corridor_instance* inst);

/* Output directory declared in the config ("" when absent). */
corridor_status corridor_instance_output_dir(const corridor_instance* inst, char* buf,
                                             int buf_len);

/* Corridor invariants plus the queue-replacement slope condition; the
 * diagnostics text (including the slope margin) lands in last_message. */
corridor_status corridor_validate(corridor_instance* inst);

/* --- solving ------------------------------------------------------------ */

/* subset: 1-based bottleneck/on-ramp indices for the partial policies
 * (PBP/PRM/PRP); pass NULL, 0 otherwise. force != 0 builds the no-policy
 * equilibrium diagnostically even when the slope condition fails. */
corridor_status corridor_solve(corridor_instance* inst, corridor_state state, const int* subset,
                               int subset_len, int force, corridor_solution** out);
void corridor_solution_destroy(corridor_solution* sol);

corridor_state corridor_solution_state(const corridor_solution* sol);
double corridor_solution_total_cost(const corridor_solution* sol);
double corridor_solution_revenue(const corridor_solution* sol);
/* out must hold n_bottlenecks * n_groups doubles, row-major by bottleneck. */
corridor_status corridor_solution_rho(const corridor_solution* sol, double* out);

/* Curve sampling. Columns are named (flow/price/queue/toll per location);
 * sample fills row-major n_times x n_columns. sides selects the one-sided
 * limit per time (0 = from below, 1 = from above); NULL means from above
 * everywhere. Duplicating a breakpoint with both sides yields jump-faithful
 * series. */
int corridor_solution_n_columns(const corridor_solution* sol);
corridor_status corridor_solution_column_name(const corridor_solution* sol, int column, char* buf,
                                              int buf_len);
int corridor_solution_n_breakpoints(const corridor_solution* sol);
corridor_status corridor_solution_breakpoints(const corridor_solution* sol, double* out, int cap);
corridor_status corridor_solution_sample(const corridor_solution* sol, const double* times,
                                         const int* sides, int n_times, double* out);

/* --- verification ------------------------------------------------------- */

/* Residual verification of a solved state against its own complementarity
 * system; for the system-optimal state this runs the discretized-program
 * oracle (dt/padding <= 0 pick the instance defaults). The JSON report is
 * heap-allocated; free it with corridor_string_free. pass is 1/0. */
corridor_status corridor_verify(corridor_instance* inst, const corridor_solution* sol, double dt,
                                double padding, char** report_json, int* pass);

/* Sparse row/col/value text dump of the discretized verification program
 * (dt/padding <= 0 pick the instance defaults). Free with
 * corridor_string_free. */
corridor_status corridor_dump_program(corridor_instance* inst, double dt, double padding,
                                      char** out);

/* Randomized equilibrium self-test (count instances at tolerance 1e-8). */
corridor_status corridor_selftest(unsigned long long seed, int count, char** report, int* pass);

void corridor_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CORRIDOR_CORRIDOR_H */
