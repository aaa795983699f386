#ifndef FUCIK_H
#define FUCIK_H

/* C interface to the first-curve solver.  Handles are opaque; every
 * create has a matching destroy; functions return FUCIK_OK or an error
 * status, with a thread-local message available via fucik_last_error(). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fucik_status {
  FUCIK_OK = 0,
  FUCIK_EINVAL,
  FUCIK_EDEGENERATE_DOMAIN,
  FUCIK_EDOMAIN_MISMATCH,
  FUCIK_EDEGENERATE_SIGN,
  FUCIK_EFIBER_INFEASIBLE,
  FUCIK_ECONVERGENCE,
  FUCIK_ERANGE,
  FUCIK_ECERTIFICATE,
  FUCIK_ENOT_APPLICABLE,
  FUCIK_EIO,
  FUCIK_EUNSUPPORTED,
  FUCIK_EINTERNAL
} fucik_status;

const char* fucik_status_name(fucik_status s);

/* Message from the most recent failing call on this thread. */
const char* fucik_last_error(void);

typedef struct fucik_domain fucik_domain;
typedef struct fucik_problem fucik_problem;
typedef struct fucik_trace fucik_trace;

/* ---- domains ---- */

fucik_status fucik_domain_interval(double length, int n, fucik_domain** out);
fucik_status fucik_domain_rectangle(double lx, double ly, int nx, int ny, fucik_domain** out);
fucik_status fucik_domain_ball(int dimension, double radius, int n, fucik_domain** out);
void fucik_domain_destroy(fucik_domain* d);

/* JSON description; free the string with fucik_string_free. */
fucik_status fucik_domain_describe(const fucik_domain* d, char** json_out);

/* ---- problems (domain + factorizations + low eigenpairs) ---- */

fucik_status fucik_problem_create(const fucik_domain* d, fucik_problem** out);
void fucik_problem_destroy(fucik_problem* p);
fucik_status fucik_problem_eigenvalues(const fucik_problem* p, double* lambda1, double* lambda2);

/* ---- solver parameters ---- */

typedef struct fucik_params {
  double fiber_tol;
  double stat_tol;
  double point_tol;
  double armijo;
  int max_iter;
  double eps_initial; /* <= 0: scaled from the seed */
  double eps_decay;
  double eps_floor;   /* <= 0: max(1e-8, h^2/8) */
  double guard;
  int spectral_pairs;
  double eig_tol;
} fucik_params;

void fucik_params_init(fucik_params* prm);

/* ---- point solves ---- */

typedef struct fucik_point {
  double beta;
  double alpha;
  double mu;
  double residual;
  double epsilon_final; /* 0 for points read back from traces */
  double diag_value;    /* 0 for single point solves */
  int iterations;
  int converged;
} fucik_point;

fucik_status fucik_solve_point(const fucik_problem* p, double beta, const fucik_params* prm,
                               fucik_point* out);
fucik_status fucik_solve_point_json(const fucik_problem* p, double beta,
                                    const fucik_params* prm, char** json_out);

/* ---- traces ---- */

/* Geometric default grid; free betas_out with fucik_buffer_free. */
fucik_status fucik_trace_default_grid(const fucik_problem* p, int n, double** betas_out,
                                      size_t* count_out);
fucik_status fucik_trace_curve(const fucik_problem* p, const double* betas, size_t count,
                               const fucik_params* prm, int parallel, fucik_trace** out);
void fucik_trace_destroy(fucik_trace* t);
size_t fucik_trace_size(const fucik_trace* t);
fucik_status fucik_trace_get(const fucik_trace* t, size_t index, fucik_point* out);
fucik_status fucik_trace_write_csv(const fucik_trace* t, const char* path);
fucik_status fucik_trace_read_csv(const char* path, fucik_trace** out);
fucik_status fucik_trace_to_json(const fucik_trace* t, char** json_out);
fucik_status fucik_trace_emit_plot(const fucik_trace* t, const char* curve_path,
                                   const char* diag_path);

/* ---- trace checks ---- */

typedef struct fucik_check {
  int pass;
  double value; /* check-specific scalar, see each function */
  char detail[240];
} fucik_check;

/* value: largest relative alpha increase observed (0 when monotone). */
fucik_status fucik_check_monotone(const fucik_trace* t, double slack, fucik_check* out);
/* value: max relative mismatch under reflection across the diagonal. */
fucik_status fucik_check_symmetry(const fucik_trace* t, double rtol, fucik_check* out);
/* value: interpolated beta where the trace meets the diagonal. */
fucik_status fucik_check_crossing(const fucik_trace* t, double lambda2, double rtol,
                                  fucik_check* out);
/* value: largest diagnostic over the inspected tail. */
fucik_status fucik_check_decay(const fucik_trace* t, int count, double slack, fucik_check* out);
/* value: largest tail diagnostic; pass iff below the k-curve asymptote. */
fucik_status fucik_check_separation(const fucik_trace* t, const fucik_problem* p, int k,
                                    fucik_check* out);

/* ---- asymptote constants and certificates ---- */

fucik_status fucik_rbar1(int dimension, double* out);
fucik_status fucik_capacity(double radius, int dimension, double* out);
fucik_status fucik_epsilon_beta(int dimension, double beta, double* out);
fucik_status fucik_k_curve_asymptote(const fucik_problem* p, int k, double* out);

/* alpha_traced may be NaN; then the report carries null margin fields.
 * bound_out may be NULL; json_out may be NULL. */
fucik_status fucik_certify(const fucik_problem* p, double beta, const double y[3],
                           double alpha_traced, double* bound_out, char** json_out);

/* ---- 1D oracle ---- */

fucik_status fucik_oracle_analytic(double length, double beta, double* alpha_out);
fucik_status fucik_oracle_shoot(double length, double beta, double* alpha_out);

/* ---- memory ---- */

void fucik_string_free(char* s);
void fucik_buffer_free(double* b);

#ifdef __cplusplus
}
#endif

#endif /* FUCIK_H */
