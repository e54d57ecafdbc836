/* C interface to the subdiffusion forward/inverse solver core.
 *
 * Conventions:
 *   - every fallible call returns sd_status; outputs go through pointers
 *   - sd_last_error() describes the most recent failure in this thread
 *   - mode indices k are 1-based, matching the eigenvalue ordering
 *   - handles are created by sd_*_create functions and released with the
 *     matching sd_*_free; they are immutable and safe to share across threads
 */
#ifndef SUBDIFF_H
#define SUBDIFF_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
    SD_OK = 0,
    SD_ERR_INVALID = 1,     /* bad argument / precondition violated */
    SD_ERR_DOMAIN = 2,      /* parameter outside mathematical domain */
    SD_ERR_ACCURACY = 3,    /* result could not be certified to tolerance */
    SD_ERR_UNSOLVABLE = 4,  /* inverse instance fails the solvability condition */
    SD_ERR_LOGIC = 5,       /* call sequence error (e.g. unsolvable result queried) */
    SD_ERR_INTERNAL = 6
} sd_status;

const char* sd_version(void);
const char* sd_status_name(sd_status s);
/* message for the last failure in the calling thread ("" if none) */
const char* sd_last_error(void);

/* ---- special functions ---- */

sd_status sd_gamma(double x, double* out);

/* E_{rho,mu}(z); fails with SD_ERR_ACCURACY if 1e-10 relative cannot be met */
sd_status sd_ml_eval(double rho, double mu, double z, double* out);

/* no-throw variant: reports the value, the evaluator's relative-error
 * estimate and the route taken (0 exact, 1 series, 2 asymptotic, 3 contour) */
sd_status sd_ml_eval_info(double rho, double mu, double z, double* value,
                          double* est_rel_err, int* route);

/* leading large-argument term t^{-1}/Gamma(mu-rho) */
sd_status sd_ml_asymptotic_leading(double rho, double mu, double t, double* out);

/* ---- quadrature configuration ---- */

typedef struct sd_quadrature {
    int panels;              /* initial panel count (default 16) */
    int nodes_per_panel;     /* Gauss nodes per panel (default 12) */
    double grading_exponent; /* 0 = choose from rho */
} sd_quadrature;

void sd_quadrature_default(sd_quadrature* q);

/* ---- spectral operator ---- */

typedef struct sd_operator sd_operator;

sd_status sd_operator_dirichlet_1d(double length, int K, sd_operator** out);
sd_status sd_operator_explicit(const double* eigenvalues, int K, sd_operator** out);
int sd_operator_size(const sd_operator* op);
sd_status sd_operator_eigenvalue(const sd_operator* op, int k, double* out);
/* fails with SD_ERR_LOGIC when the operator has no eigenfunction evaluator */
sd_status sd_operator_eigenfunction(const sd_operator* op, int k, double x, double* out);
int sd_operator_has_eigenfunctions(const sd_operator* op);
void sd_operator_free(sd_operator* op);

/* Fourier coefficients of a function given by n >= 2 samples on the uniform
 * grid of [0, domain_length] (cubic-spline interpolated between samples);
 * out receives K coefficients. quad_nodes <= 0 picks a default. */
sd_status sd_project_sampled(const sd_operator* op, const double* values, int n,
                             int quad_nodes, double* out);

/* ---- time profile g(t) on [0, T] ---- */

typedef struct sd_profile sd_profile;

sd_status sd_profile_const(double c, double T, sd_profile** out);
sd_status sd_profile_linear(double a, double b, double T, sd_profile** out);
sd_status sd_profile_exp_decay(double rate, double T, sd_profile** out);
sd_status sd_profile_cosine(double omega, double T, sd_profile** out);
sd_status sd_profile_affine_exp(double beta, double T, sd_profile** out);
/* n >= 2 samples on the uniform grid of [0, T], cubic-spline interpolated */
sd_status sd_profile_sampled(const double* values, int n, double T, sd_profile** out);
sd_status sd_profile_eval(const sd_profile* g, double t, double* out);
void sd_profile_free(sd_profile* g);

/* ---- scalar kernels ---- */

/* int_0^t (t-s)^{rho-1} E_{rho,rho}(-lambda (t-s)^rho) g(s) ds */
sd_status sd_convolve_source(double rho, double lambda, const sd_profile* g,
                             double t, const sd_quadrature* q, double* out);

/* p(T) = int_0^T g(s) (T-s)^rho E_{rho,rho+1}(-lambda (T-s)^rho) ds */
sd_status sd_kernel_p(double rho, double lambda, const sd_profile* g, double T,
                      const sd_quadrature* q, double* out);

/* psi_k = phi_k T E_{rho,2}(-lambda T^rho) + f_k p(T) */
sd_status sd_psi_coefficient(double rho, double lambda, double T, double phi_k,
                             double f_k, const sd_profile* g,
                             const sd_quadrature* q, double* out);

/* ---- forward problem ---- */

/* u[i*K + (k-1)] = u_k(times[i]); phi and f hold K coefficients each */
sd_status sd_solve_forward(double rho, double T, const sd_operator* op,
                           const double* phi, const double* f, const sd_profile* g,
                           const sd_quadrature* q, const double* times, int n_times,
                           double* u);

/* psi_out holds K coefficients of int_0^T u(t) dt (exact spectral image) */
sd_status sd_integrate_trajectory(double rho, double T, const sd_operator* op,
                                  const double* phi, const double* f,
                                  const sd_profile* g, const sd_quadrature* q,
                                  double* psi_out);

/* cross-check path: adaptive time quadrature of the solved trajectory */
sd_status sd_integrate_trajectory_quadrature(double rho, double T,
                                             const sd_operator* op, const double* phi,
                                             const double* f, const sd_profile* g,
                                             const sd_quadrature* q, double* psi_out);

/* L1 Caputo derivative on a uniform grid (first entry 0); rho = 1 uses
 * second-order differences */
sd_status sd_caputo_l1(const double* t, const double* y, int n, double rho,
                       double* d_out);

/* max residual |D^rho u_k + lambda_k u_k - f_k g| per mode on the uniform grid
 * with grid_size intervals, over grid points with t >= T/4 */
sd_status sd_residual_per_mode(double rho, double T, const sd_operator* op,
                               const double* phi, const double* f,
                               const sd_profile* g, const sd_quadrature* q,
                               int grid_size, double* res_out);

/* ---- inverse problem ---- */

typedef struct sd_inverse_result sd_inverse_result;

/* Recover f from (phi, psi). eps_b scales the kernel-mode threshold
 * (<= 0 picks the default 1e-9); tol_solv < 0 picks 1e-8 * (1 + |psi|).
 * free_idx/free_val (n_free entries) choose coefficients for kernel modes.
 * An instance that fails the solvability condition still returns SD_OK;
 * inspect sd_inverse_solvable. */
sd_status sd_solve_inverse(double rho, double T, const sd_operator* op,
                           const double* phi, const double* psi, const sd_profile* g,
                           const sd_quadrature* q, double eps_b, double tol_solv,
                           const int* free_idx, const double* free_val, int n_free,
                           sd_inverse_result** out);

int sd_inverse_solvable(const sd_inverse_result* r);
int sd_inverse_size(const sd_inverse_result* r);
int sd_inverse_kernel_count(const sd_inverse_result* r);
/* recovered coefficients (K values); SD_ERR_UNSOLVABLE when not solvable */
sd_status sd_inverse_coeffs(const sd_inverse_result* r, double* f_out);
sd_status sd_inverse_p_value(const sd_inverse_result* r, int k, double* out);
sd_status sd_inverse_threshold(const sd_inverse_result* r, int k, double* out);
int sd_inverse_in_kernel(const sd_inverse_result* r, int k);
/* solvability residual |psi_k - phi_k T E_{rho,2}(-lambda_k T^rho)| of a
 * kernel mode; SD_ERR_INVALID for non-kernel modes */
sd_status sd_inverse_residual(const sd_inverse_result* r, int k, double* out);
sd_status sd_inverse_tol_solv(const sd_inverse_result* r, double* out);
void sd_inverse_free(sd_inverse_result* r);

/* ---- self test ---- */

/* runs the identity/property suite; writes a text report (truncated to
 * buf_len) and the number of failed checks */
sd_status sd_selftest(int quick, int* n_failed, char* report_buf, int buf_len);

#ifdef __cplusplus
}
#endif

#endif /* SUBDIFF_H */
