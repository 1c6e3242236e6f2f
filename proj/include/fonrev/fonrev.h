/* C interface to the fonrev planner. All functions return a status code;
   on failure fonrev_last_error() describes the problem (per thread).
   String getters copy into a caller buffer and return the full length,
   excluding the terminating NUL, so a first call with cap 0 sizes it. */
#ifndef FONREV_H
#define FONREV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef FONREV_BUILDING
#    define FONREV_API __declspec(dllexport)
#  else
#    define FONREV_API __declspec(dllimport)
#  endif
#else
#  define FONREV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fonrev_status {
  FONREV_OK = 0,
  FONREV_ERR_ARGUMENT = 1,
  FONREV_ERR_PARSE = 2,
  FONREV_ERR_DOMAIN = 3,
  FONREV_ERR_IO = 4,
  FONREV_ERR_PLAN = 5,
  FONREV_ERR_INTERNAL = 99
} fonrev_status;

typedef enum fonrev_policy {
  FONREV_POLICY_SA = 0,    /* random */
  FONREV_POLICY_SA_B = 1,  /* bandwidth descending */
  FONREV_POLICY_SA_R = 2,  /* revenue descending */
  FONREV_POLICY_SA_RA = 3  /* revenue per bandwidth descending */
} fonrev_policy;

typedef enum fonrev_algorithm {
  FONREV_ALGO_DECALG = 0,
  FONREV_ALGO_REFA = 1,
  FONREV_ALGO_MILP_EXPORT = 2
} fonrev_algorithm;

typedef struct fonrev_network fonrev_network;
typedef struct fonrev_demands fonrev_demands;
typedef struct fonrev_modes fonrev_modes;
typedef struct fonrev_result fonrev_result;
typedef struct fonrev_records fonrev_records;

typedef struct fonrev_params {
  int k;             /* candidate routes per request */
  int n_rtma;        /* excluding-row chain length per lock subset */
  int n_round;       /* spectrum-assignment rounds */
  double phi;        /* revenue/spectrum tradeoff in [0,1] */
  double eps2;
  double guard_ghz;
  double step_ghz;   /* 0: guard */
  int policy;        /* fonrev_policy */
  uint64_t seed;
  double first_round_offset_db;
  long long node_limit; /* 0: unlimited */
  int xci_envelope_q;   /* XCI envelope pieces in spectrum assignment; 0: exact */
} fonrev_params;

FONREV_API const char* fonrev_version(void);
FONREV_API const char* fonrev_last_error(void);
FONREV_API void fonrev_params_default(fonrev_params* p);

/* Topology text or file; lengths are divided by length_divisor (>0). */
FONREV_API fonrev_status fonrev_network_load(const char* text, double length_divisor,
                                             fonrev_network** out);
FONREV_API fonrev_status fonrev_network_load_file(const char* path, double length_divisor,
                                                  fonrev_network** out);
FONREV_API void fonrev_network_free(fonrev_network* net);
FONREV_API size_t fonrev_network_node_count(const fonrev_network* net);
FONREV_API size_t fonrev_network_link_count(const fonrev_network* net);
FONREV_API double fonrev_network_spectrum_ghz(const fonrev_network* net);

/* net may be NULL, in which case node ids are not checked. */
FONREV_API fonrev_status fonrev_demands_load(const char* text, const fonrev_network* net,
                                             fonrev_demands** out);
FONREV_API fonrev_status fonrev_demands_load_file(const char* path, const fonrev_network* net,
                                                  fonrev_demands** out);
FONREV_API fonrev_status fonrev_demands_generate(const fonrev_network* net, uint64_t seed,
                                                 int count, const double* rates, size_t n_rates,
                                                 double psd_dbm_per_ghz, fonrev_demands** out);
FONREV_API void fonrev_demands_free(fonrev_demands* d);
FONREV_API size_t fonrev_demands_count(const fonrev_demands* d);
FONREV_API size_t fonrev_demands_text(const fonrev_demands* d, char* buf, size_t cap);

/* selector: "all", "amf:<m>:<oh>", "mfec:<m>:<min oh>", "list:PM-QPSK@7,..." */
FONREV_API fonrev_status fonrev_modes_load(const char* catalog_text, const char* selector,
                                           fonrev_modes** out);
FONREV_API fonrev_status fonrev_modes_load_file(const char* path, const char* selector,
                                                fonrev_modes** out);
FONREV_API void fonrev_modes_free(fonrev_modes* m);
FONREV_API size_t fonrev_modes_count(const fonrev_modes* m);
FONREV_API fonrev_status fonrev_modes_get(const fonrev_modes* m, size_t index, char* label,
                                          size_t cap, double* m_bits, double* fec_oh_percent,
                                          double* snr_th_db);

FONREV_API fonrev_status fonrev_run(const fonrev_network* net, const fonrev_demands* d,
                                    const fonrev_modes* m, const fonrev_params* p,
                                    int algorithm, fonrev_result** out);
FONREV_API void fonrev_result_free(fonrev_result* r);
FONREV_API double fonrev_result_revenue(const fonrev_result* r);
FONREV_API int fonrev_result_accepted(const fonrev_result* r);
FONREV_API size_t fonrev_result_csv(const fonrev_result* r, char* buf, size_t cap);
/* Checks the plan against the full model (eps1, q PWL segments).
   violations receives the number of violated rows and bounds. */
FONREV_API fonrev_status fonrev_result_check(const fonrev_result* r, double eps1, int q,
                                             size_t* violations, double* objective);

FONREV_API fonrev_status fonrev_export_lp_file(const fonrev_network* net, const fonrev_demands* d,
                                               const fonrev_modes* m, double eps1, int q,
                                               const char* path);
FONREV_API fonrev_status fonrev_check_solution(const fonrev_network* net, const fonrev_demands* d,
                                               const fonrev_modes* m, double eps1, int q,
                                               const char* solution_text, size_t* violations,
                                               double* objective);

typedef struct fonrev_scenario_config {
  const char* topology_path;
  double length_divisor;
  const char* demands_path;  /* NULL: generate gen_count requests */
  int gen_count;
  const double* rates;
  size_t n_rates;
  double psd_start, psd_stop, psd_step;
  const char* modes_path;
  const char* catalog_spec;
  int algorithm;
  int runs;
  uint64_t seed;
  fonrev_params params;
  double eps1;
  int pwl_segments;
  const char* lp_out_path;
  int keep_detail;
} fonrev_scenario_config;

FONREV_API void fonrev_scenario_config_init(fonrev_scenario_config* c);
FONREV_API fonrev_status fonrev_scenario_run(const fonrev_scenario_config* c,
                                             fonrev_records** out);
FONREV_API void fonrev_records_free(fonrev_records* r);
FONREV_API size_t fonrev_records_csv(const fonrev_records* r, char* buf, size_t cap);
FONREV_API size_t fonrev_records_failed(const fonrev_records* r);
/* Per-request detail of the last successful run (keep_detail must be set). */
FONREV_API size_t fonrev_records_detail(const fonrev_records* r, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif
