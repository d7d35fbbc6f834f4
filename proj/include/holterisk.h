/*
 * holterisk - arrhythmia-risk classification from Holter-derived indices.
 *
 * C interface of the shared library. All objects are opaque handles
 * created and destroyed by the library; every fallible call returns an
 * hrk_status, and hrk_last_error() describes the most recent failure on
 * the calling thread. Strings returned by accessor functions stay owned
 * by the handle they came from and are valid until it is freed or
 * mutated.
 */

#ifndef HOLTERISK_H
#define HOLTERISK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HRK_API __declspec(dllexport)
#else
#define HRK_API __attribute__((visibility("default")))
#endif

typedef enum hrk_status {
    HRK_OK = 0,
    HRK_ERR_CONFIG = 1,  /* bad argument, usage or configuration */
    HRK_ERR_DATA = 2,    /* unreadable or malformed input data */
    HRK_ERR_PIPELINE = 3 /* numeric or protocol failure */
} hrk_status;

HRK_API const char* hrk_version(void);

/* Message for the last failing call on this thread ("" if none). */
HRK_API const char* hrk_last_error(void);

/* ---- configuration: flat `key = value` store ---------------------- */

typedef struct hrk_config hrk_config;

HRK_API hrk_status hrk_config_new(hrk_config** out);
HRK_API hrk_status hrk_config_load(const char* path, hrk_config** out);
HRK_API hrk_status hrk_config_set(hrk_config* cfg, const char* key, const char* value);
/* NULL when the key is absent. */
HRK_API const char* hrk_config_get(const hrk_config* cfg, const char* key);
HRK_API void hrk_config_free(hrk_config* cfg);

/* ---- cohorts (cohort-CSV: patient_id,label,<feature>...) ----------- */

typedef struct hrk_cohort hrk_cohort;

HRK_API hrk_status hrk_cohort_load(const char* path, hrk_cohort** out);
HRK_API hrk_status hrk_cohort_write(const hrk_cohort* cohort, const char* path);
HRK_API void hrk_cohort_free(hrk_cohort* cohort);

HRK_API size_t hrk_cohort_n_patients(const hrk_cohort* cohort);
HRK_API size_t hrk_cohort_n_features(const hrk_cohort* cohort);
HRK_API size_t hrk_cohort_n_positive(const hrk_cohort* cohort);
HRK_API const char* hrk_cohort_patient_id(const hrk_cohort* cohort, size_t row);
HRK_API const char* hrk_cohort_feature_name(const hrk_cohort* cohort, size_t col);
/* -1 on a bad row index. */
HRK_API int hrk_cohort_label(const hrk_cohort* cohort, size_t row);
HRK_API hrk_status hrk_cohort_value(const hrk_cohort* cohort, size_t row, size_t col, double* value,
                                    int* missing);
/* Complete-case subset over every feature column. */
HRK_API hrk_status hrk_cohort_filter_complete(const hrk_cohort* cohort, hrk_cohort** out);

/* ---- beat series (beat-CSV: `# duration_ms=` header, time_ms,type) - */

typedef struct hrk_beat_series hrk_beat_series;

HRK_API hrk_status hrk_beat_series_load(const char* path, hrk_beat_series** out);
HRK_API void hrk_beat_series_free(hrk_beat_series* series);
HRK_API size_t hrk_beat_series_n_beats(const hrk_beat_series* series);
HRK_API double hrk_beat_series_duration_ms(const hrk_beat_series* series);

/* ---- per-patient rhythm features ----------------------------------- */

/*
 * Builder behind the `features` command: add one beat series per
 * patient, optionally merge a CSV of precomputed columns (morphology,
 * labels), then write a cohort-CSV. Rhythm features that cannot be
 * computed stay empty and leave a warning.
 */
typedef struct hrk_feature_table hrk_feature_table;

HRK_API hrk_status hrk_feature_table_new(const hrk_config* cfg, hrk_feature_table** out);
HRK_API hrk_status hrk_feature_table_add_patient(hrk_feature_table* table, const char* patient_id,
                                                 const hrk_beat_series* series);
HRK_API hrk_status hrk_feature_table_merge_csv(hrk_feature_table* table, const char* csv_path);
HRK_API hrk_status hrk_feature_table_write(const hrk_feature_table* table, const char* path);
HRK_API size_t hrk_feature_table_warning_count(const hrk_feature_table* table);
HRK_API const char* hrk_feature_table_warning(const hrk_feature_table* table, size_t idx);
HRK_API void hrk_feature_table_free(hrk_feature_table* table);

/* ---- feature selection (Gram-Schmidt ranking + random probe) ------- */

typedef struct hrk_selection hrk_selection;

HRK_API hrk_status hrk_select_run(const hrk_cohort* cohort, const char* hub_map_path,
                                  const hrk_config* cfg, hrk_selection** out);
HRK_API hrk_status hrk_selection_write(const hrk_selection* sel, const char* out_dir,
                                       int no_timestamp);
HRK_API const char* hrk_selection_summary(const hrk_selection* sel);
HRK_API size_t hrk_selection_n_selected(const hrk_selection* sel);
HRK_API const char* hrk_selection_feature(const hrk_selection* sel, size_t idx);
HRK_API void hrk_selection_free(hrk_selection* sel);

/* ---- full evaluation protocol --------------------------------------- */

typedef struct hrk_report hrk_report;

/* Selection, complexity selection and the K'-fold cross-test for the
 * conventional and ad hoc classifiers on shared folds. */
HRK_API hrk_status hrk_evaluate_run(const hrk_cohort* cohort, const char* hub_map_path,
                                    const hrk_config* cfg, hrk_report** out);
HRK_API hrk_status hrk_report_write(const hrk_report* report, const char* out_dir, int no_timestamp);
HRK_API const char* hrk_report_headline(const hrk_report* report);
/*
 * architecture: "conventional" or "adhoc".
 * metric: npv_mean, npv_sd, ppv_mean, ppv_sd, reduction_mean,
 *         reduction_sd, correct_mean, correct_sd, pooled_npv,
 *         pooled_ppv, pooled_reduction, p_value.
 */
HRK_API hrk_status hrk_report_metric(const hrk_report* report, const char* architecture,
                                     const char* metric, double* out_value);
HRK_API void hrk_report_free(hrk_report* report);

/* ---- synthetic cohorts ---------------------------------------------- */

/* Writes cohort.csv, hubmap.map, truth.csv (planted features) and,
 * when synth_beats is set, beats/<patient>.csv under out_dir.
 * out_cohort may be NULL. */
HRK_API hrk_status hrk_synth_run(const hrk_config* cfg, const char* out_dir, hrk_cohort** out_cohort);

/* ---- confusion-matrix metrics --------------------------------------- */

/* npv/ppv are percentages; *_defined is 0 when the denominator is zero
 * (the value is then not written). */
HRK_API hrk_status hrk_metrics_compute(long tn, long fp, long fn, long tp, double* npv,
                                       int* npv_defined, double* ppv, int* ppv_defined,
                                       double* implant_reduction, long* correctly_classified);

/* ---- trained networks ------------------------------------------------ */

typedef struct hrk_network hrk_network;

HRK_API hrk_status hrk_network_load(const char* path, hrk_network** out);
HRK_API hrk_status hrk_network_save(const hrk_network* net, const char* path);
HRK_API size_t hrk_network_n_inputs(const hrk_network* net);
HRK_API size_t hrk_network_n_params(const hrk_network* net);
HRK_API hrk_status hrk_network_predict(const hrk_network* net, const double* x, size_t n,
                                       double* out_probability);
HRK_API void hrk_network_free(hrk_network* net);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HOLTERISK_H */
