#ifndef FREELEVY_H
#define FREELEVY_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(FREELEVY_BUILDING)
#define FL_API __declspec(dllexport)
#else
#define FL_API __declspec(dllimport)
#endif
#else
#define FL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fl_status {
    FL_OK = 0,
    FL_ERR_INVALID_ARGUMENT = 1,
    FL_ERR_WINDOW_UNRESOLVED = 2,
    FL_ERR_UNCLASSIFIABLE = 3,
    FL_ERR_NONCONVERGENT = 4,
    FL_ERR_REPRODUCTION_FAILED = 5,
    FL_ERR_UNKNOWN_FAMILY = 6,
    FL_ERR_SPEC = 7,
    FL_ERR_UNKNOWN_CASE = 8,
    FL_ERR_INSUFFICIENT_RESOLUTION = 9,
    FL_ERR_POINT_MASS = 10,
    FL_ERR_UNSUPPORTED = 11,
    FL_ERR_IO = 12,
    FL_ERR_INTERNAL = 99
} fl_status;

typedef struct fl_model fl_model;
typedef struct fl_curve fl_curve;

typedef struct fl_options {
    double reltol;   /* 0 selects the default */
    int path;        /* 0 auto, 1 triplet, 2 closed form */
    double scale;    /* 0 derives the scale from the second moment */
} fl_options;

typedef struct fl_sample {
    double x;
    double v;
    double psi;
    double f;
} fl_sample;

typedef struct fl_stats {
    unsigned long long integrals;
    unsigned long long panels;
    double worst_error;
} fl_stats;

/* Message of the last failing call on this thread; empty after a success. */
FL_API const char* fl_last_error(void);
FL_API const char* fl_status_name(fl_status s);
FL_API void fl_string_free(char* s);

/* params_json is a JSON object of numeric parameters or NULL. */
FL_API fl_status fl_model_from_catalog(const char* id, const char* params_json, fl_model** out);
FL_API fl_status fl_model_from_spec(const char* spec_json, fl_model** out);
FL_API fl_status fl_model_from_spec_file(const char* path, fl_model** out);
FL_API void fl_model_free(fl_model* m);
FL_API fl_status fl_model_name(const fl_model* m, char** out);
FL_API fl_status fl_catalog_json(char** out);

FL_API fl_status fl_phi(const fl_model* m, double x, double y, const fl_options* opt, double* re, double* im);
FL_API fl_status fl_b_value(const fl_model* m, double x, double y, const fl_options* opt, double* out);
FL_API fl_status fl_v(const fl_model* m, double s, double x, const fl_options* opt, double* out);
FL_API fl_status fl_psi(const fl_model* m, double s, double x, const fl_options* opt, double* out);
FL_API fl_status fl_density_at(const fl_model* m, double s, double x, const fl_options* opt, double* out);
/* *present is 0 when the law at time s has no atom. */
FL_API fl_status fl_atom(const fl_model* m, double s, const fl_options* opt, int* present, double* location,
                         double* mass);

/* auto_window != 0 ignores lo and hi. */
FL_API fl_status fl_curve_compute(const fl_model* m, double s, int auto_window, double lo, double hi, int points,
                                  const fl_options* opt, fl_curve** out);
FL_API void fl_curve_free(fl_curve* c);
FL_API size_t fl_curve_size(const fl_curve* c);
FL_API fl_status fl_curve_sample(const fl_curve* c, size_t i, fl_sample* out);
FL_API fl_status fl_curve_mass(const fl_curve* c, double* out);
FL_API fl_status fl_curve_csv(const fl_curve* c, char** out);
FL_API fl_status fl_curve_report_json(const fl_curve* c, char** out);

/* Classification, atom, support components, modes, unimodality and threshold at time s. */
FL_API fl_status fl_report_json(const fl_model* m, double s, int auto_window, double lo, double hi, int points,
                                const fl_options* opt, char** out);
FL_API fl_status fl_validate_json(const fl_model* m, const fl_options* opt, char** out);
FL_API fl_status fl_theta_scan_json(const fl_model* m, double R, int n, const fl_options* opt, char** out);
FL_API fl_status fl_theta_scan_csv(const fl_model* m, double R, int n, const fl_options* opt, char** out);

/* Table text in *out; FL_ERR_REPRODUCTION_FAILED when any case fails (the table is still set). */
FL_API fl_status fl_reproduce(const char* case_id, const fl_options* opt, char** out);
FL_API fl_status fl_case_ids_json(char** out);

FL_API fl_stats fl_get_stats(void);
FL_API void fl_reset_stats(void);
FL_API void fl_set_workers(unsigned n);

#ifdef __cplusplus
}
#endif

#endif
