/* C interface to libaccustripes: adaptive binning, density estimation,
 * binning-quality evaluation, synthetic data and AccuStripes rendering.
 *
 * Every function returns an as_status. On failure a description is available
 * from as_last_error() on the same thread until the next call. Objects are
 * opaque handles released with their matching *_free function; strings
 * returned through char** are released with as_string_free. */

#ifndef ACCUSTRIPES_H
#define ACCUSTRIPES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ACCUSTRIPES_BUILD)
#    define AS_API __declspec(dllexport)
#  else
#    define AS_API __declspec(dllimport)
#  endif
#else
#  define AS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum as_status {
    AS_OK = 0,
    AS_ERR_INVALID_ARGUMENT = 1,
    AS_ERR_EMPTY_INPUT = 2,
    AS_ERR_NON_FINITE = 3,
    AS_ERR_TOO_LARGE = 4,
    AS_ERR_TOO_FEW_VALUES = 5,
    AS_ERR_OUT_OF_RANGE = 6,
    AS_ERR_DEGENERATE_RANGE = 7,
    AS_ERR_SINGLE_BIN = 8,
    AS_ERR_INSUFFICIENT_DATA = 9,
    AS_ERR_GAP_TOO_LARGE = 10,
    AS_ERR_INVALID_SIZE = 11,
    AS_ERR_MISMATCHED_INPUTS = 12,
    AS_ERR_MISSING_DENSITY = 13,
    AS_ERR_IO = 14,
    AS_ERR_PARSE = 15,
    AS_ERR_NETWORK = 16,
    AS_ERR_INTERNAL = 99
} as_status;

typedef enum as_method { AS_METHOD_UNIFORM = 0, AS_METHOD_BB = 1, AS_METHOD_NB = 2 } as_method;
typedef enum as_layout { AS_LAYOUT_BIN = 0, AS_LAYOUT_BIN_CURVE = 1, AS_LAYOUT_FILLED_CURVE = 2 } as_layout;
typedef enum as_scope { AS_SCOPE_GLOBAL = 0, AS_SCOPE_PER = 1 } as_scope;
typedef enum as_flaw { AS_FLAW_NONE = 0, AS_FLAW_GAP = 1, AS_FLAW_OUTLIER = 2, AS_FLAW_SPIKE = 3, AS_FLAW_NOISE = 4 } as_flaw;

typedef struct as_dataset as_dataset;
typedef struct as_partition as_partition;
typedef struct as_render_spec as_render_spec;
typedef struct as_eval_report as_eval_report;
typedef struct as_server as_server;

AS_API const char* as_last_error(void);
AS_API const char* as_status_name(as_status status);
AS_API void as_string_free(char* text);

/* Name-to-enum helpers for command-line front ends. Return AS_ERR_INVALID_ARGUMENT on unknown text. */
AS_API as_status as_method_parse(const char* text, as_method* out);
AS_API as_status as_layout_parse(const char* text, as_layout* out);
AS_API as_status as_scope_parse(const char* text, as_scope* out);
AS_API as_status as_flaw_parse(const char* text, as_flaw* out);

/* ---- datasets ---- */

/* Copies and sorts the values. Rejects empty, non-finite and over-100000 input. */
AS_API as_status as_dataset_from_values(const double* values, size_t count, const char* name, as_dataset** out);
/* CSV / plain text (one value per line) or JSON {"name", "values"}. */
AS_API as_status as_dataset_load(const char* path, as_dataset** out);
/* Writes {"name", "values", "meta"?} JSON. */
AS_API as_status as_dataset_save(const as_dataset* dataset, const char* path);
AS_API void as_dataset_free(as_dataset* dataset);
AS_API size_t as_dataset_size(const as_dataset* dataset);
AS_API const double* as_dataset_values(const as_dataset* dataset);
AS_API const char* as_dataset_name(const as_dataset* dataset);

/* Expands manifest files ({"datasets": [paths]}) and loads every dataset in order.
 * *out receives an array of *count handles; release with as_dataset_list_free. */
AS_API as_status as_dataset_load_many(const char* const* paths, size_t path_count, as_dataset*** out, size_t* count);
AS_API void as_dataset_list_free(as_dataset** datasets, size_t count);

/* ---- synthetic data ---- */

typedef struct as_gen_options {
    size_t size;
    uint64_t seed;
    as_flaw flaw;
    double severity;     /* [0, 0.25] */
    int has_location;    /* required for gap and spike */
    double location;     /* (0, 1) */
} as_gen_options;

AS_API void as_gen_options_init(as_gen_options* options);
AS_API as_status as_generate(const as_gen_options* options, as_dataset** out);
/* Base Gaussian plus 5/15/25% variants of the flaw; out must hold 4 handles. */
AS_API as_status as_generate_sweep(const as_gen_options* options, as_dataset* out[4]);

/* ---- binning ---- */

typedef struct as_bin_options {
    as_method method;
    double p0;            /* Bayesian Blocks false-alarm probability, default 0.05 */
    double gvf_threshold; /* natural breaks stopping GVF, default 0.9 */
    size_t k_max;         /* natural breaks class cap, default 50 */
} as_bin_options;

AS_API void as_bin_options_init(as_bin_options* options);
AS_API as_status as_bin(const as_dataset* dataset, const as_bin_options* options, as_partition** out);
AS_API void as_partition_free(as_partition* partition);
AS_API size_t as_partition_bin_count(const as_partition* partition);
AS_API const double* as_partition_edges(const as_partition* partition); /* bin_count + 1 entries */
AS_API const size_t* as_partition_counts(const as_partition* partition);
AS_API as_status as_partition_to_json(const as_partition* partition, char** json);

/* ---- rendering ---- */

typedef struct as_render_options {
    as_layout layout;
    as_scope scope;
    as_bin_options binning;
} as_render_options;

AS_API void as_render_options_init(as_render_options* options);
/* Bins each dataset, estimates densities for the curve layouts and builds the
 * stacked chart over the common range. */
AS_API as_status as_render_build(const as_dataset* const* datasets, size_t count, const as_render_options* options,
                                 as_render_spec** out);
AS_API as_status as_render_spec_from_json(const char* json, as_render_spec** out);
AS_API void as_render_spec_free(as_render_spec* spec);
AS_API size_t as_render_spec_row_count(const as_render_spec* spec);
AS_API as_status as_render_spec_to_json(const as_render_spec* spec, char** json);
AS_API as_status as_render_spec_to_svg(const as_render_spec* spec, char** svg);

/* ---- evaluation ---- */

typedef struct as_eval_options {
    uint64_t seed;
    const size_t* sizes; /* NULL selects 1000, 10000, 100000 */
    size_t size_count;
    size_t per_size;     /* default 24 */
} as_eval_options;

AS_API void as_eval_options_init(as_eval_options* options);
AS_API as_status as_eval_run(const as_eval_options* options, as_eval_report** out);
AS_API void as_eval_report_free(as_eval_report* report);
AS_API double as_eval_report_mean(const as_eval_report* report, as_method method);
AS_API double as_eval_report_variance(const as_eval_report* report, as_method method);
AS_API double as_eval_report_p_value(const as_eval_report* report);
AS_API as_status as_eval_report_to_json(const as_eval_report* report, char** json);
AS_API as_status as_eval_report_table(const as_eval_report* report, char** table);

/* ---- API server ---- */

/* Copies the datasets. host NULL binds 127.0.0.1; static_dir may be NULL. */
AS_API as_status as_server_create(const as_dataset* const* datasets, size_t count, const char* host,
                                  const char* static_dir, as_server** out);
/* port 0 picks a free port; the bound port is written to bound_port. */
AS_API as_status as_server_bind(as_server* server, int port, int* bound_port);
/* Blocks until as_server_stop. */
AS_API as_status as_server_listen(as_server* server);
AS_API void as_server_stop(as_server* server);
AS_API void as_server_free(as_server* server);

#ifdef __cplusplus
}
#endif

#endif /* ACCUSTRIPES_H */
