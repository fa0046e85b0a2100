/* SPDX-License-Identifier: Apache-2.0 */
#ifndef MFUSION_H
#define MFUSION_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef MFUSION_BUILDING
#    define MFUSION_API __declspec(dllexport)
#  else
#    define MFUSION_API __declspec(dllimport)
#  endif
#else
#  define MFUSION_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum mf_status {
    MF_OK = 0,
    MF_ERR_IO = 1,
    MF_ERR_DIMENSION = 2,
    MF_ERR_DEGENERATE = 3,
    MF_ERR_CONFIG = 4,
    MF_ERR_ARGUMENT = 5,
    MF_ERR_INTERNAL = 6
} mf_status;

typedef enum mf_split_mode { MF_SPLIT_HALF = 0, MF_SPLIT_THIRDS = 1 } mf_split_mode;

typedef struct mf_image mf_image;
typedef struct mf_config mf_config;
typedef struct mf_result mf_result;

typedef struct mf_metrics {
    double v;        /* standard deviation of intensities */
    double variance;
    double sf;
    double ag;
    double h;
    double mi;       /* summed over sources */
    double q_abf;
} mf_metrics;

/* Message for the most recent failure on the calling thread; never NULL. */
MFUSION_API const char* mf_last_error(void);
MFUSION_API const char* mf_version(void);
/* Frees strings returned through char** out-parameters. */
MFUSION_API void mf_string_free(char* s);

/* ---- images ---------------------------------------------------------- */

/* Copies width*height row-major values in [0, 255]. */
MFUSION_API mf_status mf_image_create(int width, int height, const double* data, mf_image** out);
MFUSION_API mf_status mf_image_load(const char* path, mf_image** out);
/* PNG unless the path ends in ".pgm". */
MFUSION_API mf_status mf_image_save(const mf_image* img, const char* path);
MFUSION_API int mf_image_width(const mf_image* img);
MFUSION_API int mf_image_height(const mf_image* img);
/* Copies pixel values into `out`, which holds at least `capacity` doubles. */
MFUSION_API mf_status mf_image_copy_data(const mf_image* img, double* out, size_t capacity);
MFUSION_API void mf_image_free(mf_image* img);

/* ---- configuration --------------------------------------------------- */

MFUSION_API mf_status mf_config_create(mf_config** out);
/* Applies a key = value file on top of the current values. Setters
 * validate ranges and leave the config untouched on failure. */
MFUSION_API mf_status mf_config_load(mf_config* cfg, const char* path);
MFUSION_API mf_status mf_config_set(mf_config* cfg, const char* key, const char* value);
/* Writes the value as text; fails with MF_ERR_ARGUMENT if it does not fit. */
MFUSION_API mf_status mf_config_get(const mf_config* cfg, const char* key, char* buf, size_t buflen);
MFUSION_API mf_status mf_config_serialize(const mf_config* cfg, char** out);
MFUSION_API void mf_config_free(mf_config* cfg);

/* ---- fusion ---------------------------------------------------------- */

/* Runs the two- or three-source pipeline. `count` must be 2 or 3; a NULL
 * `cfg` means defaults. */
MFUSION_API mf_status mf_fuse(const mf_image* const* sources, size_t count, const mf_config* cfg,
                              mf_result** out);
/* Borrowed; valid until the result is freed. */
MFUSION_API const mf_image* mf_result_fused(const mf_result* result);
MFUSION_API size_t mf_result_region_count(const mf_result* result);
MFUSION_API mf_status mf_result_metrics(const mf_result* result, mf_metrics* out);
MFUSION_API mf_status mf_result_report_json(const mf_result* result, char** out);
/* Writes whichever outputs are non-NULL; the dump directory is created. */
MFUSION_API mf_status mf_result_write(const mf_result* result, const char* fused_path,
                                      const char* report_path, const char* dump_dir);
MFUSION_API void mf_result_free(mf_result* result);

/* ---- scoring and test data ------------------------------------------ */

MFUSION_API mf_status mf_score(const mf_image* fused, const mf_image* const* sources, size_t count,
                               mf_metrics* out);
MFUSION_API mf_status mf_score_report_json(const mf_image* fused, const mf_image* const* sources,
                                           size_t count, char** out);

/* Deterministic detailed texture for experiments. */
MFUSION_API mf_status mf_texture(int width, int height, uint64_t seed, mf_image** out);
/* Fills `sources` (capacity >= 3) with 2 (half) or 3 (thirds) partially
 * blurred copies of `base`; `count` receives how many were written. */
MFUSION_API mf_status mf_synthesize(const mf_image* base, mf_split_mode mode, double blur_sigma,
                                    mf_image** sources, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* MFUSION_H */
