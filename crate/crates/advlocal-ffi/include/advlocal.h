#ifndef ADVLOCAL_H
#define ADVLOCAL_H

#include <stddef.h>
#include <stdint.h>

#define ADV_OK 0

#define ADV_ERR_INVALID_PARAMS 1

#define ADV_ERR_INFEASIBLE 2

/**
 * Decoding, search or verification failed.
 */
#define ADV_ERR_FAILED 3

#define ADV_ERR_PARSE 4

#define ADV_ERR_NULL -1

#define ADV_ERR_PANIC -2

typedef struct AdvGraph AdvGraph;

typedef struct AdvReport AdvReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *adv_last_error(void);

/**
 * Generates a graph, e.g. kind "grid2d" with params {10, 10}.
 *
 * # Safety
 * `kind` is a nul-terminated string, `params` points to `n_params`
 * values (or is null when `n_params` is 0), `out` is writable.
 */
int32_t adv_graph_generate(const char *kind,
                           const size_t *params,
                           size_t n_params,
                           uint64_t seed,
                           uint32_t id_exponent,
                           struct AdvGraph **out);

/**
 * Parses a graph in the text format of the command line tool.
 *
 * # Safety
 * `text` is a nul-terminated string and `out` is writable.
 */
int32_t adv_graph_parse(const char *text, struct AdvGraph **out);

/**
 * # Safety
 * `g` is null or a handle from this library.
 */
size_t adv_graph_node_count(const struct AdvGraph *g);

/**
 * # Safety
 * `g` is null or a handle from this library.
 */
size_t adv_graph_edge_count(const struct AdvGraph *g);

/**
 * # Safety
 * `g` is null or a handle from this library not yet freed.
 */
void adv_graph_free(struct AdvGraph *g);

/**
 * Encodes, decodes and verifies `schema` on `g`. Returns the report's exit
 * code; `*out` receives a report whenever the return value is not
 * negative. `params_json` may be null.
 *
 * # Safety
 * `g` is a live handle, strings are nul-terminated, `out` is writable.
 */
int32_t adv_run(const struct AdvGraph *g,
                const char *schema,
                const char *params_json,
                uint64_t seed,
                struct AdvReport **out);

/**
 * Decodes supplied advice (`id bits` lines) and checks every node.
 *
 * # Safety
 * As for [`adv_run`]; `advice` is a nul-terminated string.
 */
int32_t adv_verify(const struct AdvGraph *g,
                   const char *advice,
                   const char *schema,
                   const char *params_json,
                   uint64_t seed,
                   struct AdvReport **out);

/**
 * The report as JSON, owned by the report.
 *
 * # Safety
 * `r` is null or a live report handle.
 */
const char *adv_report_json(const struct AdvReport *r);

/**
 * Encoded advice as `id bits` lines, or null when encoding failed or the
 * report came from `adv_verify`. Owned by the report.
 *
 * # Safety
 * `r` is null or a live report handle.
 */
const char *adv_report_advice(const struct AdvReport *r);

/**
 * 1 on pass, 0 on fail, `ADV_ERR_NULL` for a null handle.
 *
 * # Safety
 * `r` is null or a live report handle.
 */
int32_t adv_report_passed(const struct AdvReport *r);

/**
 * # Safety
 * `r` is null or a live report handle.
 */
int32_t adv_report_exit_code(const struct AdvReport *r);

/**
 * # Safety
 * `r` is null or a report handle not yet freed.
 */
void adv_report_free(struct AdvReport *r);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ADVLOCAL_H */
