#ifndef TURNCOST_H
#define TURNCOST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  /**
   * A decision came out negative, or no circuit of the requested kind exists.
   */
  TC_STATUS_NO = 1,
  TC_STATUS_INPUT_ERROR = 2,
  TC_STATUS_RESOURCE_LIMIT = 3,
  TC_STATUS_NULL_POINTER = 4,
  TC_STATUS_INTERNAL = 5,
} TcStatus;

typedef enum TcMethod {
  TC_METHOD_AUTO = 0,
  TC_METHOD_ORACLE = 1,
  TC_METHOD_TSP = 2,
  TC_METHOD_TSP_CONTRACTED = 3,
  TC_METHOD_ZERO_COST = 4,
  TC_METHOD_ATRAIL = 5,
} TcMethod;

/**
 * A parsed graph file.
 */
typedef struct TcInstance TcInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a graph file. On success `*out` owns a new instance.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TcStatus tc_instance_parse(const char *text, struct TcInstance **out);

/**
 * # Safety
 * `inst` must be null or come from [`tc_instance_parse`] and not be freed
 * already.
 */
void tc_instance_free(struct TcInstance *inst);

/**
 * # Safety
 * `inst` must be a live instance or null.
 */
size_t tc_instance_vertex_count(const struct TcInstance *inst);

/**
 * # Safety
 * `inst` must be a live instance or null.
 */
size_t tc_instance_edge_count(const struct TcInstance *inst);

/**
 * Minimum cost as `p/q` in `*cost_out`; if `circuit_out` is not null it
 * receives the witness in circuit-file format. `bitmask_limit` of 0 means
 * the default.
 *
 * # Safety
 * `inst` must be a live instance; the output pointers must be valid or
 * (for `circuit_out`) null.
 */
enum TcStatus tc_solve(const struct TcInstance *inst,
                       enum TcMethod method,
                       size_t bitmask_limit,
                       char **cost_out,
                       char **circuit_out);

/**
 * [`TcStatus::Ok`] if some circuit costs at most `budget` (`p/q`),
 * [`TcStatus::No`] otherwise.
 *
 * # Safety
 * `inst` must be a live instance and `budget` a NUL-terminated string.
 */
enum TcStatus tc_decide(const struct TcInstance *inst, const char *budget);

/**
 * Builds the gadget graph of a DIMACS 3-CNF formula and writes it to
 * `*graph_out` in graph-file format.
 *
 * # Safety
 * `cnf` must be a NUL-terminated string and `graph_out` a valid pointer.
 */
enum TcStatus tc_gadget_from_cnf(const char *cnf, bool normalize_mod4_flag, char **graph_out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void tc_string_free(char *s);

/**
 * Message for the last failure on this thread, or null.
 */
const char *tc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TURNCOST_H */
