#ifndef HOLLOW_HEAP_H
#define HOLLOW_HEAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HhStatus {
  HH_STATUS_OK = 0,
  HH_STATUS_NULL_POINTER = 1,
  HH_STATUS_INVALID_VARIANT = 2,
  HH_STATUS_DUPLICATE_ITEM = 3,
  HH_STATUS_UNKNOWN_ITEM = 4,
  HH_STATUS_KEY_NOT_DECREASED = 5,
  HH_STATUS_EMPTY = 6,
  HH_STATUS_INCOMPATIBLE = 7,
  HH_STATUS_INVALID_ARGUMENT = 8,
  HH_STATUS_PANIC = 9,
} HhStatus;

/**
 * Opaque heap handle.
 */
typedef struct HhHeap HhHeap;

/**
 * Operation counters of one heap.
 */
typedef struct HhStats {
  uint64_t ranked_links;
  uint64_t unranked_links;
  uint64_t comparisons;
  uint64_t hollow_destroyed;
  uint64_t nodes_created;
  uint32_t max_rank_seen;
} HhStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a heap. `variant` is a `mode:family:regime` string such as
 * `"two_parent:lazy:large2"`, or NULL for that default. On success
 * `*out` receives the handle.
 *
 * # Safety
 * `variant` is NULL or a NUL-terminated string; `out` is writable.
 */
enum HhStatus hh_heap_new(const char *variant, struct HhHeap **out);

/**
 * Releases a heap. NULL is ignored.
 *
 * # Safety
 * `heap` is NULL or a live handle, not used afterwards.
 */
void hh_heap_free(struct HhHeap *heap);

/**
 * Inserts `item` with `key`.
 *
 * # Safety
 * `heap` is a live handle.
 */
enum HhStatus hh_insert(struct HhHeap *heap, uint32_t item, int64_t key);

/**
 * Writes a minimum item and its key, or returns `HH_STATUS_EMPTY`. Either
 * output pointer may be NULL.
 *
 * # Safety
 * `heap` is a live handle; non-NULL outputs are writable.
 */
enum HhStatus hh_find_min(const struct HhHeap *heap, uint32_t *item, int64_t *key);

/**
 * Removes a minimum item, writing it and its key like `hh_find_min`.
 *
 * # Safety
 * As for `hh_find_min`.
 */
enum HhStatus hh_delete_min(struct HhHeap *heap, uint32_t *item, int64_t *key);

/**
 * Lowers the key of `item` to `key`, which must be smaller than its
 * current key.
 *
 * # Safety
 * `heap` is a live handle.
 */
enum HhStatus hh_decrease_key(struct HhHeap *heap, uint32_t item, int64_t key);

/**
 * Removes `item`.
 *
 * # Safety
 * `heap` is a live handle.
 */
enum HhStatus hh_delete(struct HhHeap *heap, uint32_t item);

/**
 * Moves every item of `other` into `heap`. The heaps must have the same
 * variant, else `HH_STATUS_INCOMPATIBLE` and nothing changes. Otherwise
 * `other` is consumed and must not be used or freed, whatever the result.
 * Items must be disjoint; overlap is reported as `HH_STATUS_DUPLICATE_ITEM`
 * only in builds with debug assertions, leaving `heap` unchanged.
 *
 * # Safety
 * `heap` and `other` are distinct live handles.
 */
enum HhStatus hh_meld(struct HhHeap *heap, struct HhHeap *other);

/**
 * Removes every hollow node. `contract` selects the comparison-free
 * method. Returns the number of nodes destroyed through `destroyed`,
 * which may be NULL.
 *
 * # Safety
 * `heap` is a live handle; `destroyed` is NULL or writable.
 */
enum HhStatus hh_rebuild(struct HhHeap *heap, bool contract, size_t *destroyed);

/**
 * Number of items, 0 for NULL.
 *
 * # Safety
 * `heap` is NULL or a live handle.
 */
size_t hh_len(const struct HhHeap *heap);

/**
 * Number of nodes, full and hollow, 0 for NULL.
 *
 * # Safety
 * `heap` is NULL or a live handle.
 */
size_t hh_node_count(const struct HhHeap *heap);

/**
 * Whether `item` is in the heap; false for NULL.
 *
 * # Safety
 * `heap` is NULL or a live handle.
 */
bool hh_contains(const struct HhHeap *heap, uint32_t item);

/**
 * Copies the heap's counters into `*out`.
 *
 * # Safety
 * `heap` is a live handle; `out` is writable.
 */
enum HhStatus hh_stats(const struct HhHeap *heap, struct HhStats *out);

/**
 * A static, NUL-terminated description of `status`.
 */
const char *hh_status_message(enum HhStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLLOW_HEAP_H */
