#ifndef CSF_H
#define CSF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CsfStatus {
  CSF_STATUS_OK = 0,
  CSF_STATUS_NULL_POINTER = 1,
  CSF_STATUS_INVALID_UTF8 = 2,
  CSF_STATUS_PARSE = 3,
  CSF_STATUS_INVALID_ARGUMENT = 4,
  CSF_STATUS_SIZE_MISMATCH = 5,
  CSF_STATUS_NOT_PRIME = 6,
  CSF_STATUS_OVERFLOW = 7,
  CSF_STATUS_PANIC = 8,
} CsfStatus;

// The outcome of a distinctness search.
typedef struct CsfCertificate CsfCertificate;

// A tree on vertices `0..n`.
typedef struct CsfTree CsfTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *csf_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void csf_string_free(char *s);

// Parses an edge-list tree: first line `n`, then `n - 1` lines `u v`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum CsfStatus csf_tree_parse(const char *text, struct CsfTree **out);

// # Safety
// `tree` must come from [`csf_tree_parse`] and not have been freed.
void csf_tree_free(struct CsfTree *tree);

// Number of vertices, or 0 for NULL.
//
// # Safety
// `tree` must be NULL or a live handle.
uintptr_t csf_tree_vertex_count(const struct CsfTree *tree);

// Writes the tree back out in edge-list form.
//
// # Safety
// `tree` must be a live handle; `out` must be writable.
enum CsfStatus csf_tree_to_edge_list(const struct CsfTree *tree, char **out);

// The chromatic symmetric function in the power-sum basis, one
// `coefficient<TAB>parts` line per term. `truncate` > 0 keeps only terms
// whose parts are all at most `truncate`.
//
// # Safety
// `tree` must be a live handle; `out` must be writable.
enum CsfStatus csf_compute(const struct CsfTree *tree, uint32_t truncate, char **out);

// Evaluates the function mod prime `q` at `p_i -> c[i - 1]`. `len` must equal
// the vertex count. `truncate` > 0 selects the truncated evaluation, which
// requires `c[j] == 0` for `j >= truncate`.
//
// # Safety
// `tree` must be a live handle, `c` must point to `len` values, `out` must be
// writable.
enum CsfStatus csf_eval(const struct CsfTree *tree,
                        uint64_t q,
                        const uint64_t *c,
                        uintptr_t len,
                        uintptr_t truncate,
                        uint64_t *out);

// Searches for a witness that the two trees have different functions. On
// [`CsfStatus::Ok`] a certificate is always produced; check it with
// [`csf_certificate_is_proved`].
//
// # Safety
// `s` and `t` must be live handles; `out` must be writable.
enum CsfStatus csf_show_distinct(const struct CsfTree *s,
                                 const struct CsfTree *t,
                                 uint32_t accuracy,
                                 uint64_t seed,
                                 struct CsfCertificate **out);

// True iff the certificate records a witness. False for NULL.
//
// # Safety
// `cert` must be NULL or a live handle.
bool csf_certificate_is_proved(const struct CsfCertificate *cert);

// Single-line text form of the certificate.
//
// # Safety
// `cert` must be a live handle; `out` must be writable.
enum CsfStatus csf_certificate_to_string(const struct CsfCertificate *cert, char **out);

// Reads a certificate from its text form.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum CsfStatus csf_certificate_parse(const char *text, struct CsfCertificate **out);

// # Safety
// `cert` must come from this library and not have been freed.
void csf_certificate_free(struct CsfCertificate *cert);

// Re-checks a certificate against the two trees; `*valid` is set to whether
// it holds.
//
// # Safety
// All handles must be live; `valid` must be writable.
enum CsfStatus csf_verify_certificate(const struct CsfTree *s,
                                      const struct CsfTree *t,
                                      const struct CsfCertificate *cert,
                                      bool *valid);

// Number of free trees on `n` vertices.
//
// # Safety
// `out` must be writable.
enum CsfStatus csf_free_tree_count(uintptr_t n, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSF_H */
