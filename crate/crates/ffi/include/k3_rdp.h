#ifndef K3_RDP_H
#define K3_RDP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum K3Status {
  K3_STATUS_OK = 0,
  K3_STATUS_NULL_POINTER = 1,
  K3_STATUS_INVALID_ARGUMENT = 2,
  K3_STATUS_OUT_OF_SCOPE = 3,
  K3_STATUS_BUDGET_EXCEEDED = 4,
  K3_STATUS_INTERNAL = 5,
} K3Status;

// A parsed Dynkin type.
typedef struct K3DynkinType K3DynkinType;

// A finite quadratic form.
typedef struct K3Form K3Form;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread; empty after success.
// The pointer stays valid until the next call on this thread.
const char *k3_last_error(void);

// Parses a Dynkin type such as `"E8+D4+5A1"`.
enum K3Status k3_dynkin_parse(const char *s, struct K3DynkinType **out);

void k3_dynkin_free(struct K3DynkinType *t);

enum K3Status k3_dynkin_rank(const struct K3DynkinType *t, uint32_t *out);

// Canonical string of a type; release with [`k3_string_free`].
enum K3Status k3_dynkin_to_string(const struct K3DynkinType *t, char **out);

void k3_string_free(char *s);

// Discriminant form of the negative-definite root lattice of `t`.
enum K3Status k3_root_form(const struct K3DynkinType *t, struct K3Form **out);

// Discriminant form of the lattice with the given row-major `n × n` Gram matrix.
enum K3Status k3_gram_form(const int64_t *gram, size_t n, struct K3Form **out);

void k3_form_free(struct K3Form *f);

// Order of the underlying finite group.
enum K3Status k3_form_order(const struct K3Form *f, uint64_t *out);

// Minimal number of generators of the underlying group.
enum K3Status k3_form_length(const struct K3Form *f, size_t *out);

// Whether an even lattice of signature `(s_plus, s_minus)` with this discriminant form exists.
enum K3Status k3_exists_even_lattice(size_t s_plus,
                                     size_t s_minus,
                                     const struct K3Form *f,
                                     bool *out);

// Primitive embedding into the complex K3 lattice.
enum K3Status k3_emb_complex(const struct K3Form *f, size_t t_plus, size_t t_minus, bool *out);

// Primitive embedding into the supersingular K3 lattice with parameters `(p, sigma)`.
enum K3Status k3_emb_supersingular(const struct K3Form *f,
                                   size_t t_plus,
                                   size_t t_minus,
                                   uint64_t p,
                                   uint32_t sigma,
                                   bool *out);

enum K3Status k3_arth(uint64_t p, uint32_t sigma, int64_t d, bool *out);

// `NK(0, R)`; `budget_seconds = 0` means unlimited.
enum K3Status k3_nk0(const struct K3DynkinType *t, uint64_t budget_seconds, bool *out);

// `NK(p, σ, R)`; `budget_seconds = 0` means unlimited.
enum K3Status k3_nk(uint64_t p,
                    uint32_t sigma,
                    const struct K3DynkinType *t,
                    uint64_t budget_seconds,
                    bool *out);

// Residues of `p` modulo `*modulus` for which `NK(p, σ, R)` can hold at the boundary
// rank. The array is released with [`k3_u64_array_free`].
enum K3Status k3_residue_set(const struct K3DynkinType *t,
                             uint32_t sigma,
                             uint64_t *modulus,
                             uint64_t **residues,
                             size_t *len);

void k3_u64_array_free(uint64_t *a, size_t len);

enum K3Status k3_ss_reduction_possible(uint64_t disc_t, uint64_t p, bool *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* K3_RDP_H */
