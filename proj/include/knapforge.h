/* knapforge C API: bounded-knapsack cryptosystems and the cryptanalysis
 * workbench behind a flat ABI. Handles are opaque; every function returns a
 * kf_status and writes results through out-parameters. Strings and buffers
 * returned by the library must be released with kf_buffer_free. Error detail
 * for the calling thread is available from kf_last_error.
 */
#ifndef KNAPFORGE_H
#define KNAPFORGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kf_status {
  KF_OK = 0,
  KF_ERR_PARAM = 1,   /* bad argument or violated precondition */
  KF_ERR_SHAPE = 2,   /* mismatched dimensions */
  KF_ERR_PARSE = 3,   /* malformed text input */
  KF_ERR_DECODE = 4,  /* undecodable / invalid ciphertext */
  KF_ERR_DOMAIN = 5,  /* value outside an operation's domain */
  KF_ERR_RANK = 6,    /* dependent rows where a basis was required */
  KF_ERR_NOMEM = 7,
  KF_ERR_INTERNAL = 8
} kf_status;

/* A key handle: public or private, any of the three systems. */
typedef struct kf_key kf_key;

const char* kf_status_str(kf_status status);
/* Thread-local message describing the most recent failure. */
const char* kf_last_error(void);
void kf_buffer_free(void* p);

/* --- keys ---------------------------------------------------------- */

/* system: 1..3, variant: 1..2, p_dec: decimal base parameter, alphabet: M
 * (2 for systems 2 and 3). Writes two fresh handles. */
kf_status kf_keygen(int system, int variant, uint32_t s, const char* p_dec,
                    uint32_t alphabet, uint64_t seed, kf_key** pub_out,
                    kf_key** priv_out);
void kf_key_free(kf_key* key);

kf_status kf_key_serialize(const kf_key* key, char** text_out);
kf_status kf_key_parse(const char* text, kf_key** key_out);

int kf_key_system(const kf_key* key);       /* 1..3; -1 on null */
int kf_key_is_private(const kf_key* key);   /* 0/1; -1 on null */
uint32_t kf_key_dim(const kf_key* key);     /* s; 0 on null */
uint32_t kf_key_alphabet(const kf_key* key);

/* --- encryption ----------------------------------------------------- */

/* digits: exactly s values in {0..M-1}. ct receives the decimal ciphertext. */
kf_status kf_encrypt_block(const kf_key* key, const uint8_t* digits,
                           size_t count, char** ct_dec_out);
/* Inverse; key must be private. digits_out must hold s values. */
kf_status kf_decrypt_block(const kf_key* key, const char* ct_dec,
                           uint8_t* digits_out, size_t count);

/* Byte-stream chunking (M = 2): s-bit blocks, text ciphertext format. */
kf_status kf_encrypt_bytes(const kf_key* key, const uint8_t* data, size_t size,
                           char** text_out);
kf_status kf_decrypt_bytes(const kf_key* key, const char* text,
                           uint8_t** data_out, size_t* size_out);

/* --- analysis ------------------------------------------------------- */

kf_status kf_density(const kf_key* key, double* out);

/* q_max_dec may be NULL: defaults to max(w_i). Report is line oriented:
 * one "q=.. rests=.." line per pseudo-key plus a summary line. */
kf_status kf_pseudokeys(const kf_key* key, const char* q_max_dec,
                        char** report_out);

/* Pseudo-key uniqueness percentages over seeded system-2 keys with p drawn
 * from the open interval (p_lo, p_hi). Records "index seed p unique count"
 * per trial plus a summary. */
kf_status kf_experiment_uniqueness(uint32_t s, uint64_t p_lo, uint64_t p_hi,
                                   uint32_t trials, uint64_t seed,
                                   double* fraction_out, char** report_out);

/* Probability that s uniform rests modulo q sum below q; exact convolution
 * when monte_carlo = 0, sampling otherwise. */
kf_status kf_experiment_restsum(const char* q_dec, uint32_t s,
                                int monte_carlo, uint32_t trials,
                                uint64_t seed, char** report_out);

/* Superincreasing sequence counts S and C for sum t plus their ratio. */
kf_status kf_experiment_count_si(uint32_t s, const char* t_dec,
                                 char** report_out);

/* Step-count / result stability of the lattice attack under key shifts.
 * spec_text lines: s=<n>, m=<bits...>, x0=<ints...>, eps=<ints...>,
 * q=<ints...>; '#' starts a comment. */
kf_status kf_experiment_stability(const char* spec_text, uint32_t samples,
                                  uint64_t seed, char** table_out);

/* --- attacks and reduction ------------------------------------------ */

/* method 1: diagonal embedding; method 2: random perturbation drawn from
 * seed. recovered_out (optional) is set to 1 when a message was found;
 * outcome text carries the bits or FAILURE plus the LLL step count. */
kf_status kf_attack(const kf_key* key, const char* ct_dec, int method,
                    uint64_t seed, int* recovered_out, char** outcome_out);

/* Factor n by the Problem-4 reduction; report is a single line
 * "n=.. factor=.. stage=.. subproblems=..". found_out optional. */
kf_status kf_reduce(const char* n_dec, uint32_t s, double eta, uint64_t seed,
                    int* found_out, char** report_out);

/* --- benchmarks ------------------------------------------------------ */

/* metric: encrypt_time | decrypt_time | keygen_time | key_size.
 * s_list_csv / p_list_csv: comma-separated decimal values. */
kf_status kf_bench(const char* metric, int system, int variant,
                   const char* s_list_csv, const char* p_list_csv,
                   uint32_t trials, uint64_t seed, char** table_out);

#ifdef __cplusplus
}
#endif

#endif /* KNAPFORGE_H */
