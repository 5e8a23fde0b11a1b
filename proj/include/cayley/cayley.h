/* C interface to the cayley simulator. All handles are opaque; every call
 * that can fail returns a cayley_status and leaves a message retrievable
 * with cayley_last_error() on the calling thread. */
#ifndef CAYLEY_CAYLEY_H
#define CAYLEY_CAYLEY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CAYLEY_BUILDING_LIBRARY)
#    define CAYLEY_API __declspec(dllexport)
#  else
#    define CAYLEY_API __declspec(dllimport)
#  endif
#else
#  define CAYLEY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cayley_status {
  CAYLEY_OK = 0,
  CAYLEY_ERR_INVALID_ARGUMENT = 1,
  CAYLEY_ERR_UNSUPPORTED = 2,
  CAYLEY_ERR_PLANAR_INFEASIBLE = 3,
  CAYLEY_ERR_COINCIDENT_ATOMS = 4,
  CAYLEY_ERR_DIMENSION_MISMATCH = 5,
  CAYLEY_ERR_TOO_LARGE = 6,
  CAYLEY_ERR_CONVERGENCE_FAILURE = 7,
  CAYLEY_ERR_STEP_CONTROL_FAILURE = 8,
  CAYLEY_ERR_POSITIVITY_VIOLATION = 9,
  CAYLEY_ERR_NOT_NORMALIZED = 10,
  CAYLEY_ERR_DOUBLE_APPLICATION = 11,
  CAYLEY_ERR_DEGENERATE_TARGETS = 12,
  CAYLEY_ERR_IO = 13,
  CAYLEY_ERR_CONFIG = 14,
  CAYLEY_ERR_INTERNAL = 99
} cayley_status;

typedef struct cayley_config cayley_config;
typedef struct cayley_tree cayley_tree;
typedef struct cayley_anneal cayley_anneal;

CAYLEY_API const char* cayley_version(void);
/* Message of the last failed call on this thread, "" if none. */
CAYLEY_API const char* cayley_last_error(void);
/* Symbolic name such as "TooLarge". */
CAYLEY_API const char* cayley_status_name(cayley_status status);
/* Caps worker threads; n <= 0 restores the default. Results do not depend on it. */
CAYLEY_API void cayley_set_threads(int n);

/* Configuration */
CAYLEY_API cayley_status cayley_config_load(const char* path, cayley_config** out);
CAYLEY_API cayley_status cayley_config_preset(int index, cayley_config** out);
CAYLEY_API cayley_status cayley_config_from_json(const char* json, cayley_config** out);
CAYLEY_API cayley_status cayley_config_set_seed(cayley_config* cfg, uint64_t seed);
/* mode: "ideal" or "full" */
CAYLEY_API cayley_status cayley_config_set_mode(cayley_config* cfg, const char* mode);
CAYLEY_API cayley_status cayley_config_set_threads(cayley_config* cfg, int threads);
CAYLEY_API cayley_status cayley_config_set_output_dir(cayley_config* cfg, const char* dir);
/* *out must be released with cayley_string_free. */
CAYLEY_API cayley_status cayley_config_to_json(const cayley_config* cfg, char** out);
CAYLEY_API void cayley_config_free(cayley_config* cfg);
CAYLEY_API void cayley_string_free(char* s);

/* Subcommands: geometry, phase-diagram, anneal, sample, neel, holo. */
CAYLEY_API cayley_status cayley_check_budget(const cayley_config* cfg, const char* subcommand);
CAYLEY_API cayley_status cayley_run(const cayley_config* cfg, const char* subcommand);

/* Trees */
CAYLEY_API cayley_status cayley_tree_regular(int branching, int shells, double edge_length_um,
                                             int rotated3d, cayley_tree** out);
CAYLEY_API cayley_status cayley_tree_dual_center(double edge_length_um, cayley_tree** out);
CAYLEY_API int cayley_tree_size(const cayley_tree* tree);
CAYLEY_API int cayley_tree_num_edges(const cayley_tree* tree);
CAYLEY_API cayley_status cayley_tree_edge(const cayley_tree* tree, int index, int* a, int* b);
CAYLEY_API cayley_status cayley_tree_vertex(const cayley_tree* tree, int vertex, int* shell,
                                            double xyz[3]);
CAYLEY_API cayley_status cayley_tree_validate(const cayley_tree* tree, double* edge_dev_max,
                                              double* min_nonedge_ratio,
                                              double* max_nonedge_coupling_ratio);
CAYLEY_API cayley_status cayley_tree_write(const cayley_tree* tree, const char* path);
CAYLEY_API void cayley_tree_free(cayley_tree* tree);

/* Classical ground states; couplings and detuning in units of Omega0.
 * Writes up to `capacity` labels and the full degeneracy to *count. */
CAYLEY_API cayley_status cayley_ground_state(const cayley_tree* tree, double coupling,
                                             double delta_final, int full_vdw, uint64_t* labels,
                                             size_t capacity, size_t* count, double* energy);
/* "I".."V" or "Other"; static storage. */
CAYLEY_API cayley_status cayley_phase_label(const cayley_tree* tree, double coupling,
                                            double delta_final, const char** label);

/* Units and labels */
CAYLEY_API double cayley_blockade_radius(double c6_mhz_um6, double omega0_mhz);
CAYLEY_API cayley_status cayley_encode_label(const int* spins, int num_atoms, uint64_t* label);
CAYLEY_API cayley_status cayley_decode_label(uint64_t label, int num_atoms, int* spins);

/* Anneal results */
CAYLEY_API cayley_status cayley_anneal_run(const cayley_config* cfg, cayley_anneal** out);
CAYLEY_API int cayley_anneal_num_atoms(const cayley_anneal* run);
CAYLEY_API size_t cayley_anneal_num_samples(const cayley_anneal* run);
CAYLEY_API cayley_status cayley_anneal_sample(const cayley_anneal* run, size_t index, double* t,
                                              double* neel, double* ground_probability);
CAYLEY_API cayley_status cayley_anneal_excitation(const cayley_anneal* run, size_t index, int atom,
                                                  double* value);
CAYLEY_API cayley_status cayley_anneal_final_probability(const cayley_anneal* run, uint64_t label,
                                                         double* value);
CAYLEY_API cayley_status cayley_anneal_argmax(const cayley_anneal* run, uint64_t* label);
CAYLEY_API void cayley_anneal_free(cayley_anneal* run);

#ifdef __cplusplus
}
#endif

#endif
