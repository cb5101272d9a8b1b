#ifndef PRINCIPAL_ACTIONS_H
#define PRINCIPAL_ACTIONS_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PA_BUILDING_LIBRARY)
#define PA_API __attribute__((visibility("default")))
#else
#define PA_API
#endif

/* Status codes. Nonzero values mirror the library's error categories. */
typedef enum pa_status {
  PA_OK = 0,
  PA_ERR_INVALID_ARGUMENT = 1,
  PA_ERR_PARSE = 2,
  PA_ERR_UNSUPPORTED = 3,
  PA_ERR_NOT_DIAGONALLY_DOMINANT = 4,
  PA_ERR_INVALID_POINT = 5,
  PA_ERR_LEMMA_VIOLATION = 6,
  PA_ERR_HYPOTHESIS_NOT_MET = 7,
  PA_ERR_INTERNAL = 8
} pa_status;

typedef struct pa_context pa_context;
typedef struct pa_element pa_element;

PA_API const char* pa_version(void);

PA_API pa_status pa_context_new(pa_context** out);
PA_API void pa_context_free(pa_context* ctx);
/* Message of the last failed call on ctx; empty after a success. Owned by ctx. */
PA_API const char* pa_last_error(const pa_context* ctx);

/* Strings returned through char** out-parameters are released with pa_string_free. */
PA_API void pa_string_free(char* s);

/* Number of commands and the name of command i (static storage). */
PA_API int pa_command_count(void);
PA_API const char* pa_command_name(int i);

/* Runs a command with a JSON object config and returns the JSON report
   (sorted keys, two-space indent). config_json may be NULL for defaults. */
PA_API pa_status pa_run(pa_context* ctx, const char* command, const char* config_json, char** report_json);

/* CSV view of a report produced by pa_run for the same command. */
PA_API pa_status pa_report_csv(pa_context* ctx, const char* command, const char* report_json, char** csv);

/* Group ring elements with rational coefficients. group is a name such as
   "z", "z2", "z3" or "h"; text is an expression like "1 - u1 - u2" or ring element JSON. */
PA_API pa_status pa_element_parse(pa_context* ctx, const char* group, const char* text, pa_element** out);
PA_API void pa_element_free(pa_element* e);
PA_API pa_status pa_element_add(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out);
PA_API pa_status pa_element_sub(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out);
PA_API pa_status pa_element_mul(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out);
PA_API pa_status pa_element_adjoint(pa_context* ctx, const pa_element* a, pa_element** out);
PA_API pa_status pa_element_equal(pa_context* ctx, const pa_element* a, const pa_element* b, int* equal);
PA_API pa_status pa_element_l1(pa_context* ctx, const pa_element* a, double* l1);
PA_API pa_status pa_element_to_json(pa_context* ctx, const pa_element* a, char** json);
PA_API pa_status pa_element_to_string(pa_context* ctx, const pa_element* a, char** text);

#ifdef __cplusplus
}
#endif

#endif
