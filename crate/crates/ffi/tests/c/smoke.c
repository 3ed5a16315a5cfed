#include <stdio.h>
#include <string.h>

#include "causal_query.h"

#define CHECK(cond)                                          \
    do {                                                     \
        if (!(cond)) {                                       \
            fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                        \
        }                                                    \
    } while (0)

int main(void) {
    CqFunction *f = NULL;
    CHECK(cq_function_builtin("f6c", 0, &f) == CQ_STATUS_OK);
    CqMeasures m;
    CHECK(cq_function_analyze(f, &m) == CQ_STATUS_OK);
    CHECK(m.arity == 6 && m.degree == 3 && m.certificate == 3 && m.depth == 4);

    CqProcess *w = NULL;
    CHECK(cq_process_builtin("lugano_bar", &w) == CQ_STATUS_OK);
    bool holds = false;
    CHECK(cq_process_computes(w, f, 0, 0, &holds) == CQ_STATUS_OK && holds);

    const uint8_t x[6] = {1, 1, 0, 0, 1, 0};
    CqQuantumOutcome q;
    CHECK(cq_run_f6q(x, false, 0, &q) == CQ_STATUS_OK);
    CHECK(q.bit && q.probability > 0.999999999);

    CHECK(cq_process_builtin("missing", &w) == CQ_STATUS_INVALID_ARGUMENT);
    char *msg = cq_last_error_message();
    CHECK(msg != NULL && strstr(msg, "missing") != NULL);
    cq_string_free(msg);

    cq_process_free(w);
    cq_function_free(f);
    printf("ok %s\n", cq_version());
    return 0;
}
