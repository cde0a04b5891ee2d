#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "pcb_ffi.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc((size_t)n + 1);
    if (fread(buf, 1, (size_t)n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = '\0';
    fclose(f);
    return buf;
}

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(int argc, char **argv) {
    CHECK(argc == 2);
    char *src = slurp(argv[1]);
    CHECK(src != NULL);

    PcbMass *m = NULL;
    CHECK(pcb_mass_from_json(src, &m) == PCB_STATUS_OK);
    CHECK(pcb_mass_frame_size(m) == 3);

    double v = 0.0;
    CHECK(pcb_mass_plausibility(m, 0x2, &v) == PCB_STATUS_OK);
    CHECK(fabs(v - 2.0 / 3.0) < 1e-12);
    CHECK(pcb_mass_belief(m, 0x6, &v) == PCB_STATUS_OK);
    CHECK(fabs(v - 2.0 / 3.0) < 1e-12);
    CHECK(pcb_mass_belief(m, 0x10, &v) == PCB_STATUS_VALIDATION);
    CHECK(pcb_last_error_message() != NULL);

    double p[3];
    CHECK(pcb_mass_pignistic(m, p, 3) == PCB_STATUS_OK);
    CHECK(fabs(p[0] - 1.0 / 3.0) < 1e-12 && fabs(p[2] - 1.0 / 3.0) < 1e-12);
    CHECK(pcb_mass_pignistic(m, p, 2) == PCB_STATUS_BUFFER_TOO_SMALL);

    PcbProblem *problem = NULL;
    CHECK(pcb_problem_from_json(src, &problem) == PCB_STATUS_OK);
    char *out = NULL;
    CHECK(pcb_problem_evaluate_json(problem, NAN, &out) == PCB_STATUS_OK);
    CHECK(out != NULL);
    pcb_string_free(out);

    CHECK(pcb_t_apply(0.4, 1.0, 1.0, &v) == PCB_STATUS_OK);
    CHECK(fabs(v - 0.4) < 1e-12);
    CHECK(pcb_problem_from_json("{", &problem) == PCB_STATUS_PARSE);

    pcb_problem_free(problem);
    pcb_mass_free(m);
    free(src);
    puts("ok");
    return 0;
}
