#include <stdio.h>
#include <string.h>
#include "diffasym.h"

int main(void) {
    DaComplexityRow rows[6];
    size_t count = 0;
    if (da_complexity(16, 20, rows, 6, &count) != DA_STATUS_OK || count != 6) return 1;
    if (rows[4].kind != DA_COMPLEXITY_KIND_DLECLMS_ADAPTATION || rows[4].multiplications != 756) return 2;

    double positive, negative;
    int has_limits;
    if (da_step_bound(DA_ALGORITHM_DQQCLMS, 0.1, 0.8, 6.0, 1.0, 0.0 / 0.0, &positive, &negative, &has_limits) != DA_STATUS_OK)
        return 3;
    if (!has_limits || positive != 2.5) return 4;

    DaConfig *config = NULL;
    const char *text = "[network]\nnodes = 4\nparam = 0.8\n[system]\ntaps = 2\n[run]\niterations = 5\nmonte_carlo = 2\n";
    if (da_config_parse(text, 1, 42, &config) != DA_STATUS_OK) return 5;
    DaRunResult *result = NULL;
    if (da_run(config, &result) != DA_STATUS_OK) return 6;
    if (da_run_algorithm_count(result) != 6 || da_run_iterations(result) != 5) return 7;
    if (strncmp(da_run_csv(result), "iteration,algorithm,msd_db\n", 27) != 0) return 8;
    da_run_free(result);
    da_config_free(config);

    if (da_config_parse("[noise]\ngamma = 0\n", 1, 1, &config) != DA_STATUS_CONFIG) return 9;
    if (strstr(da_last_error_message(), "scale") == NULL) return 10;
    printf("ok %s\n", da_version());
    return 0;
}
