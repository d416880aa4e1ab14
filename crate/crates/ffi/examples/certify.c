/* Build: cc certify.c -I../include ../../../target/debug/libfpmc_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include "fpmc.h"

int main(void) {
    const char *json =
        "{\"name\":\"ex\",\"curves\":[{\"name\":\"C\"},{\"name\":\"E0\"},{\"name\":\"F0\"}],"
        "\"gram\":[[-1,1,0],[1,-1,1],[0,1,-1]]}";
    FpmcConfig *cfg = NULL;
    if (fpmc_config_from_json(json, &cfg) != FPMC_STATUS_OK) {
        fprintf(stderr, "parse failed: %s\n", fpmc_last_error());
        return 2;
    }
    int certified = 0;
    FpmcStatus s = fpmc_certify(cfg, &certified);
    printf("status %d certified %d\n", (int)s, certified);

    char *report = NULL;
    fpmc_run("ample-minimal", json, &report);
    printf("%s\n", report);
    fpmc_string_free(report);
    fpmc_config_free(cfg);
    return s == FPMC_STATUS_OK && certified ? 0 : 1;
}
