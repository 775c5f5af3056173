#include <stdio.h>
#include <string.h>

#include "koszulkit.h"

static const char *DOC =
    "koszulkit 1\n"
    "ring integers\n"
    "matrix m = 2x2 [2, 4; 6, 8]\n";

int main(void) {
    KzkDocument *doc = NULL;
    if (kzk_document_parse(DOC, &doc) != KZK_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", kzk_last_error());
        return 10;
    }
    const char *argv[] = {"snf"};
    KzkReport *rep = NULL;
    if (kzk_run(doc, 1, argv, &rep) != KZK_STATUS_OK) {
        return 11;
    }
    int code = kzk_report_exit_code(rep);
    char *json = NULL;
    if (kzk_report_json(rep, &json) != KZK_STATUS_OK || strstr(json, "\"outcome\": \"pass\"") == NULL) {
        return 12;
    }
    kzk_string_free(json);
    kzk_report_free(rep);
    kzk_document_free(doc);

    int64_t m[4] = {2, 4, 6, 8};
    int64_t d[2];
    if (kzk_smith_diagonal(2, 2, m, d) != KZK_STATUS_OK || d[0] != 2 || d[1] != 4) {
        return 13;
    }
    KzkDocument *bad = NULL;
    if (kzk_document_parse("koszulkit 1\nring nonsense\n", &bad) != KZK_STATUS_PARSE || bad != NULL) {
        return 14;
    }
    printf("ok %d\n", code);
    return code;
}
