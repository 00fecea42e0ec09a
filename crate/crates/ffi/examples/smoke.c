#include <stdio.h>
#include "k3_rdp.h"

int main(void) {
    K3DynkinType *t = NULL;
    bool v = true;
    if (k3_dynkin_parse("17A1", &t) != K3_STATUS_OK) return 10;
    if (k3_nk0(t, 0, &v) != K3_STATUS_OK || v) return 11;
    k3_dynkin_free(t);
    if (k3_dynkin_parse("A2", &t) != K3_STATUS_OK) return 12;
    if (k3_nk(5, 10, t, 0, &v) != K3_STATUS_OK || !v) return 13;
    if (k3_nk(3, 1, t, 0, &v) != K3_STATUS_OUT_OF_SCOPE) return 14;
    printf("%s\n", k3_last_error());
    k3_dynkin_free(t);
    return 0;
}
