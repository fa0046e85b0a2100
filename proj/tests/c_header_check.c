/* SPDX-License-Identifier: Apache-2.0 */
/* The public header must compile and link as plain C. */
#include <stdio.h>

#include "mfusion/mfusion.h"

int main(void) {
    mf_image* img = NULL;
    mf_metrics m;
    const mf_image* sources[1];
    if (mf_texture(16, 16, 3, &img) != MF_OK) {
        fprintf(stderr, "%s\n", mf_last_error());
        return 1;
    }
    sources[0] = img;
    if (mf_score(img, sources, 1, &m) != MF_OK || m.q_abf < 0.99) {
        mf_image_free(img);
        return 1;
    }
    mf_image_free(img);
    printf("mfusion %s from C: ok\n", mf_version());
    return 0;
}
