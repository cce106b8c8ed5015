/* Block-advance loop for the planar harmonic sweep.  Kept in plain C and
   out of line so the row check compiles to packed compares; inlined into
   the large generated sweep function the vectorizer skips it. */
#ifndef BESTPAIR_BLOCKS_H
#define BESTPAIR_BLOCKS_H

#include <stddef.h>

#if defined(__GNUC__)
#define BP_NOINLINE __attribute__((noinline))
#else
#define BP_NOINLINE
#endif

static BP_NOINLINE ptrdiff_t bp_blocks_2d(ptrdiff_t rows, ptrdiff_t span, ptrdiff_t m, ptrdiff_t n,
                                  const double *restrict bw0, const double *restrict bw1,
                                  const double *restrict bal, const double *restrict bbe,
                                  const double *restrict BM, const double *restrict bp,
                                  const double *restrict bq, double *restrict X)
{
    double X0 = X[0], X1 = X[1];
    while (n - m + 1 >= span) {
        double dm = (double)m;
        int bad = 0;
        for (ptrdiff_t r = 0; r < rows; r++)
            bad += (bw0[r] * X0 + bw1[r] * X1 + bal[r] + bbe[r] * dm) < 0.0;
        if (bad)
            break;
        double n0 = BM[0] * X0 + BM[1] * X1 + bp[0] + bq[0] * dm;
        double n1 = BM[2] * X0 + BM[3] * X1 + bp[1] + bq[1] * dm;
        X0 = n0;
        X1 = n1;
        m += span;
    }
    X[0] = X0;
    X[1] = X1;
    return m;
}

#endif
