# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sweep kernels.

sweep_harmonic
    HLWB sweep for lambda_n = 1/(n+1).  Works on the scaled state
    X_m = (m+1) x_m, for which one step reads

        X_m = X_{m-1} + a - max(0, <u_j, X_{m-1}> - m e_j) c_j

    with u_j = c_j/|c_j|^2 and e_j = d_j/|c_j|^2.  Over one full pass of
    the N constraints with a fixed active/inactive pattern the map is
    affine, X -> M X + p + m q, and every residual met along the way is an
    affine function of the pass's starting state.  Passes are applied in
    one shot while the predicted pattern is confirmed by those residuals;
    any mismatch drops back to a stepwise pass and a rebuild.  In the plane,
    once a pattern has held for BLOCK passes, BLOCK passes are composed
    into one affine map whose residual checks are all affine in the block's
    starting state, so they can be evaluated independently.

sweep_relaxed
    Stepwise sweep for an explicit table of relaxation parameters.
"""
import numpy as np

cdef extern from "_blocks.h" nogil:
    # rows are pre-signed so every check reads "value >= 0"; a residual of
    # exactly zero gives the same step whether treated as active or not
    Py_ssize_t bp_blocks_2d(Py_ssize_t rows, Py_ssize_t span, Py_ssize_t m, Py_ssize_t n,
                            const double* bw0, const double* bw1, const double* bal,
                            const double* bbe, const double* BM, const double* bp,
                            const double* bq, double* X)

cdef enum:
    MAX_BATCH = 62
    BLOCK = 16
    MAX_BLOCK_ROWS = 256


cdef inline Py_ssize_t _slot(Py_ssize_t m, Py_ssize_t shift, Py_ssize_t N) noexcept nogil:
    cdef Py_ssize_t j = (m + shift) % N
    if j < 0:
        j += N
    return j


cdef inline int _step(Py_ssize_t d, const double* c, const double* u, double e,
                      const double* a, double dm, double* X) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = -dm * e
    for i in range(d):
        s += u[i] * X[i]
    if s > 0.0:
        for i in range(d):
            X[i] += a[i] - s * c[i]
        return 1
    for i in range(d):
        X[i] += a[i]
    return 0


cdef void _build(Py_ssize_t N, Py_ssize_t d, Py_ssize_t m0, Py_ssize_t shift,
                 const double* c, const double* u, const double* e, const double* a,
                 const int* pat, double* W, double* al, double* be,
                 double* M, double* p, double* q) noexcept nogil:
    # state after t steps of a pass started at step m0: X_t = M X_0 + p + m0 q
    cdef Py_ssize_t t, i, r, j
    cdef double sa, sb, w
    for r in range(d):
        for i in range(d):
            M[r * d + i] = 1.0 if r == i else 0.0
        p[r] = 0.0
        q[r] = 0.0
    for t in range(N):
        j = _slot(m0 + t, shift, N)
        for i in range(d):
            w = 0.0
            for r in range(d):
                w += u[j * d + r] * M[r * d + i]
            W[t * d + i] = w
        sa = -(<double>t) * e[j]
        sb = -e[j]
        for r in range(d):
            sa += u[j * d + r] * p[r]
            sb += u[j * d + r] * q[r]
        al[t] = sa
        be[t] = sb
        for r in range(d):
            p[r] += a[r]
        if pat[t]:
            for r in range(d):
                for i in range(d):
                    M[r * d + i] -= c[j * d + r] * W[t * d + i]
                p[r] -= c[j * d + r] * sa
                q[r] -= c[j * d + r] * sb


cdef Py_ssize_t _passes_2d(Py_ssize_t N, Py_ssize_t m, Py_ssize_t n, unsigned long long pmask,
                           const double* W, const double* al, const double* be,
                           const double* M, const double* p, const double* q,
                           double* X, Py_ssize_t cap) noexcept nogil:
    cdef double X0 = X[0], X1 = X[1], dm, s, n0, n1
    cdef double M00 = M[0], M01 = M[1], M10 = M[2], M11 = M[3]
    cdef double p0 = p[0], p1 = p[1], q0 = q[0], q1 = q[1]
    cdef unsigned long long mask
    cdef Py_ssize_t t
    while n - m + 1 >= N and cap > 0:
        cap -= 1
        dm = <double>m
        mask = 0
        for t in range(N):
            s = W[2 * t] * X0 + (W[2 * t + 1] * X1 + (al[t] + be[t] * dm))
            if s > 0.0:
                mask |= (<unsigned long long>1) << t
        if mask != pmask:
            break
        n0 = M00 * X0 + (M01 * X1 + (p0 + q0 * dm))
        n1 = M10 * X0 + (M11 * X1 + (p1 + q1 * dm))
        X0 = n0
        X1 = n1
        m += N
    X[0] = X0
    X[1] = X1
    return m


cdef void _build_block(Py_ssize_t N, Py_ssize_t K, const double* W, const double* al,
                       const double* be, const double* M, const double* p, const double* q,
                       double* bw0, double* bw1, double* bal, double* bbe, double* BM,
                       double* bp, double* bq) noexcept nogil:
    # pass k of a block starting at step m from state X:
    #   X_k = Mk X + Pk + m Qk,  residual t = (W_t Mk) X + (W_t Pk + al_t + be_t kN) + m (W_t Qk + be_t)
    cdef double Mk[4]
    cdef double Pk[2]
    cdef double Qk[2]
    cdef double t0, t1, t2, t3, kn
    cdef Py_ssize_t k, t, r
    Mk[0] = 1.0; Mk[1] = 0.0; Mk[2] = 0.0; Mk[3] = 1.0
    Pk[0] = 0.0; Pk[1] = 0.0; Qk[0] = 0.0; Qk[1] = 0.0
    for k in range(K):
        kn = <double>(k * N)
        for t in range(N):
            r = k * N + t
            bw0[r] = W[2 * t] * Mk[0] + W[2 * t + 1] * Mk[2]
            bw1[r] = W[2 * t] * Mk[1] + W[2 * t + 1] * Mk[3]
            bal[r] = W[2 * t] * Pk[0] + W[2 * t + 1] * Pk[1] + al[t] + be[t] * kn
            bbe[r] = W[2 * t] * Qk[0] + W[2 * t + 1] * Qk[1] + be[t]
        t0 = M[0] * Pk[0] + M[1] * Pk[1] + p[0] + q[0] * kn
        t1 = M[2] * Pk[0] + M[3] * Pk[1] + p[1] + q[1] * kn
        Pk[0] = t0; Pk[1] = t1
        t0 = M[0] * Qk[0] + M[1] * Qk[1] + q[0]
        t1 = M[2] * Qk[0] + M[3] * Qk[1] + q[1]
        Qk[0] = t0; Qk[1] = t1
        t0 = M[0] * Mk[0] + M[1] * Mk[2]
        t1 = M[0] * Mk[1] + M[1] * Mk[3]
        t2 = M[2] * Mk[0] + M[3] * Mk[2]
        t3 = M[2] * Mk[1] + M[3] * Mk[3]
        Mk[0] = t0; Mk[1] = t1; Mk[2] = t2; Mk[3] = t3
    for r in range(4):
        BM[r] = Mk[r]
    bp[0] = Pk[0]; bp[1] = Pk[1]; bq[0] = Qk[0]; bq[1] = Qk[1]


cdef Py_ssize_t _passes(Py_ssize_t N, Py_ssize_t d, Py_ssize_t m, Py_ssize_t n,
                        unsigned long long pmask,
                        const double* W, const double* al, const double* be,
                        const double* M, const double* p, const double* q,
                        double* X, double* tmp) noexcept nogil:
    cdef double dm, s, v
    cdef unsigned long long mask
    cdef Py_ssize_t t, i, r
    while n - m + 1 >= N:
        dm = <double>m
        mask = 0
        for t in range(N):
            s = al[t] + be[t] * dm
            for i in range(d):
                s += W[t * d + i] * X[i]
            if s > 0.0:
                mask |= (<unsigned long long>1) << t
        if mask != pmask:
            break
        for r in range(d):
            v = p[r] + q[r] * dm
            for i in range(d):
                v += M[r * d + i] * X[i]
            tmp[r] = v
        for r in range(d):
            X[r] = tmp[r]
        m += N
    return m


def sweep_harmonic(const double[:, ::1] normals, const double[::1] offsets,
                   const unsigned char[::1] live, const double[::1] anchor,
                   const double[::1] start, Py_ssize_t n, Py_ssize_t shift):
    cdef Py_ssize_t N = normals.shape[0], d = normals.shape[1]
    cdef Py_ssize_t j, i, t, m, m0
    cdef double qn
    out = np.array(start, dtype=np.float64)
    if n <= 0:
        return out
    u_arr = np.zeros((N, d))
    e_arr = np.zeros(N)
    cdef double[:, ::1] u = u_arr
    cdef double[::1] e = e_arr
    for j in range(N):
        if live[j]:
            qn = 0.0
            for i in range(d):
                qn += normals[j, i] * normals[j, i]
            for i in range(d):
                u[j, i] = normals[j, i] / qn
            e[j] = offsets[j] / qn
    # trivial rows keep u = 0, e = 0 so their residual is never positive

    cdef double[::1] X = out
    cdef double[:, ::1] W = np.zeros((N, d))
    cdef double[::1] al = np.zeros(N)
    cdef double[::1] be = np.zeros(N)
    cdef double[:, ::1] M = np.zeros((d, d))
    cdef double[::1] p = np.zeros(d)
    cdef double[::1] q = np.zeros(d)
    cdef double[::1] tmp = np.zeros(d)
    cdef int[::1] pat = np.zeros(N, dtype=np.intc)
    cdef unsigned long long pmask = 0
    cdef bint have = False
    cdef bint have_block = False
    cdef bint batch = N <= MAX_BATCH
    cdef Py_ssize_t K = MAX_BLOCK_ROWS // N if N > 0 else 1
    if K > BLOCK:
        K = BLOCK
    cdef Py_ssize_t rows = K * N, span = K * N, before
    cdef bint blocks = d == 2 and K >= 2
    cdef double[::1] bw0 = np.zeros(rows)
    cdef double[::1] bw1 = np.zeros(rows)
    cdef double[::1] bal = np.zeros(rows)
    cdef double[::1] bbe = np.zeros(rows)
    cdef double[::1] BM = np.zeros(4)
    cdef double[::1] bp = np.zeros(2)
    cdef double[::1] bq = np.zeros(2)
    cdef const double* cp = &normals[0, 0]
    cdef const double* up = &u[0, 0]
    cdef const double* ep = &e[0]
    cdef const double* ap = &anchor[0]
    cdef double* Xp = &X[0]

    with nogil:
        m = 1
        while m <= n:
            if batch and n - m + 1 >= N:
                if have:
                    if d == 2:
                        if have_block:
                            m = bp_blocks_2d(rows, span, m, n, &bw0[0], &bw1[0],
                                           &bal[0], &bbe[0], &BM[0], &bp[0], &bq[0], Xp)
                        before = m
                        m = _passes_2d(N, m, n, pmask, &W[0, 0], &al[0], &be[0],
                                       &M[0, 0], &p[0], &q[0], Xp, K if blocks else n)
                        if blocks and m - before == span:
                            if not have_block:
                                _build_block(N, K, &W[0, 0], &al[0], &be[0], &M[0, 0],
                                             &p[0], &q[0], &bw0[0], &bw1[0], &bal[0],
                                             &bbe[0], &BM[0], &bp[0], &bq[0])
                                for t in range(rows):
                                    if not pat[t % N]:
                                        bw0[t] = -bw0[t]
                                        bw1[t] = -bw1[t]
                                        bal[t] = -bal[t]
                                        bbe[t] = -bbe[t]
                                have_block = True
                            continue
                    else:
                        m = _passes(N, d, m, n, pmask, &W[0, 0], &al[0], &be[0],
                                    &M[0, 0], &p[0], &q[0], Xp, &tmp[0])
                    if n - m + 1 < N:
                        continue
                m0 = m
                pmask = 0
                for t in range(N):
                    j = _slot(m, shift, N)
                    pat[t] = _step(d, cp + j * d, up + j * d, ep[j], ap, <double>m, Xp)
                    if pat[t]:
                        pmask |= (<unsigned long long>1) << t
                    m += 1
                _build(N, d, m0, shift, cp, up, ep, ap, &pat[0], &W[0, 0], &al[0], &be[0],
                       &M[0, 0], &p[0], &q[0])
                have = True
                have_block = False
            else:
                j = _slot(m, shift, N)
                _step(d, cp + j * d, up + j * d, ep[j], ap, <double>m, Xp)
                m += 1
        for i in range(d):
            Xp[i] = Xp[i] / <double>(n + 1)
    return out


def sweep_relaxed(const double[:, ::1] normals, const double[::1] offsets,
                  const unsigned char[::1] live, const double[::1] anchor,
                  const double[::1] start, const double[::1] lambdas, Py_ssize_t shift):
    cdef Py_ssize_t N = normals.shape[0], d = normals.shape[1]
    cdef Py_ssize_t n = lambdas.shape[0]
    cdef Py_ssize_t j, i, m
    cdef double r, t, lam
    out = np.array(start, dtype=np.float64)
    cdef double[::1] x = out
    cdef double[::1] qn = np.zeros(N)
    for j in range(N):
        for i in range(d):
            qn[j] += normals[j, i] * normals[j, i]
    with nogil:
        for m in range(1, n + 1):
            j = _slot(m, shift, N)
            if live[j]:
                r = 0.0
                for i in range(d):
                    r += normals[j, i] * x[i]
                r -= offsets[j]
                if r > 0.0:
                    t = r / qn[j]
                    for i in range(d):
                        x[i] -= t * normals[j, i]
            lam = lambdas[m - 1]
            for i in range(d):
                x[i] = lam * anchor[i] + (1.0 - lam) * x[i]
    return out
