# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) stepper, twin of ``_stepper_py``.

Same state layout, tableau, error norm and controller; see the pure module
for the full description.  Expressions mirror the pure implementation so the
two backends agree to rounding level.  No -ffast-math: IEEE semantics only.
"""

import numpy as np

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2

ACCEPT_FRACTION = 0.2

cdef double _THETA = 0.2

cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0, _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0, _A42 = -56.0 / 15.0, _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0, _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0, _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0, _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0, _A64 = 49.0 / 176.0, _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0, _B3 = 500.0 / 1113.0, _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0, _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0, _E3 = -71.0 / 16695.0, _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0, _E6 = 22.0 / 525.0, _E7 = -1.0 / 40.0

cdef double complex _I = 1j


cdef inline double _scaled_err(double err, double old, double new,
                               double atol, double rtol) nogil:
    cdef double mag_old = abs(old)
    cdef double mag_new = abs(new)
    cdef double mag = mag_old if mag_old > mag_new else mag_new
    cdef double w = err / (atol + rtol * mag)
    return w * w


def integrate_semiclassical(double delta_r, double delta_a, double g_a,
                            double g_zz, double kappa, double drive,
                            double t_end, double rtol, double atol,
                            long max_steps):
    """Compiled twin of ``_stepper_py.integrate_semiclassical``."""
    cdef double sz = -1.0
    cdef double complex sm = 0.0, phi = 0.5, a = 0.0
    cdef double complex drive_term = _I * drive

    cdef Py_ssize_t cap = 4096, n = 0
    t_arr = np.empty(cap, dtype=np.float64)
    y_arr = np.empty((cap, 7), dtype=np.float64)
    cdef double[::1] tv = t_arr
    cdef double[:, ::1] yv = y_arr

    cdef double scale0 = abs(delta_r)
    if abs(delta_a) > scale0:
        scale0 = abs(delta_a)
    if g_a > scale0:
        scale0 = g_a
    if g_zz > scale0:
        scale0 = g_zz
    if kappa > scale0:
        scale0 = kappa
    cdef double h = 1e-2 / scale0
    if h > t_end:
        h = t_end
    cdef double h_min = 1e-15 * t_end

    cdef double t = 0.0
    cdef long steps = 0
    cdef int status = STATUS_OK
    cdef bint last

    cdef double d_sz1, d_sz2, d_sz3, d_sz4, d_sz5, d_sz6, d_sz7
    cdef double complex d_sm1, d_sm2, d_sm3, d_sm4, d_sm5, d_sm6, d_sm7
    cdef double complex d_phi1, d_phi2, d_phi3, d_phi4, d_phi5, d_phi6, d_phi7
    cdef double complex d_a1, d_a2, d_a3, d_a4, d_a5, d_a6, d_a7
    cdef double szs
    cdef double complex sms, phis, as_
    cdef double sz_new, e_sz
    cdef double complex sm_new, phi_new, a_new, e_sm, e_phi, e_a
    cdef double errsq, err_norm, eta, fac

    # row 0: initial condition
    tv[0] = 0.0
    yv[0, 0] = sz
    yv[0, 1] = sm.real; yv[0, 2] = sm.imag
    yv[0, 3] = phi.real; yv[0, 4] = phi.imag
    yv[0, 5] = a.real; yv[0, 6] = a.imag
    n = 1

    # k1 (FSAL slot)
    d_sz1 = -4.0 * g_a * (sm.conjugate() * a).real
    d_sm1 = -_I * delta_a * sm + g_a * sz * a
    d_phi1 = _I * g_zz * (1.0 + sz) * phi
    d_a1 = -(_I * delta_r + kappa) * a + g_a * sm + drive_term

    while t < t_end:
        steps += 1
        if steps > max_steps:
            status = STATUS_MAX_STEPS
            break
        last = h >= t_end - t
        if last:
            h = t_end - t

        szs = sz + h * (_A21 * d_sz1)
        sms = sm + h * (_A21 * d_sm1)
        phis = phi + h * (_A21 * d_phi1)
        as_ = a + h * (_A21 * d_a1)
        d_sz2 = -4.0 * g_a * (sms.conjugate() * as_).real
        d_sm2 = -_I * delta_a * sms + g_a * szs * as_
        d_phi2 = _I * g_zz * (1.0 + szs) * phis
        d_a2 = -(_I * delta_r + kappa) * as_ + g_a * sms + drive_term

        szs = sz + h * (_A31 * d_sz1 + _A32 * d_sz2)
        sms = sm + h * (_A31 * d_sm1 + _A32 * d_sm2)
        phis = phi + h * (_A31 * d_phi1 + _A32 * d_phi2)
        as_ = a + h * (_A31 * d_a1 + _A32 * d_a2)
        d_sz3 = -4.0 * g_a * (sms.conjugate() * as_).real
        d_sm3 = -_I * delta_a * sms + g_a * szs * as_
        d_phi3 = _I * g_zz * (1.0 + szs) * phis
        d_a3 = -(_I * delta_r + kappa) * as_ + g_a * sms + drive_term

        szs = sz + h * (_A41 * d_sz1 + _A42 * d_sz2 + _A43 * d_sz3)
        sms = sm + h * (_A41 * d_sm1 + _A42 * d_sm2 + _A43 * d_sm3)
        phis = phi + h * (_A41 * d_phi1 + _A42 * d_phi2 + _A43 * d_phi3)
        as_ = a + h * (_A41 * d_a1 + _A42 * d_a2 + _A43 * d_a3)
        d_sz4 = -4.0 * g_a * (sms.conjugate() * as_).real
        d_sm4 = -_I * delta_a * sms + g_a * szs * as_
        d_phi4 = _I * g_zz * (1.0 + szs) * phis
        d_a4 = -(_I * delta_r + kappa) * as_ + g_a * sms + drive_term

        szs = sz + h * (_A51 * d_sz1 + _A52 * d_sz2 + _A53 * d_sz3 + _A54 * d_sz4)
        sms = sm + h * (_A51 * d_sm1 + _A52 * d_sm2 + _A53 * d_sm3 + _A54 * d_sm4)
        phis = phi + h * (_A51 * d_phi1 + _A52 * d_phi2 + _A53 * d_phi3 + _A54 * d_phi4)
        as_ = a + h * (_A51 * d_a1 + _A52 * d_a2 + _A53 * d_a3 + _A54 * d_a4)
        d_sz5 = -4.0 * g_a * (sms.conjugate() * as_).real
        d_sm5 = -_I * delta_a * sms + g_a * szs * as_
        d_phi5 = _I * g_zz * (1.0 + szs) * phis
        d_a5 = -(_I * delta_r + kappa) * as_ + g_a * sms + drive_term

        szs = sz + h * (_A61 * d_sz1 + _A62 * d_sz2 + _A63 * d_sz3 + _A64 * d_sz4
                        + _A65 * d_sz5)
        sms = sm + h * (_A61 * d_sm1 + _A62 * d_sm2 + _A63 * d_sm3 + _A64 * d_sm4
                        + _A65 * d_sm5)
        phis = phi + h * (_A61 * d_phi1 + _A62 * d_phi2 + _A63 * d_phi3
                          + _A64 * d_phi4 + _A65 * d_phi5)
        as_ = a + h * (_A61 * d_a1 + _A62 * d_a2 + _A63 * d_a3 + _A64 * d_a4
                       + _A65 * d_a5)
        d_sz6 = -4.0 * g_a * (sms.conjugate() * as_).real
        d_sm6 = -_I * delta_a * sms + g_a * szs * as_
        d_phi6 = _I * g_zz * (1.0 + szs) * phis
        d_a6 = -(_I * delta_r + kappa) * as_ + g_a * sms + drive_term

        sz_new = sz + h * (_B1 * d_sz1 + _B3 * d_sz3 + _B4 * d_sz4 + _B5 * d_sz5
                           + _B6 * d_sz6)
        sm_new = sm + h * (_B1 * d_sm1 + _B3 * d_sm3 + _B4 * d_sm4 + _B5 * d_sm5
                           + _B6 * d_sm6)
        phi_new = phi + h * (_B1 * d_phi1 + _B3 * d_phi3 + _B4 * d_phi4
                             + _B5 * d_phi5 + _B6 * d_phi6)
        a_new = a + h * (_B1 * d_a1 + _B3 * d_a3 + _B4 * d_a4 + _B5 * d_a5
                         + _B6 * d_a6)

        d_sz7 = -4.0 * g_a * (sm_new.conjugate() * a_new).real
        d_sm7 = -_I * delta_a * sm_new + g_a * sz_new * a_new
        d_phi7 = _I * g_zz * (1.0 + sz_new) * phi_new
        d_a7 = -(_I * delta_r + kappa) * a_new + g_a * sm_new + drive_term

        e_sz = h * (_E1 * d_sz1 + _E3 * d_sz3 + _E4 * d_sz4 + _E5 * d_sz5
                    + _E6 * d_sz6 + _E7 * d_sz7)
        e_sm = h * (_E1 * d_sm1 + _E3 * d_sm3 + _E4 * d_sm4 + _E5 * d_sm5
                    + _E6 * d_sm6 + _E7 * d_sm7)
        e_phi = h * (_E1 * d_phi1 + _E3 * d_phi3 + _E4 * d_phi4 + _E5 * d_phi5
                     + _E6 * d_phi6 + _E7 * d_phi7)
        e_a = h * (_E1 * d_a1 + _E3 * d_a3 + _E4 * d_a4 + _E5 * d_a5
                   + _E6 * d_a6 + _E7 * d_a7)

        errsq = _scaled_err(e_sz, sz, sz_new, atol, rtol)
        errsq += _scaled_err(e_sm.real, sm.real, sm_new.real, atol, rtol)
        errsq += _scaled_err(e_sm.imag, sm.imag, sm_new.imag, atol, rtol)
        errsq += _scaled_err(e_phi.real, phi.real, phi_new.real, atol, rtol)
        errsq += _scaled_err(e_phi.imag, phi.imag, phi_new.imag, atol, rtol)
        errsq += _scaled_err(e_a.real, a.real, a_new.real, atol, rtol)
        errsq += _scaled_err(e_a.imag, a.imag, a_new.imag, atol, rtol)
        err_norm = (errsq / 7.0) ** 0.5
        eta = err_norm / _THETA

        if eta <= 1.0:
            t = t_end if last else t + h
            sz = sz_new
            sm = sm_new
            phi = phi_new
            a = a_new
            d_sz1 = d_sz7
            d_sm1 = d_sm7
            d_phi1 = d_phi7
            d_a1 = d_a7
            if n == cap:
                cap = cap * 2
                t_new_arr = np.empty(cap, dtype=np.float64)
                y_new_arr = np.empty((cap, 7), dtype=np.float64)
                t_new_arr[:n] = t_arr[:n]
                y_new_arr[:n] = y_arr[:n]
                t_arr = t_new_arr
                y_arr = y_new_arr
                tv = t_arr
                yv = y_arr
            tv[n] = t
            yv[n, 0] = sz
            yv[n, 1] = sm.real; yv[n, 2] = sm.imag
            yv[n, 3] = phi.real; yv[n, 4] = phi.imag
            yv[n, 5] = a.real; yv[n, 6] = a.imag
            n += 1

        fac = 5.0 if eta == 0.0 else 0.9 * eta ** -0.2
        if fac > 5.0:
            fac = 5.0
        elif fac < 0.2:
            fac = 0.2
        h = h * fac
        if h < h_min and t < t_end:
            status = STATUS_UNDERFLOW
            break

    return t_arr[:n].copy(), y_arr[:n].copy(), status
