"""Pure-Python Dormand-Prince 5(4) stepper for the semiclassical readout
equations, twin of the compiled kernel in ``_stepper_cy.pyx``.

State vector (7 reals): sigma_z, Re/Im sigma_-^a, Re/Im phi, Re/Im a, where
phi is the qubit coherence in the frame rotating at omega_qb + g_zz (its
equation of motion is phi' = i g_zz (1 + sigma_z) phi, so the step size is
set by the couplings, not by the absolute qubit frequency).

Equations of motion (probe frame, drive = sqrt(kappa * p)):

    sigma_z' = -4 g_a Re(conj(sm) a)
    sm'      = -i delta_a sm + g_a sigma_z a
    phi'     =  i g_zz (1 + sigma_z) phi
    a'       = -(i delta_r + kappa) a + g_a sm + i drive

Error control: mixed absolute/relative RMS norm over the 7 real components,
step accepted when the embedded 4th-order error estimate is below
ACCEPT_FRACTION of the tolerance (a conservative margin that keeps the
conserved quantities of the flow tight over long integrations).  The scheme
is deterministic: identical inputs give bit-identical trajectories.

Both kernels are written with identical expression structure so that the
compiled backend reproduces this one to rounding level.
"""

import numpy as np

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2

ACCEPT_FRACTION = 0.2

# Dormand-Prince 5(4) tableau
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
# 5th-minus-4th order error weights (FSAL: k7 is the next step's k1)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def integrate_semiclassical(
    delta_r,
    delta_a,
    g_a,
    g_zz,
    kappa,
    drive,
    t_end,
    rtol,
    atol,
    max_steps,
):
    """Integrate from the ground/vacuum initial condition to t_end.

    Returns (times, y, status): times is float64[n], y is float64[n, 7] with
    one row per accepted step (row 0 is the initial condition), status is one
    of STATUS_OK / STATUS_UNDERFLOW / STATUS_MAX_STEPS.
    """
    sz = -1.0
    sm = 0.0 + 0.0j
    phi = 0.5 + 0.0j
    a = 0.0 + 0.0j

    times = [0.0]
    rows = [(sz, sm.real, sm.imag, phi.real, phi.imag, a.real, a.imag)]

    def rhs(sz, sm, phi, a):
        d_sz = -4.0 * g_a * (sm.conjugate() * a).real
        d_sm = -1j * delta_a * sm + g_a * sz * a
        d_phi = 1j * g_zz * (1.0 + sz) * phi
        d_a = -(1j * delta_r + kappa) * a + g_a * sm + 1j * drive
        return d_sz, d_sm, d_phi, d_a

    scale0 = abs(delta_r)
    if abs(delta_a) > scale0:
        scale0 = abs(delta_a)
    if g_a > scale0:
        scale0 = g_a
    if g_zz > scale0:
        scale0 = g_zz
    if kappa > scale0:
        scale0 = kappa
    h = 1e-2 / scale0
    if h > t_end:
        h = t_end
    h_min = 1e-15 * t_end

    k1 = rhs(sz, sm, phi, a)
    t = 0.0
    steps = 0
    status = STATUS_OK

    while t < t_end:
        steps += 1
        if steps > max_steps:
            status = STATUS_MAX_STEPS
            break
        last = h >= t_end - t
        if last:
            h = t_end - t

        d_sz1, d_sm1, d_phi1, d_a1 = k1
        k2 = rhs(
            sz + h * (_A21 * d_sz1),
            sm + h * (_A21 * d_sm1),
            phi + h * (_A21 * d_phi1),
            a + h * (_A21 * d_a1),
        )
        d_sz2, d_sm2, d_phi2, d_a2 = k2
        k3 = rhs(
            sz + h * (_A31 * d_sz1 + _A32 * d_sz2),
            sm + h * (_A31 * d_sm1 + _A32 * d_sm2),
            phi + h * (_A31 * d_phi1 + _A32 * d_phi2),
            a + h * (_A31 * d_a1 + _A32 * d_a2),
        )
        d_sz3, d_sm3, d_phi3, d_a3 = k3
        k4 = rhs(
            sz + h * (_A41 * d_sz1 + _A42 * d_sz2 + _A43 * d_sz3),
            sm + h * (_A41 * d_sm1 + _A42 * d_sm2 + _A43 * d_sm3),
            phi + h * (_A41 * d_phi1 + _A42 * d_phi2 + _A43 * d_phi3),
            a + h * (_A41 * d_a1 + _A42 * d_a2 + _A43 * d_a3),
        )
        d_sz4, d_sm4, d_phi4, d_a4 = k4
        k5 = rhs(
            sz + h * (_A51 * d_sz1 + _A52 * d_sz2 + _A53 * d_sz3 + _A54 * d_sz4),
            sm + h * (_A51 * d_sm1 + _A52 * d_sm2 + _A53 * d_sm3 + _A54 * d_sm4),
            phi + h * (_A51 * d_phi1 + _A52 * d_phi2 + _A53 * d_phi3 + _A54 * d_phi4),
            a + h * (_A51 * d_a1 + _A52 * d_a2 + _A53 * d_a3 + _A54 * d_a4),
        )
        d_sz5, d_sm5, d_phi5, d_a5 = k5
        k6 = rhs(
            sz
            + h
            * (_A61 * d_sz1 + _A62 * d_sz2 + _A63 * d_sz3 + _A64 * d_sz4 + _A65 * d_sz5),
            sm
            + h
            * (_A61 * d_sm1 + _A62 * d_sm2 + _A63 * d_sm3 + _A64 * d_sm4 + _A65 * d_sm5),
            phi
            + h
            * (
                _A61 * d_phi1
                + _A62 * d_phi2
                + _A63 * d_phi3
                + _A64 * d_phi4
                + _A65 * d_phi5
            ),
            a
            + h * (_A61 * d_a1 + _A62 * d_a2 + _A63 * d_a3 + _A64 * d_a4 + _A65 * d_a5),
        )
        d_sz6, d_sm6, d_phi6, d_a6 = k6

        sz_new = sz + h * (
            _B1 * d_sz1 + _B3 * d_sz3 + _B4 * d_sz4 + _B5 * d_sz5 + _B6 * d_sz6
        )
        sm_new = sm + h * (
            _B1 * d_sm1 + _B3 * d_sm3 + _B4 * d_sm4 + _B5 * d_sm5 + _B6 * d_sm6
        )
        phi_new = phi + h * (
            _B1 * d_phi1 + _B3 * d_phi3 + _B4 * d_phi4 + _B5 * d_phi5 + _B6 * d_phi6
        )
        a_new = a + h * (
            _B1 * d_a1 + _B3 * d_a3 + _B4 * d_a4 + _B5 * d_a5 + _B6 * d_a6
        )
        k7 = rhs(sz_new, sm_new, phi_new, a_new)
        d_sz7, d_sm7, d_phi7, d_a7 = k7

        e_sz = h * (
            _E1 * d_sz1
            + _E3 * d_sz3
            + _E4 * d_sz4
            + _E5 * d_sz5
            + _E6 * d_sz6
            + _E7 * d_sz7
        )
        e_sm = h * (
            _E1 * d_sm1
            + _E3 * d_sm3
            + _E4 * d_sm4
            + _E5 * d_sm5
            + _E6 * d_sm6
            + _E7 * d_sm7
        )
        e_phi = h * (
            _E1 * d_phi1
            + _E3 * d_phi3
            + _E4 * d_phi4
            + _E5 * d_phi5
            + _E6 * d_phi6
            + _E7 * d_phi7
        )
        e_a = h * (
            _E1 * d_a1 + _E3 * d_a3 + _E4 * d_a4 + _E5 * d_a5 + _E6 * d_a6 + _E7 * d_a7
        )

        errsq = 0.0
        for err, old, new in (
            (e_sz, sz, sz_new),
            (e_sm.real, sm.real, sm_new.real),
            (e_sm.imag, sm.imag, sm_new.imag),
            (e_phi.real, phi.real, phi_new.real),
            (e_phi.imag, phi.imag, phi_new.imag),
            (e_a.real, a.real, a_new.real),
            (e_a.imag, a.imag, a_new.imag),
        ):
            mag_old = abs(old)
            mag_new = abs(new)
            mag = mag_old if mag_old > mag_new else mag_new
            w = err / (atol + rtol * mag)
            errsq += w * w
        err_norm = (errsq / 7.0) ** 0.5
        eta = err_norm / ACCEPT_FRACTION

        if eta <= 1.0:
            t = t_end if last else t + h
            sz, sm, phi, a = sz_new, sm_new, phi_new, a_new
            k1 = k7
            times.append(t)
            rows.append((sz, sm.real, sm.imag, phi.real, phi.imag, a.real, a.imag))

        fac = 5.0 if eta == 0.0 else 0.9 * eta**-0.2
        if fac > 5.0:
            fac = 5.0
        elif fac < 0.2:
            fac = 0.2
        h = h * fac
        if h < h_min and t < t_end:
            status = STATUS_UNDERFLOW
            break

    return np.asarray(times), np.asarray(rows), status
