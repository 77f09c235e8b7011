"""Adaptive Dormand-Prince 5(4) stepper for small complex systems.

States are plain tuples of Python complex numbers: for systems of dimension
4..18 that is measurably faster than ndarray arithmetic, and every caller in
this package fits that size.
"""

from .errors import IntegrationError

# Dormand-Prince coefficients (RK5(4)7M).
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# b5 - b4: weights of the embedded error estimate
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def _combine(y, h, ks, coeffs):
    n = len(y)
    out = list(y)
    for k, c in zip(ks, coeffs):
        if c == 0.0:
            continue
        hc = h * c
        for i in range(n):
            out[i] += hc * k[i]
    return tuple(out)


def integrate(rhs, y0, x0, x1, rel_tol, abs_tol, max_steps, checkpoints=None,
              on_sample=None):
    """Integrate y' = rhs(x, y) from x0 to x1 (x0 < x1).

    checkpoints: optional ascending abscissae in [x0, x1]; accepted steps land
    on each exactly and on_sample(x, y) fires there. Returns the final state.
    """
    span = x1 - x0
    if span <= 0:
        raise ValueError("empty integration interval")
    pending = sorted(checkpoints) if checkpoints else []
    ck = 0
    while ck < len(pending) and pending[ck] <= x0:
        if on_sample is not None and pending[ck] == x0:
            on_sample(x0, tuple(y0))
        ck += 1

    x = x0
    y = tuple(y0)
    n = len(y)
    f = rhs(x, y)
    h = min(0.01, span)
    steps = 0
    while x < x1:
        if steps >= max_steps:
            raise IntegrationError(
                f"step budget {max_steps} exhausted at x={x:.6g}", last_x=x)
        target = x1 if ck >= len(pending) else min(pending[ck], x1)
        clamped = h >= target - x
        h_used = (target - x) if clamped else h
        if x + h_used == x:
            raise IntegrationError(f"step size underflow at x={x:.6g}", last_x=x)

        ks = [f]
        for s in range(1, 7):
            yi = _combine(y, h_used, ks, _A[s])
            ks.append(rhs(x + _C[s] * h_used, yi))
        y5 = _combine(y, h_used, ks, _B5)

        err = 0.0
        for i in range(n):
            e = abs(h_used * (_E[0] * ks[0][i] + _E[2] * ks[2][i]
                              + _E[3] * ks[3][i] + _E[4] * ks[4][i]
                              + _E[5] * ks[5][i] + _E[6] * ks[6][i]))
            scale = abs_tol + rel_tol * max(abs(y[i]), abs(y5[i]))
            q = e / scale
            if q > err:
                err = q
        steps += 1

        if err == 0.0:
            factor = _MAX_FACTOR
        else:
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))

        if err <= 1.0:
            x = target if clamped else x + h_used
            y = y5
            f = ks[6]  # FSAL
            while ck < len(pending) and pending[ck] <= x:
                if on_sample is not None:
                    on_sample(x, y)
                ck += 1
            # a checkpoint-clamped step must not shrink the natural proposal
            h = min(max(h, h_used * factor) if clamped else h_used * factor, span)
        else:
            h = h_used * factor
    return y
