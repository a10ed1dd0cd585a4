#!/usr/bin/env python3
"""Generate the fifth-order Stokes coefficient reference vector.

The wave module evaluates the Skjelbreia-Hendrickson (1960) form of fifth
order Stokes theory, where the expansion parameter lam multiplies closed-form
coefficients A_ij, B_ij, C_i that depend only on kd.  Published versions of
those tables disagree in places (the 1960 paper is known to contain errata),
so this script does not copy any table.  Instead it re-derives every
coefficient numerically from the governing equations:

  * potential flow ansatz in the frame moving with the crest,
      phi = cbar * sum_n kappa_n(lam) cosh(n k (z + d)) sin(n theta)
      eta = (1/k) sum_n E_n(lam) cos(n theta)
  * kinematic free-surface condition (surface is a streamline),
  * dynamic free-surface condition (Bernoulli on the surface),
  * normalization: the first surface harmonic is exactly lam/k, the mean
    surface elevation is zero, and the potential carries no mean term
    (Stokes' first definition of celerity).

Orders 2..5 of the expansion are linear in the unknowns introduced at that
order, so the solver marches order by order, extracting Fourier-in-theta and
power-in-lam coefficients by exact DFT on a small complex circle in lam.
All arithmetic uses mpmath at 60 significant digits; the derived values are
accurate to well over 30 digits, far beyond double precision.

The closed-form expressions implemented in the C++ module are re-implemented
below and must agree with the derivation to 1e-30 relative, otherwise this
script exits nonzero.  The JSON written to data/stokes_coeffs_reference.json
contains the derived values at three kd points and is consumed by the unit
tests.

Run from the repository root:  python3 scripts/gen_wave_coeff_reference.py
"""

import json
import sys

import mpmath as mp

mp.mp.dps = 60

NTHETA = 32          # theta samples; harmonics above 5 up to 26 project to zero exactly
NLAM = 24            # lambda circle samples; truncation error ~ R**(NLAM-5)
R = mp.mpf("0.01")   # lambda circle radius

KD_POINTS = ["0.9", "1.5", "2.5"]

# power index: value[p] is the coefficient of lam**p
NPOW = 6


def poly_eval(coeffs, lam):
    acc = mp.mpf(0)
    for p in range(len(coeffs) - 1, -1, -1):
        acc = acc * lam + coeffs[p]
    return acc


class State:
    """Expansion state: kappa_n(lam), E_n(lam), cbar^2(lam)."""

    def __init__(self):
        self.kappa = {n: [mp.mpf(0)] * NPOW for n in range(1, 6)}
        self.E = {n: [mp.mpf(0)] * NPOW for n in range(1, 6)}
        self.csq = [mp.mpf(0)] * NPOW
        self.E[1][1] = mp.mpf(1)  # normalization: first surface harmonic is lam


def residuals(state, d, lam, theta):
    """Kinematic and dynamic surface residuals at one (lam, theta) point.

    K is the streamline value Psi/cbar at the surface (constant terms are
    projected away later); D is the Bernoulli head at the surface.
    """
    eta = mp.mpf(0)
    for n in range(1, 6):
        eta += poly_eval(state.E[n], lam) * mp.cos(n * theta)
    csq = poly_eval(state.csq, lam)
    cbar = mp.sqrt(csq)
    s = d + eta
    K = -eta
    u = mp.mpf(0)
    w = mp.mpf(0)
    for n in range(1, 6):
        kn = poly_eval(state.kappa[n], lam)
        K += kn * mp.sinh(n * s) * mp.cos(n * theta)
        u += n * kn * mp.cosh(n * s) * mp.cos(n * theta)
        w += n * kn * mp.sinh(n * s) * mp.sin(n * theta)
    u *= cbar
    w *= cbar
    D = ((u - cbar) ** 2 + w**2) / 2 + eta
    return K, D


def harmonic_lam_coeffs(state, d, m, harmonics):
    """Coefficient of lam**m cos(n theta) in (K, D) for each requested n."""
    thetas = [2 * mp.pi * i / NTHETA for i in range(NTHETA)]
    out = {}
    acc = {("K", n): mp.mpc(0) for n in harmonics}
    acc.update({("D", n): mp.mpc(0) for n in harmonics})
    for j in range(NLAM):
        lam = R * mp.expjpi(mp.mpf(2 * j) / NLAM)
        wgt = mp.expjpi(mp.mpf(-2 * j * m) / NLAM)
        Ks = []
        Ds = []
        for th in thetas:
            K, D = residuals(state, d, lam, th)
            Ks.append(K)
            Ds.append(D)
        for n in harmonics:
            pk = sum(Ks[i] * mp.cos(n * thetas[i]) for i in range(NTHETA)) * 2 / NTHETA
            pd = sum(Ds[i] * mp.cos(n * thetas[i]) for i in range(NTHETA)) * 2 / NTHETA
            acc[("K", n)] += pk * wgt
            acc[("D", n)] += pd * wgt
    for key, val in acc.items():
        val = val / (NLAM * R**m)
        assert abs(mp.im(val)) < mp.mpf(10) ** (-25), "imaginary residue too large"
        out[key] = mp.re(val)
    return out


# (order, unknown slots, harmonics) for the linear marching solve
ORDERS = [
    (2, [("kappa", 2, 2), ("E", 2, 2)], [2]),
    (3, [("kappa", 1, 3), ("kappa", 3, 3), ("E", 3, 3), ("csq", None, 2)], [1, 3]),
    (4, [("kappa", 2, 4), ("kappa", 4, 4), ("E", 2, 4), ("E", 4, 4)], [2, 4]),
    (5, [("kappa", 1, 5), ("kappa", 3, 5), ("kappa", 5, 5),
         ("E", 3, 5), ("E", 5, 5), ("csq", None, 4)], [1, 3, 5]),
]


def set_slot(state, slot, value):
    kind, n, p = slot
    if kind == "kappa":
        state.kappa[n][p] = value
    elif kind == "E":
        state.E[n][p] = value
    else:
        state.csq[p] = value


def derive(dval):
    d = mp.mpf(dval)
    st = State()
    # first order in closed form: linear theory
    st.kappa[1][1] = 1 / mp.sinh(d)
    st.csq[0] = mp.tanh(d)
    for order, slots, harmonics in ORDERS:
        keys = [("K", n) for n in harmonics] + [("D", n) for n in harmonics]
        base = harmonic_lam_coeffs(st, d, order, harmonics)
        b = mp.matrix([base[k] for k in keys])
        A = mp.matrix(len(keys), len(slots))
        for col, slot in enumerate(slots):
            set_slot(st, slot, mp.mpf(1))
            probe = harmonic_lam_coeffs(st, d, order, harmonics)
            set_slot(st, slot, mp.mpf(0))
            for row, k in enumerate(keys):
                A[row, col] = probe[k] - base[k]
        x = mp.lu_solve(A, -b)
        for col, slot in enumerate(slots):
            set_slot(st, slot, x[col])
    return {
        "A11": st.kappa[1][1], "A13": st.kappa[1][3], "A15": st.kappa[1][5],
        "A22": st.kappa[2][2], "A24": st.kappa[2][4],
        "A33": st.kappa[3][3], "A35": st.kappa[3][5],
        "A44": st.kappa[4][4], "A55": st.kappa[5][5],
        "B22": st.E[2][2], "B24": st.E[2][4],
        "B33": st.E[3][3], "B35": st.E[3][5],
        "B44": st.E[4][4], "B55": st.E[5][5],
        "C1": st.csq[2] / st.csq[0], "C2": st.csq[4] / st.csq[0],
    }


def closed_form(dval):
    """Closed-form coefficient set implemented by the C++ wave module."""
    d = mp.mpf(dval)
    c = mp.cosh(d)
    s = mp.sinh(d)
    c2 = c * c
    den35 = 6 * c2 - 1
    den55 = 8 * c2 * c2 - 11 * c2 + 3
    return {
        "A11": 1 / s,
        "A13": -c2 * (5 * c2 + 1) / (8 * s**5),
        "A15": -(1184 * c2**5 - 1440 * c2**4 - 1992 * c2**3
                 + 2641 * c2**2 - 249 * c2 + 18) / (1536 * s**11),
        "A22": 3 / (8 * s**4),
        "A24": (192 * c2**4 - 424 * c2**3 - 312 * c2**2
                + 480 * c2 - 17) / (768 * s**10),
        "A33": (13 - 4 * c2) / (64 * s**7),
        "A35": (512 * c2**6 + 4224 * c2**5 - 6800 * c2**4 - 12808 * c2**3
                + 16704 * c2**2 - 3154 * c2 + 107) / (4096 * s**13 * den35),
        "A44": (80 * c2**3 - 816 * c2**2 + 1338 * c2 - 197) / (1536 * s**10 * den35),
        "A55": -(2880 * c2**5 - 72480 * c2**4 + 324000 * c2**3 - 432000 * c2**2
                 + 163470 * c2 - 16245) / (61440 * s**11 * den35 * den55),
        "B22": c * (2 * c2 + 1) / (4 * s**3),
        "B24": c * (272 * c2**4 - 504 * c2**3 - 192 * c2**2
                    + 322 * c2 + 21) / (384 * s**9),
        "B33": 3 * (8 * c2**3 + 1) / (64 * s**6),
        "B35": (88128 * c2**7 - 208224 * c2**6 + 70848 * c2**5 + 54000 * c2**4
                - 21816 * c2**3 + 6264 * c2**2 - 54 * c2 - 81)
               / (12288 * s**12 * den35),
        "B44": c * (768 * c2**5 - 448 * c2**4 - 48 * c2**3 + 48 * c2**2
                    + 106 * c2 - 21) / (384 * s**9 * den35),
        "B55": (192000 * c2**8 - 262720 * c2**7 + 83680 * c2**6 + 20160 * c2**5
                - 7280 * c2**4 + 7160 * c2**3 - 1800 * c2**2 - 1050 * c2 + 225)
               / (12288 * s**10 * den35 * den55),
        "C1": (8 * c2**2 - 8 * c2 + 9) / (8 * s**4),
        # the 1960 table printed +2592 here; the derivation confirms -2592
        "C2": (3840 * c2**6 - 4096 * c2**5 - 2592 * c2**4 - 1008 * c2**3
               + 5944 * c2**2 - 1830 * c2 + 147) / (512 * s**10 * den35),
    }


def main():
    entries = []
    worst = mp.mpf(0)
    worst_key = None
    for kd in KD_POINTS:
        derived = derive(kd)
        closed = closed_form(kd)
        entry = {"kd": kd, "coefficients": {}}
        for key in sorted(derived):
            dv = derived[key]
            cv = closed[key]
            rel = abs(dv - cv) / max(abs(dv), mp.mpf(1) * 10**-30)
            if rel > worst:
                worst = rel
                worst_key = (kd, key)
            entry["coefficients"][key] = mp.nstr(dv, 36)
            print(f"kd={kd} {key:4s} derived={mp.nstr(dv, 25):32s} "
                  f"closed={mp.nstr(cv, 25):32s} rel={mp.nstr(rel, 3)}")
        entries.append(entry)
    print(f"worst closed-form deviation: {mp.nstr(worst, 5)} at {worst_key}")
    out = {
        "description": "Fifth-order Stokes coefficients (Skjelbreia-Hendrickson "
                       "form) derived from the free-surface boundary conditions "
                       "by the order-marching solver in "
                       "scripts/gen_wave_coeff_reference.py",
        "precision_digits": 36,
        "points": entries,
    }
    with open("data/stokes_coeffs_reference.json", "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    if worst > mp.mpf(10) ** -30:
        print("FAIL: closed forms disagree with the derivation", file=sys.stderr)
        return 1
    print("closed forms verified; reference vector written")
    return 0


if __name__ == "__main__":
    sys.exit(main())
