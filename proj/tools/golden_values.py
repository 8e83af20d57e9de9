#!/usr/bin/env python3
"""Regenerates tests/golden/*.json with mpmath (50 digits).

lambda_golden.json: the decoherence parameter for a unit Gaussian light envelope,
  Lambda = 1 - int dz |g~(z)|^2 beta / (beta - i (z + k0 delta)),  beta = alpha delta,
  by adaptive quadrature, cross-checked against 1 - sqrt(pi) beta w(k0 delta + i beta).
faddeeva_golden.json: w(z) at assorted points.
"""
import json
import os
import sys

import mpmath as mp

mp.mp.dps = 50


def lam_quad(beta, a):
    beta = mp.mpf(beta)
    a = mp.mpf(a)
    f = lambda z: mp.exp(-z * z) / mp.sqrt(mp.pi) * beta / (beta - 1j * (z + a))
    pts = sorted({-mp.inf, -a - 1, -a, -a + 1, mp.inf})
    return 1 - mp.quad(f, pts)


def lam_closed(beta, a):
    beta = mp.mpf(beta)
    a = mp.mpf(a)
    zeta = mp.mpc(a, beta)
    w = mp.exp(-zeta ** 2) * mp.erfc(-1j * zeta)
    return 1 - mp.sqrt(mp.pi) * beta * w


def main(out_dir):
    cases = []
    for beta in ["0.2", "0.5", "1", "2"]:
        for a in ["0", "0.002", "0.1", "0.5", "2"]:
            q = lam_quad(beta, a)
            c = lam_closed(beta, a)
            assert abs(q - c) < mp.mpf("1e-30"), (beta, a, q, c)
            cases.append({"alpha_delta": float(beta), "k0_delta": float(a),
                          "re": float(mp.re(q)), "im": float(mp.im(q))})
    with open(os.path.join(out_dir, "lambda_golden.json"), "w") as fh:
        json.dump({"envelope": "gaussian", "cases": cases}, fh, indent=1)

    pts = [(0, 0), (0.5, 0.5), (1e-3, 2), (3, 1e-4), (-2.5, 0.3), (7, 7), (9.9, 0.01),
           (10.5, 0.2), (25, 3), (0.2, 15), (-40, 1), (1.5, -0.7), (4, 12), (100, 100)]
    vals = []
    for x, y in pts:
        z = mp.mpc(x, y)
        w = mp.exp(-z ** 2) * mp.erfc(-1j * z)
        vals.append({"x": x, "y": y, "re": float(mp.re(w)), "im": float(mp.im(w))})
    with open(os.path.join(out_dir, "faddeeva_golden.json"), "w") as fh:
        json.dump({"points": vals}, fh, indent=1)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "tests", "golden"))
