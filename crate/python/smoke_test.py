"""Smoke test for the pyrosenlin extension.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import json

import numpy as np

import pyrosenlin as rl


def scalar(z):
    return [[complex(z)]]


def main():
    # A = λ² + 1, B = C = 1, D = λ; det S = λ³ + λ + 1
    r2 = rl.Realization([scalar(1), scalar(0), scalar(1)], scalar(1), scalar(1), [scalar(0), scalar(1)])
    assert r2.dims() == (2, 1, 1, 1)
    assert abs(r2.transfer(2.0)[0][0] - (1 / 5 + 2)) < 1e-14

    expected = np.roots([1, 0, 1, 1])
    zeros = r2.system_zeros()
    assert len(zeros) == 3
    for e in expected:
        assert min(abs(z - e) for z in zeros) < 1e-12

    for build in (rl.build_c1, rl.build_c2, rl.build_dl):
        p = build(r2)
        rep = rl.verify_linearization(p, r2)
        assert rep.passed, rep.reason
        assert rep.max_eig_error < 1e-8
        eigs = p.eigenvalues()
        assert len(eigs) == 3
        for e in expected:
            assert min(abs(z - e) for z in eigs) < 1e-10
        assert json.loads(rep.json)["verdict"] == "pass"

    # an L1 member with chosen ansatz vector is recovered by membership
    p = rl.build_pencil_l1(r2, [1.0, 2.0], [3.0])
    v, w, residual = rl.membership(p, r2)
    assert np.allclose(v, [1, 2]) and np.allclose(w, [3]) and residual < 1e-12
    assert rl.residual_ansatz(p, r2, [0.5j, 0.7, -0.3 + 0.4j]) < 1e-12

    for lam, x, res in rl.recover_right_eigenvectors(rl.build_c1(r2), r2):
        assert res < 1e-8, (lam, x, res)

    assert rl.dim_space(2, 2, 2, 1) == 14
    s = rl.sample_space(r2, 7)
    assert np.allclose(s.X, rl.sample_space(r2, 7).X)

    phi = np.array(rl.phi_matrix("chebyshev", 4))
    assert phi.shape == (4, 4)
    # Φ maps the monomial vector to Chebyshev values: the last row is T3
    lam = 0.3
    t = phi @ np.array([lam**3, lam**2, lam, 1])
    assert abs(t[3] - np.cos(3 * np.arccos(lam))) < 1e-12

    try:
        rl.build_symmetric(rl.Realization([scalar(-2), scalar(1)], scalar(1), scalar(1), [scalar(0), scalar(1)]))
    except ValueError:
        pass
    else:
        raise AssertionError("unstructured data accepted by build_symmetric")

    print("pyrosenlin smoke test: ok")


if __name__ == "__main__":
    main()
