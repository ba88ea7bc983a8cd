//! Runs the bindings inside an embedded interpreter.

use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pyrosenlin::pyrosenlin;

#[test]
fn bindings_round_trip() {
    pyo3::append_to_inittab!(pyrosenlin);
    Python::initialize();
    Python::attach(|py| {
        py.run(
            c_str!(
                r#"
import pyrosenlin as rl
one = [[1 + 0j]]
zero = [[0j]]
r2 = rl.Realization([one, zero, one], one, one, [zero, one])
assert r2.dims() == (2, 1, 1, 1)
p = rl.build_c1(r2)
rep = rl.verify_linearization(p, r2)
assert rep.passed and rep.max_eig_error < 1e-8, rep.reason
assert len(p.eigenvalues()) == 3
v, w, res = rl.membership(p, r2)
assert abs(v[0] - 1) < 1e-12 and abs(v[1]) < 1e-12 and res < 1e-12
assert rl.dim_space(1, 5, 1, 3) == 2
try:
    rl.dim_space(0, 1, 1, 1)
    raise AssertionError("m = 0 accepted")
except ValueError:
    pass
"#
            ),
            None,
            None,
        )
        .unwrap();
    });
}
