"""Smoke test for the `qnl` extension module.

Build and install first:
    cd crates/py && maturin build --release -o dist && pip install dist/qnl-*.whl
Then run: python python/smoke_test.py
"""

import json
import math

import qnl


def close(a, b, tol):
    assert abs(a - b) <= tol * max(1.0, abs(b)), (a, b)


def main():
    f1 = qnl.Function("powerleft(1,0.5) on (0,1)")
    g1 = qnl.Function.power_right(0.0, 1.0, 1.0, 0.5)
    close(qnl.Space("weak-lp:2").norm(f1), 1.0, 1e-9)
    close(qnl.norm(qnl.Function.lincomb(1.0, f1, 1.0, g1), "weak-lp:2"), 2 ** 1.5, 1e-6)
    close(qnl.kolmogorov_functional(f1, 2.0), 2.0, 1e-9)
    assert qnl.Function(str(f1)) == f1

    chi = qnl.Function.char_fn(0.0, 2.0)
    phi = qnl.NFunction("expminus")
    close(qnl.weak_orlicz_norm(chi, phi), 1.0 / phi.inv(0.5), 1e-8)

    alpha, beta, _, _ = qnl.NFunction("power:2").indices()
    close(alpha, 2 ** -0.5, 1e-12)
    close(beta, 2 ** -0.5, 1e-12)

    try:
        qnl.norm(f1, "lp:2")
        raise AssertionError("expected divergence")
    except qnl.DivergentError:
        pass
    try:
        qnl.Function("char(1,0)")
        raise AssertionError("expected a parse error")
    except ValueError:
        pass

    e = qnl.estimate("nj", "lp:4", budget=500)
    assert math.sqrt(2) - 0.05 <= e["value"] <= math.sqrt(2) + 1e-9, e["value"]
    assert e["seed"] == 0

    cfg = json.dumps({"ps": [2.0], "skews": [[1.0, 1.0], [8.0, 8.0]], "phis": [], "pexps": [], "samples": 5})
    report = qnl.audit(cfg)
    verdicts = {i["claim_id"]: i["verdict"] for i in report["items"]}
    assert verdicts["cp.c1-bounds[p=2,lambda=8,mu=8]"] == "inconsistent"
    assert report["summary"]["total"] == len(report["items"])
    print(f"qnl {qnl.__version__}: smoke test passed ({len(verdicts)} audit items)")


if __name__ == "__main__":
    main()
