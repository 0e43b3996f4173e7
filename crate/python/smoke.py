"""Smoke test for the tdinv extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import tdinv


def main():
    q = tdinv.QuadraticForm("diag(1,1,1,1)@QQ")
    print(q, "witt index", q.witt_index(), "pfister", q.pfister()["verdict"])

    d = tdinv.Algebra("quat(a=-1,b=2)@QQ")
    print(d, "split:", d.is_split(), "norm form", d.norm_form().coefficients())

    h = tdinv.HermitianForm("diag(1,-1)@quat(a=-1,b=2)@QQ")
    print(h, "hyperbolic:", h.is_hyperbolic(), "isotropic vector:", h.isotropic_vector())

    sigma = tdinv.Involution("pfister_b(3)@quat(a=-1,b=2)@QQ")
    print("kind", sigma.kind, "degree", sigma.degree, sigma.totally_decomposable())

    report = tdinv.battery_symplectic("a=-1,b=2@QQ", "pfister_b(2,3)")
    print("symplectic battery:", {k: c["value"] for k, c in report["conditions"].items()}, report["verdict"]["kind"])
    assert report["verdict"]["kind"] == "AllEquivalent"

    report = tdinv.battery_unitary("a=-1@QQ", "diag(1,1,1,-1)")
    print("unitary battery:", {k: c["value"] for k, c in report["conditions"].items()}, report["verdict"]["kind"])
    assert not any(c["value"] for c in report["conditions"].values())

    code, rep = tdinv.run("qform isotropic 'diag(1,1,-2)@QQ'")
    assert code == 0 and rep["verdicts"]["isotropic"] is True
    print("cli run ok")


if __name__ == "__main__":
    main()
