#!/usr/bin/env python3
"""Smoke test for the t32py extension module.

Build the module first:

    cargo build -p t32-py --release --features extension-module

then run this script with any Python 3:

    python3 python/smoke_test.py
"""

import math
import json
import pathlib
import shutil
import sys
import tempfile
from fractions import Fraction


def import_module():
    root = pathlib.Path(__file__).resolve().parents[1]
    candidates = [
        root / "target" / "release" / "libt32py.so",
        root / "target" / "debug" / "libt32py.so",
    ]
    so = next((p for p in candidates if p.exists()), None)
    if so is None:
        sys.exit(
            "libt32py.so not found; build it with\n"
            "  cargo build -p t32-py --release --features extension-module"
        )
    staging = pathlib.Path(tempfile.mkdtemp(prefix="t32py-"))
    shutil.copy(so, staging / "t32py.so")
    sys.path.insert(0, str(staging))
    import t32py  # noqa: E402

    return t32py


def main():
    t = import_module()

    # numeration
    assert t.expand(0) == ""
    assert t.expand(8) == "21011"
    assert t.expand(26) == "2122111"
    assert t.sum_of_digits(17) == 9
    assert t.sum_of_digits(25) == 11
    num, den = t.value_of("212")
    assert Fraction(num, den) == 4
    for n in range(2000):
        num, den = t.value_of(t.expand(n))
        assert Fraction(num, den) == n
    assert t.children(0) == [(0, 0, True), (1, 2, False)]
    assert t.children(4) == [(6, 0, False), (7, 2, False)]
    assert t.n_k(2, 3) == 8
    assert t.parity_vector(2, 3) == [0, 1, 1, 0]
    assert t.q_inverse(3) == 11

    # words and operators
    t32 = t.Word.named("t32")
    assert t32.prefix(30) == "001110111110110111110000110110"
    for backend in ("dfao", "block", "relations"):
        assert t.Word.t32(backend).prefix(200) == t32.prefix(200)
    assert t.Word.named("tprime").prefix(25) == "0100101011011010101011011"
    assert t.Word.named("kolakoski").prefix(13) == "2211212212211"
    assert t.Word.named("t32", ops=["delta"]).prefix(30) == "010011000011011000010001011010"
    assert t.Word.named("t32", ops=["slide2"]).prefix(30) == "013321333321321333320001321320"
    assert t.Word.named("t32-mod", m=4).prefix(30) == "023310131130132311130200132130"
    assert t.complement("001") == "110"
    assert t.reverse("001") == "100"

    rules = "00 -> 001\n01 -> 000\n10 -> 111\n11 -> 110\n"
    assert t.Word.from_rules(rules, 0).prefix(30) == t32.prefix(30)

    # Toeplitz structure of the difference word
    delta = t.Word.named("t32", ops=["delta"])
    pattern = t.Word.toeplitz("01?0?10??")
    assert pattern.prefix(2000) == delta.prefix(2000)
    assert t.toeplitz_frequency("01?0?10??", 0) == (3, 5)
    assert t.toeplitz_frequency("01?0?10??", 1) == (2, 5)
    assert abs(t.complexity_exponent("01?0?10??") - math.log(3) / math.log(1.5)) < 1e-12

    # filtered counters and the exact desubstitution identity
    assert t.counter_table("t32", 1, 30)[0] == [5, 6]
    assert t.counter_table("t32", 2, 30)[0] == [2, 4, 3, 2]
    assert t.desubstitution_max_residual(4, 30000) == 0

    # factor analytics
    report = t.factor_report("t32", 6, 200_000)
    assert report["saturated"]
    assert report["closed_complement"]
    assert report["closed_reversal"]
    assert report["both_parities"]

    # the spectral bound
    g = [Fraction(n, d) for n, d in t.mtilde_coefficients(2)]
    assert g == [Fraction(c, 9) for c in [1, 0, -1, -1, 1, 1, 1, -1, -1, 0, 1]]
    assert abs(t.zeta_k(2, 0.0) - 28 / 81) < 1e-12
    for i in range(100):
        s = i / 100
        assert abs(t.zeta_k(2, s) - t.zeta2_closed_form(s)) < 1e-12
    grid_max, certified = t.zeta_sup(2, 1 << 16)
    assert abs(grid_max - 35 / 54) < 1e-6
    assert certified < 20 / 27
    assert abs(t.multiplier_m(0, 0) - (1 / 3)) < 1e-12
    worst = t.contraction_worst_ratio(level=10, trials=50, seed=1)
    assert 0 < worst < 20 / 27

    # check registry end to end
    report = json.loads(t.verify_json(length=30_000, checks=["counter-table", "zeta2"]))
    assert report["hard_failures"] == 0
    assert {c["name"] for c in report["checks"]} == {"counter-table", "zeta2"}

    print("t32py smoke test: all assertions passed")


if __name__ == "__main__":
    main()
