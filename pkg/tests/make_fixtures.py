"""Regenerate the CLI fixture corpus in tests/fixtures (run from the repo root).

The files are committed; ``test_cli.py`` checks that regeneration is a no-op.
"""

import json
import os
import sys

import numpy as np

from torsionkit import io, lie
from torsionkit.exterior import KForm
from torsionkit.torsion import TorsionTensor, embed_skew, embed_vectorial

HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
RANDOM_TAU_SEED = 7


def random_tau(seed=RANDOM_TAU_SEED, n=6):
    rng = np.random.default_rng(seed)
    return KForm(n, 3, rng.normal(size=20))


def fixtures() -> dict:
    xi_tau = embed_vectorial([1.0, 0.0, 0.0, 0.0]) + embed_skew(KForm.basis(4, 0, 1, 2))
    # su(2) in the basis (e1, e1 + e2, e3): metric [[1,1,0],[1,2,0],[0,0,1]]
    p = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    skewed = np.einsum("ia,jb,ijk,ck->abc", p, p, lie.su2().structure, np.linalg.inv(p))
    gram_file = io.algebra_to_obj(lie.MetricLieAlgebra(skewed, "su2-skewed"))
    gram_file["gram"] = (p.T @ p).tolist()
    return {
        "su2.json": io.algebra_to_obj(lie.su2()),
        "su3.json": io.algebra_to_obj(lie.su3()),
        "so4.json": io.algebra_to_obj(lie.so(4)),
        "su2_gram.json": gram_file,
        "su2_tau.json": io.form_to_obj(lie.canonical_three_form(lie.su2())),
        "su3_tau.json": io.form_to_obj(lie.canonical_three_form(lie.su3())),
        "composite10_tau.json": io.form_to_obj(KForm.basis(10, 0, 1, 2) * 2.0 +
                                               KForm.basis(10, 3, 4, 5)),
        "zero_tau5.json": io.form_to_obj(KForm.zero(5, 3)),
        "random_tau_seed7.json": io.form_to_obj(random_tau()),
        "torsion_xi_tau_n4.json": io.torsion_to_obj(xi_tau),
        "torsion_zero_n3.json": io.torsion_to_obj(TorsionTensor.zero(3)),
        "torsion_bad_index.json": [{"dim": 3, "degree": 2, "coeffs": [[1, 5, 1.0]]},
                                   {"dim": 3, "degree": 2, "coeffs": []},
                                   {"dim": 3, "degree": 2, "coeffs": []}],
    }


def main():
    os.makedirs(HERE, exist_ok=True)
    for name, obj in fixtures().items():
        with open(os.path.join(HERE, name), "w", encoding="utf-8") as fh:
            fh.write(io.dumps(obj))
    return 0


if __name__ == "__main__":
    sys.exit(main())
