"""Product-kernel density estimation on mixed data.

Builds a tiny mixed dataset by hand and shows how the smoothed
similarity p(y|x) reacts to the bandwidths: a Gaussian kernel on the
continuous part and an Aitchison-Aitken kernel on the categorical part.
"""

import numpy as np

from dibmix import (
    CATEGORICAL,
    CONTINUOUS,
    Bandwidths,
    MixedDataset,
    VariableSchema,
    estimate_conditional,
)


def build_dataset():
    # Five points: two tight continuous groups, categorical flag agrees
    # with the grouping except for the last point.
    schema = (
        VariableSchema("x", CONTINUOUS),
        VariableSchema("flag", CATEGORICAL, ("off", "on")),
    )
    continuous = np.array([[0.0], [0.2], [4.0], [4.1], [4.2]])
    categorical = np.array([[0], [0], [1], [1], [0]])
    return MixedDataset(schema=schema, continuous=continuous, categorical=categorical)


def show(ds, s, lam):
    density = estimate_conditional(ds, Bandwidths(s=s, lam=np.array([lam])))
    print(f"\ns = {s:.2f}, lambda = {lam:.2f}")
    print("p(y|x) rows (each row sums to 1):")
    for i, row in enumerate(density.matrix):
        cells = " ".join(f"{v:.3f}" for v in row)
        print(f"  point {i}: {cells}")


def main():
    ds = build_dataset()
    print(f"dataset: n={ds.n}, {ds.p_cont} continuous, {ds.p_cat} categorical")

    # Narrow bandwidths: mass concentrates on near-identical points.
    show(ds, s=0.3, lam=0.05)
    # Wide bandwidths: rows flatten toward uniform.
    show(ds, s=5.0, lam=0.45)
    # lambda = 0 turns the categorical kernel into a hard indicator, so
    # point 4 (continuous group B, flag "off") shares no categorical mass
    # with its continuous neighbours.
    show(ds, s=0.3, lam=0.0)


if __name__ == "__main__":
    main()
