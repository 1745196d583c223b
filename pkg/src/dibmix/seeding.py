"""Hierarchical seed derivation.

Every source of randomness in the package draws from a master seed through
``derive_seed(master, *path)``, where ``path`` is a fixed tuple of small
integers naming the consumer.  The first path element is a stream tag:

========  =======================================================
tag       consumer
========  =======================================================
0         solver restart r          -> (0, r)
1         row subsampling           -> (1,)
2         benchmark data generation -> (2, cell_index, replicate)
3         benchmark method run      -> (3, cell_index, replicate, method_index)
========  =======================================================

The derivation is ``numpy.random.SeedSequence([master, *path])`` reduced to a
single unsigned 64-bit integer, so any individual run (one restart, one
replicate) can be reproduced in isolation without replaying the others.
"""

import numpy as np

STREAM_RESTART = 0
STREAM_SUBSAMPLE = 1
STREAM_DATAGEN = 2
STREAM_METHOD = 3


def derive_seed(master: int, *path: int) -> int:
    """Derive a child seed from ``master`` along a fixed integer path."""
    ss = np.random.SeedSequence([int(master), *(int(p) for p in path)])
    return int(ss.generate_state(1, np.uint64)[0])
