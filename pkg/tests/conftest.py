import random

import pytest

from npnas.kernel import GApp, GAbs, GTuple, GUNIT, Name
from npnas.oracle import small_signature


@pytest.fixture(scope="session")
def sig():
    return small_signature()


def random_gtree(rng: random.Random, depth: int = 4, pool: int = 3):
    """A random ground tree of the small signature's `tm` sort, with free
    names among the first `pool` names of sort nm."""
    choices = ["Z", "V"]
    if depth > 0:
        choices += ["L", "P", "L", "P"]
    match rng.choice(choices):
        case "Z":
            return GApp("Z", GUNIT)
        case "V":
            return GApp("V", Name("nm", rng.randrange(pool)))
        case "L":
            binder = Name("nm", rng.randrange(pool))
            return GApp("L", GAbs(binder, random_gtree(rng, depth - 1, pool)))
        case _:
            return GApp("P", GTuple((random_gtree(rng, depth - 1, pool),
                                     random_gtree(rng, depth - 1, pool))))
