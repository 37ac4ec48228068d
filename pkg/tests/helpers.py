"""Test helpers: record builders, instrumented sources, value generators."""

from __future__ import annotations

import math
import random
import struct

from hypothesis import strategies as st

from fieldstream import Datastream, Record, Tensor


def rec(**fields) -> Record:
    return Record(**fields)


def recs(dicts) -> list[Record]:
    return [Record.from_values(d) for d in dicts]


def ds(items) -> Datastream:
    return Datastream(iter(items))


class CountingSource:
    """Iterable that counts how many elements it has yielded."""

    def __init__(self, items):
        self.items = list(items)
        self.pulls = 0

    def __iter__(self):
        for x in self.items:
            self.pulls += 1
            yield x

    def stream(self) -> Datastream:
        return Datastream(self)


def float_bits(x: float) -> bytes:
    return struct.pack("<d", x)


def strict_equal(a, b) -> bool:
    """Deep equality that distinguishes bool/int/float/str and compares float bits."""
    if type(a) is not type(b):
        return False
    if isinstance(a, float):
        return float_bits(a) == float_bits(b)
    if isinstance(a, dict):
        if set(a) != set(b):
            return False
        return all(strict_equal(a[k], b[k]) for k in a)
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(strict_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, Tensor):
        return a.shape == b.shape and all(
            float_bits(x) == float_bits(y) for x, y in zip(a.data, b.data)
        )
    return a == b


_KEY_POOL = ["a", "b", "k1", "k2", "name", "x9"]  # never "t": reserved tensor marker
_TEXT_POOL = "abc xyzXYZ0189,;é世\U0001f600'\"\\\n\t"


def random_scalar(rng: random.Random):
    kind = rng.randrange(6)
    if kind == 0:
        return None
    if kind == 1:
        return rng.random() < 0.5
    if kind == 2:
        return rng.randint(-(10**9), 10**9)
    if kind == 3:
        # mix ordinary magnitudes with denormals, negative zero and infinities
        special = [0.0, -0.0, 1.5, -2.25, 5e-324, 1e300, float("inf"), float("-inf")]
        if rng.random() < 0.3:
            return rng.choice(special)
        return rng.uniform(-1e6, 1e6)
    if kind == 4:
        return "".join(rng.choice(_TEXT_POOL) for _ in range(rng.randrange(0, 12)))
    shape = tuple(rng.randrange(0, 4) for _ in range(rng.randrange(0, 3)))
    n = math.prod(shape)
    return Tensor(shape, [rng.uniform(-100, 100) for _ in range(n)])


def random_value(rng: random.Random, depth: int = 3):
    """Arbitrary field value, depth-bounded; NaN excluded (NaN != NaN)."""
    if depth > 0 and rng.random() < 0.4:
        if rng.random() < 0.5:
            return [random_value(rng, depth - 1) for _ in range(rng.randrange(0, 4))]
        keys = rng.sample(_KEY_POOL, rng.randrange(0, 4))
        return {k: random_value(rng, depth - 1) for k in keys}
    return random_scalar(rng)


# hypothesis strategies -------------------------------------------------------

scalar_values = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-(10**12), max_value=10**12),
    st.floats(allow_nan=False),
    st.text(max_size=12),
)


def tensors(max_side: int = 3, max_rank: int = 2):
    def build(shape):
        n = math.prod(shape)
        return st.lists(
            st.floats(allow_nan=False, allow_infinity=False, width=64),
            min_size=n,
            max_size=n,
        ).map(lambda data: Tensor(shape, data))

    return st.lists(
        st.integers(min_value=0, max_value=max_side), min_size=0, max_size=max_rank
    ).map(tuple).flatmap(build)


values = st.recursive(
    st.one_of(scalar_values, tensors()),
    lambda children: st.one_of(
        st.lists(children, max_size=3),
        st.dictionaries(st.sampled_from(_KEY_POOL), children, max_size=3),
    ),
    max_leaves=8,
)


# randomized law-check cases ---------------------------------------------------
#
# Pure unary functions are drawn from a small typed family so chains stay
# well-defined on int/float/str values.

_UNARY_FAMILY = {
    "int": [
        (lambda x: x + 3, "int"),
        (lambda x: x * -2, "int"),
        (lambda x: x - 7, "int"),
        (lambda x: abs(x) + 1, "int"),
        (lambda x: str(x), "str"),
        (lambda x: x / 4, "float"),
    ],
    "float": [
        (lambda x: x * 0.5, "float"),
        (lambda x: x + 1.25, "float"),
        (lambda x: -x, "float"),
        (lambda x: str(x), "str"),
    ],
    "str": [
        (lambda x: x + "!", "str"),
        (lambda x: x.upper(), "str"),
        (lambda x: x[::-1], "str"),
        (lambda x: len(x), "int"),
    ],
}

_KINDS = list(_UNARY_FAMILY)


def random_kind(rng: random.Random) -> str:
    return rng.choice(_KINDS)


def random_scalar_of(rng: random.Random, kind: str):
    if kind == "int":
        return rng.randint(-50, 50)
    if kind == "float":
        return round(rng.uniform(-20, 20), 3)
    return "".join(rng.choice("abcdef") for _ in range(rng.randrange(0, 6)))


def random_unary(rng: random.Random, in_kind: str):
    """A pure function accepting ``in_kind`` plus its output kind."""
    return rng.choice(_UNARY_FAMILY[in_kind])


def random_unary_chain(rng: random.Random, in_kind: str, length: int):
    fns = []
    kind = in_kind
    for _ in range(length):
        fn, kind = random_unary(rng, kind)
        fns.append(fn)

    def chained(x, _fns=tuple(fns)):
        for fn in _fns:
            x = fn(x)
        return x

    return chained, kind


def random_record_fn(rng: random.Random, in_kind: str, name_pool=("p", "q", "z")):
    """A pure Value -> Record function building 1..3 derived fields."""
    plan = []
    for name in rng.sample(list(name_pool), rng.randrange(1, len(name_pool) + 1)):
        fn, _ = random_unary(rng, in_kind)
        plan.append((name, fn))

    def f(x, _plan=tuple(plan)):
        r = Record()
        for name, fn in _plan:
            r.set_value(name, fn(x))
        return r

    return f


def random_law_record(rng: random.Random, u: str, u_kind: str, forbidden=()):
    """Record of width <= 5 containing ``u``; extra fields avoid ``forbidden``."""
    r = Record()
    r.set_value(u, random_scalar_of(rng, u_kind))
    extras = [n for n in ("e1", "e2", "e3", "e4") if n not in forbidden and n != u]
    for name in rng.sample(extras, rng.randrange(0, min(4, len(extras)) + 1)):
        r.set_value(name, random_scalar_of(rng, random_kind(rng)))
    return r
