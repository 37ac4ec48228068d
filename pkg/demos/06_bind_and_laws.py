#!/usr/bin/env python3
# bind_field is the primitive underneath apply: it maps one field's value to a
# whole record and merges it in. apply(u, v, f) is the special case that
# produces {u: x, v: f(x)}. The law checks make the correspondence executable.

import random

import fieldstream as fs
from fieldstream import Record

# bind merges whatever the function returns; colliding fields are replaced.
rows = (
    fs.Datastream([2, 3])
    | fs.as_field("u")
    | fs.bind_field("u", lambda x: Record(double=x * 2, parity="even" if x % 2 == 0 else "odd"))
    | fs.as_list
)
for r in rows:
    print("bound record:", r.to_dict())

# apply is bind with a one-field record; the two agree on every stream.
f = lambda x: x + 100
via_apply = fs.Datastream([1, 2]) | fs.as_field("u") | fs.apply("u", "v", f) | fs.as_list
via_bind = (
    fs.Datastream([1, 2])
    | fs.as_field("u")
    | fs.bind_field("u", lambda x: Record(u=x, v=f(x)))
    | fs.as_list
)
print("apply == bind encoding:", all(
    fs.records_equal(a, b) for a, b in zip(via_apply, via_bind)
))

# The three laws as checks over random inputs.
rng = random.Random(0)
vs = [rng.randint(-9, 9) for _ in range(6)]
print("left identity:", fs.check_left_identity(vs, "u", lambda x: Record(w=x * 3)))

rs = [Record(u=rng.randint(0, 9), other="kept") for _ in range(5)]
print("right identity:", fs.check_right_identity(rs, "u"))

inc = lambda x: x + 1
dbl = lambda x: x * 2
rs = [Record(u=i) for i in range(4)]
print("associativity (g after f):", fs.check_associativity(rs, "u", "v", "w", inc, dbl))
print(
    "associativity with the wrong composition order:",
    fs.check_associativity(rs, "u", "v", "w", inc, dbl, composed=lambda x: inc(dbl(x))),
)
