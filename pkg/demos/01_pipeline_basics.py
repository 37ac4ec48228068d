#!/usr/bin/env python3
# Pipeline basics: lift plain values into records, enrich them with apply,
# filter, project back out, and fold.
#
# A stream reads left to right: source first, then stages, then a sink.
# Nothing runs until the sink pulls.

import fieldstream as fs

# Start from plain numbers and name them "n".
squares = (
    fs.Datastream(range(10))
    | fs.as_field("n")
    | fs.filter_field("n", lambda v: v % 2 == 0)
    | fs.apply("n", "sq", lambda v: v * v)
    | fs.select_field("sq")
    | fs.as_list
)
print("squares of even digits:", squares)

# apply can read several fields at once; the function gets them as one list.
people = (
    fs.Datastream([("ada", 36), ("linus", 55)])
    | fs.as_field("pair")
    | fs.apply("pair", "name", lambda p: p[0])
    | fs.apply("pair", "age", lambda p: p[1])
    | fs.delfield("pair")
    | fs.apply(["name", "age"], "label", lambda vs: f"{vs[0]} ({vs[1]})")
    | fs.as_list
)
for r in people:
    print("record:", r.to_dict())

# fold and scan work on one field; scan keeps the running value per record.
total = fs.Datastream([3, 4, 5]) | fs.as_field("x") | fs.fold("x", 0, lambda a, b: a + b)
print("fold sum:", total)

running = (
    fs.Datastream([3, 4, 5])
    | fs.as_field("x")
    | fs.scan("x", "so_far", 0, lambda a, b: a + b)
    | fs.select_field("so_far")
    | fs.as_list
)
print("scan sums:", running)

# Streams are single-use: consuming one twice is a programming error.
s = fs.Datastream([1, 2]) | fs.as_field("x")
fs.as_list(s)
try:
    fs.as_list(s)
except fs.SingleUseViolation as e:
    print("second consumption refused:", e)
