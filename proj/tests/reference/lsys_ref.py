#!/usr/bin/env python3
"""Independent reference model used only by the test suite.

Re-implements derivation, function extraction, PATH bit assignment, operand
planning and execution from the written semantics, without sharing code with
the C++ library, so that the C++ oracle can be cross-checked against it.

Usage: lsys_ref.py SPEC --generations N [--seed S] [--path P]
                   [--container array|sortedlist|scalar] [--trip-count T]
                   [--value-range V] [--trace]
Prints the trace (with --trace), then `CHECKSUM n`, then one JSON summary line.
"""
import argparse
import bisect
import json
import re
import sys

MASK64 = (1 << 64) - 1
OPS = {"new": 1, "insert": 2, "remove": 3, "contains": 4}
CONSTRUCTS = {"IF": (2, 3), "LOOP": (1, 2), "CALL": (1, 1)}
TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|(.))")


# ---- grammar -------------------------------------------------------------

def parse_body(text):
    toks = [(m.group(1), m.group(2)) for m in TOKEN.finditer(text) if m.group(1) or m.group(2)]
    pos = 0

    def seq(stop):
        nonlocal pos
        items = []
        while pos < len(toks):
            word, punct = toks[pos]
            if punct is not None:
                if punct in stop:
                    return items
                raise ValueError("unexpected %r" % punct)
            pos += 1
            if word in OPS:
                items.append(("T", word))
            elif word in CONSTRUCTS:
                if pos >= len(toks) or toks[pos][1] != "(":
                    raise ValueError(word + " needs (")
                pos += 1
                blocks = [seq(",)")]
                while toks[pos][1] == ",":
                    pos += 1
                    blocks.append(seq(",)"))
                pos += 1  # ')'
                lo, hi = CONSTRUCTS[word]
                if not lo <= len(blocks) <= hi:
                    raise ValueError("bad arity for " + word)
                items.append(("C", word, blocks))
            else:
                items.append(("N", word))
        return items

    items = seq("")
    if pos != len(toks):
        raise ValueError("trailing input")
    return items


def parse_spec(text):
    rules, axiom = {}, None
    first = None
    for raw in text.replace("\r", "").split("\n"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, body = line.split("=", 1)
        name, body = name.strip(), body.strip()
        if body.endswith(";"):
            body = body[:-1]
        items = parse_body(body)
        if name == "AXIOM":
            axiom = items
            continue
        rules[name] = items
        if first is None:
            first = items
    return (axiom if axiom is not None else (first or [])), rules


def rewrite(seq, rules):
    out = []
    for it in seq:
        if it[0] == "N":
            out.extend(rules.get(it[1], [it]))
        elif it[0] == "C":
            out.append(("C", it[1], [rewrite(b, rules) for b in it[2]]))
        else:
            out.append(it)
    return out


def prune(seq):
    out = []
    for it in seq:
        if it[0] == "N":
            continue
        if it[0] == "C":
            out.append(("C", it[1], [prune(b) for b in it[2]]))
        else:
            out.append(it)
    return out


def canon(seq):
    parts = []
    for it in seq:
        if it[0] == "T":
            parts.append(it[1])
        else:
            parts.append(it[1] + "(" + ",".join(canon(b) for b in it[2]) + ")")
    return " ".join(parts)


# ---- lowering --------------------------------------------------------------
# Statements: ["new", slot] ["op", kind, slot, value] ["call", fid, avail]
#             ["if", bit, cond, then, else|None] ["loop", cond, body]

def extract(top):
    funcs = [None]
    table = {}

    def lower(seq):
        out = []
        for it in seq:
            if it[0] == "T":
                out.append(["new", None] if it[1] == "new" else ["op", it[1], None, 0])
            elif it[1] == "IF":
                b = it[2]
                out.append(["if", None, lower(b[0]), lower(b[1]), lower(b[2]) if len(b) == 3 else None])
            elif it[1] == "LOOP":
                b = it[2]
                out.append(["loop", lower(b[0]) if len(b) == 2 else [], lower(b[-1])])
            else:
                key = canon(it[2][0])
                if key not in table:
                    table[key] = len(funcs)
                    funcs.append(None)
                    fid = table[key]
                    funcs[fid] = {"canon": key, "body": lower(it[2][0])}
                out.append(["call", table[key], []])
        return out

    funcs[0] = {"canon": canon(top), "body": lower(top)}
    return funcs


def assign_bits(body):
    stack = [1]
    maxraw = [-1]

    def walk(lst):
        for s in lst:
            if s[0] == "if":
                walk(s[2])
                top = stack[-1]
                s[1] = (top - 1) % 64
                maxraw[0] = max(maxraw[0], top - 1)
                best = top
                for branch in (s[3], s[4]):
                    if branch is None:
                        continue
                    stack.append(top + 1)
                    walk(branch)
                    best = max(best, stack.pop())
                stack[-1] = max(stack[-1], best)
            elif s[0] == "loop":
                walk(s[1])
                walk(s[2])

    walk(body)
    return maxraw[0]


class Lcg:
    def __init__(self, seed):
        self.state = seed & MASK64

    def next(self):
        self.state = (self.state * 6364136228273018565 + 1442695040888963407) & MASK64
        return self.state >> 33


def plan(funcs, seed, value_range):
    rng = Lcg(seed)
    for f in funcs:
        counter = [0]

        def walk(lst, visible):
            visible = list(visible)
            out = []
            for s in lst:
                if s[0] == "new":
                    visible.append(counter[0])
                    out.append(["new", counter[0]])
                    counter[0] += 1
                elif s[0] == "op":
                    if not visible:
                        visible.append(counter[0])
                        out.append(["new", counter[0]])
                        counter[0] += 1
                    slot = visible[rng.next() % len(visible)]
                    out.append(["op", s[1], slot, rng.next() % value_range])
                elif s[0] == "call":
                    out.append(["call", s[1], list(visible)])
                elif s[0] == "if":
                    out.append(["if", s[1], walk(s[2], visible), walk(s[3], visible),
                                None if s[4] is None else walk(s[4], visible)])
                else:
                    out.append(["loop", walk(s[1], visible), walk(s[2], visible)])
            return out

        f["body"] = walk(f["body"], [])
        f["slots"] = counter[0]


# ---- execution -------------------------------------------------------------

class Machine:
    def __init__(self, funcs, container, path, trips, trace):
        self.funcs, self.container, self.path, self.trips = funcs, container, path, trips
        self.trace = [] if trace else None
        self.cs = 14695981039346656037
        self.counts = {k: 0 for k in OPS}
        self.objects = {}  # id -> [refc, list]
        self.next_id = 1
        self.max_live = 0

    def event(self, op, var, val, res):
        self.counts[op] += 1
        e = (OPS[op] << 48) | ((var & 0xFFFF) << 32) | ((val & 0xFFFF) << 16) | (res & 0xFFFF)
        self.cs = ((self.cs * 1099511628211) & MASK64) ^ e
        if self.trace is not None:
            self.trace.append("OP kind=%s var=%d val=%d res=%d" % (op, var, val, res))

    def release(self, oid):
        obj = self.objects[oid]
        obj[0] -= 1
        if obj[0] == 0:
            del self.objects[oid]

    def invoke(self, fid, data):
        f = self.funcs[fid]
        frame = {"vars": [None] * f["slots"], "data": data, "used": 0}
        self.block(frame, f["body"])
        if self.container != "scalar":
            for oid in data[frame["used"]:]:
                self.release(oid)

    def block(self, frame, lst):
        made = []
        for s in lst:
            kind = s[0]
            if kind == "new":
                self.do_new(frame, s[1])
                made.append(s[1])
            elif kind == "op":
                self.do_op(frame, s[1], s[2], s[3])
            elif kind == "call":
                args = [frame["vars"][slot] for slot in s[2]]
                if self.container != "scalar":
                    for oid in args:
                        self.objects[oid][0] += 1
                self.invoke(s[1], args)
            elif kind == "if":
                self.block(frame, s[2])
                if (self.path >> s[1]) & 1:
                    self.block(frame, s[3])
                elif s[4] is not None:
                    self.block(frame, s[4])
            else:
                for _ in range(self.trips):
                    self.block(frame, s[1])
                    self.block(frame, s[2])
        if self.container != "scalar":
            for slot in reversed(made):
                self.release(frame["vars"][slot])
                frame["vars"][slot] = None

    def do_new(self, frame, slot):
        data = frame["data"]
        alias = frame["used"] < len(data)
        if self.container == "scalar":
            frame["vars"][slot] = data[frame["used"]] if alias else 0
            if alias:
                frame["used"] += 1
            self.event("new", slot + 1, 0, 0 if alias else 1)
            return
        if alias:
            oid = data[frame["used"]]
            frame["used"] += 1
        else:
            oid = self.next_id
            self.next_id += 1
            self.objects[oid] = [1, []]
            self.max_live = max(self.max_live, len(self.objects))
        frame["vars"][slot] = oid
        self.event("new", oid, 0, 0 if alias else 1)

    def do_op(self, frame, op, slot, val):
        if self.container == "scalar":
            v = frame["vars"][slot]
            if op == "insert":
                v += 1
                res = v
            elif op == "remove":
                v -= 1
                res = v
            else:
                res = 1 if v == 0 else 0
            frame["vars"][slot] = v
            self.event(op, slot + 1, val, res)
            return
        oid = frame["vars"][slot]
        items = self.objects[oid][1]
        if op == "insert":
            if self.container == "array":
                items.append(val)
            else:
                bisect.insort_right(items, val)
            res = len(items)
        elif op == "remove":
            res = 1 if val in items else 0
            if res:
                items.remove(val)
        else:
            res = 1 if val in items else 0
        self.event(op, oid, val, res)


def build(spec_text, generations, seed, value_range):
    axiom, rules = parse_spec(spec_text)
    seq = axiom
    for _ in range(generations):
        seq = rewrite(seq, rules)
    funcs = extract(prune(seq))
    bits = [assign_bits(f["body"]) for f in funcs]
    plan(funcs, seed, value_range)
    return funcs, bits


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("spec")
    ap.add_argument("--generations", type=int, required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--path", type=int, default=1)
    ap.add_argument("--container", default="array", choices=["array", "sortedlist", "scalar"])
    ap.add_argument("--trip-count", type=int, default=2)
    ap.add_argument("--value-range", type=int, default=1000)
    ap.add_argument("--trace", action="store_true")
    args = ap.parse_args()
    with open(args.spec, encoding="utf-8") as fh:
        funcs, bits = build(fh.read(), args.generations, args.seed, args.value_range)
    sys.setrecursionlimit(100000)
    m = Machine(funcs, args.container, args.path & MASK64, args.trip_count, args.trace)
    m.invoke(0, [])
    out = sys.stdout
    if m.trace is not None:
        out.write("\n".join(m.trace) + ("\n" if m.trace else ""))
    out.write("CHECKSUM %d\n" % m.cs)
    summary = {
        "functions": len(funcs),
        "maxBits": bits,
        "counts": m.counts,
        "maxLive": m.max_live,
        "liveAtExit": len(m.objects),
    }
    out.write(json.dumps(summary, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
