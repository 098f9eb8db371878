#!/usr/bin/env python3
"""Writes the hand-built fixtures in data/. Generated fixtures come from `curvebound gen`."""
import json
import math
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def curve_doc(c, verts, name, lam):
    lines = ",\n".join("    " + json.dumps(v) for v in verts)
    meta = json.dumps({"name": name, "seed": None, "lambda": lam, "chain": []})
    return (
        '{\n  "format": "curvebound/1",\n  "type": "curve",\n'
        f'  "space": {{"c": {json.dumps(float(c))}}},\n  "kind": "polyline",\n'
        f'  "data": [\n{lines}\n  ],\n  "meta": {meta}\n}}\n'
    )


def circle(c, r0, m):
    out = []
    for j in range(m):
        t = 2 * math.pi * j / m
        if c == 0:
            out.append([r0 * math.cos(t), r0 * math.sin(t)])
        elif c > 0:
            s = 1 / math.sqrt(c)
            a = r0 / s
            out.append([s * math.sin(a) * math.cos(t), s * math.sin(a) * math.sin(t), s * math.cos(a)])
        else:
            s = 1 / math.sqrt(-c)
            a = r0 / s
            out.append([s * math.sinh(a) * math.cos(t), s * math.sinh(a) * math.sin(t), s * math.cosh(a)])
    return out


def stadium(half_length, radius, per_cap):
    pts = []
    for j in range(per_cap + 1):
        t = -math.pi / 2 + math.pi * j / per_cap
        pts.append([half_length + radius * math.cos(t), radius * math.sin(t)])
    for j in range(per_cap + 1):
        t = math.pi / 2 + math.pi * j / per_cap
        pts.append([-half_length + radius * math.cos(t), radius * math.sin(t)])
    return pts


def write(name, text):
    (DATA / name).write_text(text)


def main():
    write("circle_e2.json", curve_doc(0, circle(0, 1.0, 2048), "circle-e2", 1.0))
    write("circle_s2.json", curve_doc(1, circle(1, math.pi / 4, 2048), "circle-s2", 1.0))
    write("circle_h2.json", curve_doc(-1, circle(-1, math.atanh(1 / math.sqrt(2)), 2048), "circle-h2", math.sqrt(2)))
    write("square10.json", curve_doc(0, [[0, 0], [10, 0], [10, 10], [0, 10]], "square-10", None))
    write("thin_stadium.json", curve_doc(0, stadium(5.0, 0.25, 256), "thin-stadium", None))
    cap = {
        "format": "curvebound/1",
        "type": "cap",
        "base": [[-1, -1], [1, -1], [1, 1], [-1, 1]],
        "interior": [[0, 0, 1]],
        "meta": {"name": "pyramid", "seed": None, "lambda": None, "chain": []},
    }
    write("pyramid_cap.json", json.dumps(cap, indent=2) + "\n")
    cap["interior"] = []
    cap["meta"]["name"] = "flat-square"
    write("flat_cap.json", json.dumps(cap, indent=2) + "\n")
    config = {"format": "curvebound/1", "type": "config",
              "generator": {"kind": "support", "seed": 42, "c": 0.0, "lambda": 1.0, "size": 512, "amplitude": 0.3}}
    write("gen_support.config.json", json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
