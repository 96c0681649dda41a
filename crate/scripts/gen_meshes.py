#!/usr/bin/env python3
"""Generate the fixture meshes in meshes/ (Delaunay of smoothed, well-spaced points).

Usage: python3 scripts/gen_meshes.py
Output is deterministic (fixed seeds).
"""
import numpy as np
from scipy.spatial import Delaunay


def boundary_points(x0, x1, y0, y1, nx, ny):
    pts = []
    for k in range(nx):
        pts.append((x0 + (x1 - x0) * k / nx, y0))
    for k in range(ny):
        pts.append((x1, y0 + (y1 - y0) * k / ny))
    for k in range(nx):
        pts.append((x1 - (x1 - x0) * k / nx, y1))
    for k in range(ny):
        pts.append((x0, y1 - (y1 - y0) * k / ny))
    return np.array(pts)


def farthest_points(x0, x1, y0, y1, fixed, count, rng, margin):
    cand = np.column_stack([
        rng.uniform(x0 + margin, x1 - margin, 40 * count + 2000),
        rng.uniform(y0 + margin, y1 - margin, 40 * count + 2000),
    ])
    d = np.min(np.linalg.norm(cand[:, None, :] - fixed[None, :, :], axis=2), axis=1)
    chosen = []
    for _ in range(count):
        k = int(np.argmax(d))
        chosen.append(cand[k])
        d = np.minimum(d, np.linalg.norm(cand - cand[k], axis=1))
    return np.array(chosen)


def smooth(points, nfixed, iters):
    for _ in range(iters):
        tri = Delaunay(points)
        acc = np.zeros_like(points)
        cnt = np.zeros(len(points))
        for s in tri.simplices:
            for a in range(3):
                for b in range(3):
                    if a != b:
                        acc[s[a]] += points[s[b]]
                        cnt[s[a]] += 1
        new = points.copy()
        new[nfixed:] = acc[nfixed:] / cnt[nfixed:, None]
        points = new
    return points


def write(path, points, simplices, tag_of_edge, header):
    edges = {}
    for s in simplices:
        for k in range(3):
            e = tuple(sorted((s[k], s[(k + 1) % 3])))
            edges[e] = edges.get(e, 0) + 1
    bnd = sorted(e for e, c in edges.items() if c == 1)
    with open(path, "w") as f:
        f.write(header)
        f.write(f"{len(points)} {len(simplices)} {len(bnd)}\n")
        for p in points:
            f.write(f"{float(p[0])!r} {float(p[1])!r}\n")
        for s in simplices:
            a, b, c = (points[s[i]] for i in range(3))
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            assert abs(cross) > 1e-10
            if cross < 0:
                s = (s[0], s[2], s[1])
            f.write(f"{s[0]} {s[1]} {s[2]}\n")
        for e in bnd:
            f.write(f"{e[0]} {e[1]} {tag_of_edge(points[e[0]], points[e[1]])}\n")


def min_angle(points, simplices):
    worst = 180.0
    for s in simplices:
        p = points[s]
        for k in range(3):
            u = p[(k + 1) % 3] - p[k]
            v = p[(k + 2) % 3] - p[k]
            ang = np.degrees(np.arccos(np.dot(u, v) / np.linalg.norm(u) / np.linalg.norm(v)))
            worst = min(worst, ang)
    return worst


def square_mesh():
    L = 2.0 * np.pi
    rng = np.random.default_rng(20210)
    bnd = boundary_points(0.0, L, 0.0, L, 4, 4)
    inner = farthest_points(0.0, L, 0.0, L, bnd, 22, rng, 0.25)
    pts = smooth(np.vstack([bnd, inner]), len(bnd), 30)
    tri = Delaunay(pts)
    print("square: cells", len(tri.simplices), "min angle", min_angle(pts, tri.simplices))
    write("meshes/square58.mesh", pts, tri.simplices, lambda a, b: "EXACT",
          "# [0,2pi]^2, coarse unstructured mesh, all boundaries EXACT\n")


def shock_mesh(h, name):
    rng = np.random.default_rng(7)
    nx, ny = int(round(4 / h)), int(round(1 / h))
    bnd = boundary_points(0.0, 4.0, 0.0, 1.0, nx, ny)
    area_per_point = h * h * np.sqrt(3) / 2
    count = int(4.0 / area_per_point) - len(bnd) // 2
    inner = farthest_points(0.0, 4.0, 0.0, 1.0, bnd, count, rng, 0.4 * h)
    pts = smooth(np.vstack([bnd, inner]), len(bnd), 40)
    tri = Delaunay(pts)
    print(name, "cells", len(tri.simplices), "min angle", min_angle(pts, tri.simplices))

    def tag(a, b):
        eps = 1e-12
        if abs(a[1]) < eps and abs(b[1]) < eps:
            return "WALL"
        if abs(a[0] - 4.0) < eps and abs(b[0] - 4.0) < eps:
            return "OUTFLOW"
        if abs(a[0]) < eps and abs(b[0]) < eps:
            return "DIRICHLET_LEFT"
        if abs(a[1] - 1.0) < eps and abs(b[1] - 1.0) < eps:
            return "DIRICHLET_TOP"
        raise ValueError("edge not on boundary")

    write(f"meshes/{name}.mesh", pts, tri.simplices, tag,
          "# [0,4]x[0,1] regular shock reflection: bottom WALL, right OUTFLOW, left/top DIRICHLET\n")


if __name__ == "__main__":
    square_mesh()
    shock_mesh(0.0625, "shock_reflection")
