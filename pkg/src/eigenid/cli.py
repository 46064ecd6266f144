"""Command-line interface.

Usage::

    eigenid <eig|magnitudes|reconstruct|verify|stability> FILE [options]

Matrix files are JSON objects ``{"n": n, "real": [[...]], "imag": [[...]]}``
with ``imag`` optional. Exit codes: 0 success, 1 validation failure (or a
failed verification check), 2 parse error, 3 non-convergence, 4 method
precondition failure.
"""
import argparse
import json
import os
import sys
import time

import numpy as np

from . import core
from .eigensolve import eigh, eigvalsh
from .errors import (
    DegenerateEigenvalue,
    NoConvergence,
    PreconditionError,
    ValidationError,
)
from .identity import (
    magnitude_alternate,
    magnitude_sq_charpoly,
    magnitude_table,
    minor_spectra,
)
from .phase import reconstruct_eigenvector
from .spectralfn import default_tol, group_multiplicities
from .verify import run_full_suite

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_PRECONDITION = 4

METHODS = ("identity", "charpoly", "alternate", "oracle")


class ParseError(Exception):
    pass


# -- file format ---------------------------------------------------------------

def _square_array(obj, n, key):
    if not isinstance(obj, list) or len(obj) != n:
        raise ParseError(f'"{key}" must be a list of {n} rows')
    rows = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f'"{key}" row {r + 1} must have {n} entries')
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f'"{key}" row {r + 1} has a non-numeric entry {x!r}')
        rows.append([float(x) for x in row])
    return np.array(rows, dtype=float).reshape(n, n)


def parse_matrix(doc):
    """Turn a decoded MatrixFile object into a complex array (no Hermitian check)."""
    if not isinstance(doc, dict):
        raise ParseError("matrix file must contain a JSON object")
    n = doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError('"n" must be a positive integer')
    if "real" not in doc:
        raise ParseError('missing "real"')
    re = _square_array(doc["real"], n, "real")
    im = _square_array(doc["imag"], n, "imag") if doc.get("imag") is not None else np.zeros((n, n))
    return re + 1j * im


def read_matrix_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return parse_matrix(doc)


def matrix_to_doc(A):
    A = np.asarray(A, dtype=np.complex128)
    doc = {"n": int(A.shape[0]), "real": A.real.tolist()}
    # keep -0.0 so the round trip is bit-exact
    if np.any(A.imag != 0) or np.any(np.signbit(A.imag)):
        doc["imag"] = A.imag.tolist()
    return doc


def write_matrix_file(path, A):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_doc(A), fh)
        fh.write("\n")


# -- formatting ---------------------------------------------------------------

def _fmt(x, scale=1.0):
    x = float(x)
    if abs(x) <= 64 * np.finfo(float).eps * max(scale, 1.0):
        x = 0.0
    return f"{x:.12g}"


def _dump(obj, out):
    out.write(json.dumps(obj) + "\n")


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("EIGENID_THREADS")
    return int(env) if env else None


# -- magnitude methods ---------------------------------------------------------

def _group_rows(A, method, tol, threads):
    """``(spectrum, groups, masses)`` by the chosen method.

    Only ``identity`` and ``oracle`` can report repeated eigenvalues; the
    other two raise :class:`DegenerateEigenvalue` for them.
    """
    if method == "identity":
        t = magnitude_table(A, tol=tol, threads=threads)
        groups, masses = t.collapsed()
        return t.spectrum, groups, masses
    lam, V = eigh(A)
    grouping = group_multiplicities(lam, tol if tol is not None else default_tol(lam))
    if method == "oracle":
        mags = np.abs(V.T) ** 2
        masses = np.array([mags[[i - 1 for i in g]].sum(axis=0) for g in grouping.groups])
        return lam, grouping.groups, masses
    if grouping.has_repeats:
        raise DegenerateEigenvalue(f"--method {method} needs a simple spectrum")
    return lam, grouping.groups, _path_table(A, method, tol, threads, strict=True)


def _path_table(A, method, tol, threads, strict=False):
    """n x n magnitudes by one path; NaN marks entries the path cannot produce
    (rows of repeated eigenvalues, singular shifts) unless ``strict``."""
    n = A.shape[0]
    out = np.full((n, n), np.nan)
    if method == "oracle":
        return np.abs(eigh(A).vectors.T) ** 2
    if method == "identity":
        t = magnitude_table(A, tol=tol, threads=threads)
        for i in range(1, n + 1):
            if t.grouping.is_simple(i):
                out[i - 1] = t.values[i - 1]
        return out
    sA = eigvalsh(A)
    tol = tol if tol is not None else default_tol(sA)
    grouping = group_multiplicities(sA, tol)
    if n == 1:
        return np.ones((1, 1))
    minors = minor_spectra(A, threads)
    for i in range(1, n + 1):
        if not grouping.is_simple(i):
            continue
        for j in range(1, n + 1):
            try:
                if method == "charpoly":
                    out[i - 1, j - 1] = magnitude_sq_charpoly(sA, minors[j - 1], i, tol)
                else:
                    out[i - 1, j - 1] = magnitude_alternate(A, sA[i - 1], j, minors[j - 1])
            except PreconditionError:
                if strict:
                    raise
    return out


# -- commands ------------------------------------------------------------------

def cmd_eig(A, args, out):
    lam = eigvalsh(A)
    if args.json:
        _dump({"eigenvalues": lam.tolist()}, out)
    else:
        scale = float(np.max(np.abs(lam)))
        out.write(" ".join(_fmt(x, scale) for x in lam) + "\n")
    return EXIT_OK


def cmd_magnitudes(A, args, out):
    lam, groups, masses = _group_rows(A, args.method, args.tol, _threads(args))
    if args.json:
        _dump({
            "method": args.method,
            "eigenvalues": lam.tolist(),
            "rows": [
                {"indices": list(g), "degenerate": len(g) > 1, "values": m.tolist()}
                for g, m in zip(groups, masses)
            ],
        }, out)
        return EXIT_OK
    n = A.shape[0]
    labels = [f"[{g[0]}-{g[-1]}]" if len(g) > 1 else str(g[0]) for g in groups]
    width = max(5, max(len(s) for s in labels))
    out.write(" " * width + "".join(f"{'j=' + str(j):>16}" for j in range(1, n + 1)) + "\n")
    for label, row in zip(labels, masses):
        out.write(f"{label:>{width}}" + "".join(f"{_fmt(x):>16}" for x in row) + "\n")
    if any(len(g) > 1 for g in groups):
        out.write("bracketed rows are total masses of repeated eigenvalues\n")
    return EXIT_OK


def cmd_reconstruct(A, args, out):
    n = A.shape[0]
    if args.index is None or not 1 <= args.index <= n:
        raise ValidationError(f"--index must be in 1..{n}")
    r = reconstruct_eigenvector(A, args.index, tol=args.tol, threads=_threads(args))
    v = r.components
    residual = float(np.linalg.norm(A @ v - r.eigenvalue * v))
    if args.json:
        _dump({
            "index": r.i,
            "eigenvalue": r.eigenvalue,
            "pivot": r.pivot,
            "components": [[c.real, c.imag] for c in v],
            "flags": [f.value for f in r.flags],
            "residual": residual,
        }, out)
        return EXIT_OK
    out.write(f"eigenvalue {r.i}: {_fmt(r.eigenvalue)}\n")
    for k, (c, f) in enumerate(zip(v, r.flags), start=1):
        note = " (pivot)" if k == r.pivot else ""
        if f.value != "ok":
            note += f" [{f.value}]"
        out.write(f"{k:>4} {_fmt(c.real):>16} {_fmt(c.imag):>16}i{note}\n")
    out.write(f"residual {residual:.3e}\n")
    return EXIT_OK


def cmd_verify(A, args, out):
    reports = run_full_suite(A, seed=args.seed, threads=_threads(args))
    for r in reports:
        _dump(r.to_json(), out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VALIDATION


def cmd_stability(A, args, out):
    threads = _threads(args)
    tables, timings = {}, {}
    for name in METHODS:
        best = np.inf
        for _ in range(max(1, args.repeat)):
            t0 = time.perf_counter()
            tables[name] = _path_table(A, name, args.tol, threads)
            best = min(best, time.perf_counter() - t0)
        timings[name] = best
    dev = {}
    for a in METHODS:
        for b in METHODS:
            diff = np.abs(tables[a] - tables[b])
            dev[(a, b)] = float(np.nanmax(diff)) if np.any(~np.isnan(diff)) else 0.0
    skipped = {m: int(np.isnan(tables[m]).sum()) for m in METHODS}
    if args.json:
        _dump({
            "paths": list(METHODS),
            "seconds": timings,
            "max_deviation_vs_oracle": {m: dev[(m, "oracle")] for m in METHODS},
            "pairwise_max_deviation": [[dev[(a, b)] for b in METHODS] for a in METHODS],
            "entries_skipped": skipped,
        }, out)
        return EXIT_OK
    out.write(f"{'path':<10}{'seconds':>12}{'skipped':>9}"
              + "".join(f"{m:>12}" for m in METHODS) + "\n")
    for a in METHODS:
        out.write(f"{a:<10}{timings[a]:>12.3e}{skipped[a]:>9}"
                  + "".join(f"{dev[(a, b)]:>12.3e}" for b in METHODS) + "\n")
    return EXIT_OK


COMMANDS = {
    "eig": cmd_eig,
    "magnitudes": cmd_magnitudes,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "stability": cmd_stability,
}


def build_parser():
    p = argparse.ArgumentParser(
        prog="eigenid",
        description="Eigenvector magnitudes and phases from eigenvalues of a "
                    "Hermitian matrix and its minors.",
    )
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file", help="JSON matrix file")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--method", choices=METHODS, default="identity")
    p.add_argument("--index", type=int, help="1-based eigenvalue index")
    p.add_argument("--tol", type=float, help="multiplicity grouping tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, help="worker threads (default $EIGENID_THREADS)")
    p.add_argument("--repeat", type=int, default=1)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.tol is not None and args.tol <= 0:
        err.write("eigenid: --tol must be positive\n")
        return EXIT_VALIDATION
    try:
        M = read_matrix_file(args.file)
    except ParseError as exc:
        err.write(f"eigenid: parse error: {exc}\n")
        return EXIT_PARSE
    try:
        A = core.validate_hermitian(M)
        return COMMANDS[args.command](A, args, out)
    except ValidationError as exc:
        err.write(f"eigenid: {exc}\n")
        return EXIT_VALIDATION
    except NoConvergence as exc:
        err.write(f"eigenid: {exc}\n")
        return EXIT_NO_CONVERGENCE
    except PreconditionError as exc:
        err.write(f"eigenid: {exc}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
