"""Serialization: Matrix Market array files plus JSON manifests.

Matrices go to dense Matrix Market "array" format (real or complex, general).
A problem is a JSON manifest pointing at .mtx files; indices in JSON are
0-based (the 1-based convention applies only inside .mtx files themselves).
"""

import json
import os

import numpy as np
import scipy.io

from .matmodel import RecoveryProblem, check_matrix


def save_matrix(path, a, comment=""):
    a = check_matrix(a)
    scipy.io.mmwrite(str(path), np.asarray(a), comment=comment, precision=17)


def load_matrix(path):
    if not os.path.exists(str(path)):
        raise FileNotFoundError(f"no such matrix file: {path}")
    a = scipy.io.mmread(str(path))
    if hasattr(a, "toarray"):  # coordinate-format input
        a = a.toarray()
    return check_matrix(np.asarray(a))


def save_problem(manifest_path, problem, stem=None):
    """Write phi/y (and x0 when present) as .mtx next to a JSON manifest.

    Paths inside the manifest are relative to the manifest's directory.
    """
    manifest_path = str(manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    os.makedirs(base, exist_ok=True)
    if stem is None:
        stem = os.path.splitext(os.path.basename(manifest_path))[0]
    entry = {"phi": f"{stem}_phi.mtx", "y": f"{stem}_y.mtx"}
    save_matrix(os.path.join(base, entry["phi"]), problem.phi)
    save_matrix(os.path.join(base, entry["y"]), problem.y)
    if problem.x0 is not None:
        entry["x0"] = f"{stem}_x0.mtx"
        save_matrix(os.path.join(base, entry["x0"]), problem.x0)
    if problem.omega is not None:
        entry["omega"] = [int(i) for i in problem.omega]
    if problem.k is not None:
        entry["k"] = int(problem.k)
    with open(manifest_path, "w", encoding="utf-8") as f:
        json.dump(entry, f, indent=2)
        f.write("\n")
    return entry


def load_problem(manifest_path):
    manifest_path = str(manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    with open(manifest_path, encoding="utf-8") as f:
        entry = json.load(f)
    phi = load_matrix(os.path.join(base, entry["phi"]))
    y = load_matrix(os.path.join(base, entry["y"]))
    x0 = load_matrix(os.path.join(base, entry["x0"])) if "x0" in entry else None
    omega = tuple(entry["omega"]) if "omega" in entry else None
    k = entry.get("k")
    return RecoveryProblem(phi=phi, y=y, x0=x0, omega=omega, k=k)


def save_result(result_path, result, x_hat_path=None):
    """Serialize a solver result as JSON, with x_hat stored as a .mtx sidecar."""
    result_path = str(result_path)
    base = os.path.dirname(os.path.abspath(result_path))
    os.makedirs(base, exist_ok=True)
    if x_hat_path is None:
        stem = os.path.splitext(os.path.basename(result_path))[0]
        x_hat_path = f"{stem}_x_hat.mtx"
    save_matrix(os.path.join(base, x_hat_path), result.x_hat)
    entry = {
        "algo": result.algo,
        "omega_hat": [int(i) for i in result.omega_hat],
        "runtime_ms": float(result.runtime_ms),
        "x_hat": x_hat_path,
    }
    if result.omega_c is not None:
        entry["omega_c"] = [int(i) for i in result.omega_c]
    if result.zeta is not None:
        entry["zeta"] = [float(z) for z in result.zeta]
    if result.rank_deficient:
        entry["rank_deficient"] = True
    with open(result_path, "w", encoding="utf-8") as f:
        json.dump(entry, f, indent=2)
        f.write("\n")
    return entry
