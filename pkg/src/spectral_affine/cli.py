"""Command-line front end.

Exit codes: 0 pass / spectral, 1 input error, 3 non-spectral,
4 verification failure, 5 resource cap.  In batch mode the reported code is
the most severe one, ranked 1 > 5 > 4 > 3 > 0.  stdout carries only machine
output; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import lattice as la
from .clique import orthogonal_clique_search
from .decision import Certificate, decide, is_admissible
from .digits import DigitSet4
from .errors import InvalidInput, NotExpansive, ResourceCap, SpectralAffineError
from .spectra import (
    PAIRWISE_LEVEL_CAP,
    certify_level_orthogonality,
    parseval_check,
    q_function,
    residue_systems,
    tower_spectrum,
)
from .zeros import zero_enumerate

DEFAULT_SEED = 0xC0FFEE
EXIT_OK, EXIT_INPUT, EXIT_NONSPECTRAL, EXIT_VERIFY, EXIT_RESOURCE = 0, 1, 3, 4, 5
_SEVERITY = [EXIT_INPUT, EXIT_RESOURCE, EXIT_VERIFY, EXIT_NONSPECTRAL, EXIT_OK]


class Outcome:
    def __init__(self, code: int, payload, csv_rows=None, header=None):
        self.code = code
        self.payload = payload
        self.csv_rows = csv_rows
        self.header = header


# -- parsing -------------------------------------------------------------------

def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, int):
        raise InvalidInput(f"{what} must be an integer, got {x!r}")
    return x


def parse_instance(obj) -> tuple[la.Mat, DigitSet4]:
    if not isinstance(obj, dict) or "matrix" not in obj or "digits" not in obj:
        raise InvalidInput('instance must be an object with "matrix" and "digits"')
    rows = obj["matrix"]
    if not (isinstance(rows, list) and len(rows) == 2 and all(isinstance(r, list) and len(r) == 2 for r in rows)):
        raise InvalidInput('"matrix" must be [[a, b], [c, d]]')
    m = tuple(tuple(_int(x, "matrix entry") for x in r) for r in rows)
    dg = obj["digits"]
    if not isinstance(dg, dict) or "alpha" not in dg or "beta" not in dg:
        raise InvalidInput('"digits" must be {"alpha": [a1, a2], "beta": [b1, b2]}')
    vs = []
    for key in ("alpha", "beta"):
        v = dg[key]
        if not (isinstance(v, list) and len(v) == 2):
            raise InvalidInput(f'"digits.{key}" must be a pair of integers')
        vs.append(tuple(_int(x, f"digits.{key} entry") for x in v))
    d = DigitSet4.from_vectors(*vs)
    if not la.is_expansive(m):
        raise NotExpansive(f"matrix {[list(r) for r in m]} is not expansive (some eigenvalue has modulus <= 1)")
    return m, d


def _vec_json(v):
    return [la.fmt_rat(v[0]), la.fmt_rat(v[1])]


def _mat_json(m):
    return [[la.fmt_rat(x) for x in row] for row in m]


def _parse_mat(obj) -> la.Mat:
    return tuple(tuple(la.parse_rat(x) for x in row) for row in obj)


def certificate_json(c: Certificate) -> dict:
    return {
        "Q_chain": _mat_json(c.Q_chain),
        "Mbar": _mat_json(c.Mbar),
        "Dbar": {"alpha": [c.Dbar.alpha1, c.Dbar.alpha2], "beta": [c.Dbar.beta1, c.Dbar.beta2]},
        "Cbar": [_vec_json(v) for v in c.Cbar],
    }


def parse_certificate(obj) -> Certificate:
    try:
        qc = tuple(la.normalize_vec(r) for r in _parse_mat(obj["Q_chain"]))
        mbar = la.as_int_matrix(_parse_mat(obj["Mbar"]))
        db = obj["Dbar"]
        dbar = DigitSet4.from_vectors(db["alpha"], db["beta"])
        cbar = tuple(la.normalize_vec(tuple(la.parse_rat(x) for x in v)) for v in obj["Cbar"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed certificate: {exc}") from exc
    return Certificate(qc, mbar, dbar, cbar)


# -- commands --------------------------------------------------------------------

def _decision_json(dec) -> dict:
    cf = dec.canonical
    out = {
        "verdict": dec.verdict.value,
        "eta": dec.eta,
        "canonical": {
            "g": cf.g, "Q": _mat_json(cf.Q), "Mtil": _mat_json(cf.Mtil),
            "alpha": cf.alpha, "beta": cf.beta, "omega": cf.omega,
        },
    }
    if dec.spectral:
        out["certificate"] = certificate_json(dec.certificate) if dec.certificate else None
    else:
        out["violations"] = [str(v) for v in dec.violations]
    return out


def cmd_decide(m, d, cfg) -> Outcome:
    dec = decide(m, d)
    return Outcome(EXIT_OK if dec.spectral else EXIT_NONSPECTRAL, _decision_json(dec))


def _require_spectral(m, d, cfg):
    dec = decide(m, d)
    if not dec.spectral:
        print(f"non-spectral: {'; '.join(map(str, dec.violations))}", file=sys.stderr)
        return dec, Outcome(EXIT_NONSPECTRAL, _decision_json(dec))
    cert = dec.certificate
    if cfg.certificate_file:
        with open(cfg.certificate_file) as fh:
            cert = parse_certificate(json.load(fh))
    return cert, None


def _check_level(n, cap, cfg):
    if n < 0:
        raise InvalidInput("--level must be nonnegative")
    if n > cap and not cfg.unsafe:
        raise ResourceCap(f"level {n} exceeds the cap {cap}; pass --unsafe to override")


def _pulled_tower(cert, n, unsafe):
    tower = tower_spectrum(cert.Mbar, cert.Dbar, cert.Cbar, n, unsafe=unsafe)
    return cert.pullback(tower)


def cmd_verify(m, d, cfg) -> Outcome:
    cert, early = _require_spectral(m, d, cfg)
    if early:
        return early
    n = cfg.level
    _check_level(n, PAIRWISE_LEVEL_CAP, cfg)
    report = {"level": n}
    admissible = is_admissible(cert.Mbar, cert.Dbar, cert.Cbar)
    report["admissible"] = admissible
    if not admissible:
        print("certificate is not a Hadamard triple", file=sys.stderr)
        return Outcome(EXIT_VERIFY, report)
    lam = _pulled_tower(cert, n, cfg.unsafe)
    orth = certify_level_orthogonality(m, d, lam, n)
    report["orthogonality"] = {
        "frequencies": len(lam), "dimension": 4**n, "pairs": orth.n_pairs,
        "certified": orth.n_certified, "orthogonal": orth.orthogonal,
    }
    rng = np.random.default_rng(cfg.seed)
    xi = rng.uniform(-5, 5, size=(cfg.samples, 2))
    qdev = float(np.abs(q_function(m, d, lam, xi, n) - 1).max()) if cfg.samples else 0.0
    report["q_max_deviation"] = qdev
    # Parseval identity for the canonical digit set at a random pick per class
    cf = _params(m, d)
    rs = residue_systems(cf, cf.eta)
    pdev = 0.0
    for x in xi:
        picks = [ti[int(rng.integers(len(ti)))] for ti in rs.T]
        s = rs.S[int(rng.integers(len(rs.S)))]
        pdev = max(pdev, abs(parseval_check(rs.params, s, picks, x) - 1))
    report["parseval_max_deviation"] = pdev
    ok = orth.orthogonal and len(lam) == 4**n and qdev < cfg.tolerance and pdev < cfg.tolerance
    report["passed"] = ok
    return Outcome(EXIT_OK if ok else EXIT_VERIFY, report)


def _params(m, d):
    return decide(m, d, certificate=False).canonical


def cmd_spectrum(m, d, cfg) -> Outcome:
    cert, early = _require_spectral(m, d, cfg)
    if early:
        return early
    _check_level(cfg.level, 8, cfg)
    lam = _pulled_tower(cert, cfg.level, cfg.unsafe)
    rows = [[la.fmt_rat(v[0]), la.fmt_rat(v[1])] for v in lam]
    return Outcome(EXIT_OK, {"level": cfg.level, "frequencies": rows}, rows, ["x1", "x2"])


def cmd_zeros(m, d, cfg) -> Outcome:
    """Mask zeros of ``D`` in ``[-R, R]^2`` (original coordinates), with canonical class labels."""
    cf = _params(m, d)
    back = la.scale(la.transpose(cf.Q), Fraction(1, cf.g))  # canonical -> original
    fwd = la.scale(la.inverse(la.transpose(cf.Q)), cf.g)
    r = Fraction(cfg.radius)
    pts = []
    for z, cls in zero_enumerate(cf, la.inf_norm(fwd) * r):
        x = la.apply(back, z)
        if la.vec_inf_norm(x) <= r:
            pts.append((x, cls.theta.value))
    pts.sort()
    rows = [[la.fmt_rat(x[0]), la.fmt_rat(x[1]), t] for x, t in pts]
    payload = [{"x1": a, "x2": b, "theta_class": t} for a, b, t in rows]
    return Outcome(EXIT_OK, payload, rows, ["x1", "x2", "theta_class"])


def cmd_qfun(m, d, cfg) -> Outcome:
    cert, early = _require_spectral(m, d, cfg)
    if early:
        return early
    _check_level(cfg.level, 8, cfg)
    lam = _pulled_tower(cert, cfg.level, cfg.unsafe)
    grid = np.linspace(-2.0, 2.0, cfg.samples)
    xi = np.array([(a, b) for a in grid for b in grid]).reshape(-1, 2)
    q = q_function(m, d, lam, xi, cfg.level) if len(xi) else np.zeros(0)
    rows = [[repr(float(a)), repr(float(b)), repr(float(v))] for (a, b), v in zip(xi, q)]
    payload = [{"xi1": float(a), "xi2": float(b), "Q": float(v)} for (a, b), v in zip(xi, q)]
    return Outcome(EXIT_OK, payload, rows, ["xi1", "xi2", "Q"])


def cmd_clique(m, d, cfg) -> Outcome:
    lam = orthogonal_clique_search(m, d, cfg.radius, cfg.kmax)
    return Outcome(EXIT_OK, {"size": len(lam), "frequencies": [_vec_json(v) for v in lam]})


COMMANDS = {
    "decide": (cmd_decide, "json"),
    "verify": (cmd_verify, "json"),
    "spectrum": (cmd_spectrum, "json"),
    "zeros": (cmd_zeros, "csv"),
    "qfun": (cmd_qfun, "csv"),
    "clique": (cmd_clique, "json"),
}


# -- driver -------------------------------------------------------------------------

def _default_seed() -> int:
    env = os.environ.get("SPECTRAL_AFFINE_SEED")
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise SystemExit(f"SPECTRAL_AFFINE_SEED is not an integer: {env!r}")
    return DEFAULT_SEED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectral-affine", description="Spectrality of planar four-digit self-affine measures.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("instance", nargs="?", help="instance JSON (default: read stdin)")
    p.add_argument("--file", help="JSON array of instances; one result per line")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--kmax", type=int, default=64)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--unsafe", action="store_true", help="lift the level caps")
    p.add_argument("--certificate-file", help="use this certificate instead of the computed one")
    return p


def _emit(out: Outcome, fmt: str, stream) -> None:
    if fmt == "csv" and out.csv_rows is not None:
        stream.write(",".join(out.header) + "\n")
        for row in out.csv_rows:
            stream.write(",".join(row) + "\n")
    else:
        stream.write(json.dumps(out.payload, sort_keys=True, separators=(",", ":")) + "\n")


def run_one(cmd: str, obj, cfg) -> Outcome:
    try:
        m, d = parse_instance(obj)
        return COMMANDS[cmd][0](m, d, cfg)
    except InvalidInput as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return Outcome(EXIT_INPUT, {"error": "input", "message": str(exc)})
    except ResourceCap as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return Outcome(EXIT_RESOURCE, {"error": "resource", "message": str(exc)})
    except SpectralAffineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return Outcome(EXIT_VERIFY, {"error": type(exc).__name__, "message": str(exc)})
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return Outcome(EXIT_INPUT, {"error": "input", "message": str(exc)})


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    for name in ("samples", "radius", "kmax"):
        if getattr(args, name) < 0:
            print(f"input error: --{name} must be nonnegative", file=sys.stderr)
            return EXIT_INPUT
    if not args.tolerance > 0:
        print("input error: --tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT
    fmt = args.format or COMMANDS[args.command][1]
    try:
        if args.file:
            with open(args.file) as fh:
                batch = json.load(fh)
            if not isinstance(batch, list):
                raise InvalidInput("--file must hold a JSON array of instances")
        else:
            text = args.instance if args.instance is not None else sys.stdin.read()
            batch = [json.loads(text)]
    except (OSError, json.JSONDecodeError, InvalidInput) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    codes = []
    for obj in batch:
        out = run_one(args.command, obj, args)
        _emit(out, fmt, stdout)
        codes.append(out.code)
    return min(codes, key=_SEVERITY.index) if codes else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


def main_entry() -> None:
    sys.exit(main())
