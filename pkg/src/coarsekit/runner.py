"""Execute parsed programs and emit reports."""
from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

from . import __version__
from .classify import (
    asden_at,
    is_bounded_trace,
    is_large_at,
    is_prethick_at,
    is_small_at,
    is_thick_at,
    is_thin_at,
    prethick_sweep,
    small_duality_witness,
    small_sweep,
)
from .dsl import DslError, Env, JobStmt, Program, Range, Var, check, evaluate, pretty_print, show
from .ideals import is_ball_invariant, member, prop3_split
from .recurrence import ShiftFamily, parallel_linked_at, sparse_verdict, sparsity_index
from .space import GroupBallean, IntegerGrid, Window
from .verdict import Answer, Certificate, Verdict
from .wobbling import decompose, is_ulf_at, verify_cover

FAMILY_PAIRS_LIMIT = 512


@dataclass
class RunOptions:
    scale_max: Any = None
    window: Any = None
    bands: int = 8
    jobs: int = 1
    timing: bool = False


def program_digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def job_text(j: JobStmt) -> str:
    return pretty_print(Program((j,))).strip()


def run(P: Program, opts: RunOptions | None = None) -> list[dict]:
    """One record per job, in program order; failures become ERROR records."""
    opts = opts or RunOptions()
    jobs = list(enumerate(P.jobs))
    decls = Program(tuple(P.declarations))

    def one(item: tuple[int, JobStmt]) -> dict:
        i, j = item
        rec: dict[str, Any] = {"index": i, "job": job_text(j)}
        t0 = time.perf_counter()
        try:
            env = check(decls)
            v, details = run_job(env, j, opts)
            rec.update(v.to_json())
            if details is not None:
                rec["details"] = details
        except Exception as exc:  # batch isolation: report, never abort
            rec["answer"] = "ERROR"
            rec["error"] = f"{type(exc).__name__}: {exc}"
        if opts.timing:
            rec["wall_ms"] = round(1000 * (time.perf_counter() - t0), 3)
        return rec

    if opts.jobs > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=opts.jobs) as ex:
            return list(ex.map(one, jobs))
    return [one(x) for x in jobs]


def _scalar(j: JobStmt, key: str, sp, default: Any = None) -> Any:
    v = j.param(key)
    if v is None:
        if default is None:
            raise DslError(f"job {j.kind} needs {key}= (or --scale-max)", j.line, 1)
        return sp.scale(default)
    if len(v) != 1:
        raise DslError(f"{key} takes a single value", j.line, 1)
    return sp.scale(evaluate(v[0]))


def _windows(env: Env, j: JobStmt, spaces: list, opts: RunOptions) -> list[Window]:
    if j.windows:
        return [env.windows[w] for w in j.windows]
    if opts.window is None:
        raise DslError(f"job {j.kind} needs a window: in <window> or --window", j.line, 1)
    seen = []
    for sp in spaces:
        if sp not in seen:
            seen.append(sp)
    return [Window(sp, sp.origin(), opts.window) for sp in seen]


def _shift_family(sp, item: Any) -> ShiftFamily:
    if isinstance(item, Range):
        return ShiftFamily.offsets(sp, evaluate(item.lo), evaluate(item.hi))
    k = evaluate(item)
    if sp.line:
        return ShiftFamily.offsets(sp, -k, k)
    if isinstance(sp, GroupBallean):
        return ShiftFamily.group_ball(sp, k)
    if isinstance(sp, IntegerGrid):
        return ShiftFamily.box(sp, k)
    raise ValueError(f"no offset shifts on {sp!r}")


def run_job(env: Env, j: JobStmt, opts: RunOptions) -> tuple[Verdict, Any]:
    k = j.kind
    sets = [[env.sets[n] for n in names] for names, kind in zip(j.args, _arg_kinds(k)) if kind != "ideal"]
    ideals = [env.ideals[names[0]] for names, kind in zip(j.args, _arg_kinds(k)) if kind == "ideal"]
    spaces = [A.space for group in sets for A in group] or [I.space for I in ideals]
    Ws = _windows(env, j, spaces, opts)
    W = Ws[0]
    sp = W.space
    cap = opts.scale_max
    A = sets[0][0] if sets else None
    if A is not None and k != "sparse" and A.space is not sp:
        raise ValueError("set and window live on different spaces")
    details = None
    if k == "bounded":
        return is_bounded_trace(A, W, _scalar(j, "rho", sp)), None
    if k == "large":
        return is_large_at(A, _scalar(j, "r", sp), W), None
    if k == "thick":
        return is_thick_at(A, _scalar(j, "r", sp), W), None
    if k == "prethick":
        return is_prethick_at(A, _scalar(j, "r", sp), _scalar(j, "r2", sp), W), None
    if k == "prethick_sweep":
        return prethick_sweep(A, _scalar(j, "r_max", sp), _scalar(j, "r2_max", sp, cap), W), None
    if k == "small":
        return is_small_at(A, _scalar(j, "r", sp), _scalar(j, "r2_max", sp, cap), W), None
    if k == "small_sweep":
        return small_sweep(A, _scalar(j, "r_max", sp), _scalar(j, "r2_max", sp, cap), W), None
    if k == "duality":
        _, v = small_duality_witness(A, _scalar(j, "r", sp), _scalar(j, "r2", sp), W)
        return v, None
    if k == "thin":
        rho = j.param("rho_max")
        dom = j.param("domain")
        return (
            is_thin_at(
                A,
                _scalar(j, "r", sp),
                W,
                None if rho is None else _scalar(j, "rho_max", sp),
                None if dom is None else _scalar(j, "domain", sp),
            ),
            None,
        )
    if k == "asden":
        cover = j.param("cover", (Var("core"),))
        if len(cover) != 1 or not isinstance(cover[0], Var) or cover[0].name not in ("core", "carrier"):
            raise DslError("cover is core or carrier", j.line, 1, ("core", "carrier"))
        count, v = asden_at(sp, _scalar(j, "r", sp), W, cover[0].name)
        return v, {"count": count}
    if k == "linked":
        return parallel_linked_at(A, sets[1][0], _scalar(j, "r", sp), W), None
    if k == "member":
        rho = j.param("rho")
        return member(ideals[0], sets[0][0], W, 0 if rho is None else _scalar(j, "rho", sp)), None
    if k == "invariant":
        scales = [sp.scale(evaluate(x)) for x in j.param("scales")]
        rho = j.param("rho")
        return is_ball_invariant(ideals[0], scales, sets[0], W, 0 if rho is None else _scalar(j, "rho", sp)), None
    if k == "prop3":
        br = j.param("bounded_radius")
        ru = j.param("rho_unbounded")
        res = prop3_split(
            A,
            ideals[0],
            W,
            _scalar(j, "cap", sp),
            0 if br is None else _scalar(j, "bounded_radius", sp),
            None if ru is None else _scalar(j, "rho_unbounded", sp),
        )
        return res.verdict, {"J": res.J.to_json()}
    bands = _bands(j, opts)
    if k == "sparsity":
        shifts = j.param("shifts")
        if len(shifts) != 1:
            raise DslError("sparsity takes one shift range", j.line, 1)
        S = _shift_family(sp, shifts[0])
        mu, prof = sparsity_index(A, S, W, bands)
        scales = {"bands": bands, "shifts": len(S)}
        cert = Certificate("Chain", {"mu": mu, "recurrent": prof.to_json()["recurrent"]})
        if mu is None:
            v = Verdict(Answer.UNKNOWN, "sparsity", scales, W, cert, f"empty bands {prof.empty_bands}", reason="empty-band")
        else:
            v = Verdict(Answer.YES, "sparsity", scales, W, cert, f"recurrent pattern width {mu}")
        return v, prof.to_json()
    if k == "sparse":
        As = sets[0]
        shifts = list(j.param("shifts"))
        n = max(len(As), len(shifts), len(Ws))
        spaces_n = [(As[i] if len(As) > 1 else As[0]).space for i in range(n)]
        Ss = [_shift_family(spaces_n[i], shifts[i] if len(shifts) > 1 else shifts[0]) for i in range(n)]
        if len(Ws) == 1 and len(set(map(id, spaces_n))) > 1:
            raise DslError("each grid needs its own window", j.line, 1)
        for i in range(n):
            w = Ws[i] if len(Ws) > 1 else Ws[0]
            if w.space is not spaces_n[i]:
                raise ValueError(f"step {i}: set and window live on different spaces")
        return sparse_verdict(As, Ss, Ws, bands), None
    if k == "ulf":
        r = _scalar(j, "r", sp)
        flag, m = is_ulf_at(sp, r, W)
        cert = Certificate("Cover", {"m": m})
        ans = Answer.YES if flag else Answer.NO
        return Verdict(ans, "ulf", {"r": r}, W, cert, f"balls of radius {r} have at most {m} points" if flag else "balls are infinite"), None
    if k == "wobble":
        r = _scalar(j, "r", sp)
        F = decompose(sp, r, W)
        v = verify_cover(F, r, W)
        return v, F.to_json(with_pairs=W.size() <= FAMILY_PAIRS_LIMIT)
    raise DslError(f"unknown job kind {k!r}", j.line, 1)


def _arg_kinds(kind: str) -> tuple:
    from .dsl import JOB_KINDS

    return JOB_KINDS[kind].args


def _bands(j: JobStmt, opts: RunOptions) -> int:
    v = j.param("bands")
    return opts.bands if v is None else int(evaluate(v[0]))


def emit(records: list[dict], fmt: str = "json", digest: str = "") -> bytes:
    if fmt == "json":
        doc = {"version": __version__, "program_digest": digest, "jobs": records}
        return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    lines = [f"coarsekit {__version__}  {digest}"]
    for rec in records:
        answer = rec.get("answer", "?")
        tag = rec.get("label") or rec.get("reason") or ""
        note = rec.get("error") or rec.get("narrative", "")
        lines.append(f"[{rec['index']:>2}] {answer:<7} {tag:<16} {rec['job']}")
        if note:
            lines.append(f"      {note}")
    return ("\n".join(lines) + "\n").encode("utf-8")
