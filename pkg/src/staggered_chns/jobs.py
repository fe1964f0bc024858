"""
jobs.py
-------
Background jobs for the convergence sweep.

Beginner tip: why background jobs?
  The levels of an EOC sweep are independent runs: M=64 does not need
  the result of M=32. Each level can run in its own thread and write
  its progress to a small JSON file, so a second terminal (or a crashed
  sweep) can still see which levels finished and with what error.

  Think of it like a bakery with several ovens: each tray has a ticket,
  and the ticket says "baking", "done" or "burnt".

Job lifecycle:
  "running" → "done"
            → "error"

Records live in <out>/jobs/<job_id>.json.
"""

from __future__ import annotations

import json
import logging
import threading
import uuid
from datetime import datetime
from pathlib import Path
from typing import Callable

from staggered_chns.config import OUT_DIR
from staggered_chns.exceptions import ChnsError, ConfigurationError, PositivityError, SolverError

log = logging.getLogger(__name__)

JOBS_DIR = OUT_DIR / "jobs"

# Thread handles of jobs started by this process, keyed by job_id
_THREADS: dict[str, threading.Thread] = {}

# Exceptions raised inside jobs, re-raised by run_level_jobs
_FAILURES: dict[str, ChnsError] = {}


# ── Start a job ───────────────────────────────────────────────────────────────

def start_level_job(M: int, jobs_dir: Path = JOBS_DIR, **run_kwargs) -> str:
    """
    Launch one order-test level in a background thread.
    Returns a short job_id string (e.g. "a3f9b2c1").
    """
    jobs_dir.mkdir(parents=True, exist_ok=True)
    job_id = str(uuid.uuid4())[:8]

    _write_job(jobs_dir, job_id, {
        "job_id":       job_id,
        "M":            M,
        "scheme":       run_kwargs.get("scheme", "dirksa"),
        "status":       "running",
        "created_at":   datetime.now().isoformat(),
        "completed_at": None,
        "e_M":          None,
        "steps":        None,
        "error":        None,
        "exit_code":    None,
        "dump_path":    None,
    })

    thread = threading.Thread(
        target=_run_job,
        args=(jobs_dir, job_id, M, run_kwargs),
        daemon=True,
    )
    _THREADS[job_id] = thread
    thread.start()
    return job_id


# ── Background worker ─────────────────────────────────────────────────────────

def _run_job(jobs_dir: Path, job_id: str, M: int, run_kwargs: dict):
    try:
        from staggered_chns.integrate.driver import run_order_level

        e_M, result = run_order_level(M, **run_kwargs)
        _update_job(jobs_dir, job_id, {
            "status":       "done",
            "completed_at": datetime.now().isoformat(),
            "e_M":          e_M,
            "steps":        result.steps,
        })

    except ChnsError as exc:
        _FAILURES[job_id] = exc
        dump = getattr(exc, "dump_path", None)
        _update_job(jobs_dir, job_id, {
            "status":       "error",
            "completed_at": datetime.now().isoformat(),
            "error":        str(exc),
            "exit_code":    exc.exit_code,
            "dump_path":    str(dump) if dump else None,
        })
    except Exception as exc:
        log.exception("job %s (M=%d) crashed", job_id, M)
        _update_job(jobs_dir, job_id, {
            "status":       "error",
            "completed_at": datetime.now().isoformat(),
            "error":        str(exc),
            "exit_code":    1,
        })


def wait_for_jobs(job_ids: list[str], timeout: float | None = None) -> None:
    for job_id in job_ids:
        thread = _THREADS.pop(job_id, None)
        if thread is not None:
            thread.join(timeout)


def run_level_jobs(
    levels: list[int],
    jobs: int,
    jobs_dir: Path = JOBS_DIR,
    on_level: Callable[[int, float], None] | None = None,
    **run_kwargs,
) -> dict[int, float]:
    """
    Run the levels `jobs` at a time and collect e_M per level.

    A failed level re-raises the error of its job, so the exit code of a
    positivity abort or a bad setting survives the thread.
    """
    errors: dict[int, float] = {}
    for start in range(0, len(levels), jobs):
        batch = levels[start:start + jobs]
        ids = {M: start_level_job(M, jobs_dir, **run_kwargs) for M in batch}
        wait_for_jobs(list(ids.values()))
        for M, job_id in ids.items():
            job = get_job(job_id, jobs_dir) or {}
            if job.get("status") != "done":
                _raise_failure(M, job_id, job)
            errors[M] = float(job["e_M"])
            if on_level is not None:
                on_level(M, errors[M])
    return errors


def _raise_failure(M: int, job_id: str, job: dict) -> None:
    exc = _FAILURES.pop(job_id, None)
    if exc is not None:
        raise exc
    message = f"level M={M} failed: {job.get('error', 'no job record')}"
    code = job.get("exit_code")
    if code == PositivityError.exit_code:
        raise PositivityError(message)
    if code == ConfigurationError.exit_code:
        raise ConfigurationError(message)
    raise SolverError(message)


# ── Read jobs ─────────────────────────────────────────────────────────────────

def get_all_jobs(jobs_dir: Path = JOBS_DIR) -> list[dict]:
    """Return all jobs, newest first."""
    jobs_dir.mkdir(parents=True, exist_ok=True)
    jobs = []
    for f in jobs_dir.glob("*.json"):
        try:
            jobs.append(json.loads(f.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError):
            log.warning("skipping unreadable job record %s", f)
    return sorted(jobs, key=lambda j: j.get("created_at", ""), reverse=True)


def get_job(job_id: str, jobs_dir: Path = JOBS_DIR) -> dict | None:
    """Return a single job by ID, or None if not found."""
    job_file = jobs_dir / f"{job_id}.json"
    if job_file.exists():
        return json.loads(job_file.read_text(encoding="utf-8"))
    return None


# ── Write helpers ─────────────────────────────────────────────────────────────

_LOCK = threading.Lock()


def _write_job(jobs_dir: Path, job_id: str, data: dict):
    job_file = jobs_dir / f"{job_id}.json"
    job_file.write_text(json.dumps(data, ensure_ascii=False, indent=2), encoding="utf-8")


def _update_job(jobs_dir: Path, job_id: str, updates: dict):
    with _LOCK:
        job = get_job(job_id, jobs_dir) or {}
        job.update(updates)
        _write_job(jobs_dir, job_id, job)
