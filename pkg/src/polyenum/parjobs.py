"""Manager/worker parallel reverse search.

The manager runs a shallow traversal to depth ``init_depth`` and queues
the cut-off subtree roots.  Each queued root becomes a :class:`Job`
whose node budget depends on the queue length at dispatch time; a worker
rebuilds the dictionary by replay, runs the budgeted search, and returns
its output as text chunks together with any new subtree roots.

Output uniqueness comes from the lex-min emission rule, so chunks are
never merged or deduplicated.
"""

from __future__ import annotations

import collections
import io
import logging
import tempfile
import threading
import time
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, ThreadPoolExecutor, wait
from dataclasses import dataclass
from fractions import Fraction

from .errors import ArithmeticOverflow, EnumerationTimeout
from .exact import ArithmeticMode
from .polyio import Representation, format_row, parse, parse_row, serialize
from .revsearch import Budget, CobasisRecord, Problem, enumerate as rs_enumerate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParallelParams:
    workers: int = 1
    init_depth: int = 2
    lmin: int = 3
    maxc: int = 50
    scale: int = 100
    maxbuf_bytes: int = 512000
    executor: str = "process"

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.maxc < 1 or self.scale < 1:
            raise ValueError("maxc and scale must be >= 1")
        if self.init_depth < 0 or self.lmin < 0:
            raise ValueError("init_depth and lmin must be >= 0")
        if self.maxbuf_bytes < 1:
            raise ValueError("maxbuf_bytes must be >= 1")
        if self.executor not in ("process", "thread"):
            raise ValueError("executor must be 'process' or 'thread'")


@dataclass(frozen=True)
class Job:
    root: CobasisRecord
    budget: Budget
    job_id: int


@dataclass
class WorkerResult:
    job_id: int
    chunks: list[str]
    bases: int
    unexplored: list[CobasisRecord]
    max_depth_seen: int
    n_outputs: int

    @property
    def outputs(self) -> list[tuple[Fraction, ...]]:
        return rows_from_text("".join(self.chunks))


@dataclass
class RunReport:
    total_bases: int = 0
    total_outputs: int = 0
    wall_seconds: float = 0.0
    jobs_dispatched: int = 0
    peak_queue_length: int = 0
    max_depth_seen: int = 0


def rows_from_text(text: str) -> list[tuple[Fraction, ...]]:
    return [parse_row(line) for line in text.splitlines() if line]


# -- sinks ------------------------------------------------------------------


class ListSink:
    """Collects rows in memory; safe for concurrent appends.

    Chunks may end mid-line, so the unterminated tail is carried over to
    the next ``write_chunk`` call.
    """

    def __init__(self):
        self.rows: list[tuple[Fraction, ...]] = []
        self._lock = threading.Lock()
        self._tail = ""

    @property
    def count(self) -> int:
        return len(self.rows)

    def __call__(self, row) -> None:
        with self._lock:
            self.rows.append(tuple(row))

    def write_chunk(self, text: str) -> None:
        with self._lock:
            text = self._tail + text
            cut = text.rfind("\n") + 1
            self._tail = text[cut:]
            self.rows.extend(rows_from_text(text[:cut]))


class TextSink:
    """Writes one row per line to a text stream; safe for concurrent appends."""

    def __init__(self, stream):
        self.stream = stream
        self.count = 0
        self._lock = threading.Lock()

    def __call__(self, row) -> None:
        with self._lock:
            self.stream.write(format_row(row) + "\n")
            self.count += 1

    def write_chunk(self, text: str) -> None:
        with self._lock:
            self.stream.write(text)
            self.count += text.count("\n")


class ChunkBuffer:
    """Accumulates output lines and cuts them into chunks of at most maxbuf bytes."""

    def __init__(self, maxbuf: int):
        self.maxbuf = maxbuf
        self.chunks: list[str] = []
        self.count = 0
        self._buf = io.StringIO()
        self._size = 0

    def __call__(self, row) -> None:
        line = format_row(row) + "\n"
        self.count += 1
        self._buf.write(line)
        self._size += len(line)
        if self._size >= self.maxbuf:
            text = self._buf.getvalue()
            cut = len(text) - len(text) % self.maxbuf
            for k in range(0, cut, self.maxbuf):
                self.chunks.append(text[k : k + self.maxbuf])
            self._buf = io.StringIO(text[cut:])
            self._buf.seek(0, io.SEEK_END)
            self._size = len(text) - cut

    def flush(self) -> list[str]:
        if self._size:
            self.chunks.append(self._buf.getvalue())
            self._buf = io.StringIO()
            self._size = 0
        return self.chunks


# -- policy and jobs --------------------------------------------------------


def effective_budget(queue_length: int, params: ParallelParams) -> Budget:
    if queue_length < params.lmin * params.workers:
        return Budget(max_nodes=params.maxc)
    return Budget(max_nodes=params.maxc * params.scale)


def _problem(source, checked=False) -> Problem:
    if isinstance(source, Problem):
        return source
    return Problem.from_representation(source, checked)


def seed_jobs(source, params: ParallelParams, sink=None, checked=False):
    """Shallow traversal to ``init_depth``; returns ``(seeding result, queue)``.

    The queue holds the cut-off subtree roots as :class:`CobasisRecord`
    values; budgets are attached when they are dispatched.
    """
    problem = _problem(source, checked)
    res = rs_enumerate(
        problem.root(), Budget(max_depth=params.init_depth), output_row=problem.output_row, sink=sink
    )
    return res, collections.deque(res.unexplored)


def run_worker(job: Job, source, maxbuf_bytes: int = 512000, deadline: float | None = None, checked=False) -> WorkerResult:
    problem = _problem(source, checked)
    D = problem.dictionary_at(job.root)
    buf = ChunkBuffer(maxbuf_bytes)
    res = rs_enumerate(D, job.budget, output_row=problem.output_row, sink=buf, deadline=deadline)
    return WorkerResult(job.job_id, buf.flush(), res.bases, res.unexplored, res.max_depth_seen, buf.count)


# per-process state for the process pool
_WORKER_PROBLEM: Problem | None = None


def _init_process(text: str, checked: bool) -> None:
    global _WORKER_PROBLEM
    _WORKER_PROBLEM = Problem.from_representation(parse(text), checked)


def _process_task(job, maxbuf, deadline):
    return run_worker(job, _WORKER_PROBLEM, maxbuf, deadline)


class _Inline:
    """Executor stand-in running tasks synchronously (used for workers == 1)."""

    def submit(self, fn, *args):
        fut = Future()
        try:
            fut.set_result(fn(*args))
        except BaseException as exc:
            fut.set_exception(exc)
        return fut

    def shutdown(self, wait=True, cancel_futures=False):
        pass


def _feed(sink, chunks):
    if sink is None:
        return
    if hasattr(sink, "write_chunk"):
        for c in chunks:
            sink.write_chunk(c)
    else:
        for row in rows_from_text("".join(chunks)):
            sink(row)


def _manager(rep: Representation, params: ParallelParams, sink, checked: bool, deadline) -> RunReport:
    start = time.monotonic()
    problem = Problem.from_representation(rep, checked)
    report = RunReport()
    if problem.trivial:
        for row in problem.system.trivial_outputs():
            sink(row)
            report.total_outputs += 1
        report.wall_seconds = time.monotonic() - start
        return report
    seed, queue = seed_jobs(problem, params, sink=sink)
    report.total_bases = seed.bases
    report.total_outputs = seed.n_outputs
    report.max_depth_seen = seed.max_depth_seen
    report.peak_queue_length = len(queue)
    if params.workers == 1 or not queue:
        pool = _Inline()
    elif params.executor == "thread":
        pool = ThreadPoolExecutor(params.workers)
    else:
        pool = ProcessPoolExecutor(params.workers, initializer=_init_process, initargs=(serialize(rep), checked))
    if isinstance(pool, ProcessPoolExecutor):
        submit = lambda job: pool.submit(_process_task, job, params.maxbuf_bytes, deadline)
    else:
        submit = lambda job: pool.submit(run_worker, job, problem, params.maxbuf_bytes, deadline)
    running: set[Future] = set()
    next_id = 0
    try:
        while queue or running:
            while queue and len(running) < params.workers:
                budget = effective_budget(len(queue), params)
                job = Job(queue.popleft(), budget, next_id)
                next_id += 1
                report.jobs_dispatched += 1
                running.add(submit(job))
            done, running = wait(running, return_when=FIRST_COMPLETED)
            for fut in done:
                wr = fut.result()
                _feed(sink, wr.chunks)
                report.total_bases += wr.bases
                report.total_outputs += wr.n_outputs
                report.max_depth_seen = max(report.max_depth_seen, wr.max_depth_seen)
                queue.extend(wr.unexplored)
            report.peak_queue_length = max(report.peak_queue_length, len(queue))
            if deadline is not None and time.monotonic() > deadline:
                raise EnumerationTimeout("time limit reached in parallel run")
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
    report.wall_seconds = time.monotonic() - start
    return report


def manager_loop(rep: Representation, params: ParallelParams | None = None, sink=None, *, arith="big", deadline=None) -> RunReport:
    """Run the whole parallel enumeration; outputs go to ``sink``.

    In hybrid mode output is spooled until the checked run succeeds, so an
    overflow restart never leaks partial output into ``sink``.
    """
    params = params or ParallelParams()
    sink = sink if sink is not None else ListSink()
    mode = ArithmeticMode.parse(arith)
    if mode is ArithmeticMode.ARBITRARY_PRECISION:
        return _manager(rep, params, sink, False, deadline)
    if mode is ArithmeticMode.FIXED64_CHECKED:
        return _manager(rep, params, sink, True, deadline)
    with tempfile.TemporaryFile("w+", encoding="ascii") as spool:
        try:
            report = _manager(rep, params, TextSink(spool), True, deadline)
        except ArithmeticOverflow as exc:
            log.info("64-bit overflow (%s); restarting parallel run in arbitrary precision", exc)
            return _manager(rep, params, sink, False, deadline)
        spool.seek(0)
        while True:
            text = spool.read(1 << 20)
            if not text:
                break
            cut = text.rfind("\n") + 1
            rest = text[cut:]
            if rest:
                text += spool.readline()
            _feed(sink, [text])
    return report


def run_parallel(rep: Representation, params: ParallelParams | None = None, *, arith="big", deadline=None):
    """Convenience wrapper returning ``(rows, report)``."""
    sink = ListSink()
    report = manager_loop(rep, params, sink, arith=arith, deadline=deadline)
    return sink.rows, report
