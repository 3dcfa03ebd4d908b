"""Batch driver: decompose and verify many graph files, optionally in parallel."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path

import psutil

from .certify import verify_decomposition, verify_nice
from .config import RunConfig
from .decomposer import Decomposer
from .errors import ClassError, DecompError, TheoremViolation
from .formats import dumps, emit_cert, parse_graph, read_text, write_atomic

logger = logging.getLogger(__name__)

CERT_SUFFIX = ".cert.json"
SUMMARY_NAME = "summary.json"


@dataclass
class ItemResult:
    input: str
    status: str  # ok, class, theorem, verify, error
    message: str = ""
    output: str | None = None
    steps: int = 0
    reductions: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    rss_mb: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self) -> dict:
        """Everything but the timing and memory readings, which only go to the log."""
        doc = asdict(self)
        del doc["seconds"], doc["rss_mb"]
        return doc


@dataclass
class BatchSummary:
    items: list[ItemResult] = field(default_factory=list)
    workers: int = 1
    seconds: float = 0.0

    @property
    def exit_code(self) -> int:
        """0 when every item passed, 3 on any TheoremViolation, else 1."""
        if any(item.status == "theorem" for item in self.items):
            return 3
        return 0 if all(item.ok for item in self.items) else 1

    @property
    def peak_rss_mb(self) -> float:
        return max((item.rss_mb for item in self.items), default=0.0)

    def to_dict(self) -> dict:
        return {
            "exit_code": self.exit_code,
            "workers": self.workers,
            "passed": sum(1 for item in self.items if item.ok),
            "failed": sum(1 for item in self.items if not item.ok),
            "items": [item.to_dict() for item in self.items],
        }


def default_workers() -> int:
    """One worker per physical core, at least one."""
    try:
        return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    except Exception as e:
        logger.warning(f"Error counting CPUs, using one worker: {e}")
        return 1


def _rss_mb() -> float:
    try:
        return psutil.Process().memory_info().rss / (1024 * 1024)
    except psutil.Error as e:
        logger.debug(f"Error reading process memory: {e}")
        return 0.0


def expand_inputs(inputs: list[str]) -> list[str]:
    """Files as given; directories contribute their *.json graphs, sorted."""
    paths: list[str] = []
    for entry in inputs:
        path = Path(entry)
        if path.is_dir():
            paths.extend(
                str(p) for p in sorted(path.glob("*.json"))
                if not p.name.endswith(CERT_SUFFIX) and p.name != SUMMARY_NAME
            )
        else:
            paths.append(str(path))
    return paths


def cert_path(input_path: str, out: str | None) -> Path:
    source = Path(input_path)
    name = source.stem + CERT_SUFFIX
    return Path(out) / name if out else source.with_name(name)


def process_item(input_path: str, config: RunConfig) -> ItemResult:
    """
    Decompose one graph file, verify the certificate and write it.

    Failures are reported in the result, never raised.
    """
    started = time.perf_counter()
    result = ItemResult(input_path, "ok")
    try:
        g = parse_graph(read_text(input_path))
        decomposer = Decomposer.from_config(config)
        if config.mode == "nice":
            cert = decomposer.decompose_nice(g)
            verdict = verify_nice(g, cert)
        else:
            cert = decomposer.decompose_21(g)
            verdict = verify_decomposition(g, cert)
        result.steps = decomposer.steps
        result.reductions = dict(sorted(decomposer.reductions.items()))
        if verdict.ok:
            result.output = str(write_atomic(cert_path(input_path, config.out), emit_cert(cert)))
        else:
            result.status, result.message = "verify", verdict.describe()
    except ClassError as e:
        result.status, result.message = "class", str(e)
    except TheoremViolation as e:
        result.status, result.message = "theorem", str(e)
    except (DecompError, OSError) as e:
        result.status, result.message = "error", str(e)
    except Exception as e:
        logger.exception(f"Unexpected error processing {input_path}")
        result.status, result.message = "error", f"{type(e).__name__}: {e}"
    result.seconds = time.perf_counter() - started
    result.rss_mb = _rss_mb()
    return result


def _log_item(result: ItemResult) -> None:
    if result.ok:
        logger.info(
            f"{result.input}: ok in {result.seconds:.2f}s, {result.rss_mb:.1f} MB -> {result.output}"
        )
    else:
        logger.warning(f"{result.input}: {result.status}: {result.message}")


def run_batch(config: RunConfig) -> BatchSummary:
    """
    Process every input independently.

    Args:
        config: Inputs, mode, output directory, worker count and fail-fast flag

    Returns:
        BatchSummary: Per-item results in input order and the exit code
    """
    started = time.perf_counter()
    paths = expand_inputs(config.inputs)
    workers = max(1, min(config.workers or default_workers(), len(paths) or 1))
    summary = BatchSummary(workers=workers)
    if not paths:
        logger.info("Batch has no inputs")
        return summary

    logger.info(f"Batch of {len(paths)} graphs with {workers} worker(s)")
    results: dict[str, ItemResult] = {}
    if workers == 1:
        for path in paths:
            results[path] = process_item(path, config)
            _log_item(results[path])
            if config.fail_fast and not results[path].ok:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(process_item, path, config): path for path in paths}
            for future in as_completed(futures):
                try:
                    result = future.result()
                except Exception as e:
                    logger.exception(f"Worker failed on {futures[future]}")
                    result = ItemResult(futures[future], "error", f"{type(e).__name__}: {e}")
                results[futures[future]] = result
                _log_item(result)
                if config.fail_fast and not result.ok:
                    pool.shutdown(wait=True, cancel_futures=True)
                    break

    summary.items = [results[p] for p in paths if p in results]
    summary.seconds = time.perf_counter() - started
    if config.out:
        write_atomic(Path(config.out) / SUMMARY_NAME, dumps(summary.to_dict()))
    logger.info(
        f"Batch finished: {sum(i.ok for i in summary.items)}/{len(summary.items)} passed "
        f"in {summary.seconds:.2f}s, peak RSS {summary.peak_rss_mb:.1f} MB, exit code {summary.exit_code}"
    )
    return summary
