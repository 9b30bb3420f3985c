from __future__ import annotations

import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, List, Optional, Tuple

from tqdm import tqdm

from .errors import BudgetExceeded
from .exactfield import FiniteField, Point, iter_block, projective_blocks, projective_count

logger = logging.getLogger(__name__)

Kernel = Callable[[Any, Point], Iterable[Any]]

# scans of fewer points than this stay inline
INLINE_LIMIT = 20_000

_kernel: Optional[Kernel] = None
_context: Any = None
_field: Optional[FiniteField] = None


def ensure_budget(count: int, budget: int, what: str) -> None:
    if count > budget:
        raise BudgetExceeded(
            f"{what} needs {count} evaluations, budget is {budget}",
            details={"what": what, "needed": count, "budget": budget},
        )


def resolve_workers(workers: int) -> int:
    return workers if workers > 0 else (os.cpu_count() or 1)


def _init_worker(kernel: Kernel, context: Any, field: FiniteField) -> None:
    global _kernel, _context, _field
    _kernel, _context, _field = kernel, context, field


def _run_block(block: Tuple[Point, int]) -> List[Any]:
    hits: List[Any] = []
    for point in iter_block(_field, block):
        hits.extend(_kernel(_context, point))
    return hits


def scan(
    F: FiniteField,
    n: int,
    kernel: Kernel,
    context: Any,
    *,
    workers: int = 1,
    progress: bool = False,
    desc: str = "scan",
) -> List[Any]:
    """Run `kernel(context, a)` for every a in P^{n-1}(F) and concatenate the hits.

    Hits come back in projective enumeration order however many workers run.
    The kernel must be a module-level function and the context picklable.
    """
    blocks = projective_blocks(F, n)
    total = projective_count(F.q, n)
    nworkers = resolve_workers(workers)
    logger.debug("%s over P^%d(%s): %d points in %d blocks, %d workers", desc, n - 1, F.name, total, len(blocks), nworkers)

    bar = tqdm(total=len(blocks), desc=desc, file=sys.stderr, disable=not progress, leave=False)
    results: List[Any] = []
    try:
        if nworkers == 1 or total < INLINE_LIMIT:
            _init_worker(kernel, context, F)
            for block in blocks:
                results.extend(_run_block(block))
                bar.update(1)
        else:
            with ProcessPoolExecutor(
                max_workers=nworkers, initializer=_init_worker, initargs=(kernel, context, F)
            ) as pool:
                for hits in pool.map(_run_block, blocks, chunksize=max(1, len(blocks) // (nworkers * 8))):
                    results.extend(hits)
                    bar.update(1)
    finally:
        bar.close()
    logger.info("%s over %s: %d hits", desc, F.name, len(results))
    return results
