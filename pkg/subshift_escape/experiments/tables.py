"""
Table Reproduction

Recomputes the printed escape-rate tables with a LangGraph state machine.
Expected values live in data/tables.json with cell-level provenance
(table, row q, column id), so nothing numeric is embedded here.

Workflow:
--------
START
  │
  ▼
load_cells (Node 1)
  │ Updates: cells (one per table column and row q)
  ▼
compute_rates (Node 2)
  │ Updates: cells[*].computed / collection / impossible
  ▼
classify_rows (Node 3)
  │ Updates: rows (TableRow list), metadata counts
  ▼
END
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from functools import lru_cache
from itertools import repeat
from pathlib import Path
from typing import Any, TypedDict

from langgraph.graph import END, StateGraph

from subshift_escape.config import Settings, get_settings, use_settings
from subshift_escape.errors import EscapeRateError
from subshift_escape.escape import HoleSpec, escape_rate
from subshift_escape.experiments.reports import Status, TableRow
from subshift_escape.words import WordCollection, WordMode, parse_collection, symbols_used, union

logger = logging.getLogger(__name__)

DATA_FILE = Path(__file__).parent / "data" / "tables.json"
TABLE_IDS = ("1", "2", "3", "4", "5")
# Abstract cells are written in lowercase letters.
LETTER_COUNT = 26

# A cell missing its printed value by this many tolerances is worth a second look.
ERRATUM_FACTOR = 10


@lru_cache(maxsize=1)
def load_table_data() -> dict[str, Any]:
    """Parsed contents of the bundled table data file."""
    with DATA_FILE.open(encoding="utf-8") as handle:
        return json.load(handle)


def table_definition(table_id: str | int) -> dict[str, Any]:
    """
    Definition of one table.

    Raises:
        ValueError: If the table id is unknown
    """
    tables = load_table_data()["tables"]
    key = str(table_id)
    if key not in tables:
        raise ValueError(f"unknown table {table_id!r}; choose one of {', '.join(TABLE_IDS)}")
    return tables[key]


def parse_cell(base: str | None, hole: str, q: int) -> tuple[WordCollection | None, WordCollection]:
    """
    Parse one abstract table entry.

    The base letters are mapped first so "aa" in a base and "ab" in the hole
    share the symbol for a.
    """
    mapping: dict[str, int] = {}
    base_collection = parse_collection(base, q, WordMode.ABSTRACT, mapping) if base else None
    hole_collection = parse_collection(hole, q, WordMode.ABSTRACT, mapping)
    return base_collection, hole_collection


def symbols_needed(base: str | None, hole: str) -> int:
    """Distinct symbols one cell alternative uses, base and hole sharing one letter map."""
    base_collection, hole_collection = parse_cell(base, hole, LETTER_COUNT)
    if base_collection is None:
        return symbols_used(hole_collection)
    return symbols_used(union(base_collection, hole_collection))


def first_expressible(
    base: str | None,
    holes: list[str],
    q: int,
) -> tuple[str, WordCollection | None, WordCollection] | None:
    """
    The first hole alternative that fits in q symbols, parsed over q.

    Returns:
        tuple | None: (alternative text, base, hole), or None when every
        alternative needs more than q symbols
    """
    for alternative in holes:
        if symbols_needed(base, alternative) <= q:
            return (alternative, *parse_cell(base, alternative, q))
    return None


def _compute_cell(cell: dict[str, Any], settings: Settings | None = None) -> dict[str, Any]:
    """Escape rate of the first alternative expressible over q symbols."""
    if settings is not None:
        use_settings(settings)
    q = cell["q"]
    try:
        chosen = first_expressible(cell["base"], cell["holes"], q)
        if chosen is None:
            return {**cell, "impossible": True}
        alternative, base, hole = chosen
        result = escape_rate(HoleSpec(hole, q, base), cell["tol"])
    except EscapeRateError as e:
        return {**cell, "error": f"{type(e).__name__}: {e}"}
    return {
        **cell,
        "collection": alternative,
        "computed": result.rho,
        "width": result.bracket_width,
        "engine_gap": result.diagnostics.get("engine_gap"),
    }


def printed_decimals(value: float) -> int:
    """Digits after the decimal point in the shortest repr of a printed value."""
    return max(0, -Decimal(repr(value)).as_tuple().exponent)


def matches_truncated(expected: float, computed: float, decimals: int | None = None) -> bool:
    """
    True if expected is computed cut off (not rounded) after `decimals` digits.

    decimals defaults to the digits of expected itself; rows printed with
    trailing zeros (0.070) carry it explicitly in the data file.
    """
    places = printed_decimals(expected) if decimals is None else decimals
    low = Decimal(repr(expected))
    return low <= Decimal(computed) < low + Decimal(1).scaleb(-places)


def classify_cell(cell: dict[str, Any], tolerance: float, errata: dict[tuple[str, int], str]) -> TableRow:
    """
    Turn a computed cell into a TableRow with its verdict.

    A cell passes within the absolute tolerance, or when the printed value
    is the computed one truncated to its printed digits.
    """
    expected = cell.get("expected")
    computed = cell.get("computed")
    row = TableRow(
        table_id=cell["table_id"],
        column=cell["column"],
        q=cell["q"],
        collection=cell.get("collection") or " | ".join(cell["holes"]),
        base=cell["base"] or "",
        expected=expected,
        computed=computed,
        status=Status.FAIL,
    )
    if cell.get("impossible"):
        row.status = Status.IMPOSSIBLE
        row.note = "needs more symbols than the alphabet has"
        return row
    if "error" in cell:
        row.note = cell["error"]
        return row
    if expected is None:
        row.note = "printed as an ellipsis but computable"
        return row
    error = abs(computed - expected)
    erratum = errata.get((cell["column"], cell["q"]))
    if error <= tolerance:
        row.status = Status.PASS
        if erratum is not None:
            row.note = "annotated erratum now within tolerance"
    elif matches_truncated(expected, computed, cell.get("decimals")):
        row.status = Status.PASS
        row.note = f"printed value truncated to {cell.get('decimals') or printed_decimals(expected)} decimals"
    elif erratum is not None:
        row.status = Status.ERRATUM
        row.note = erratum
    elif error >= ERRATUM_FACTOR * tolerance:
        row.note = "erratum candidate"
    return row


class TableState(TypedDict):
    """
    State flowing through the table pipeline.

    Attributes:
        table_id: Table being reproduced
        tolerance: Absolute tolerance for PASS
        tol: Perron bracket tolerance
        jobs: Worker processes for compute_rates
        cells: One dict per (column, q)
        rows: Classified TableRow objects
        metadata: Counts per status and timing
    """

    table_id: str
    tolerance: float
    tol: float
    jobs: int
    cells: list[dict[str, Any]]
    rows: list[TableRow]
    metadata: dict[str, Any]


class TableReproducer:
    """
    Reproduces a table through a three-node LangGraph workflow.

    Attributes:
        graph: Compiled state machine
    """

    def __init__(self):
        self.graph = self._build_graph()
        logger.debug("[Tables] State graph compiled with 3 nodes")

    def _build_graph(self):
        workflow = StateGraph(TableState)

        def load_cells(state: TableState) -> dict:
            """Expand the definition into one cell per column and row, in printed order."""
            definition = table_definition(state["table_id"])
            cells = []
            for row in definition["rows"]:
                for column in definition["columns"]:
                    cells.append({
                        "table_id": state["table_id"],
                        "column": column["id"],
                        "q": row["q"],
                        "base": column["base"],
                        "holes": column["holes"],
                        "expected": row["values"].get(column["id"]),
                        "decimals": row.get("decimals"),
                        "tol": state["tol"],
                    })
            logger.info(f"[Tables] Table {state['table_id']}: {len(cells)} cells")
            return {"cells": cells, "metadata": {**state["metadata"], "title": definition["title"]}}

        def compute_rates(state: TableState) -> dict:
            cells = state["cells"]
            if state["jobs"] > 1:
                with ProcessPoolExecutor(max_workers=state["jobs"]) as pool:
                    computed = list(pool.map(_compute_cell, cells, repeat(get_settings())))
            else:
                computed = [_compute_cell(cell) for cell in cells]
            return {"cells": computed}

        def classify_rows(state: TableState) -> dict:
            definition = table_definition(state["table_id"])
            errata = {(e["column"], e["q"]): e["note"] for e in definition["errata"]}
            rows = [classify_cell(cell, state["tolerance"], errata) for cell in state["cells"]]
            counts = {status.value: sum(1 for r in rows if r.status is status) for status in Status}
            errors = [r.abs_error for r in rows if r.status is Status.PASS and r.abs_error is not None]
            metadata = {**state["metadata"], "counts": counts, "max_abs_error": max(errors, default=0.0)}
            logger.info(f"[Tables] Table {state['table_id']}: {counts}")
            return {"rows": rows, "metadata": metadata}

        workflow.add_node("load_cells", load_cells)
        workflow.add_node("compute_rates", compute_rates)
        workflow.add_node("classify_rows", classify_rows)

        workflow.set_entry_point("load_cells")
        workflow.add_edge("load_cells", "compute_rates")
        workflow.add_edge("compute_rates", "classify_rows")
        workflow.add_edge("classify_rows", END)

        return workflow.compile()

    def run(
        self,
        table_id: str | int,
        tolerance: float | None = None,
        jobs: int = 1,
        tol: float | None = None,
    ) -> TableState:
        """
        Run the pipeline for one table.

        Args:
            table_id: "1" to "5"
            tolerance: Absolute PASS tolerance (default from settings)
            jobs: Worker processes (1 runs in-process)
            tol: Perron bracket tolerance (default from settings)

        Returns:
            TableState: Final state with rows and metadata
        """
        settings = get_settings()
        table_definition(table_id)
        initial: TableState = {
            "table_id": str(table_id),
            "tolerance": tolerance if tolerance is not None else settings.table_tol,
            "tol": tol if tol is not None else settings.root_tol,
            "jobs": max(1, jobs),
            "cells": [],
            "rows": [],
            "metadata": {},
        }
        return self.graph.invoke(initial)


def reproduce_table(
    table_id: str | int,
    tolerance: float | None = None,
    jobs: int = 1,
    tol: float | None = None,
) -> list[TableRow]:
    """
    Recompute every cell of a printed table.

    Cells whose collections need more symbols than q are IMPOSSIBLE;
    annotated errata out of tolerance are ERRATUM; everything else is PASS
    or FAIL against the absolute tolerance, with printed values that are
    truncations of the computed rate also counted as PASS.

    Raises:
        ValueError: If the table id is unknown
    """
    return TableReproducer().run(table_id, tolerance, jobs, tol)["rows"]
