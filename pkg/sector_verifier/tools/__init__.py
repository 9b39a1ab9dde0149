from sector_verifier.tools.reports import (
    SCHEMA_VERSION,
    dump_report,
    error_status,
    load_witness,
    make_report,
    mdz_payload,
    read_report,
    reflection_payload,
    write_report,
    zigzag_payload,
)
from sector_verifier.tools.suites import check_axioms
from sector_verifier.tools.svg import Figure, mdz_figure, reflection_figure, zigzag_figure

__all__ = [
    "SCHEMA_VERSION",
    "Figure",
    "check_axioms",
    "dump_report",
    "error_status",
    "load_witness",
    "make_report",
    "mdz_figure",
    "mdz_payload",
    "read_report",
    "reflection_figure",
    "reflection_payload",
    "write_report",
    "zigzag_figure",
    "zigzag_payload",
]
