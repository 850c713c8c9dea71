"""Dependency-network analysis of package registries (CRAN PACKAGES indexes)."""

from ._core import (
    ControllabilityEstimate,
    EcographError,
    FitError,
    Graph,
    GraphError,
    IoError,
    NodeScore,
    PackageRecord,
    ParseError,
    Partition,
    PathLength,
    PowerLawFit,
    Snapshot,
    StructureReport,
    __version__,
    build_graph,
    driver_nodes,
    fetch_snapshot,
    fit_power_law,
    giant_component,
    heavy_dependents,
    is_transitively_closed,
    load_snapshot,
    louvain,
    modularity,
    parse_dcf,
    read_edges,
    remove_base,
    run,
    structure_report,
    tokenize,
    top_influential,
    transitive_closure,
    vulnerability_table,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
