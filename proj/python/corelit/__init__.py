"""Structural-role indicators for core sources in bibliographic coupling networks."""

from corelit._corelit import (  # noqa: F401
    DEFAULT_DEDUP_THRESHOLD,
    DEFAULT_SEED,
    CitationNetwork,
    CorelitError,
    CouplingNetwork,
    Partition,
    __version__,
    analyze_file,
    compute_indicators,
    configuration_sample,
    dedup_references,
    generate_synth,
    jaro_winkler,
    load_citations,
    louvain,
    modularity,
    network_from_edges,
    normalize_reference,
    partition_ensemble,
    project_coupling,
    select_core,
)
