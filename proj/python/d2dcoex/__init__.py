"""D2D underlay coexistence simulator (OFDM vs FBMC/OQAM)."""

from ._core import (
    Config,
    InterferenceTable,
    TableSet,
    generate_tables,
    hungarian,
    load_config,
    load_tables,
    los_probability,
    pathloss_db,
    phydyas_filter,
    rate_from_sinr,
    run_campaign,
    solve_power_loading,
    table_from_psd,
    table_from_time_sim,
)

__all__ = [
    "Config",
    "InterferenceTable",
    "TableSet",
    "generate_tables",
    "hungarian",
    "load_config",
    "load_tables",
    "los_probability",
    "pathloss_db",
    "phydyas_filter",
    "rate_from_sinr",
    "run_campaign",
    "solve_power_loading",
    "table_from_psd",
    "table_from_time_sim",
]
