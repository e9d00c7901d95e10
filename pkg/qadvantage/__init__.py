"""
qadvantage - correlations, discord and quantum advantage of symmetric X-states.

Core entry points:
- correlation_report: I, J, D, C and E of one state
- advantage: Holevo vs locally accessible information of an encoding
- run_transactions: Monte Carlo of the encode/decode loop
"""

from qadvantage.correlations import correlation_report, discord_brute, discord_closed
from qadvantage.models import (
    AdvantageReport,
    ApparatusParams,
    CorrelationReport,
    EncodingDistribution,
    EstimationStats,
    MeasurementDirection,
    TransactionConfig,
    XStateParams,
)
from qadvantage.protocol import accessible_info, advantage, encode_ensemble, holevo
from qadvantage.transactions import run_transactions
from qadvantage.xstate import apparatus_state, assemble, canonicalize, prepared_state

__version__ = "0.1.0"

__all__ = [
    'AdvantageReport',
    'ApparatusParams',
    'CorrelationReport',
    'EncodingDistribution',
    'EstimationStats',
    'MeasurementDirection',
    'TransactionConfig',
    'XStateParams',
    'accessible_info',
    'advantage',
    'apparatus_state',
    'assemble',
    'canonicalize',
    'correlation_report',
    'discord_brute',
    'discord_closed',
    'encode_ensemble',
    'holevo',
    'prepared_state',
    'run_transactions',
]
