"""Translation-based knowledge-base embeddings with description encoders.

The heavy lifting lives in the compiled ``_transkb`` extension; this package
re-exports its public surface.
"""

from ._transkb import (
    Error,
    EvalReport,
    EvalRunResult,
    IngestReport,
    RunConfig,
    UnseenEvalReport,
    embed_text,
    extract_3grams,
    parse_run_config_file,
    run_embed,
    run_eval,
    run_ingest,
    run_query,
    run_train,
    tokenize,
)

__all__ = [
    "Error",
    "EvalReport",
    "EvalRunResult",
    "IngestReport",
    "RunConfig",
    "UnseenEvalReport",
    "embed_text",
    "extract_3grams",
    "parse_run_config_file",
    "run_embed",
    "run_eval",
    "run_ingest",
    "run_query",
    "run_train",
    "tokenize",
]

__version__ = "0.1.0"
