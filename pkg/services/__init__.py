"""Classification services package"""
from .classification_service import (
    classify,
    evaluate_group,
    explain,
    load_config,
    verify_certificate,
    Evaluation,
    GroupStatus,
)
from .facts_service import (
    run_fact,
    FACTS,
)

__all__ = [
    "classify",
    "evaluate_group",
    "explain",
    "load_config",
    "verify_certificate",
    "Evaluation",
    "GroupStatus",
    "run_fact",
    "FACTS",
]
